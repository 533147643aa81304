// SPDX-License-Identifier: Apache-2.0
#include "uavrelay/uplink.hpp"

#include <cmath>
#include <string>

#include "uavrelay/error.hpp"

namespace uavrelay {

void SensorField::validate() const {
    require(!sensors.empty(), "sensors", "at least one sensor is required");
    for (std::size_t m = 0; m < sensors.size(); ++m) {
        const Sensor& s = sensors[m];
        require(std::isfinite(s.x) && std::isfinite(s.y), "sensors.x", "sensor " + std::to_string(m) + " position must be finite");
        require(std::isfinite(s.power) && s.power > 0.0, "sensors.power", "sensor " + std::to_string(m) + " power must be > 0");
    }
    require(std::isfinite(reference_gain) && reference_gain > 0.0, "sensors.reference_gain", "must be > 0");
    require(std::isfinite(noise_power) && noise_power > 0.0, "sensors.noise_power", "must be > 0");
}

namespace {

double squared_distance(const UavPosition& pos, const Sensor& s) {
    const double dx = pos.x - s.x;
    const double dy = pos.y - s.y;
    return pos.z * pos.z + dx * dx + dy * dy;
}

const Sensor& at(const SensorField& field, std::size_t m) {
    if (m >= field.sensors.size())
        throw Error(ErrorCode::invalid_argument,
                    "sensor index " + std::to_string(m) + " out of range (M = " + std::to_string(field.size()) + ")",
                    "m");
    return field.sensors[m];
}

}  // namespace

double channel_gain(const UavPosition& pos, const SensorField& field, std::size_t m) {
    return field.reference_gain / squared_distance(pos, at(field, m));
}

double sensor_snr(const UavPosition& pos, const SensorField& field, std::size_t m) {
    return at(field, m).power * channel_gain(pos, field, m) / field.noise_power;
}

double sensor_capacity(const UavPosition& pos, const SensorField& field, std::size_t m) {
    return std::log1p(sensor_snr(pos, field, m));
}

double sum_rate(const UavPosition& pos, const SensorField& field) {
    double total = 0.0;
    for (const Sensor& s : field.sensors)
        total += std::log1p(s.power * field.reference_gain / (field.noise_power * squared_distance(pos, s)));
    return total;
}

double snr_product(const UavPosition& pos, const SensorField& field) {
    double prod = 1.0;
    for (const Sensor& s : field.sensors)
        prod *= 1.0 + s.power * field.reference_gain / (field.noise_power * squared_distance(pos, s));
    return prod;
}

UplinkStats uplink_stats(const UavPosition& pos, const SensorField& field) {
    UplinkStats st;
    for (const Sensor& s : field.sensors)
        st.amplitude += std::sqrt(s.power * field.reference_gain / squared_distance(pos, s));
    st.noise_variance = static_cast<double>(field.size()) * field.noise_power;
    return st;
}

// With d2 = z^2 + dx^2 + dy^2 and A = P beta_0 / sigma_0^2, each term is ln(1 + A/d2) and
// d/dx = 2 dx (1/(d2 + A) - 1/d2).
std::array<double, 2> sum_rate_gradient(const UavPosition& pos, const SensorField& field) {
    std::array<double, 2> g{0.0, 0.0};
    for (const Sensor& s : field.sensors) {
        const double a = s.power * field.reference_gain / field.noise_power;
        const double d2 = squared_distance(pos, s);
        const double c = 1.0 / (d2 + a) - 1.0 / d2;
        g[0] += 2.0 * (pos.x - s.x) * c;
        g[1] += 2.0 * (pos.y - s.y) * c;
    }
    return g;
}

std::array<double, 4> sum_rate_hessian(const UavPosition& pos, const SensorField& field) {
    std::array<double, 4> hess{};
    for (const Sensor& s : field.sensors) {
        const double a = s.power * field.reference_gain / field.noise_power;
        const double dx = pos.x - s.x;
        const double dy = pos.y - s.y;
        const double d2 = squared_distance(pos, s);
        const double c = 1.0 / (d2 + a) - 1.0 / d2;
        const double e = 1.0 / (d2 * d2) - 1.0 / ((d2 + a) * (d2 + a));
        hess[0] += 2.0 * c + 4.0 * dx * dx * e;
        hess[1] += 4.0 * dx * dy * e;
        hess[3] += 2.0 * c + 4.0 * dy * dy * e;
    }
    hess[2] = hess[1];
    return hess;
}

}  // namespace uavrelay
