// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "uavrelay/channel.hpp"

namespace uavrelay {

struct Sensor {
    double x = 0.0;
    double y = 0.0;
    double power = 1.0;  // watts
};

struct SensorField {
    std::vector<Sensor> sensors;
    double reference_gain = 0.4;  // beta_0
    double noise_power = 1e-6;    // sigma_0^2, watts

    void validate() const;
    std::size_t size() const { return sensors.size(); }
};

struct UplinkStats {
    double amplitude = 0.0;       // S_X, sum of per-sensor received amplitudes
    double noise_variance = 0.0;  // M * sigma_0^2
};

double channel_gain(const UavPosition& pos, const SensorField& field, std::size_t m);
double sensor_snr(const UavPosition& pos, const SensorField& field, std::size_t m);
double sensor_capacity(const UavPosition& pos, const SensorField& field, std::size_t m);
double sum_rate(const UavPosition& pos, const SensorField& field);
// prod_m (1 + SNR_m) = exp(sum_rate), computed without the log round trip.
double snr_product(const UavPosition& pos, const SensorField& field);
UplinkStats uplink_stats(const UavPosition& pos, const SensorField& field);

// Derivatives of sum_rate with respect to the horizontal UAV coordinates.
std::array<double, 2> sum_rate_gradient(const UavPosition& pos, const SensorField& field);
// Row-major {d2/dx2, d2/dxdy, d2/dxdy, d2/dy2}.
std::array<double, 4> sum_rate_hessian(const UavPosition& pos, const SensorField& field);

}  // namespace uavrelay
