// SPDX-License-Identifier: Apache-2.0
#include "uavrelay/solar.hpp"

#include <cmath>
#include <numbers>

#include "uavrelay/error.hpp"

namespace uavrelay {

void SolarPlatform::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    require(positive(photo_eff), "solar_platform.photo_eff", "must be > 0");
    require(positive(panel_area), "solar_platform.panel_area", "must be > 0");
    require(positive(solar_const), "solar_platform.solar_const", "must be > 0");
    require(positive(transmittance_max), "solar_platform.transmittance_max", "must be > 0");
    require(positive(transmittance_ext), "solar_platform.transmittance_ext", "must be > 0");
    require(transmittance_ext < transmittance_max, "solar_platform.transmittance_ext",
            "must be below transmittance_max so the transmittance stays positive");
    require(positive(scale_height), "solar_platform.scale_height", "must be > 0");
    require(positive(uav_mass), "solar_platform.uav_mass", "must be > 0");
    require(positive(gravity), "solar_platform.gravity", "must be > 0");
    require(positive(rotor_radius), "solar_platform.rotor_radius", "must be > 0");
    require(positive(air_density), "solar_platform.air_density", "must be > 0");
    if (hover_power_override)
        require(std::isfinite(*hover_power_override) && *hover_power_override >= 0.0, "solar_platform.hover_power",
                "must be >= 0");
}

double transmittance(double z, const SolarPlatform& p) {
    return p.transmittance_max - p.transmittance_ext * std::exp(-z / p.scale_height);
}

double harvested_power(double z, const SolarPlatform& p, const Atmosphere& atm) {
    const double clear_sky = p.photo_eff * p.panel_area * p.solar_const * transmittance(z, p);
    if (z >= atm.cloud_top()) return clear_sky;
    if (z >= atm.cloud_base) return clear_sky * std::exp(-atm.solar_ext_cloud * (atm.cloud_top() - z));
    return clear_sky * std::exp(-atm.solar_ext_cloud * atm.cloud_thickness) *
           std::exp(-atm.solar_ext_air * (atm.cloud_base - z));
}

double hover_power(const SolarPlatform& p) {
    if (p.hover_power_override) return *p.hover_power_override;
    const double weight = p.uav_mass * p.gravity;
    return std::sqrt(weight * weight * weight /
                     (2.0 * std::numbers::pi * p.rotor_radius * p.rotor_radius * p.air_density));
}

PowerBudget power_budget(double z, const SolarPlatform& p, const Atmosphere& atm) {
    return {harvested_power(z, p, atm), hover_power(p)};
}

double min_altitude(const SolarPlatform& p, const Atmosphere& atm) {
    const double need = hover_power(p);
    auto excess = [&](double z) { return harvested_power(z, p, atm) - need; };
    if (excess(0.0) >= 0.0) return 0.0;
    double lo = 0.0;
    double hi = 10.0 * p.scale_height;
    if (excess(hi) < 0.0) {
        hi *= 10.0;
        if (excess(hi) < 0.0)
            throw Error(ErrorCode::infeasible,
                        "harvested power stays below the hover power at every altitude; no feasible height",
                        "solar_platform");
    }
    // Bisect to adjacent doubles so the residual is at round-off level.
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace uavrelay
