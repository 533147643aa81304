// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "uavrelay/channel.hpp"

namespace uavrelay {

struct SolarPlatform {
    double photo_eff = 0.4;
    double panel_area = 2.0;            // m^2
    double solar_const = 1361.0;        // W/m^2
    double transmittance_max = 0.8978;  // A_0
    double transmittance_ext = 0.2804;  // B_0, dimensionless
    double scale_height = 8000.0;       // metres
    double uav_mass = 5.0;              // kg
    double gravity = 9.8;
    double rotor_radius = 0.5;
    double air_density = 1.225;
    std::optional<double> hover_power_override = 100.0;

    void validate() const;
};

struct PowerBudget {
    double harvested = 0.0;
    double consumed = 0.0;
    double net() const { return harvested - consumed; }
};

double transmittance(double z, const SolarPlatform& platform);
double harvested_power(double z, const SolarPlatform& platform, const Atmosphere& atm);
double hover_power(const SolarPlatform& platform);
PowerBudget power_budget(double z, const SolarPlatform& platform, const Atmosphere& atm);

// Lowest altitude where harvesting covers hover power. Throws ErrorCode::infeasible
// when no altitude is sustainable.
double min_altitude(const SolarPlatform& platform, const Atmosphere& atm);

}  // namespace uavrelay
