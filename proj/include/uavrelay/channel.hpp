// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>

namespace uavrelay {

// UAV coordinates in metres, ground station at the origin.
struct UavPosition {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    void validate() const;
    double slant_range() const;
};

struct Atmosphere {
    double cloud_thickness = 500.0;   // Z_c
    double cloud_base = 500.0;        // Z_d, height of the dirt layer
    double laser_ext_air = 1e-3;      // per metre
    double laser_ext_cloud = 3e-3;
    double solar_ext_cloud = 3e-3;
    double solar_ext_air = 0.5;

    void validate() const;
    double cloud_top() const { return cloud_base + cloud_thickness; }
};

struct PointingErrorModel {
    double aperture_radius = 0.5;  // metres
    double beamwidth = 1e-2;       // radians
    double jitter = 1e-2;          // radians

    void validate() const;
    // theta^2 / sigma^2, the power-law exponent of the pointing CDF.
    double shape() const { return beamwidth * beamwidth / (jitter * jitter); }
    // Peak (boresight) gain at a given slant range.
    double peak_gain(double slant) const;
    double peak_gain(const UavPosition& pos) const { return peak_gain(pos.slant_range()); }
    // PDF prefactor k / B^k.
    double prefactor(const UavPosition& pos) const;
};

// Exponentiated Weibull turbulence model.
struct ScintillationModel {
    double shape_a = 2.5;
    double shape_b = 1.5;
    double scale = 0.9;

    void validate() const;
    static ScintillationModel weak() { return {4.0, 2.5, 0.8}; }
    static ScintillationModel moderate() { return {2.5, 1.5, 0.9}; }
    static ScintillationModel strong() { return {1.5, 1.0, 1.0}; }
    static std::optional<ScintillationModel> preset(std::string_view name);
};

struct PathSegments {
    double in_cloud = 0.0;
    double in_air = 0.0;
};

struct AttenuationGains {
    double cloud = 1.0;
    double air = 1.0;
    double product() const { return cloud * air; }
};

PathSegments cloud_path_length(const UavPosition& pos, const Atmosphere& atm);
AttenuationGains attenuation_gains(const PathSegments& seg, const Atmosphere& atm);
AttenuationGains attenuation_gains(const UavPosition& pos, const Atmosphere& atm);

double pointing_pdf(double h, const PointingErrorModel& pe, const UavPosition& pos);
double pointing_cdf(double h, const PointingErrorModel& pe, const UavPosition& pos);

double scintillation_pdf(double h, const ScintillationModel& sc);
double scintillation_cdf(double h, const ScintillationModel& sc);
double scintillation_inverse_cdf(double u, const ScintillationModel& sc);

// Density and CDF of h_p * h_a * h_c.
double pointing_only_pdf(double h, const UavPosition& pos, const Atmosphere& atm,
                         const PointingErrorModel& pe);
double pointing_only_cdf(double h, const UavPosition& pos, const Atmosphere& atm,
                         const PointingErrorModel& pe);

// Distribution of h_p * h_s * h_a * h_c. Position-dependent constants are computed
// once at construction.
class CompositeChannel {
public:
    CompositeChannel(const UavPosition& pos, const Atmosphere& atm, const PointingErrorModel& pe,
                     const ScintillationModel& sc);

    double pdf(double h) const;
    double cdf(double h) const;
    // Upper end of the pointing-times-attenuation support, B * h_a * h_c.
    double deterministic_peak() const { return peak_; }
    double shape() const { return shape_; }
    const ScintillationModel& scintillation() const { return sc_; }

private:
    double peak_;
    double shape_;
    ScintillationModel sc_;
};

double composite_pdf(double h, const UavPosition& pos, const Atmosphere& atm,
                     const PointingErrorModel& pe, const ScintillationModel& sc);

}  // namespace uavrelay
