// SPDX-License-Identifier: Apache-2.0
#include "uavrelay/channel.hpp"

#include <cmath>
#include <string>

#include "uavrelay/error.hpp"
#include "uavrelay/quadrature.hpp"

namespace uavrelay {

void UavPosition::validate() const {
    require(std::isfinite(x), "position.x", "must be finite");
    require(std::isfinite(y), "position.y", "must be finite");
    require(std::isfinite(z) && z > 0.0, "position.z", "must be finite and > 0");
}

double UavPosition::slant_range() const { return std::sqrt(x * x + y * y + z * z); }

void Atmosphere::validate() const {
    require(cloud_thickness >= 0.0 && std::isfinite(cloud_thickness), "atmosphere.cloud_thickness", "must be >= 0");
    require(cloud_base >= 0.0 && std::isfinite(cloud_base), "atmosphere.cloud_base", "must be >= 0");
    require(laser_ext_air >= 0.0 && std::isfinite(laser_ext_air), "atmosphere.laser_ext_air", "must be >= 0");
    require(laser_ext_cloud >= 0.0 && std::isfinite(laser_ext_cloud), "atmosphere.laser_ext_cloud", "must be >= 0");
    require(solar_ext_cloud >= 0.0 && std::isfinite(solar_ext_cloud), "atmosphere.solar_ext_cloud", "must be >= 0");
    require(solar_ext_air >= 0.0 && std::isfinite(solar_ext_air), "atmosphere.solar_ext_air", "must be >= 0");
}

void PointingErrorModel::validate() const {
    require(aperture_radius > 0.0 && std::isfinite(aperture_radius), "optical_link.aperture_radius", "must be > 0");
    require(beamwidth > 0.0 && std::isfinite(beamwidth), "optical_link.beamwidth", "must be > 0");
    require(jitter > 0.0 && std::isfinite(jitter), "optical_link.jitter", "must be > 0");
}

double PointingErrorModel::peak_gain(double slant) const {
    return aperture_radius * aperture_radius / (2.0 * beamwidth * beamwidth * slant * slant);
}

double PointingErrorModel::prefactor(const UavPosition& pos) const {
    const double k = shape();
    return k * std::pow(peak_gain(pos), -k);
}

void ScintillationModel::validate() const {
    require(shape_a > 0.0 && std::isfinite(shape_a), "optical_link.scint_a", "must be > 0");
    require(shape_b > 0.0 && std::isfinite(shape_b), "optical_link.scint_b", "must be > 0");
    require(scale > 0.0 && std::isfinite(scale), "optical_link.scint_scale", "must be > 0");
}

std::optional<ScintillationModel> ScintillationModel::preset(std::string_view name) {
    if (name == "weak") return weak();
    if (name == "moderate") return moderate();
    if (name == "strong") return strong();
    return std::nullopt;
}

PathSegments cloud_path_length(const UavPosition& pos, const Atmosphere& atm) {
    const double slant = pos.slant_range();
    double in_cloud = 0.0;
    if (pos.z >= atm.cloud_top())
        in_cloud = atm.cloud_thickness * slant / pos.z;
    else if (pos.z >= atm.cloud_base)
        in_cloud = (pos.z - atm.cloud_base) * slant / pos.z;
    return {in_cloud, std::max(0.0, slant - in_cloud)};
}

AttenuationGains attenuation_gains(const PathSegments& seg, const Atmosphere& atm) {
    return {std::exp(-atm.laser_ext_cloud * seg.in_cloud), std::exp(-atm.laser_ext_air * seg.in_air)};
}

AttenuationGains attenuation_gains(const UavPosition& pos, const Atmosphere& atm) {
    return attenuation_gains(cloud_path_length(pos, atm), atm);
}

double pointing_pdf(double h, const PointingErrorModel& pe, const UavPosition& pos) {
    const double peak = pe.peak_gain(pos);
    if (h < 0.0 || h >= peak) return 0.0;
    const double k = pe.shape();
    return k / peak * std::pow(h / peak, k - 1.0);
}

double pointing_cdf(double h, const PointingErrorModel& pe, const UavPosition& pos) {
    const double peak = pe.peak_gain(pos);
    if (h <= 0.0) return 0.0;
    if (h >= peak) return 1.0;
    return std::pow(h / peak, pe.shape());
}

double scintillation_pdf(double h, const ScintillationModel& sc) {
    if (h < 0.0) return 0.0;
    const double t = h / sc.scale;
    const double tb = std::pow(t, sc.shape_b);
    if (tb > 745.0) return 0.0;  // exp(-tb) underflows
    const double body = sc.shape_a * sc.shape_b / sc.scale * std::pow(t, sc.shape_b - 1.0) * std::exp(-tb);
    if (sc.shape_a == 1.0) return body;
    return body * std::pow(-std::expm1(-tb), sc.shape_a - 1.0);
}

double scintillation_cdf(double h, const ScintillationModel& sc) {
    if (h <= 0.0) return 0.0;
    const double tb = std::pow(h / sc.scale, sc.shape_b);
    return std::pow(-std::expm1(-tb), sc.shape_a);
}

double scintillation_inverse_cdf(double u, const ScintillationModel& sc) {
    if (!(u > 0.0 && u < 1.0))
        throw Error(ErrorCode::invalid_argument, "scintillation_inverse_cdf: u must lie in (0, 1)", "u");
    // 1 - u^(1/a) without cancellation near u = 1.
    const double tail = -std::expm1(std::log(u) / sc.shape_a);
    return sc.scale * std::pow(-std::log(tail), 1.0 / sc.shape_b);
}

double pointing_only_pdf(double h, const UavPosition& pos, const Atmosphere& atm, const PointingErrorModel& pe) {
    const double loss = attenuation_gains(pos, atm).product();
    return pointing_pdf(h / loss, pe, pos) / loss;
}

double pointing_only_cdf(double h, const UavPosition& pos, const Atmosphere& atm, const PointingErrorModel& pe) {
    const double loss = attenuation_gains(pos, atm).product();
    return pointing_cdf(h / loss, pe, pos);
}

CompositeChannel::CompositeChannel(const UavPosition& pos, const Atmosphere& atm, const PointingErrorModel& pe,
                                   const ScintillationModel& sc)
    : peak_(pe.peak_gain(pos) * attenuation_gains(pos, atm).product()), shape_(pe.shape()), sc_(sc) {}

double CompositeChannel::pdf(double h) const {
    if (h <= 0.0) return 0.0;
    const double k = shape_;
    const double a = sc_.shape_a, inv_b = 1.0 / sc_.shape_b;
    // Integrate over the scintillation upper-tail probability w, s = Q(1 - w). Only s > h / peak
    // contributes, i.e. w below the survival probability at h / peak.
    const double tb = std::pow(h / (peak_ * sc_.scale), sc_.shape_b);
    const double w_max = -std::expm1(a * std::log1p(-std::exp(-tb)));
    if (!(w_max > 0.0)) return 0.0;
    auto integrand = [&](double w) {
        if (w <= 0.0) return 0.0;
        const double s = sc_.scale * std::pow(-std::log(-std::expm1(std::log1p(-w) / a)), inv_b);
        const double y = h / (peak_ * s);
        if (!(y < 1.0)) return k / (peak_ * s);
        return k / (peak_ * s) * std::pow(y, k - 1.0);
    };
    QuadratureOptions opt;
    opt.rel_tol = 1e-9;
    return integrate_checked(integrand, 0.0, std::min(w_max, 1.0), opt, "composite pdf").value;
}

double CompositeChannel::cdf(double h) const {
    if (h <= 0.0) return 0.0;
    const double inv_k = 1.0 / shape_;
    auto integrand = [&](double u) { return scintillation_cdf(h / (peak_ * std::pow(u, inv_k)), sc_); };
    QuadratureOptions opt;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-13;
    return integrate_checked(integrand, 0.0, 1.0, opt, "composite cdf").value;
}

double composite_pdf(double h, const UavPosition& pos, const Atmosphere& atm, const PointingErrorModel& pe,
                     const ScintillationModel& sc) {
    return CompositeChannel(pos, atm, pe, sc).pdf(h);
}

}  // namespace uavrelay
