// SPDX-License-Identifier: Apache-2.0
#include "uavrelay/relay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "uavrelay/error.hpp"
#include "uavrelay/quadrature.hpp"

namespace uavrelay {

const char* to_string(RelayScheme s) noexcept { return s == RelayScheme::amplify_forward ? "af" : "df"; }
const char* to_string(FadingMode f) noexcept { return f == FadingMode::pointing_only ? "pointing" : "composite"; }
const char* to_string(CapacityUnit u) noexcept { return u == CapacityUnit::nats ? "nats" : "bits"; }

const char* to_string(CapacityMethod m) noexcept {
    switch (m) {
        case CapacityMethod::quadrature: return "quadrature";
        case CapacityMethod::closed_form: return "closed-form";
        case CapacityMethod::monte_carlo: return "monte-carlo";
        case CapacityMethod::asymptotic_1: return "asymptotic-1";
        case CapacityMethod::asymptotic_2: return "asymptotic-2";
        case CapacityMethod::asymptotic_3: return "asymptotic-3";
    }
    return "unknown";
}

std::optional<RelayScheme> parse_scheme(std::string_view s) noexcept {
    if (s == "af") return RelayScheme::amplify_forward;
    if (s == "df") return RelayScheme::decode_forward;
    return std::nullopt;
}

std::optional<FadingMode> parse_fading(std::string_view s) noexcept {
    if (s == "pointing") return FadingMode::pointing_only;
    if (s == "composite") return FadingMode::composite;
    return std::nullopt;
}

std::optional<CapacityUnit> parse_unit(std::string_view s) noexcept {
    if (s == "nats") return CapacityUnit::nats;
    if (s == "bits") return CapacityUnit::bits;
    return std::nullopt;
}

double convert_capacity(double nats, CapacityUnit unit) noexcept {
    return unit == CapacityUnit::bits ? nats / std::numbers::ln2 : nats;
}

void OpticalLink::validate() const {
    require(std::isfinite(photo_eff) && photo_eff > 0.0 && photo_eff <= 1.0, "optical_link.photo_eff",
            "must lie in (0, 1]");
    require(std::isfinite(noise_power) && noise_power > 0.0, "optical_link.noise_power", "must be > 0");
    pointing.validate();
    if (scintillation) scintillation->validate();
    require(fading != FadingMode::composite || scintillation.has_value(), "optical_link.fading",
            "composite fading needs a scintillation model");
}

void RelayConfig::validate() const {
    require(std::isfinite(df_alpha) && df_alpha >= 10.0, "relay.df_alpha", "must be >= 10");
}

void System::validate() const {
    sensors.validate();
    atmosphere.validate();
    link.validate();
    platform.validate();
    relay.validate();
}

LinkState link_state(const UavPosition& pos, const System& sys) {
    pos.validate();
    LinkState st;
    st.position = pos;
    st.pointing_peak = sys.link.pointing.peak_gain(pos);
    st.attenuation = attenuation_gains(pos, sys.atmosphere);
    st.pointing_shape = sys.link.pointing.shape();
    st.budget = power_budget(pos.z, sys.platform, sys.atmosphere);
    if (st.budget.net() < 0.0)
        throw Error(ErrorCode::infeasible,
                    "harvested power " + std::to_string(st.budget.harvested) + " W is below hover power " +
                        std::to_string(st.budget.consumed) + " W at z = " + std::to_string(pos.z) + " m",
                    "position.z");
    st.uplink = uplink_stats(pos, sys.sensors);
    st.sum_rate = sum_rate(pos, sys.sensors);
    return st;
}

double af_gain(const PowerBudget& budget, const UplinkStats& stats) {
    if (budget.net() < 0.0)
        throw Error(ErrorCode::infeasible, "negative net power: the altitude is below the sustainable minimum",
                    "budget.net");
    return std::sqrt(budget.net() / (stats.amplitude * stats.amplitude + stats.noise_variance));
}

double af_conditional_capacity(double h, const OpticalLink& link, const PowerBudget& budget, const UplinkStats& stats) {
    const double g = af_gain(budget, stats);
    const double q = link.photo_eff * h * g;
    const double q2 = q * q;
    return std::log1p(q2 * stats.amplitude * stats.amplitude / (q2 * stats.noise_variance + link.noise_power));
}

namespace {

double af_rate(double h, const LinkState& st, const OpticalLink& link) {
    const double s2 = st.uplink.amplitude * st.uplink.amplitude;
    const double g2 = st.budget.net() / (s2 + st.uplink.noise_variance);
    const double q2 = link.photo_eff * link.photo_eff * h * h * g2;
    return std::log1p(q2 * s2 / (q2 * st.uplink.noise_variance + link.noise_power));
}

double df_rate(double h, const LinkState& st, const OpticalLink& link) {
    return std::min(df_backhaul_capacity(h, st.budget.net(), link), st.sum_rate);
}

// Highest conditional rate the scheme can reach at this position.
double rate_ceiling(const LinkState& st, RelayScheme scheme) {
    if (scheme == RelayScheme::decode_forward) return st.sum_rate;
    return std::log1p(st.uplink.amplitude * st.uplink.amplitude / st.uplink.noise_variance);
}

constexpr double kQuantileCut = 1e-9;

// Average over h = scale * B h_a h_c * u^(1/k), u uniform on (0, 1).
QuadratureResult pointing_average(const LinkState& st, const System& sys, double scale, double rel_tol) {
    const double peak = st.optical_peak() * scale;
    const double inv_k = 1.0 / st.pointing_shape;
    QuadratureOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = 1e-300;
    if (sys.relay.scheme == RelayScheme::amplify_forward) {
        auto f = [&](double u) { return af_rate(peak * std::pow(u, inv_k), st, sys.link); };
        return integrate_checked(f, 0.0, 1.0, opt, "AF average capacity");
    }
    const double balance = df_thresholds(st, sys.link).balance;
    const double u_split = balance >= peak ? 1.0 : std::pow(balance / peak, st.pointing_shape);
    const double net = st.budget.net();
    auto f = [&](double u) { return df_backhaul_capacity(peak * std::pow(u, inv_k), net, sys.link); };
    QuadratureResult r = integrate_checked(f, 0.0, u_split, opt, "DF average capacity");
    r.value += st.sum_rate * (1.0 - u_split);
    return r;
}

CapacityResult average_at(const LinkState& st, const System& sys) {
    CapacityResult out;
    out.method = CapacityMethod::quadrature;
    if (sys.link.fading == FadingMode::pointing_only) {
        const QuadratureResult r = pointing_average(st, sys, 1.0, 1e-8);
        out.value = r.value;
        out.error_estimate = r.error;
        out.evaluations = r.evals;
        return out;
    }
    const ScintillationModel& sc = *sys.link.scintillation;
    std::size_t inner_evals = 0;
    auto outer = [&](double v) {
        const QuadratureResult r = pointing_average(st, sys, scintillation_inverse_cdf(v, sc), 1e-10);
        inner_evals += r.evals;
        return r.value;
    };
    QuadratureOptions opt;
    opt.rel_tol = 1e-8;
    opt.abs_tol = 1e-300;
    const QuadratureResult r = integrate_checked(outer, 0.0, 1.0 - kQuantileCut, opt, "composite average capacity");
    out.value = r.value;
    out.error_estimate = r.error + kQuantileCut * rate_ceiling(st, sys.relay.scheme);
    out.evaluations = inner_evals;
    return out;
}

}  // namespace

CapacityResult af_average_capacity(const UavPosition& pos, const System& sys) {
    System af = sys;
    af.relay.scheme = RelayScheme::amplify_forward;
    return average_at(link_state(pos, af), af);
}

double af_asymptotic1_value(double t) {
    if (!(t > 0.0)) throw Error(ErrorCode::invalid_argument, "asymptotic case 1 needs t > 0", "t");
    if (t < 1e-4) return t * (0.5 - t * (1.0 / 6.0 - t / 12.0));
    return (1.0 + 1.0 / t) * std::log1p(t) - 1.0;
}

double af_asymptotic1_closed_form(const UavPosition& pos, const System& sys) {
    const PointingErrorModel& pe = sys.link.pointing;
    if (std::abs(pe.shape() - 2.0) > 1e-9)
        throw Error(ErrorCode::invalid_argument,
                    "asymptotic case 1 closed form needs beamwidth^2 = 2 jitter^2 (shape 2), got shape " +
                        std::to_string(pe.shape()),
                    "optical_link.beamwidth");
    const LinkState st = link_state(pos, sys);
    const double peak = st.optical_peak();
    const double eta = sys.link.photo_eff;
    const double t = eta * eta * peak * peak * st.budget.net() / sys.link.noise_power;
    return af_asymptotic1_value(t);
}

double af_asymptotic3(double h, const UavPosition& pos, const System& sys) {
    const LinkState st = link_state(pos, sys);
    const double s2 = st.uplink.amplitude * st.uplink.amplitude;
    const double eta = sys.link.photo_eff;
    const double snr = eta * eta * h * h * (st.budget.net() / (s2 + st.uplink.noise_variance)) * s2 / sys.link.noise_power;
    return std::log1p(snr);
}

double df_backhaul_capacity(double h, double net_power, const OpticalLink& link) {
    const double amp = net_power * h * link.photo_eff;
    return std::log1p(amp * amp / link.noise_power);
}

double df_conditional_capacity(double h, const UavPosition& pos, const System& sys) {
    const LinkState st = link_state(pos, sys);
    return df_rate(h, st, sys.link);
}

CapacityResult df_average_capacity(const UavPosition& pos, const System& sys) {
    System df = sys;
    df.relay.scheme = RelayScheme::decode_forward;
    return average_at(link_state(pos, df), df);
}

DfThresholds df_thresholds(const LinkState& st, const OpticalLink& link) {
    DfThresholds t;
    t.low = std::sqrt(link.noise_power) / (st.budget.net() * link.photo_eff);
    const double excess = std::expm1(st.sum_rate);
    t.balance = std::isfinite(excess) ? t.low * std::sqrt(excess) : std::numeric_limits<double>::infinity();
    return t;
}

double df_closed_form(const UavPosition& pos, const System& sys, double alpha) {
    require(std::isfinite(alpha) && alpha >= 10.0, "relay.df_alpha", "must be >= 10");
    const LinkState st = link_state(pos, sys);
    const double k = st.pointing_shape;
    const double peak = st.optical_peak();
    const DfThresholds th = df_thresholds(st, sys.link);
    if (st.budget.net() == 0.0) return 0.0;

    // Work in r = h / peak so nothing depends on peak^k.
    const double r_hi = std::min(th.balance, peak) / peak;
    const double r_lo = std::min(th.low / peak, r_hi);
    const double snr_peak = std::pow(peak / th.low, 2.0);  // c * peak^2

    const double linear = k * snr_peak * std::pow(r_lo, k + 2.0) / (k + 2.0);

    double curved = 0.0;
    if (r_hi > r_lo) {
        const double p1 = k + 2.0 / alpha;
        const double p2 = k - 2.0 + 2.0 / alpha;
        curved += alpha * k * std::pow(snr_peak, 1.0 / alpha) * (std::pow(r_hi, p1) - std::pow(r_lo, p1)) / p1;
        const double span2 = std::abs(p2) < 1e-12 ? std::log(r_hi / r_lo)
                                                  : (std::pow(r_hi, p2) - std::pow(r_lo, p2)) / p2;
        curved += k * std::pow(snr_peak, 1.0 / alpha - 1.0) * span2;
        curved -= alpha * (std::pow(r_hi, k) - std::pow(r_lo, k));
    }
    const double saturated = st.sum_rate * (1.0 - std::pow(r_hi, k));
    return std::max(0.0, linear + curved + saturated);
}

double conditional_capacity(double h, const LinkState& st, const System& sys) {
    return sys.relay.scheme == RelayScheme::amplify_forward ? af_rate(h, st, sys.link) : df_rate(h, st, sys.link);
}

CapacityResult average_capacity(const UavPosition& pos, const System& sys) {
    return average_at(link_state(pos, sys), sys);
}

}  // namespace uavrelay
