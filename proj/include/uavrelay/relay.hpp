// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "uavrelay/channel.hpp"
#include "uavrelay/solar.hpp"
#include "uavrelay/uplink.hpp"

namespace uavrelay {

enum class RelayScheme { amplify_forward, decode_forward };
enum class FadingMode { pointing_only, composite };
enum class CapacityUnit { nats, bits };
enum class CapacityMethod { quadrature, closed_form, monte_carlo, asymptotic_1, asymptotic_2, asymptotic_3 };

const char* to_string(RelayScheme s) noexcept;
const char* to_string(FadingMode f) noexcept;
const char* to_string(CapacityUnit u) noexcept;
const char* to_string(CapacityMethod m) noexcept;
std::optional<RelayScheme> parse_scheme(std::string_view s) noexcept;
std::optional<FadingMode> parse_fading(std::string_view s) noexcept;
std::optional<CapacityUnit> parse_unit(std::string_view s) noexcept;

double convert_capacity(double nats, CapacityUnit unit) noexcept;

struct OpticalLink {
    double photo_eff = 0.4;     // eta at the ground station
    double noise_power = 1e-10;  // sigma_N^2, watts
    PointingErrorModel pointing;
    std::optional<ScintillationModel> scintillation = ScintillationModel::moderate();
    FadingMode fading = FadingMode::pointing_only;

    void validate() const;
};

struct RelayConfig {
    RelayScheme scheme = RelayScheme::amplify_forward;
    double df_alpha = 100.0;
    CapacityUnit unit = CapacityUnit::nats;

    void validate() const;
};

// Everything that determines the end-to-end capacity at a position.
struct System {
    SensorField sensors;
    Atmosphere atmosphere;
    OpticalLink link;
    SolarPlatform platform;
    RelayConfig relay;

    void validate() const;
};

struct CapacityResult {
    double value = 0.0;  // nats/s/Hz
    CapacityMethod method = CapacityMethod::quadrature;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

// Position-dependent quantities shared by every capacity evaluation at one point.
struct LinkState {
    UavPosition position;
    double pointing_peak = 0.0;  // B
    AttenuationGains attenuation;
    double pointing_shape = 1.0;  // theta^2 / sigma^2
    PowerBudget budget;
    UplinkStats uplink;
    double sum_rate = 0.0;

    // B * h_a * h_c, the largest deterministic optical gain.
    double optical_peak() const { return pointing_peak * attenuation.product(); }
};

// Throws ErrorCode::infeasible when harvesting does not cover hover power at pos.
LinkState link_state(const UavPosition& pos, const System& sys);

double af_gain(const PowerBudget& budget, const UplinkStats& stats);
double af_conditional_capacity(double h, const OpticalLink& link, const PowerBudget& budget, const UplinkStats& stats);
CapacityResult af_average_capacity(const UavPosition& pos, const System& sys);
// (1 + 1/t) ln(1 + t) - 1.
double af_asymptotic1_value(double t);
double af_asymptotic1_closed_form(const UavPosition& pos, const System& sys);
double af_asymptotic3(double h, const UavPosition& pos, const System& sys);

double df_backhaul_capacity(double h, double net_power, const OpticalLink& link);
double df_conditional_capacity(double h, const UavPosition& pos, const System& sys);
CapacityResult df_average_capacity(const UavPosition& pos, const System& sys);

struct DfThresholds {
    double low = 0.0;      // gain where the backhaul SNR is 1
    double balance = 0.0;  // gain where backhaul and sum rate are equal
};
DfThresholds df_thresholds(const LinkState& st, const OpticalLink& link);
double df_closed_form(const UavPosition& pos, const System& sys, double alpha);

// Conditional rate of the configured scheme for a given optical gain.
double conditional_capacity(double h, const LinkState& st, const System& sys);
// Fading-averaged rate of the configured scheme and fading mode.
CapacityResult average_capacity(const UavPosition& pos, const System& sys);

}  // namespace uavrelay
