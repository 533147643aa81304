// SPDX-License-Identifier: Apache-2.0
#include "uavrelay/validation.hpp"

#include <algorithm>
#include <cmath>

namespace uavrelay {

RandomCase randomized_case(const Scenario& base, std::uint64_t seed, int index) {
    RandomStream rng(seed, 0x5eed0000u + static_cast<std::uint64_t>(index));
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
    auto log_uniform = [&](double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); };

    RandomCase c{base, {}};
    System& sys = c.scenario.system;
    const double d = c.scenario.optimizer.box_size;
    const int count = 3 + static_cast<int>(rng.uniform() * 8.0);
    sys.sensors.sensors.clear();
    for (int m = 0; m < count; ++m) sys.sensors.sensors.push_back({uniform(0.0, d), uniform(0.0, d), uniform(0.3, 5.0)});
    sys.sensors.reference_gain = uniform(0.2, 0.6);
    sys.sensors.noise_power = log_uniform(1e-8, 1e-5);
    sys.link.noise_power = log_uniform(1e-14, 1e-6);
    sys.atmosphere.laser_ext_cloud = uniform(0.001, 0.01);
    sys.atmosphere.solar_ext_cloud = sys.atmosphere.laser_ext_cloud;
    sys.link.pointing.beamwidth = sys.link.pointing.jitter * std::sqrt(uniform(0.5, 3.0));
    if (rng.uniform() < 0.5) {
        sys.link.fading = FadingMode::composite;
        const double pick = rng.uniform();
        sys.link.scintillation = pick < 1.0 / 3 ? ScintillationModel::weak()
                                 : pick < 2.0 / 3 ? ScintillationModel::moderate()
                                                  : ScintillationModel::strong();
    } else {
        sys.link.fading = FadingMode::pointing_only;
    }
    const double z0 = min_altitude(sys.platform, sys.atmosphere);
    c.position = {uniform(0.0, d), uniform(0.0, d), uniform(std::max(z0 + 10.0, 100.0), 3000.0)};
    return c;
}

std::vector<ValidationRow> cross_validate(const Scenario& base, const UavPosition& base_position,
                                          std::uint64_t samples, std::uint64_t seed, unsigned extra) {
    std::vector<ValidationRow> rows;
    McSettings mc = base.mc;
    mc.samples = samples;
    mc.seed = seed;
    for (unsigned i = 0; i <= extra; ++i) {
        const RandomCase c = i == 0 ? RandomCase{base, base_position} : randomized_case(base, seed, static_cast<int>(i));
        for (RelayScheme scheme : {RelayScheme::amplify_forward, RelayScheme::decode_forward}) {
            System sys = c.scenario.system;
            sys.relay.scheme = scheme;
            ValidationRow row;
            row.scenario = static_cast<int>(i);
            row.scheme = scheme;
            row.fading = sys.link.fading;
            row.position = c.position;
            row.quadrature = average_capacity(c.position, sys).value;
            const McEstimate est = mc_capacity(sys, c.position, scheme, mc);
            row.mc_mean = est.mean;
            row.std_error = est.std_error;
            const double diff = std::abs(row.quadrature - est.mean);
            // A degenerate sample (all draws equal) still leaves round-off between the two paths.
            const double scale = std::max(est.std_error, 1e-12 * std::max(1.0, std::abs(row.quadrature)));
            row.z_score = diff / scale;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace uavrelay
