// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "uavrelay/scenario.hpp"

namespace uavrelay {

struct ValidationRow {
    int scenario = 0;  // 0 is the base scenario
    RelayScheme scheme = RelayScheme::amplify_forward;
    FadingMode fading = FadingMode::pointing_only;
    UavPosition position;
    double quadrature = 0.0;
    double mc_mean = 0.0;
    double std_error = 0.0;
    double z_score = 0.0;  // |quadrature - mc| / std_error
};

// Perturbs sensors, noise levels, cloud extinction, pointing shape and fading of base.
// Returns the scenario together with a feasible probe position.
struct RandomCase {
    Scenario scenario;
    UavPosition position;
};
RandomCase randomized_case(const Scenario& base, std::uint64_t seed, int index);

std::vector<ValidationRow> cross_validate(const Scenario& base, const UavPosition& base_position,
                                          std::uint64_t samples, std::uint64_t seed, unsigned extra);

}  // namespace uavrelay
