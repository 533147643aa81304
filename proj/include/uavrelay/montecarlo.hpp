// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "uavrelay/random.hpp"
#include "uavrelay/relay.hpp"

namespace uavrelay {

struct McSettings {
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 7;
    bool antithetic = false;

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

// Draws one optical gain from two uniforms. Exposed so tests can drive it with fixed inputs.
double channel_gain_from_uniforms(double u_pointing, double u_scint, const UavPosition& pos, const Atmosphere& atm,
                                  const PointingErrorModel& pe, const ScintillationModel* sc);

double sample_channel_gain(RandomStream& rng, const UavPosition& pos, const Atmosphere& atm,
                           const PointingErrorModel& pe, const ScintillationModel* sc, FadingMode mode);

// n gains using the same chunked streams as mc_capacity.
std::vector<double> sample_channel_gains(const System& sys, const UavPosition& pos, std::uint64_t n,
                                         std::uint64_t seed);

McEstimate mc_capacity(const System& sys, const UavPosition& pos, RelayScheme scheme, const McSettings& settings);

}  // namespace uavrelay
