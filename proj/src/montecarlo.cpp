// SPDX-License-Identifier: Apache-2.0
#include "uavrelay/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "uavrelay/error.hpp"

namespace uavrelay {

namespace {

constexpr std::uint64_t kChunk = 1u << 14;

// Running mean and sum of squared deviations, merged pairwise.
struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v) {
        ++count;
        const double delta = v - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (v - mean);
    }
    void merge(const Moments& o) {
        if (o.count == 0) return;
        const double n = static_cast<double>(count + o.count);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.count) / n;
        m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / n;
        count += o.count;
    }
};

}  // namespace

void McSettings::validate() const {
    require(samples >= 1000, "monte_carlo.samples", "must be >= 1000");
}

double channel_gain_from_uniforms(double u_pointing, double u_scint, const UavPosition& pos, const Atmosphere& atm,
                                  const PointingErrorModel& pe, const ScintillationModel* sc) {
    const double slant = pos.slant_range();
    // Rayleigh radial offset at the receiver plane.
    const double radius = pe.jitter * slant * std::sqrt(-2.0 * std::log(u_pointing));
    const double spread = pe.beamwidth * slant;
    const double hp = pe.peak_gain(slant) * std::exp(-radius * radius / (2.0 * spread * spread));
    const double hs = sc ? scintillation_inverse_cdf(u_scint, *sc) : 1.0;
    return hp * hs * attenuation_gains(pos, atm).product();
}

double sample_channel_gain(RandomStream& rng, const UavPosition& pos, const Atmosphere& atm,
                           const PointingErrorModel& pe, const ScintillationModel* sc, FadingMode mode) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    return channel_gain_from_uniforms(u1, u2, pos, atm, pe, mode == FadingMode::composite ? sc : nullptr);
}

std::vector<double> sample_channel_gains(const System& sys, const UavPosition& pos, std::uint64_t n,
                                         std::uint64_t seed) {
    pos.validate();
    std::vector<double> out(n);
    const ScintillationModel* sc = sys.link.scintillation ? &*sys.link.scintillation : nullptr;
    const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
    detail::parallel_for(chunks, [&](std::uint64_t c) {
        RandomStream rng(seed, c);
        const std::uint64_t end = std::min(n, (c + 1) * kChunk);
        for (std::uint64_t i = c * kChunk; i < end; ++i)
            out[i] = sample_channel_gain(rng, pos, sys.atmosphere, sys.link.pointing, sc, sys.link.fading);
    });
    return out;
}

McEstimate mc_capacity(const System& sys, const UavPosition& pos, RelayScheme scheme, const McSettings& settings) {
    settings.validate();
    System local = sys;
    local.relay.scheme = scheme;
    const LinkState st = link_state(pos, local);
    const ScintillationModel* sc =
        local.link.fading == FadingMode::composite && local.link.scintillation ? &*local.link.scintillation : nullptr;

    auto rate = [&](double u1, double u2) {
        const double h = channel_gain_from_uniforms(u1, u2, pos, local.atmosphere, local.link.pointing, sc);
        return conditional_capacity(h, st, local);
    };

    // With antithetic pairs each draw yields one averaged pair, so the statistics are
    // taken over pair means.
    const std::uint64_t units = settings.antithetic ? settings.samples / 2 : settings.samples;
    const std::uint64_t chunks = (units + kChunk - 1) / kChunk;
    std::vector<Moments> parts(chunks);
    detail::parallel_for(chunks, [&](std::uint64_t c) {
        RandomStream rng(settings.seed, c);
        Moments m;
        const std::uint64_t end = std::min(units, (c + 1) * kChunk);
        for (std::uint64_t i = c * kChunk; i < end; ++i) {
            const double u1 = rng.uniform();
            const double u2 = rng.uniform();
            const double v = settings.antithetic ? 0.5 * (rate(u1, u2) + rate(1.0 - u1, 1.0 - u2)) : rate(u1, u2);
            m.add(v);
        }
        parts[c] = m;
    });

    Moments total;
    for (const Moments& m : parts) total.merge(m);
    McEstimate est;
    const double n = static_cast<double>(total.count);
    est.mean = total.mean;
    est.std_error = std::sqrt(total.m2 / (n - 1.0) / n);
    est.samples = settings.antithetic ? 2 * total.count : total.count;
    return est;
}

}  // namespace uavrelay
