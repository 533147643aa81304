// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "uavrelay/scenario.hpp"

namespace testing {

// Small generator for property tests; a fixed seed per test keeps failures reproducible.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    bool coin() { return integer(0, 1) == 1; }

private:
    std::mt19937_64 eng_;
};

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Ten-sensor reference layout with all other parameters at their defaults.
inline uavrelay::System reference_system() { return uavrelay::default_scenario().system; }

// Ten sensors spread over a 1 km square, used for the sum-rate placement studies.
inline uavrelay::SensorField square_field(double reference_gain, double noise_power) {
    const double xs[] = {0, 100, 150, 200, 250, 350, 450, 550, 750, 1000};
    const double ys[] = {0, 150, 250, 300, 450, 550, 650, 700, 800, 1000};
    uavrelay::SensorField f;
    for (int m = 0; m < 10; ++m) f.sensors.push_back({xs[m], ys[m], 0.5 * (m + 1)});
    f.reference_gain = reference_gain;
    f.noise_power = noise_power;
    return f;
}

// Five sensors on a 1 km line with the given powers, for the max-min studies.
inline uavrelay::SensorField line_field(std::initializer_list<double> powers) {
    const double xs[] = {0, 200, 400, 700, 1000};
    uavrelay::SensorField f;
    int m = 0;
    for (double p : powers) f.sensors.push_back({xs[m++], 0.0, p});
    f.reference_gain = 0.2;
    f.noise_power = 1e-6;
    return f;
}

// Minimum per-sensor rate at (x, y, z).
inline double min_rate(const uavrelay::SensorField& f, double x, double y, double z) {
    double lo = INFINITY;
    for (std::size_t m = 0; m < f.size(); ++m) lo = std::min(lo, uavrelay::sensor_capacity({x, y, z}, f, m));
    return lo;
}

}  // namespace testing
