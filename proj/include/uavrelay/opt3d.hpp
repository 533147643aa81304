// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "uavrelay/relay.hpp"

namespace uavrelay {

struct OptimizerSettings {
    double box_size = 2000.0;  // x, y in [0, D]
    double z_max = 10000.0;
    int grid_x = 20;
    int grid_y = 20;
    int grid_z = 40;
    int starts = 8;
    double local_tol = 0.1;  // metres
    std::size_t max_evals = 200000;
    std::uint64_t seed = 0;
    int random_starts = 0;

    void validate() const;
};

struct LocalRun {
    UavPosition start;
    UavPosition optimum;
    double value = 0.0;
    std::size_t evals = 0;
};

struct ActiveConstraints {
    bool x_low = false, x_high = false;
    bool y_low = false, y_high = false;
    bool z_low = false, z_high = false;

    bool any() const { return x_low || x_high || y_low || y_high || z_low || z_high; }
    unsigned bits() const;
};

struct OptimizationResult {
    UavPosition position;
    double capacity = 0.0;
    RelayScheme scheme = RelayScheme::amplify_forward;
    std::size_t evals = 0;
    std::vector<LocalRun> all_starts;
    ActiveConstraints active;
    bool budget_exhausted = false;
    double min_altitude = 0.0;
    double best_grid_value = 0.0;
};

OptimizationResult optimize_position(const System& sys, const OptimizerSettings& settings);

// Altitudes of the coarse grid: breakpoints at the layer boundaries plus interior nodes in
// every layer, denser just above the cloud top.
std::vector<double> altitude_grid(double z_lo, double z_hi, const Atmosphere& atm, int count);

enum class SliceAxis { x, y, z };

struct SliceRow {
    double coordinate = 0.0;
    double capacity = 0.0;  // NaN when the altitude is not sustainable
    bool feasible = true;
};

std::vector<SliceRow> capacity_slice(const System& sys, SliceAxis axis, const UavPosition& fixed,
                                     std::span<const double> grid);

enum class SweepParameter { ogs_noise, cloud_extinction };

// beta_c = slope * psi_c during cloud-extinction sweeps.
struct CouplingModel {
    double slope = 1.0;
};

struct SweepRow {
    double parameter = 0.0;
    UavPosition position;
    double capacity = 0.0;
    bool budget_exhausted = false;
};

std::vector<SweepRow> sweep_optimal_position(const System& sys, const OptimizerSettings& settings,
                                             SweepParameter parameter, std::span<const double> values,
                                             const CouplingModel& coupling = {});

}  // namespace uavrelay
