// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "uavrelay/uplink.hpp"

namespace uavrelay {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

enum class SnrRegime { high, low };

struct Approx2DSolution {
    Point2 position;
    SnrRegime regime = SnrRegime::low;
    double gamma = 100.0;
};

// Weighted mean with weights sigma_0^2/(P_m beta_0) - 1/z^2. Throws when the weights
// change sign or nearly cancel.
Approx2DSolution highsnr_optimum(const SensorField& field, double z, double gamma = 100.0);
// Power-weighted centroid.
Approx2DSolution lowsnr_optimum(const SensorField& field);

struct NumericOptimum {
    Point2 position;
    double value = 0.0;
    double gradient_norm = 0.0;
    bool on_boundary = false;
};

struct GridSearchOptions {
    double box_inflation = 0.5;   // fraction of the sensor bounding box added in total
    double coarse_divisions = 200;
    int refinements = 2;          // each shrinks the step by 10
};

// Maximiser of the sum rate at height z: coarse grid, local grid refinement, then
// Newton steps on the analytic gradient.
NumericOptimum numeric_optimum_2d(const SensorField& field, double z, const GridSearchOptions& opt = {});

double nmse(const Point2& approx, const Point2& exact);

struct MaxMinSolution {
    Point2 position;
    double value = 0.0;
    std::vector<Point2> candidates;  // intersection points, in input sensor order (index 0 unused)
    std::vector<bool> candidate_valid;
    std::size_t binding_sensor = 0;  // index into the caller's sensor list
    bool special_case = false;
};

// Max-min fairness on a line: sensors are treated as collinear and only x is used.
MaxMinSolution maxmin_1d(const SensorField& field, double z);
MaxMinSolution maxmin_2d(const SensorField& field, double z);

}  // namespace uavrelay
