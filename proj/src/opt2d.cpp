// SPDX-License-Identifier: Apache-2.0
#include "uavrelay/opt2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "uavrelay/error.hpp"

namespace uavrelay {

Approx2DSolution highsnr_optimum(const SensorField& field, double z, double gamma) {
    field.validate();
    require(std::isfinite(z) && z > 0.0, "z", "must be > 0");
    double wsum = 0.0, wabs = 0.0, wx = 0.0, wy = 0.0;
    bool any_pos = false, any_neg = false;
    for (const Sensor& s : field.sensors) {
        const double w = field.noise_power / (s.power * field.reference_gain) - 1.0 / (z * z);
        any_pos |= w > 0.0;
        any_neg |= w < 0.0;
        wsum += w;
        wabs += std::abs(w);
        wx += w * s.x;
        wy += w * s.y;
    }
    if ((any_pos && any_neg) || !(std::abs(wsum) > 1e-12 * wabs))
        throw Error(ErrorCode::invalid_argument,
                    "high-SNR weights change sign or cancel at this noise level and height; use numeric_optimum_2d",
                    "sensors.noise_power");
    return {{wx / wsum, wy / wsum}, SnrRegime::high, gamma};
}

Approx2DSolution lowsnr_optimum(const SensorField& field) {
    field.validate();
    double p = 0.0, px = 0.0, py = 0.0;
    for (const Sensor& s : field.sensors) {
        p += s.power;
        px += s.power * s.x;
        py += s.power * s.y;
    }
    return {{px / p, py / p}, SnrRegime::low, 0.0};
}

namespace {

double rate_at(const SensorField& field, double x, double y, double z) { return sum_rate({x, y, z}, field); }

struct GridBest {
    double x, y, value;
    int ix, iy;
};

GridBest scan(const SensorField& field, double z, double x0, double y0, double step, int nx, int ny) {
    GridBest best{x0, y0, -std::numeric_limits<double>::infinity(), 0, 0};
    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j <= ny; ++j) {
            const double x = x0 + i * step;
            const double y = y0 + j * step;
            const double v = rate_at(field, x, y, z);
            if (v > best.value) best = {x, y, v, i, j};
        }
    return best;
}

}  // namespace

NumericOptimum numeric_optimum_2d(const SensorField& field, double z, const GridSearchOptions& opt) {
    field.validate();
    require(std::isfinite(z) && z > 0.0, "z", "must be > 0");
    double xmin = field.sensors[0].x, xmax = xmin, ymin = field.sensors[0].y, ymax = ymin;
    for (const Sensor& s : field.sensors) {
        xmin = std::min(xmin, s.x);
        xmax = std::max(xmax, s.x);
        ymin = std::min(ymin, s.y);
        ymax = std::max(ymax, s.y);
    }
    double extent = std::max(xmax - xmin, ymax - ymin);
    if (extent <= 0.0) extent = z;
    const double margin = 0.5 * opt.box_inflation * extent;
    const double lo_x = xmin - margin, hi_x = xmax + margin;
    const double lo_y = ymin - margin, hi_y = ymax + margin;

    double step = extent / opt.coarse_divisions;
    const int nx = static_cast<int>(std::ceil((hi_x - lo_x) / step));
    const int ny = static_cast<int>(std::ceil((hi_y - lo_y) / step));
    GridBest best = scan(field, z, lo_x, lo_y, step, nx, ny);

    NumericOptimum out;
    out.on_boundary = best.ix == 0 || best.iy == 0 || best.ix == nx || best.iy == ny;

    for (int level = 0; level < opt.refinements; ++level) {
        const double fine = step / 10.0;
        best = scan(field, z, best.x - step, best.y - step, fine, 20, 20);
        step = fine;
    }

    double x = best.x, y = best.y, value = best.value;
    if (!out.on_boundary) {
        for (int iter = 0; iter < 50; ++iter) {
            const auto g = sum_rate_gradient({x, y, z}, field);
            const auto h = sum_rate_hessian({x, y, z}, field);
            const double det = h[0] * h[3] - h[1] * h[2];
            if (!(h[0] < 0.0 && det > 0.0)) break;
            const double dx = -(h[3] * g[0] - h[1] * g[1]) / det;
            const double dy = -(-h[2] * g[0] + h[0] * g[1]) / det;
            if (std::abs(dx) > step || std::abs(dy) > step) break;
            const double v = rate_at(field, x + dx, y + dy, z);
            if (v < value - 1e-14 * std::abs(value)) break;
            x += dx;
            y += dy;
            value = v;
            if (std::hypot(dx, dy) < 1e-12 * std::max(1.0, std::hypot(x, y))) break;
        }
    }
    const auto g = sum_rate_gradient({x, y, z}, field);
    out.position = {x, y};
    out.value = value;
    out.gradient_norm = std::hypot(g[0], g[1]);
    return out;
}

double nmse(const Point2& approx, const Point2& exact) {
    const double norm = exact.x * exact.x + exact.y * exact.y;
    if (norm == 0.0) throw Error(ErrorCode::invalid_argument, "nmse: exact solution at the origin", "exact");
    const double dx = approx.x - exact.x;
    const double dy = approx.y - exact.y;
    return (dx * dx + dy * dy) / norm;
}

namespace {

// Sensor indices ordered by power, ties by position.
std::vector<std::size_t> power_order(const SensorField& field) {
    std::vector<std::size_t> order(field.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Sensor& sa = field.sensors[a];
        const Sensor& sb = field.sensors[b];
        if (sa.power != sb.power) return sa.power < sb.power;
        if (sa.x != sb.x) return sa.x < sb.x;
        return sa.y < sb.y;
    });
    return order;
}

void reject_coincident(const SensorField& field, bool use_y) {
    for (std::size_t i = 0; i < field.size(); ++i)
        for (std::size_t j = i + 1; j < field.size(); ++j) {
            const Sensor& a = field.sensors[i];
            const Sensor& b = field.sensors[j];
            if (a.x == b.x && (!use_y || a.y == b.y))
                throw Error(ErrorCode::invalid_argument,
                            "sensors " + std::to_string(i) + " and " + std::to_string(j) + " share a position",
                            "sensors.x");
        }
}

// Both roots of a t^2 + b t + c = 0, preferred root first. Returns false when complex.
bool quadratic_roots(double a, double b, double c, bool plus_first, double& first, double& second) {
    if (a == 0.0) {
        if (b == 0.0) return false;
        first = second = -c / b;
        return true;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return false;
    const double sq = std::sqrt(disc);
    // Stable evaluation: one root from q, the other from c / q.
    const double q = -0.5 * (b + std::copysign(sq, b));
    double r_plus, r_minus;  // (-b + sq)/2a and (-b - sq)/2a
    if (b >= 0.0) {
        r_minus = q / a;
        r_plus = q != 0.0 ? c / q : 0.0;
    } else {
        r_plus = q / a;
        r_minus = q != 0.0 ? c / q : 0.0;
    }
    first = plus_first ? r_plus : r_minus;
    second = plus_first ? r_minus : r_plus;
    return true;
}

double min_capacity(const SensorField& field, const UavPosition& pos, std::size_t& argmin) {
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < field.size(); ++m) {
        const double c = sensor_capacity(pos, field, m);
        if (c < lowest) {
            lowest = c;
            argmin = m;
        }
    }
    return lowest;
}

bool capacities_match(const SensorField& field, const UavPosition& pos, std::size_t a, std::size_t b) {
    const double ca = sensor_capacity(pos, field, a);
    const double cb = sensor_capacity(pos, field, b);
    return std::abs(ca - cb) <= 1e-9 * std::max(1.0, std::max(ca, cb));
}

MaxMinSolution maxmin_impl(const SensorField& input, double z, bool planar) {
    input.validate();
    require(std::isfinite(z) && z > 0.0, "z", "must be > 0");
    SensorField field = input;
    if (!planar)
        for (Sensor& s : field.sensors) s.y = 0.0;
    reject_coincident(field, planar);

    const std::vector<std::size_t> order = power_order(field);
    const std::size_t ref = order.front();
    const Sensor& s0 = field.sensors[ref];

    MaxMinSolution out;
    out.candidates.assign(field.size(), {s0.x, s0.y});
    out.candidate_valid.assign(field.size(), false);

    // Special case: the weakest sensor is already the bottleneck directly above itself.
    std::size_t argmin = ref;
    const UavPosition above_ref{s0.x, s0.y, z};
    const double at_ref = min_capacity(field, above_ref, argmin);
    if (sensor_capacity(above_ref, field, ref) <= at_ref) {
        out.special_case = true;
        out.position = {s0.x, input.sensors[ref].y};
        out.value = at_ref;
        out.binding_sensor = ref;
        return out;
    }

    double best_score = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t k = 1; k < order.size(); ++k) {
        const std::size_t i = order[k];
        const Sensor& si = field.sensors[i];
        double first = 0.0, second = 0.0;
        Point2 cand[2];
        bool real;
        if (!planar) {
            const double a = si.power - s0.power;
            const double b = 2.0 * (s0.power * si.x - si.power * s0.x);
            const double c = si.power * s0.x * s0.x - s0.power * si.x * si.x + (si.power - s0.power) * z * z;
            real = quadratic_roots(a, b, c, true, first, second);
            cand[0] = {first, 0.0};
            cand[1] = {second, 0.0};
        } else {
            const double dist = std::hypot(si.x - s0.x, si.y - s0.y);
            const double ux = (si.x - s0.x) / dist, uy = (si.y - s0.y) / dist;
            const double a = s0.power - si.power;
            const double b = -2.0 * s0.power * dist;
            const double c = (s0.power - si.power) * z * z + s0.power * dist * dist;
            real = quadratic_roots(a, b, c, false, first, second);
            cand[0] = {s0.x + first * ux, s0.y + first * uy};
            cand[1] = {s0.x + second * ux, s0.y + second * uy};
            if (real) {
                // Distances outside the segment are not admissible intersections.
                if (!(first >= 0.0 && first <= dist)) std::swap(cand[0], cand[1]), std::swap(first, second);
                if (!(first >= 0.0 && first <= dist)) real = false;
            }
        }
        if (!real) continue;
        for (const Point2& p : cand) {
            const bool admissible = planar || p.x >= s0.x;
            if (admissible && capacities_match(field, {p.x, p.y, z}, ref, i)) {
                out.candidates[i] = p;
                out.candidate_valid[i] = true;
                break;
            }
        }
        if (!out.candidate_valid[i]) continue;
        const Point2& p = out.candidates[i];
        const double score = planar ? std::hypot(p.x, p.y) : p.x;
        if (!found || score > best_score) {
            best_score = score;
            out.position = p;
            out.binding_sensor = i;
            found = true;
        }
    }
    if (!found) {
        // No admissible crossing: the weakest sensor never stops being the bottleneck.
        out.special_case = true;
        out.position = {s0.x, input.sensors[ref].y};
        out.value = at_ref;
        out.binding_sensor = ref;
        return out;
    }
    out.value = min_capacity(field, {out.position.x, out.position.y, z}, argmin);
    if (!planar) {
        out.position.y = input.sensors[ref].y;
        for (std::size_t m = 0; m < field.size(); ++m) out.candidates[m].y = input.sensors[ref].y;
    }
    return out;
}

}  // namespace

MaxMinSolution maxmin_1d(const SensorField& field, double z) { return maxmin_impl(field, z, false); }
MaxMinSolution maxmin_2d(const SensorField& field, double z) { return maxmin_impl(field, z, true); }

}  // namespace uavrelay
