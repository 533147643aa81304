// SPDX-License-Identifier: Apache-2.0
#include "uavrelay/opt3d.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include "parallel.hpp"
#include "uavrelay/error.hpp"
#include "uavrelay/random.hpp"

namespace uavrelay {

void OptimizerSettings::validate() const {
    require(std::isfinite(box_size) && box_size > 0.0, "optimizer.box_size", "must be > 0");
    require(std::isfinite(z_max) && z_max > 0.0, "optimizer.z_max", "must be > 0");
    require(grid_x >= 2, "optimizer.grid_x", "must be >= 2");
    require(grid_y >= 2, "optimizer.grid_y", "must be >= 2");
    require(grid_z >= 4, "optimizer.grid_z", "must be >= 4");
    require(starts >= 4, "optimizer.starts", "must be >= 4");
    require(std::isfinite(local_tol) && local_tol > 0.0, "optimizer.local_tol", "must be > 0");
    require(max_evals > 0, "optimizer.max_evals", "must be > 0");
    require(random_starts >= 0, "optimizer.random_starts", "must be >= 0");
}

unsigned ActiveConstraints::bits() const {
    return (x_low ? 1u : 0u) | (x_high ? 2u : 0u) | (y_low ? 4u : 0u) | (y_high ? 8u : 0u) |
           (z_low ? 16u : 0u) | (z_high ? 32u : 0u);
}

std::vector<double> altitude_grid(double z_lo, double z_hi, const Atmosphere& atm, int count) {
    std::vector<double> breaks{z_lo, z_hi};
    for (double b : {atm.cloud_base, atm.cloud_top()})
        if (b > z_lo && b < z_hi) breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const std::size_t segments = breaks.size() - 1;
    const int interior = std::max(0, count - static_cast<int>(breaks.size()));
    // Share interior nodes by log length so a sliver of a layer does not take a full share.
    std::vector<double> weight(segments);
    for (std::size_t s = 0; s < segments; ++s) weight[s] = std::log1p((breaks[s + 1] - breaks[s]) / 10.0);
    const double wsum = std::accumulate(weight.begin(), weight.end(), 0.0);
    std::vector<int> share(segments, 0);
    std::vector<std::pair<double, std::size_t>> remainder;
    int given = 0;
    for (std::size_t s = 0; s < segments; ++s) {
        const double exact = wsum > 0.0 ? interior * weight[s] / wsum : 0.0;
        share[s] = static_cast<int>(std::floor(exact));
        given += share[s];
        remainder.emplace_back(-(exact - share[s]), s);
    }
    std::sort(remainder.begin(), remainder.end());
    for (int r = 0; r < interior - given; ++r) ++share[remainder[static_cast<std::size_t>(r) % segments].second];

    std::vector<double> nodes = breaks;
    for (std::size_t s = 0; s < segments; ++s) {
        const double a = breaks[s], b = breaks[s + 1];
        const bool above_cloud = a >= atm.cloud_top();
        for (int j = 1; j <= share[s]; ++j) {
            const double f = static_cast<double>(j) / (share[s] + 1);
            nodes.push_back(a + (b - a) * (above_cloud ? f * f : f));
        }
    }
    std::sort(nodes.begin(), nodes.end());
    return nodes;
}

namespace {

// (value, z, x, y) ordering: larger value wins; near-ties go to smaller z, then x, then y.
bool better(double va, const UavPosition& a, double vb, const UavPosition& b) {
    const double tol = 1e-9 * std::max(1.0, std::max(std::abs(va), std::abs(vb)));
    if (va > vb + tol) return true;
    if (vb > va + tol) return false;
    return std::tie(a.z, a.x, a.y) < std::tie(b.z, b.x, b.y);
}

class Box {
public:
    Box(double d, double z_lo, double z_hi) : d_(d), z_lo_(z_lo), z_hi_(z_hi) {}
    UavPosition to_position(const std::array<double, 3>& t) const {
        return {d_ * t[0], d_ * t[1], z_lo_ + (z_hi_ - z_lo_) * t[2]};
    }
    std::array<double, 3> to_unit(const UavPosition& p) const {
        return {p.x / d_, p.y / d_, (p.z - z_lo_) / (z_hi_ - z_lo_)};
    }
    std::array<double, 3> tolerance(double metres) const {
        return {metres / d_, metres / d_, metres / (z_hi_ - z_lo_)};
    }

private:
    double d_, z_lo_, z_hi_;
};

struct Vertex {
    std::array<double, 3> t;
    double f;
};

std::array<double, 3> clamp_unit(std::array<double, 3> t) {
    for (double& c : t) c = std::clamp(c, 0.0, 1.0);
    return t;
}

template <class F>
class NelderMead {
public:
    NelderMead(F& f, std::array<double, 3> tol, std::size_t budget) : f_(f), tol_(tol), budget_(budget) {}

    Vertex run(const Vertex& start, const std::array<double, 3>& step) {
        Vertex best = start;
        std::array<double, 3> h = step;
        for (int restart = 0; restart < 3 && evals_ < budget_; ++restart) {
            const Vertex found = simplex(best, h);
            const bool improved = found.f > best.f + 1e-12 * std::max(1.0, std::abs(best.f));
            if (found.f >= best.f) best = found;
            if (!improved && restart > 0) break;
            for (int i = 0; i < 3; ++i) h[i] = std::max(step[i] * 0.05, 10.0 * tol_[i]);
        }
        return best;
    }

    std::size_t evals() const { return evals_; }
    bool exhausted() const { return evals_ >= budget_; }

private:
    double eval(const std::array<double, 3>& t) {
        ++evals_;
        return f_(t);
    }

    Vertex simplex(const Vertex& start, const std::array<double, 3>& step) {
        std::array<Vertex, 4> s;
        s[0] = start;
        for (int i = 0; i < 3; ++i) {
            std::array<double, 3> t = start.t;
            t[i] += (t[i] + step[i] <= 1.0) ? step[i] : -step[i];
            t = clamp_unit(t);
            s[i + 1] = {t, eval(t)};
        }
        auto order = [&] {
            std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f > b.f; });
        };
        while (evals_ < budget_) {
            order();
            bool small = true;
            for (int v = 1; v < 4; ++v)
                for (int i = 0; i < 3; ++i) small &= std::abs(s[v].t[i] - s[0].t[i]) <= tol_[i];
            if (small) break;

            std::array<double, 3> centroid{};
            for (int v = 0; v < 3; ++v)
                for (int i = 0; i < 3; ++i) centroid[i] += s[v].t[i] / 3.0;
            auto along = [&](double coef) {
                std::array<double, 3> t;
                for (int i = 0; i < 3; ++i) t[i] = centroid[i] + coef * (s[3].t[i] - centroid[i]);
                return clamp_unit(t);
            };

            const auto tr = along(-1.0);
            const double fr = eval(tr);
            if (fr > s[0].f) {
                const auto te = along(-2.0);
                const double fe = eval(te);
                s[3] = fe > fr ? Vertex{te, fe} : Vertex{tr, fr};
                continue;
            }
            if (fr > s[2].f) {
                s[3] = {tr, fr};
                continue;
            }
            const bool outside = fr > s[3].f;
            const auto tc = along(outside ? -0.5 : 0.5);
            const double fc = eval(tc);
            if (fc >= (outside ? fr : s[3].f)) {
                s[3] = {tc, fc};
                continue;
            }
            for (int v = 1; v < 4; ++v) {
                for (int i = 0; i < 3; ++i) s[v].t[i] = s[0].t[i] + 0.5 * (s[v].t[i] - s[0].t[i]);
                s[v].f = eval(s[v].t);
            }
        }
        order();
        return s[0];
    }

    F& f_;
    std::array<double, 3> tol_;
    std::size_t budget_;
    std::size_t evals_ = 0;
};

struct GridNode {
    int ix, iy, iz;
    UavPosition pos;
    double value;
};

}  // namespace

OptimizationResult optimize_position(const System& sys, const OptimizerSettings& settings) {
    sys.validate();
    settings.validate();
    OptimizationResult out;
    out.scheme = sys.relay.scheme;
    out.min_altitude = min_altitude(sys.platform, sys.atmosphere);
    const double z_lo = out.min_altitude + settings.local_tol;
    const double z_hi = settings.z_max;
    if (!(z_hi > z_lo))
        throw Error(ErrorCode::infeasible,
                    "no feasible altitude below z_max: minimum sustainable altitude is " +
                        std::to_string(out.min_altitude) + " m",
                    "optimizer.z_max");
    const double d = settings.box_size;
    const Box box(d, z_lo, z_hi);

    std::vector<double> xs(settings.grid_x), ys(settings.grid_y);
    for (int i = 0; i < settings.grid_x; ++i) xs[i] = d * i / (settings.grid_x - 1);
    for (int j = 0; j < settings.grid_y; ++j) ys[j] = d * j / (settings.grid_y - 1);
    const std::vector<double> zs = altitude_grid(z_lo, z_hi, sys.atmosphere, settings.grid_z);
    const int nx = settings.grid_x, ny = settings.grid_y, nz = static_cast<int>(zs.size());

    const std::size_t total_nodes = static_cast<std::size_t>(nx) * ny * nz;
    const std::size_t grid_budget = std::min(total_nodes, settings.max_evals);
    std::vector<GridNode> nodes(grid_budget);
    detail::parallel_for(grid_budget, [&](std::uint64_t n) {
        const int iz = static_cast<int>(n % nz);
        const int iy = static_cast<int>((n / nz) % ny);
        const int ix = static_cast<int>(n / (static_cast<std::size_t>(nz) * ny));
        const UavPosition p{xs[ix], ys[iy], zs[iz]};
        nodes[n] = {ix, iy, iz, p, average_capacity(p, sys).value};
    });
    out.evals = grid_budget;
    out.budget_exhausted = grid_budget < total_nodes;

    std::size_t best_node = 0;
    for (std::size_t n = 1; n < nodes.size(); ++n)
        if (better(nodes[n].value, nodes[n].pos, nodes[best_node].value, nodes[best_node].pos)) best_node = n;
    out.best_grid_value = nodes[best_node].value;
    out.position = nodes[best_node].pos;
    out.capacity = nodes[best_node].value;

    // Starts: grid-local maxima first (they sit in distinct basins), then the best remaining nodes.
    auto index = [&](int ix, int iy, int iz) { return (static_cast<std::size_t>(ix) * ny + iy) * nz + iz; };
    std::vector<std::size_t> ranked(nodes.size());
    std::iota(ranked.begin(), ranked.end(), std::size_t{0});
    std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
        return better(nodes[a].value, nodes[a].pos, nodes[b].value, nodes[b].pos);
    });
    std::vector<std::size_t> chosen;
    if (!out.budget_exhausted) {
        for (std::size_t n : ranked) {
            if (static_cast<int>(chosen.size()) >= settings.starts) break;
            const GridNode& g = nodes[n];
            bool peak = true;
            const int dirs[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
            for (const auto& dv : dirs) {
                const int a = g.ix + dv[0], b = g.iy + dv[1], c = g.iz + dv[2];
                if (a < 0 || b < 0 || c < 0 || a >= nx || b >= ny || c >= nz) continue;
                if (nodes[index(a, b, c)].value > g.value) peak = false;
            }
            if (peak) chosen.push_back(n);
        }
    }
    for (std::size_t n : ranked) {
        if (static_cast<int>(chosen.size()) >= settings.starts) break;
        if (std::find(chosen.begin(), chosen.end(), n) == chosen.end()) chosen.push_back(n);
    }

    std::vector<UavPosition> starts;
    for (std::size_t n : chosen) starts.push_back(nodes[n].pos);
    RandomStream rng(settings.seed, 0);
    for (int r = 0; r < settings.random_starts; ++r) {
        const double tx = rng.uniform(), ty = rng.uniform(), tz = rng.uniform();
        starts.push_back(box.to_position({tx, ty, tz}));
    }

    std::array<double, 3> step{1.0 / (nx - 1), 1.0 / (ny - 1), 1.0 / (nz - 1)};
    const std::array<double, 3> tol = box.tolerance(settings.local_tol);
    auto objective = [&](const std::array<double, 3>& t) { return average_capacity(box.to_position(t), sys).value; };

    out.all_starts.resize(starts.size());
    std::vector<char> ran(starts.size(), 0), exhausted(starts.size(), 0);
    std::atomic<std::size_t> local_evals{0};
    const std::size_t remaining = settings.max_evals > out.evals ? settings.max_evals - out.evals : 0;
    const std::size_t per_start = starts.empty() ? 0 : remaining / starts.size();
    detail::parallel_for(starts.size(), [&](std::uint64_t s) {
        if (per_start == 0) return;
        const UavPosition p0 = starts[s];
        // Local step in z: the gap to the neighbouring grid altitude.
        std::array<double, 3> h = step;
        auto it = std::lower_bound(zs.begin(), zs.end(), p0.z);
        const double gap = (it + 1 != zs.end() && it != zs.end()) ? *(it + 1) - *it
                           : (it != zs.begin() ? *it - *(it - 1) : (z_hi - z_lo));
        h[2] = std::max(gap / (z_hi - z_lo), 10.0 * tol[2]);
        NelderMead<decltype(objective)> nm(objective, tol, per_start);
        const Vertex start{box.to_unit(p0), objective(box.to_unit(p0))};
        const Vertex v = nm.run(start, h);
        out.all_starts[s] = {p0, box.to_position(v.t), v.f, nm.evals() + 1};
        local_evals += nm.evals() + 1;
        ran[s] = 1;
        exhausted[s] = nm.exhausted();
    });
    out.evals += local_evals.load();
    if (per_start == 0 && !starts.empty()) out.budget_exhausted = true;

    for (std::size_t s = 0; s < starts.size(); ++s) {
        if (!ran[s]) continue;
        const LocalRun& r = out.all_starts[s];
        if (exhausted[s]) out.budget_exhausted = true;
        if (better(r.value, r.optimum, out.capacity, out.position)) {
            out.position = r.optimum;
            out.capacity = r.value;
        }
    }
    const UavPosition& p = out.position;
    const double eps = settings.local_tol;
    out.active = {p.x <= eps, p.x >= d - eps, p.y <= eps, p.y >= d - eps, p.z <= z_lo + eps, p.z >= z_hi - eps};
    return out;
}

std::vector<SliceRow> capacity_slice(const System& sys, SliceAxis axis, const UavPosition& fixed,
                                     std::span<const double> grid) {
    sys.validate();
    std::vector<SliceRow> rows(grid.size());
    detail::parallel_for(grid.size(), [&](std::uint64_t i) {
        UavPosition p = fixed;
        (axis == SliceAxis::x ? p.x : axis == SliceAxis::y ? p.y : p.z) = grid[i];
        rows[i].coordinate = grid[i];
        if (!(p.z > 0.0) || power_budget(p.z, sys.platform, sys.atmosphere).net() < 0.0) {
            rows[i].capacity = std::numeric_limits<double>::quiet_NaN();
            rows[i].feasible = false;
            return;
        }
        rows[i].capacity = average_capacity(p, sys).value;
    });
    return rows;
}

std::vector<SweepRow> sweep_optimal_position(const System& sys, const OptimizerSettings& settings,
                                             SweepParameter parameter, std::span<const double> values,
                                             const CouplingModel& coupling) {
    require(std::isfinite(coupling.slope) && coupling.slope > 0.0, "coupling.slope", "must be > 0");
    require(std::is_sorted(values.begin(), values.end()), "values", "sweep values must be sorted");
    std::vector<SweepRow> rows;
    for (double v : values) {
        System local = sys;
        if (parameter == SweepParameter::ogs_noise) {
            local.link.noise_power = v;
        } else {
            local.atmosphere.laser_ext_cloud = v;
            local.atmosphere.solar_ext_cloud = coupling.slope * v;
        }
        const OptimizationResult r = optimize_position(local, settings);
        rows.push_back({v, r.position, r.capacity, r.budget_exhausted});
    }
    return rows;
}

}  // namespace uavrelay
