// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "uavrelay/error.hpp"

namespace uavrelay {

struct QuadratureOptions {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    std::size_t max_evals = 10000;
};

enum class QuadratureStatus { converged, budget_exhausted, roundoff_limited };

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evals = 0;
    QuadratureStatus status = QuadratureStatus::converged;
};

namespace detail {

// 15-point Kronrod abscissae on [0, 1]; odd indices are the embedded 7-point Gauss nodes.
inline constexpr std::array<double, 8> gk_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
};

template <class F>
Panel gk15(F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * kronrod_weights[7];
    double gauss = fc * gauss_weights[3];
    double abs_sum = std::abs(kronrod);
    std::array<double, 7> lo{}, hi{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * gk_nodes[j];
        lo[j] = f(centre - dx);
        hi[j] = f(centre + dx);
        kronrod += kronrod_weights[j] * (lo[j] + hi[j]);
        abs_sum += kronrod_weights[j] * (std::abs(lo[j]) + std::abs(hi[j]));
        if (j % 2 == 1) gauss += gauss_weights[j / 2] * (lo[j] + hi[j]);
    }
    const double mean = 0.5 * kronrod;
    double asc = kronrod_weights[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        asc += kronrod_weights[j] * (std::abs(lo[j] - mean) + std::abs(hi[j] - mean));

    const double result = kronrod * half;
    abs_sum *= std::abs(half);
    asc *= std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(50.0 * eps * abs_sum, err);
    return {a, b, result, err};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
// Never evaluates f at the end points.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
    QuadratureResult out;
    if (a == b) return out;
    auto worse = [](const detail::Panel& l, const detail::Panel& r) { return l.error < r.error; };
    std::vector<detail::Panel> heap;
    heap.push_back(detail::gk15(f, a, b));
    out.evals = 15;
    double total = heap.front().value;
    double total_err = heap.front().error;

    while (true) {
        const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
        if (total_err <= tol) break;
        if (out.evals + 30 > opt.max_evals) {
            out.status = QuadratureStatus::budget_exhausted;
            break;
        }
        std::pop_heap(heap.begin(), heap.end(), worse);
        const detail::Panel worst = heap.back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            std::abs(worst.b - worst.a) <= 64 * std::numeric_limits<double>::epsilon() *
                                               std::max(std::abs(worst.a), std::abs(worst.b))) {
            out.status = QuadratureStatus::roundoff_limited;
            std::push_heap(heap.begin(), heap.end(), worse);
            break;
        }
        heap.pop_back();
        const detail::Panel left = detail::gk15(f, worst.a, mid);
        const detail::Panel right = detail::gk15(f, mid, worst.b);
        out.evals += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), worse);
    }
    // Re-sum to drop the drift accumulated by incremental updates.
    total = 0.0;
    total_err = 0.0;
    for (const auto& p : heap) {
        total += p.value;
        total_err += p.error;
    }
    out.value = total;
    out.error = total_err;
    return out;
}

// As integrate(), but turns an exhausted budget into a QuadratureError.
template <class F>
QuadratureResult integrate_checked(F&& f, double a, double b, const QuadratureOptions& opt,
                                   const char* what) {
    QuadratureResult r = integrate(f, a, b, opt);
    if (r.status == QuadratureStatus::budget_exhausted)
        throw QuadratureError(std::string(what) + ": node budget of " + std::to_string(opt.max_evals) +
                                  " exhausted (estimate " + std::to_string(r.value) + ", error " +
                                  std::to_string(r.error) + ")",
                              r.value, r.error);
    return r;
}

}  // namespace uavrelay
