// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>

#include "doctest.h"
#include "fixtures.hpp"
#include "uavrelay/channel.hpp"
#include "uavrelay/error.hpp"
#include "uavrelay/quadrature.hpp"

using namespace uavrelay;

namespace {

const Atmosphere table_atm{};
const PointingErrorModel table_pe{};

// Composite density by brute force: substitute s = Q_s(v) and integrate f_po(h/s)/s over v
// with a composite midpoint rule. No shared code with CompositeChannel beyond the two
// closed-form densities.
double composite_by_midpoint(double h, const UavPosition& pos, const ScintillationModel& sc, int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = (i + 0.5) / n;
        const double s = scintillation_inverse_cdf(v, sc);
        acc += pointing_only_pdf(h / s, pos, table_atm, table_pe) / s;
    }
    return acc / n;
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("cloud path length branches") {
    auto seg = cloud_path_length({0, 0, 2000}, table_atm);
    CHECK(seg.in_cloud == doctest::Approx(500.0));
    CHECK(seg.in_air == doctest::Approx(1500.0));

    seg = cloud_path_length({0, 0, 400}, table_atm);
    CHECK(seg.in_cloud == 0.0);
    CHECK(seg.in_air == doctest::Approx(400.0));

    // Middle branch by similar triangles: (z - Z_d)/z of the slant range.
    const double slant = std::sqrt(300.0 * 300.0 + 400.0 * 400.0 + 750.0 * 750.0);
    seg = cloud_path_length({300, 400, 750}, table_atm);
    CHECK(seg.in_cloud == doctest::Approx(250.0 / 750.0 * slant).epsilon(1e-14));
    CHECK(seg.in_cloud == doctest::Approx(300.4626).epsilon(1e-6));
    CHECK(seg.in_cloud + seg.in_air == doctest::Approx(slant).epsilon(1e-14));
}

TEST_CASE("cloud path length is continuous at both layer boundaries") {
    testing::Gen gen(3);
    for (int i = 0; i < 200; ++i) {
        Atmosphere atm;
        atm.cloud_base = gen.uniform(0.0, 2000.0);
        atm.cloud_thickness = gen.uniform(0.0, 2000.0);
        const double x = gen.uniform(-3000, 3000), y = gen.uniform(-3000, 3000);
        for (double edge : {atm.cloud_base, atm.cloud_top()}) {
            if (edge <= 0.0) continue;
            const double eps = 1e-7 * edge;
            const auto below = cloud_path_length({x, y, edge - eps}, atm);
            const auto at = cloud_path_length({x, y, edge}, atm);
            const double slope_bound = 2.0 * std::hypot(x, y, edge) / edge + 2.0;
            CHECK(std::abs(at.in_cloud - below.in_cloud) <= slope_bound * eps);
            CHECK(at.in_cloud >= 0.0);
            CHECK(at.in_air >= 0.0);
        }
    }
}

TEST_CASE("attenuation gains") {
    CHECK(attenuation_gains(PathSegments{0.0, 0.0}, table_atm).cloud == 1.0);
    const auto g = attenuation_gains(PathSegments{500.0, 1500.0}, table_atm);
    CHECK(g.cloud == doctest::Approx(std::exp(-1.5)).epsilon(1e-15));
    CHECK(g.cloud == doctest::Approx(0.2231).epsilon(1e-4));
    CHECK(g.air == doctest::Approx(0.2231).epsilon(1e-4));
}

TEST_CASE("attenuation is non-increasing in the extinction coefficients") {
    testing::Gen gen(5);
    for (int i = 0; i < 200; ++i) {
        const UavPosition pos{gen.uniform(0, 2000), gen.uniform(0, 2000), gen.uniform(1, 4000)};
        Atmosphere lo, hi;
        lo.laser_ext_cloud = gen.uniform(0, 0.01);
        hi.laser_ext_cloud = lo.laser_ext_cloud + gen.uniform(0, 0.01);
        lo.laser_ext_air = gen.uniform(0, 0.01);
        hi.laser_ext_air = lo.laser_ext_air + gen.uniform(0, 0.01);
        const auto a = attenuation_gains(pos, lo), b = attenuation_gains(pos, hi);
        CHECK(b.cloud <= a.cloud);
        CHECK(b.air <= a.air);
        CHECK(b.cloud > 0.0);
        CHECK(a.air <= 1.0);
    }
}

TEST_CASE("pointing density") {
    const UavPosition pos{0, 0, 1000};
    const double peak = table_pe.peak_gain(pos);
    CHECK(peak == doctest::Approx(0.25 / (2.0 * 1e-4 * 1e6)).epsilon(1e-15));
    CHECK(peak == doctest::Approx(1.25e-3));
    CHECK(pointing_pdf(peak, table_pe, pos) == 0.0);
    CHECK(pointing_pdf(2.0 * peak, table_pe, pos) == 0.0);

    for (double jitter : {0.005, 0.01, 0.02}) {
        PointingErrorModel pe;
        pe.jitter = jitter;
        const double b = pe.peak_gain(pos);
        const auto r = integrate([&](double h) { return pointing_pdf(h, pe, pos); }, 0.0, b, {1e-12, 0.0, 10000});
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("pointing-only density") {
    const UavPosition pos{400, 300, 1500};
    const double loss = attenuation_gains(pos, table_atm).product();
    const double peak = table_pe.peak_gain(pos) * loss;
    const auto r = integrate([&](double h) { return pointing_only_pdf(h, pos, table_atm, table_pe); }, 0.0, peak,
                             {1e-13, 0.0, 10000});
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));

    Atmosphere clear;
    clear.laser_ext_air = clear.laser_ext_cloud = 0.0;
    for (double f : {0.1, 0.5, 0.9})
        CHECK(pointing_only_pdf(f * table_pe.peak_gain(pos), pos, clear, table_pe) ==
              pointing_pdf(f * table_pe.peak_gain(pos), table_pe, pos));

    // theta^2 = 2 sigma^2 gives a linear density.
    PointingErrorModel pe;
    pe.jitter = pe.beamwidth / std::sqrt(2.0);
    const double p2 = pe.peak_gain(pos) * loss;
    for (double f : {0.2, 0.7})
        CHECK(pointing_only_pdf(f * p2, pos, table_atm, pe) == doctest::Approx(2.0 * f * p2 / (p2 * p2)));
}

TEST_CASE("exponentiated Weibull density") {
    const ScintillationModel weibull{1.0, 1.7, 0.8};
    for (double h : {0.1, 0.5, 1.3}) {
        const double t = h / 0.8;
        CHECK(scintillation_pdf(h, weibull) ==
              doctest::Approx(1.7 / 0.8 * std::pow(t, 0.7) * std::exp(-std::pow(t, 1.7))));
    }
    CHECK(scintillation_pdf(0.0, {1.0, 1.0, 1.0}) == doctest::Approx(1.0));

    const ScintillationModel sc{2.0, 1.5, 1.0};
    const auto r = integrate([&](double h) { return scintillation_pdf(h, sc); }, 0.0, 60.0, {1e-12, 0.0, 10000});
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
    for (const auto& p : {ScintillationModel::weak(), ScintillationModel::moderate(), ScintillationModel::strong()}) {
        const auto n = integrate([&](double h) { return scintillation_pdf(h, p); }, 0.0, 80.0, {1e-12, 0.0, 10000});
        CHECK(n.value == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("exponentiated Weibull inverse CDF") {
    CHECK(scintillation_inverse_cdf(0.5, {1, 1, 1}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(scintillation_inverse_cdf(0.25, {2, 1, 1}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(scintillation_cdf(std::log(2.0), {2, 1, 1}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(scintillation_inverse_cdf(1e-300, {2.5, 1.5, 0.9}) < 1e-100);
    CHECK_THROWS_AS(scintillation_inverse_cdf(0.0, {1, 1, 1}), Error);
    CHECK_THROWS_AS(scintillation_inverse_cdf(1.0, {1, 1, 1}), Error);
    CHECK_THROWS_AS(scintillation_inverse_cdf(std::nan(""), {1, 1, 1}), Error);

    testing::Gen gen(9);
    for (int i = 0; i < 500; ++i) {
        const ScintillationModel sc{gen.uniform(0.3, 6), gen.uniform(0.3, 6), gen.uniform(0.2, 3)};
        const double u = gen.uniform(1e-6, 1.0 - 1e-6);
        CHECK(std::abs(scintillation_cdf(scintillation_inverse_cdf(u, sc), sc) - u) < 1e-12);
    }
}

TEST_CASE("composite density against a brute-force midpoint rule") {
    const UavPosition pos{1000, 1000, 1200};
    const ScintillationModel sc = ScintillationModel::moderate();
    const CompositeChannel ch(pos, table_atm, table_pe, sc);
    for (double f : {0.05, 0.3, 0.8, 1.5}) {
        const double h = f * ch.deterministic_peak();
        CHECK(testing::rel_diff(ch.pdf(h), composite_by_midpoint(h, pos, sc, 4000000)) < 3e-6);
        CHECK(ch.pdf(h) == composite_pdf(h, pos, table_atm, table_pe, sc));
    }
}

TEST_CASE("composite density normalizes and matches its CDF") {
    const UavPosition pos{800, 600, 1400};
    for (const auto& sc : {ScintillationModel::weak(), ScintillationModel::moderate(), ScintillationModel::strong()}) {
        const CompositeChannel ch(pos, table_atm, table_pe, sc);
        const double top = ch.deterministic_peak() * scintillation_inverse_cdf(1.0 - 1e-13, sc);
        const auto total = integrate([&](double h) { return ch.pdf(h); }, 0.0, top, {1e-10, 0.0, 10000});
        CHECK(total.value == doctest::Approx(1.0).epsilon(1e-6));
        for (double f : {0.2, 0.9, 2.0}) {
            const double h = f * ch.deterministic_peak();
            const auto part = integrate([&](double t) { return ch.pdf(t); }, 0.0, h, {1e-10, 0.0, 10000});
            CHECK(ch.cdf(h) == doctest::Approx(part.value).epsilon(1e-7));
        }
    }
}

TEST_CASE("sharp scintillation reduces to the pointing-only density") {
    const UavPosition pos{500, 500, 1100};
    const ScintillationModel sharp{1.0, 200.0, 1.0};
    const CompositeChannel ch(pos, table_atm, table_pe, sharp);
    const double peak = ch.deterministic_peak();
    for (double f : {0.1, 0.4, 0.7}) {
        const double h = f * peak;
        // Reference: the same scaled pointing density averaged over the sharp law.
        CHECK(testing::rel_diff(ch.pdf(h), composite_by_midpoint(h, pos, sharp, 200000)) < 1e-5);
        CHECK(testing::rel_diff(ch.pdf(h), pointing_only_pdf(h, pos, table_atm, table_pe)) < 2e-2);
    }
}

TEST_CASE("sup-norm distance to the pointing-only density away from the support edge") {
    const UavPosition pos{500, 500, 1100};
    const ScintillationModel sharp{1.0, 2000.0, 1.0};
    const CompositeChannel ch(pos, table_atm, table_pe, sharp);
    const double peak = ch.deterministic_peak();
    double worst = 0.0, scale = 0.0;
    for (int i = 1; i < 100; ++i) {
        const double h = 0.98 * peak * i / 100.0;
        const double ref = pointing_only_pdf(h, pos, table_atm, table_pe);
        worst = std::max(worst, std::abs(ch.pdf(h) - ref));
        scale = std::max(scale, ref);
    }
    CHECK(worst / scale < 1e-3);
}

}
