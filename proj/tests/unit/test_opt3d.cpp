// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "uavrelay/error.hpp"
#include "uavrelay/opt2d.hpp"
#include "uavrelay/opt3d.hpp"

using namespace uavrelay;

namespace {

double capacity_at(const System& sys, const UavPosition& p) { return average_capacity(p, sys).value; }

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
    return v;
}

}  // namespace

TEST_SUITE("opt3d") {

TEST_CASE("altitude grid covers every layer") {
    const Atmosphere atm;
    const auto g = altitude_grid(499.2, 10000, atm, 40);
    CHECK(g.size() == 40);
    CHECK(std::is_sorted(g.begin(), g.end()));
    CHECK(g.front() == 499.2);
    CHECK(g.back() == 10000);
    CHECK(std::count(g.begin(), g.end(), 500.0) == 1);
    CHECK(std::count(g.begin(), g.end(), 1000.0) == 1);
    CHECK(std::count_if(g.begin(), g.end(), [](double z) { return z > 500 && z < 1000; }) >= 5);

    const auto below = altitude_grid(10, 2000, atm, 12);
    CHECK(std::count_if(below.begin(), below.end(), [](double z) { return z < 500; }) >= 2);
}

TEST_CASE("optimum dominates the grid and every local search") {
    const System sys = testing::reference_system();
    OptimizerSettings s;
    const auto r = optimize_position(sys, s);
    CHECK(r.capacity >= r.best_grid_value);
    // Near-ties within 1e-9 go to the lower altitude, so dominance holds up to that margin.
    for (const LocalRun& run : r.all_starts) CHECK(r.capacity >= run.value - 1e-9 * std::abs(run.value));
    CHECK(r.all_starts.size() >= static_cast<std::size_t>(s.starts));
    CHECK(r.capacity == doctest::Approx(capacity_at(sys, r.position)).epsilon(1e-9));
    CHECK(r.position.x >= 0.0);
    CHECK(r.position.x <= s.box_size);
    CHECK(r.position.y >= 0.0);
    CHECK(r.position.y <= s.box_size);
    CHECK(r.position.z > r.min_altitude);
    CHECK(r.position.z <= s.z_max);
    CHECK(r.min_altitude == doctest::Approx(min_altitude(sys.platform, sys.atmosphere)));
    CHECK_FALSE(r.budget_exhausted);

    const auto again = optimize_position(sys, s);
    CHECK(again.position.x == r.position.x);
    CHECK(again.position.y == r.position.y);
    CHECK(again.position.z == r.position.z);
    CHECK(again.capacity == r.capacity);
}

TEST_CASE("seeded random starts") {
    const System sys = testing::reference_system();
    OptimizerSettings s;
    s.random_starts = 4;
    s.seed = 5;
    const auto a = optimize_position(sys, s);
    const auto b = optimize_position(sys, s);
    CHECK(a.all_starts.size() == static_cast<std::size_t>(s.starts + 4));
    CHECK(a.position.x == b.position.x);
    CHECK(a.capacity == b.capacity);
}

TEST_CASE("evaluation budget is reported") {
    const System sys = testing::reference_system();
    OptimizerSettings s;
    s.max_evals = 5000;
    const auto r = optimize_position(sys, s);
    CHECK(r.budget_exhausted);
    CHECK(r.capacity >= r.best_grid_value);
    CHECK(r.evals <= 5000 + 64);
}

TEST_CASE("active box faces are flagged") {
    System sys = testing::reference_system();
    sys.relay.scheme = RelayScheme::decode_forward;
    sys.link.noise_power = 1e-2;
    const auto r = optimize_position(sys, {});
    CHECK(r.active.any());
    CHECK(r.active.x_low);
    CHECK(r.active.y_low);
    CHECK(r.active.bits() == (1u | 4u | (r.active.z_low ? 16u : 0u)));
}

TEST_CASE("noisy ground station pulls the relay above it") {
    System sys = testing::reference_system();
    sys.link.noise_power = 1e-2;
    const OptimizerSettings s;
    const auto r = optimize_position(sys, s);
    const double cell = s.box_size / (s.grid_x - 1);
    CHECK(std::hypot(r.position.x, r.position.y) <= cell);
}

TEST_CASE("quiet ground station leaves placement to the sensors") {
    System sys = testing::reference_system();
    sys.relay.scheme = RelayScheme::decode_forward;
    sys.link.noise_power = 1e-30;
    const OptimizerSettings s;
    const auto r = optimize_position(sys, s);
    const auto field_opt = numeric_optimum_2d(sys.sensors, r.position.z);
    const double cell = s.box_size / (s.grid_x - 1);
    CHECK(std::abs(r.position.x - field_opt.position.x) <= cell);
    CHECK(std::abs(r.position.y - field_opt.position.y) <= cell);
}

TEST_CASE("slices") {
    System sys = testing::reference_system();
    const auto zs = linspace(100, 2000, 20);
    const auto rows = capacity_slice(sys, SliceAxis::z, {1000, 1000, 0}, zs);
    REQUIRE(rows.size() == zs.size());
    const double z0 = min_altitude(sys.platform, sys.atmosphere);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].coordinate == zs[i]);
        CHECK(rows[i].feasible == (zs[i] >= z0));
        if (rows[i].feasible)
            CHECK(rows[i].capacity == capacity_at(sys, {1000, 1000, zs[i]}));
        else
            CHECK(std::isnan(rows[i].capacity));
    }

    // A single sensor on the x axis with the optical hop out of the way: the capacity is a
    // function of the distance to the sensor only, so a y slice through it is symmetric and
    // repeated coordinates give identical rows.
    System sym = sys;
    sym.relay.scheme = RelayScheme::decode_forward;
    sym.link.noise_power = 1e-30;
    sym.sensors.sensors = {{1000, 0, 1}};
    const auto ys = linspace(-50, 50, 11);
    const auto same = capacity_slice(sym, SliceAxis::x, {0, 0, 1200}, std::vector<double>{1000, 1000, 1000});
    CHECK(same[0].capacity == same[1].capacity);
    CHECK(same[1].capacity == same[2].capacity);
    const auto ycol = capacity_slice(sym, SliceAxis::y, {1000, 0, 1200}, ys);
    for (std::size_t i = 0; i < ys.size(); ++i)
        CHECK(ycol[i].capacity == doctest::Approx(ycol[ys.size() - 1 - i].capacity).epsilon(1e-12));
}

TEST_CASE("slope discontinuity at the cloud top") {
    testing::Gen gen(13);
    for (int t = 0; t < 10; ++t) {
        System sys = testing::reference_system();
        sys.atmosphere.laser_ext_cloud = sys.atmosphere.solar_ext_cloud = gen.uniform(0.002, 0.01);
        sys.relay.scheme = gen.coin() ? RelayScheme::decode_forward : RelayScheme::amplify_forward;
        const double top = sys.atmosphere.cloud_top();
        const auto c = [&](double z) { return capacity_at(sys, {1000, 1000, z}); };
        // Second-order one-sided slopes; a true kink keeps its jump as the step shrinks.
        auto jump = [&](double h) {
            const double left = (3 * c(top) - 4 * c(top - h) + c(top - 2 * h)) / (2 * h);
            const double right = (-3 * c(top) + 4 * c(top + h) - c(top + 2 * h)) / (2 * h);
            return right - left;
        };
        const double coarse = jump(2.0), fine = jump(0.5);
        CHECK(std::abs(fine) > 1e-7);
        CHECK(std::abs(fine - coarse) < 0.05 * std::abs(fine));
    }

    System sys = testing::reference_system();
    sys.atmosphere.laser_ext_cloud = sys.atmosphere.solar_ext_cloud = 0.005;
    const auto rows = capacity_slice(sys, SliceAxis::z, {1000, 1000, 0}, std::vector<double>{990, 1000, 1010});
    const double left = rows[1].capacity - rows[0].capacity, right = rows[2].capacity - rows[1].capacity;
    CHECK(left * right < 0.0);
}

TEST_CASE("optimal position sweeps") {
    System sys = testing::reference_system();
    OptimizerSettings s;
    s.grid_x = s.grid_y = 10;
    s.grid_z = 24;
    const std::vector<double> psi{0.002, 0.004, 0.008};
    const auto rows = sweep_optimal_position(sys, s, SweepParameter::cloud_extinction, psi, CouplingModel{2.0});
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].parameter == psi[i]);
        System check = sys;
        check.atmosphere.laser_ext_cloud = psi[i];
        check.atmosphere.solar_ext_cloud = 2.0 * psi[i];
        CHECK(rows[i].capacity == doctest::Approx(capacity_at(check, rows[i].position)).epsilon(1e-9));
    }

    const std::vector<double> noise{1e-12, 1e-10, 1e-8};
    const auto nrows = sweep_optimal_position(sys, s, SweepParameter::ogs_noise, noise);
    REQUIRE(nrows.size() == 3);
    for (std::size_t i = 1; i < nrows.size(); ++i) CHECK(nrows[i].capacity <= nrows[i - 1].capacity);
    CHECK_THROWS_AS(sweep_optimal_position(sys, s, SweepParameter::ogs_noise, std::vector<double>{1e-8, 1e-10}),
                    Error);
}

TEST_CASE("stronger scintillation pulls the relay toward the ground station") {
    System sys = testing::reference_system();
    sys.link.fading = FadingMode::composite;
    const UavPosition at{0, 1000, 1200};
    const auto xs = linspace(0, 2000, 41);
    double prev = INFINITY;
    for (const auto& preset : {ScintillationModel::weak(), ScintillationModel::moderate(), ScintillationModel::strong()}) {
        sys.link.scintillation = preset;
        const auto rows = capacity_slice(sys, SliceAxis::x, at, xs);
        const auto best = std::max_element(rows.begin(), rows.end(),
                                           [](const SliceRow& a, const SliceRow& b) { return a.capacity < b.capacity; });
        CHECK(best->coordinate <= prev);
        prev = best->coordinate;
    }
}

TEST_CASE("settings validation") {
    OptimizerSettings s;
    s.starts = 3;
    CHECK_THROWS_AS(s.validate(), Error);
    s = {};
    s.grid_z = 2;
    CHECK_THROWS_AS(optimize_position(testing::reference_system(), s), Error);
}

}
