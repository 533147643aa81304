// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "uavrelay/error.hpp"
#include "uavrelay/quadrature.hpp"
#include "uavrelay/relay.hpp"

using namespace uavrelay;

namespace {

// Averages a conditional rate against the pointing-only density in the gain variable
// itself, the direct form of the fading average.
double average_in_gain(const System& sys, const UavPosition& pos, const auto& rate) {
    const LinkState st = link_state(pos, sys);
    const double peak = st.optical_peak();
    auto f = [&](double h) { return rate(h) * pointing_only_pdf(h, pos, sys.atmosphere, sys.link.pointing); };
    QuadratureOptions opt{1e-11, 0.0, 10000};
    return integrate(f, 0.0, peak, opt).value;
}

System random_system(testing::Gen& gen) {
    System sys = testing::reference_system();
    sys.sensors.sensors.clear();
    const int m = gen.integer(1, 8);
    for (int i = 0; i < m; ++i)
        sys.sensors.sensors.push_back({gen.uniform(0, 2000), gen.uniform(0, 2000), gen.uniform(0.2, 5)});
    sys.sensors.noise_power = gen.log_uniform(1e-9, 1e-5);
    sys.link.noise_power = gen.log_uniform(1e-14, 1e-6);
    sys.atmosphere.laser_ext_cloud = sys.atmosphere.solar_ext_cloud = gen.uniform(0.001, 0.01);
    sys.link.pointing.jitter = sys.link.pointing.beamwidth / std::sqrt(gen.uniform(0.5, 3.0));
    return sys;
}

UavPosition random_position(testing::Gen& gen) {
    return {gen.uniform(0, 2000), gen.uniform(0, 2000), gen.uniform(520, 3000)};
}

}  // namespace

TEST_SUITE("relay") {

TEST_CASE("amplifier gain") {
    CHECK(af_gain({100, 100}, {3.0, 1e-5}) == 0.0);
    CHECK(af_gain({150, 50}, {0.0, 1.0}) == doctest::Approx(10.0));
    CHECK(af_gain({150, 50}, {3.0, 1e-5}) == doctest::Approx(std::sqrt(100.0 / 9.00001)).epsilon(1e-15));
    CHECK(af_gain({150, 50}, {3.0, 1e-5}) == doctest::Approx(3.3333).epsilon(1e-4));
    try {
        af_gain({10, 50}, {1.0, 1.0});
        FAIL("expected infeasible");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::infeasible);
    }

    testing::Gen gen(2);
    for (int t = 0; t < 100; ++t) {
        const PowerBudget b{gen.uniform(100, 900), gen.uniform(0, 100)};
        const UplinkStats s{gen.uniform(0, 1), gen.log_uniform(1e-9, 1e-3)};
        const double g = af_gain(b, s);
        CHECK(g * g * (s.amplitude * s.amplitude + s.noise_variance) == doctest::Approx(b.net()).epsilon(1e-14));
    }
}

TEST_CASE("amplify-and-forward conditional rate") {
    const OpticalLink link;
    const PowerBudget b{600, 100};
    const UplinkStats s{2e-2, 1e-5};
    CHECK(af_conditional_capacity(0.0, link, b, s) == 0.0);

    const double g = af_gain(b, s);
    const UplinkStats quiet{2e-2, 1e-30};
    const double gq = af_gain(b, quiet);
    const double h = 3e-5;
    const double q = link.photo_eff * h * gq;
    CHECK(af_conditional_capacity(h, link, b, quiet) ==
          doctest::Approx(std::log1p(q * q * 4e-4 / link.noise_power)).epsilon(1e-12));

    const double ceiling = std::log1p(4e-4 / 1e-5);
    CHECK(af_conditional_capacity(1e12 * 1e-4, link, b, s) == doctest::Approx(ceiling).epsilon(1e-9));
    double prev = 0.0;
    for (double x = 1e-8; x < 1; x *= 2) {
        const double c = af_conditional_capacity(x, link, b, s);
        CHECK(c >= prev);
        prev = c;
    }
    CHECK(g > 0.0);
}

TEST_CASE("asymptotic case 1 value") {
    CHECK(af_asymptotic1_value(1.0) == doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-15));
    CHECK(af_asymptotic1_value(1.0) == doctest::Approx(0.3863).epsilon(1e-4));
    CHECK(af_asymptotic1_value(std::numbers::e - 1.0) == doctest::Approx(1.0 / (std::numbers::e - 1.0)));
    CHECK(af_asymptotic1_value(1e-12) < 1e-12);
    CHECK(af_asymptotic1_value(1e-4 * (1 - 1e-12)) == doctest::Approx(af_asymptotic1_value(1e-4)).epsilon(1e-9));
    CHECK_THROWS_AS(af_asymptotic1_value(0.0), Error);
    CHECK_THROWS_AS(af_asymptotic1_value(-1.0), Error);
    double prev = 0.0;
    for (double t = 1e-9; t < 1e9; t *= 1.1) {
        const double v = af_asymptotic1_value(t);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("asymptotic case 1 against the averaged rate") {
    System sys = testing::reference_system();
    sys.link.pointing.jitter = sys.link.pointing.beamwidth / std::sqrt(2.0);
    sys.sensors.noise_power = 1e-16;  // aggregate amplitude dominates the relayed noise
    sys.link.noise_power = 1e-6;
    for (const UavPosition pos : {UavPosition{1000, 1000, 1200}, UavPosition{300, 500, 700}}) {
        const double closed = af_asymptotic1_closed_form(pos, sys);
        const double avg = af_average_capacity(pos, sys).value;
        CHECK(testing::rel_diff(closed, avg) < 1e-3);
    }
    sys.link.pointing.jitter = sys.link.pointing.beamwidth;
    CHECK_THROWS_AS(af_asymptotic1_closed_form({1000, 1000, 1200}, sys), Error);
}

TEST_CASE("asymptotic case 3 in the noisy ground-station regime") {
    System sys = testing::reference_system();
    const UavPosition pos{1000, 1000, 1200};
    CHECK(af_asymptotic3(0.0, pos, sys) == 0.0);
    sys.link.noise_power = 1e-4;
    const LinkState st = link_state(pos, sys);
    for (double f : {0.1, 0.5, 1.0}) {
        const double h = f * st.optical_peak();
        const double exact = af_conditional_capacity(h, sys.link, st.budget, st.uplink);
        CHECK(testing::rel_diff(af_asymptotic3(h, pos, sys), exact) < 1e-2);
    }
    System far = sys;
    // Vanishing aggregate amplitude: the rate goes to zero with it, as S_X^2 for a weak field.
    far.sensors.sensors = {{1e7, 1e7, 1.0}};
    const double near_zero = af_asymptotic3(1e-5, pos, far);
    far.sensors.sensors = {{2e7, 2e7, 1.0}};
    CHECK(af_asymptotic3(1e-5, pos, far) == doctest::Approx(near_zero / 4.0).epsilon(1e-6));
    CHECK(near_zero < 1e-12);
}

TEST_CASE("amplify-and-forward average") {
    System sys = testing::reference_system();
    const UavPosition pos{1000, 1000, 1200};
    const LinkState st = link_state(pos, sys);
    const auto r = af_average_capacity(pos, sys);
    const double oracle = average_in_gain(
        sys, pos, [&](double h) { return af_conditional_capacity(h, sys.link, st.budget, st.uplink); });
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(r.error_estimate >= 0.0);
    CHECK(r.evaluations > 0);
    CHECK(r.method == CapacityMethod::quadrature);

    // Vanishing jitter collapses the fading onto the boresight gain.
    sys.link.pointing.jitter = 1e-7;
    const LinkState tight = link_state(pos, sys);
    CHECK(af_average_capacity(pos, sys).value ==
          doctest::Approx(af_conditional_capacity(tight.optical_peak(), sys.link, tight.budget, tight.uplink))
              .epsilon(1e-6));
}

TEST_CASE("decode-and-forward conditional rate") {
    System sys = testing::reference_system();
    sys.relay.scheme = RelayScheme::decode_forward;
    const UavPosition pos{900, 1100, 1500};
    const LinkState st = link_state(pos, sys);
    CHECK(df_conditional_capacity(0.0, pos, sys) == 0.0);
    CHECK(df_conditional_capacity(1.0, pos, sys) == doctest::Approx(st.sum_rate));
    for (double f = 1e-4; f < 10; f *= 1.7) {
        const double h = f * st.optical_peak();
        const double c = df_conditional_capacity(h, pos, sys);
        CHECK(c <= st.sum_rate);
        CHECK(c <= df_backhaul_capacity(h, st.budget.net(), sys.link));
    }
    const double amp = st.budget.net() * 2e-5 * sys.link.photo_eff;
    CHECK(df_backhaul_capacity(2e-5, st.budget.net(), sys.link) ==
          doctest::Approx(std::log1p(amp * amp / sys.link.noise_power)));

    const DfThresholds th = df_thresholds(st, sys.link);
    CHECK(df_backhaul_capacity(th.low, st.budget.net(), sys.link) == doctest::Approx(std::log(2.0)));
    CHECK(df_backhaul_capacity(th.balance, st.budget.net(), sys.link) == doctest::Approx(st.sum_rate).epsilon(1e-12));
}

TEST_CASE("decode-and-forward average and its limits") {
    System sys = testing::reference_system();
    const UavPosition pos{1000, 1000, 1200};
    const LinkState st = link_state(pos, sys);
    const double oracle = average_in_gain(sys, pos, [&](double h) {
        return std::min(df_backhaul_capacity(h, st.budget.net(), sys.link), st.sum_rate);
    });
    CHECK(df_average_capacity(pos, sys).value == doctest::Approx(oracle).epsilon(1e-8));

    sys.link.noise_power = 1e-30;
    CHECK(df_average_capacity(pos, sys).value == doctest::Approx(st.sum_rate).epsilon(1e-12));

    sys.link.noise_power = 1e-2;
    const double backhaul_only =
        average_in_gain(sys, pos, [&](double h) { return df_backhaul_capacity(h, st.budget.net(), sys.link); });
    CHECK(df_average_capacity(pos, sys).value == doctest::Approx(backhaul_only).epsilon(1e-9));
}

TEST_CASE("decode-and-forward closed form") {
    System sys = testing::reference_system();
    sys.relay.scheme = RelayScheme::decode_forward;
    const UavPosition pos{1000, 1000, 1200};
    const double quad = df_average_capacity(pos, sys).value;
    CHECK(testing::rel_diff(df_closed_form(pos, sys, 100.0), quad) < 0.05);

    // Peak gain below the unit-SNR threshold: only the linear term survives, which is the
    // average of the linearised backhaul rate.
    sys.link.noise_power = 1e-2;
    const LinkState st = link_state(pos, sys);
    REQUIRE(df_thresholds(st, sys.link).low > st.optical_peak());
    const double c = std::pow(st.budget.net() * sys.link.photo_eff, 2.0) / sys.link.noise_power;
    const double linearised = average_in_gain(sys, pos, [&](double h) { return c * h * h; });
    CHECK(df_closed_form(pos, sys, 100.0) == doctest::Approx(linearised).epsilon(1e-12));

    sys.link.noise_power = 1e-30;
    CHECK(std::abs(df_closed_form(pos, sys, 100.0) - st.sum_rate) < 1e-3);
    CHECK_THROWS_AS(df_closed_form(pos, sys, 5.0), Error);
}

TEST_CASE("averages are non-negative and non-increasing in ground-station noise") {
    testing::Gen gen(31);
    for (int t = 0; t < 15; ++t) {
        System sys = random_system(gen);
        const UavPosition pos = random_position(gen);
        if (power_budget(pos.z, sys.platform, sys.atmosphere).net() < 0.0) continue;
        double prev_af = INFINITY, prev_df = INFINITY;
        for (double n2 = 1e-16; n2 < 1e-2; n2 *= 100.0) {
            sys.link.noise_power = n2;
            const double af = af_average_capacity(pos, sys).value;
            const double df = df_average_capacity(pos, sys).value;
            CHECK(af >= 0.0);
            CHECK(df >= 0.0);
            CHECK(af <= prev_af * (1 + 1e-9));
            CHECK(df <= prev_df * (1 + 1e-9));
            prev_af = af;
            prev_df = df;
        }
    }
}

TEST_CASE("composite fading average") {
    System sys = testing::reference_system();
    sys.link.fading = FadingMode::composite;
    const UavPosition pos{1000, 1000, 1200};
    const LinkState st = link_state(pos, sys);
    const CompositeChannel ch(pos, sys.atmosphere, sys.link.pointing, *sys.link.scintillation);
    const double top = st.optical_peak() * scintillation_inverse_cdf(1.0 - 1e-12, *sys.link.scintillation);
    auto rate = [&](double h) { return af_conditional_capacity(h, sys.link, st.budget, st.uplink); };
    const double oracle =
        integrate([&](double h) { return rate(h) * ch.pdf(h); }, 0.0, top, {1e-7, 0.0, 10000}).value;
    const auto r = af_average_capacity(pos, sys);
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(r.error_estimate > 0.0);
}

}
