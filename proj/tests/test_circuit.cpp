#include <doctest.h>

#include <cmath>

#include "chaoslab/circuit.hpp"
#include "chaoslab/parallel.hpp"

using namespace chaoslab;

TEST_CASE("synthesis reproduces the reference resistor table") {
    const auto cr = synthesize(Params::defaults());
    CHECK(cr.R == doctest::Approx(1e6).epsilon(1e-12)); // kappa = 1000, C = 1 nF
    CHECK(cr.kappa == 1000.0);

    const double expected_k[8] = {1000.0, 100.0, 130.0, 500.0, 33.0, 166.0, 33.0, 400.0};
    for (int i = 0; i < 8; ++i) CHECK(cr.R_rounded[i] == expected_k[i] * 1e3);
    CHECK(cr.invert_square_unit); // a8 < 0 inverts the squaring unit

    CHECK(cr.R_ideal[2] == doctest::Approx(130434.7826).epsilon(1e-8));
    CHECK(cr.R_ideal[4] == doctest::Approx(1e6 / 30.0).epsilon(1e-12));
    CHECK(cr.R_ideal[7] == doctest::Approx(400e3).epsilon(1e-12));

    const auto hi = synthesize(Params::defaults().with_a8(1.2));
    CHECK(hi.R_rounded[7] == 83e3);
    CHECK(hi.R_ideal[7] == doctest::Approx(1e6 / 12.0).epsilon(1e-12));
    CHECK(!hi.invert_square_unit);
    for (int i = 0; i < 7; ++i) CHECK(hi.R_rounded[i] == expected_k[i] * 1e3);
}

TEST_CASE("realized parameters and per-coefficient errors") {
    const auto cr = synthesize(Params::defaults());
    CHECK(cr.realized.a6 == doctest::Approx(6.024096).epsilon(1e-6));
    CHECK(cr.rel_error[5] == doctest::Approx(0.004016).epsilon(1e-3));
    CHECK(cr.realized.a3 == doctest::Approx(2.307692).epsilon(1e-6));
    CHECK(cr.rel_error[2] == doctest::Approx(0.003344).epsilon(1e-3));
    CHECK(std::fabs(cr.realized.a8 - (-0.25)) < 1e-9);

    // floor to 1 kOhm leaves the 33.33 kOhm positions 1.01% off
    CHECK(cr.realized.a5 == doctest::Approx(1.010101).epsilon(1e-6));
    CHECK(cr.rel_error[4] == doctest::Approx(0.010101).epsilon(1e-4));

    // the unrounded realization is an exact inverse
    const auto ideal = synthesize(Params::defaults(), {}, 1e-9, RoundingPolicy::none);
    const Params back = ideal.realized;
    const Params want = Params::defaults();
    CHECK(back.a1 == want.a1);
    CHECK(back.a2 == want.a2);
    CHECK(back.a3 == doctest::Approx(want.a3).epsilon(1e-15));
    CHECK(back.a4 == want.a4);
    CHECK(back.a5 == doctest::Approx(want.a5).epsilon(1e-15));
    CHECK(back.a6 == want.a6);
    CHECK(back.a7 == doctest::Approx(want.a7).epsilon(1e-15));
    CHECK(back.a8 == doctest::Approx(want.a8).epsilon(1e-15));
    for (int i = 0; i < 8; ++i) CHECK(ideal.rel_error[i] < 1e-15);
}

TEST_CASE("rounding policies") {
    CHECK(round_resistance(33333.3, RoundingPolicy::floor_1k) == 33000.0);
    CHECK(round_resistance(166666.7, RoundingPolicy::floor_1k) == 166000.0);
    CHECK(round_resistance(83333.3, RoundingPolicy::floor_1k) == 83000.0);
    CHECK(round_resistance(33333.3, RoundingPolicy::none) == 33333.3);

    CHECK(round_resistance(33333.3, RoundingPolicy::e24) == doctest::Approx(33000.0));
    CHECK(round_resistance(166666.7, RoundingPolicy::e24) == doctest::Approx(160000.0));
    CHECK(round_resistance(33333.3, RoundingPolicy::e96) == doctest::Approx(33200.0));
    CHECK(round_resistance(130434.8, RoundingPolicy::e96) == doctest::Approx(130000.0));
    CHECK(round_resistance(98000.0, RoundingPolicy::e24) == doctest::Approx(100000.0));
}

TEST_CASE("ideal circuit field coincides with the scaled field") {
    const Params p = Params::defaults();
    const auto cr = synthesize(p, {}, 1e-9, RoundingPolicy::none);
    SplitMix64 rng(8);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const State3 w{6.0 * rng.uniform() - 3.0, 6.0 * rng.uniform() - 3.0,
                       6.0 * rng.uniform() - 3.0};
        const State3 a = circuit_field(cr, w);
        const State3 b = scaled_field(p, {}, w);
        for (int c = 0; c < 3; ++c) worst = std::max(worst, std::fabs(a[c] - b[c]));
    }
    CHECK(worst < 1e-12);

    const State3 zero = circuit_field(cr, {0.0, 0.0, 0.0});
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);
    CHECK(zero[2] == 0.0);

    // rounded resistances stay within the worst coefficient error
    const auto rounded = synthesize(p);
    SplitMix64 rng2(9);
    for (int i = 0; i < 50; ++i) {
        const State3 w{4.0 * rng2.uniform() - 2.0, 4.0 * rng2.uniform() - 2.0,
                       4.0 * rng2.uniform() - 2.0};
        const State3 a = circuit_field(rounded, w);
        const State3 b = scaled_field(p, {}, w);
        for (int c = 0; c < 3; ++c) {
            const double scale = std::fabs(b[c]) + 1.0;
            CHECK(std::fabs(a[c] - b[c]) / scale < 0.05);
        }
    }
}

TEST_CASE("synthesis rejects unrealizable coefficients") {
    Params p = Params::defaults();
    p.a1 = 0.0;
    CHECK_THROWS_WITH_AS(synthesize(p), doctest::Contains("a1"), std::invalid_argument);
    p = Params::defaults();
    p.a6 = -6.0;
    CHECK_THROWS_WITH_AS(synthesize(p), doctest::Contains("a6"), std::invalid_argument);
    p = Params::defaults().with_a8(0.0);
    CHECK_THROWS_WITH_AS(synthesize(p), doctest::Contains("a8"), std::invalid_argument);
}

TEST_CASE("dynamic range reporting") {
    const Params p = Params::defaults();

    // degenerate start at the origin equilibrium: all channels flat
    const auto flat = dynamic_range(p, {}, 10.0, {0.0, 0.0, 0.0}, 30.0, 1.0);
    CHECK(flat.pass);
    CHECK(flat.max_abs[0] == 0.0);
    CHECK(flat.max_abs[1] == 0.0);
    CHECK(flat.max_abs[2] == 0.0);

    // scaled amplitude tracks the reference amplitude divided by s1
    IntegratorConfig ref;
    ref.mode = IntegratorConfig::Mode::fixed;
    ref.step = 0.005;
    ref.max_step = 0.005;
    ref.t_end = 300.0;
    ref.transient = 50.0;
    const auto raw = integrate([&p](const State3& s) { return vector_field(p, s); },
                               State3{1.0, -1.0, 0.0}, ref);
    double x_peak = 0.0;
    for (const auto& s : raw.states) x_peak = std::max(x_peak, std::fabs(s[0]));

    const auto report = dynamic_range(p, {}, 1e9, {1.0 / 3.0, -1.0, 0.0}, 300.0, 50.0);
    CHECK(report.run_status == Terminal::completed);
    CHECK(report.max_abs[0] == doctest::Approx(x_peak / 3.0).epsilon(0.35));
    CHECK(report.pass); // astronomically high rail always passes

    // an attractor of order unity fails a 0.1 V rail
    const auto low = dynamic_range(p, ScaleSpec::identity(), 0.1, {1.0, -1.0, 0.0}, 120.0, 20.0);
    CHECK(!low.pass);

    // pass flag is consistent with the recorded maxima
    const auto mid = dynamic_range(p, {}, 10.0, {1.0 / 3.0, -1.0, 0.0}, 300.0, 50.0);
    const bool expect =
        mid.max_abs[0] < 10.0 && mid.max_abs[1] < 10.0 && mid.max_abs[2] < 10.0;
    CHECK(mid.pass == expect);
}

TEST_CASE("bistability survives the rounded realization") {
    const Params p = Params::defaults().with_a8(1.2);
    const auto cr = synthesize(p);
    IntegratorConfig cfg;
    cfg.t_end = 200.0;
    cfg.transient = 20.0;
    for (double sign : {1.0, -1.0}) {
        const State3 w0{sign / 3.0, -1.0, 0.0};
        const auto traj = integrate([&cr](const State3& w) { return circuit_field(cr, w); }, w0, cfg);
        REQUIRE(traj.terminal == Terminal::completed);
        for (const auto& w : traj.states) CHECK(sign * w[0] > 0.0);
    }
}

TEST_CASE("bill of materials lists every component") {
    const auto cr = synthesize(Params::defaults());
    const std::string bom = bill_of_materials(cr);
    CHECK(bom.find("R1") != std::string::npos);
    CHECK(bom.find("R8") != std::string::npos);
    CHECK(bom.find("400000") != std::string::npos);
    CHECK(bom.find("invert") != std::string::npos);
    const auto hi = synthesize(Params::defaults().with_a8(1.2));
    CHECK(bill_of_materials(hi).find("invert") == std::string::npos);
}
