#include <doctest.h>

#include <cmath>

#include "chaoslab/robot.hpp"

using namespace chaoslab;

TEST_CASE("drive inputs and wheel speeds") {
    RobotConfig cfg;
    cfg.x_max = 3.0;

    const auto rest = drive_inputs(0.0, 0.0, cfg);
    CHECK(rest.v == 0.0);
    CHECK(rest.mu == 0.0);

    const auto ahead = drive_inputs(0.5, 0.5, cfg);
    CHECK(ahead.v == doctest::Approx(0.5));
    CHECK(ahead.mu == doctest::Approx(0.0));

    const auto wrap = drive_inputs(1.0, 2.0, cfg);
    CHECK(wrap.v == doctest::Approx(0.0));
    CHECK(wrap.mu == doctest::Approx(-12.5));

    const auto straight = wheel_speeds(1.0, 0.0, cfg);
    CHECK(straight.left == doctest::Approx(1.0));
    CHECK(straight.right == doctest::Approx(1.0));

    const auto spin = wheel_speeds(0.0, 25.0, cfg);
    CHECK(spin.right == doctest::Approx(1.0));
    CHECK(spin.left == doctest::Approx(-1.0));

    // wheel mapping is the exact inverse of the drive relations
    for (double v : {0.0, 0.7, 2.3})
        for (double mu : {-40.0, 0.0, 12.5}) {
            const auto w = wheel_speeds(v, mu, cfg);
            const auto back = drive_from_wheels(w, cfg);
            CHECK(std::fabs(back.v - v) <= 1e-14);
            CHECK(std::fabs(back.mu - mu) <= 1e-13);
        }
}

TEST_CASE("config validation") {
    RobotConfig cfg;
    cfg.wheel_separation = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.ws_x_min = 10.0;
    cfg.ws_x_max = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.cells_x = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("coverage of synthetic paths") {
    RobotConfig cfg;
    cfg.x_max = 1.0;

    // stationary robot: only the starting cell
    {
        std::vector<double> times;
        std::vector<State6> states;
        for (int i = 0; i < 50; ++i) {
            times.push_back(0.1 * i);
            states.push_back({0, 0, 0, 2.5, 7.5, 0});
        }
        const auto rep = coverage(times, states, cfg);
        CHECK(rep.final_fraction == doctest::Approx(0.01));
    }

    // boustrophedon sweep through every cell center
    {
        std::vector<double> times;
        std::vector<State6> states;
        double t = 0.0;
        for (int iy = 0; iy < 10; ++iy)
            for (int ix = 0; ix < 10; ++ix) {
                const int col = (iy % 2 == 0) ? ix : 9 - ix;
                times.push_back(t += 0.1);
                states.push_back({0, 0, 0, 0.5 + col, 0.5 + iy, 0});
            }
        const auto rep = coverage(times, states, cfg);
        CHECK(rep.final_fraction == doctest::Approx(1.0));
        for (std::size_t i = 1; i < rep.fraction_series.size(); ++i)
            CHECK(rep.fraction_series[i].second >= rep.fraction_series[i - 1].second);
        // mask text: 10 rows of ones
        const std::string mask = rep.mask_text();
        CHECK(mask.find('0') == std::string::npos);
    }
}

TEST_CASE("x_max calibration and navigation basics") {
    const Params p = Params::defaults();
    const double xmax = calibrate_x_max(p);
    CHECK(xmax > 5.0);
    CHECK(xmax < 60.0);

    RobotConfig cfg;
    cfg.x_max = xmax;
    const auto nav = simulate_navigation(p, cfg, {0.1, -0.1, 0.0, 0.0, 0.0, 0.0}, 60.0);
    REQUIRE(nav.trajectory.terminal == Terminal::completed);
    CHECK(nav.x_max_used == xmax);
    REQUIRE(nav.trajectory.size() == nav.v.size());

    // commanded speed respects the wrap bound
    for (double v : nav.v) {
        CHECK(v >= 0.0);
        CHECK(v < xmax / 2.0);
    }

    // coverage series is nondecreasing
    const auto& series = nav.coverage.fraction_series;
    REQUIRE(!series.empty());
    for (std::size_t i = 1; i < series.size(); ++i)
        CHECK(series[i].second >= series[i - 1].second);
    CHECK(nav.coverage.final_fraction > 0.01);
}

TEST_CASE("no-motion boundary keeps every sample inside the workspace") {
    const Params p = Params::defaults();
    RobotConfig cfg;
    const auto nav = simulate_navigation(p, cfg, {0.1, -0.1, 0.0, 0.2, 0.2, 2.5}, 120.0);
    for (const auto& s : nav.trajectory.states) {
        CHECK(s[3] >= cfg.ws_x_min);
        CHECK(s[3] <= cfg.ws_x_max);
        CHECK(s[4] >= cfg.ws_y_min);
        CHECK(s[4] <= cfg.ws_y_max);
    }

    // without the rule the same run leaves the box
    RobotConfig open = cfg;
    open.boundary = RobotConfig::BoundaryRule::none;
    const auto free_run = simulate_navigation(p, open, {0.1, -0.1, 0.0, 0.2, 0.2, 2.5}, 120.0);
    bool left = false;
    for (const auto& s : free_run.trajectory.states)
        left |= s[3] < cfg.ws_x_min || s[3] > cfg.ws_x_max || s[4] < cfg.ws_y_min ||
                s[4] > cfg.ws_y_max;
    CHECK(left);

    // starting outside the workspace is rejected under the rule
    CHECK_THROWS_AS(simulate_navigation(p, cfg, {0.1, -0.1, 0.0, -1.0, 0.0, 0.0}, 10.0),
                    std::invalid_argument);
}

TEST_CASE("heading constraint holds along the trajectory") {
    const Params p = Params::defaults();
    RobotConfig cfg;
    const auto nav = simulate_navigation(p, cfg, {0.1, -0.1, 0.0, 5.0, 5.0, 0.0}, 50.0);
    for (const auto& s : nav.trajectory.states) {
        const State6 rate = robot_field(p, cfg.wheel_separation, nav.x_max_used, s);
        const double residual = rate[3] * std::sin(s[5]) - rate[4] * std::cos(s[5]);
        CHECK(std::fabs(residual) < 1e-12);
    }
}

TEST_CASE("chaotic substate is bit-identical to the standalone integration") {
    const Params p = Params::defaults();
    RobotConfig cfg;
    cfg.x_max = 4.0;
    const double t_end = 40.0;
    const auto nav = simulate_navigation(p, cfg, {0.1, -0.1, 0.0, 5.0, 5.0, 0.0}, t_end);

    IntegratorConfig ic;
    ic.mode = IntegratorConfig::Mode::fixed;
    ic.step = cfg.step;
    ic.max_step = cfg.step;
    ic.t_end = t_end;
    const auto alone = integrate([&p](const State3& s) { return vector_field(p, s); },
                                 State3{0.1, -0.1, 0.0}, ic);

    REQUIRE(nav.trajectory.size() == alone.size());
    for (std::size_t i = 0; i < alone.size(); ++i)
        for (int c = 0; c < 3; ++c) CHECK(nav.trajectory.states[i][c] == alone.states[i][c]);
}

TEST_CASE("start-position offsets deform only through wall contact") {
    // The drive signals ignore (X, Y), so two runs offset in position are
    // rigid translates of each other until the no-motion rule fires on one
    // of them; afterwards the offset wanders but stays bounded.
    const Params p = Params::defaults();
    RobotConfig cfg;
    const auto a = simulate_navigation(p, cfg, {0.1, -0.1, 0.0, 0.0, 0.0, 0.0}, 400.0);
    const auto b = simulate_navigation(p, cfg, {0.1, -0.1, 0.0, 0.1, 0.0, 0.0}, 400.0);
    REQUIRE(a.trajectory.size() == b.trajectory.size());
    double max_sep = 0.0, min_sep = 1e30;
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
        const double dx = a.trajectory.states[i][3] - b.trajectory.states[i][3];
        const double dy = a.trajectory.states[i][4] - b.trajectory.states[i][4];
        const double d = std::sqrt(dx * dx + dy * dy);
        max_sep = std::max(max_sep, d);
        min_sep = std::min(min_sep, d);
    }
    CHECK(max_sep > 0.11); // boundary contact has deformed the offset
    CHECK(min_sep < 0.09);

    // without the boundary rule the offset is exactly rigid
    RobotConfig open = cfg;
    open.boundary = RobotConfig::BoundaryRule::none;
    const auto c = simulate_navigation(p, open, {0.1, -0.1, 0.0, 4.0, 4.0, 0.0}, 100.0);
    const auto d = simulate_navigation(p, open, {0.1, -0.1, 0.0, 4.1, 4.0, 0.0}, 100.0);
    for (std::size_t i = 0; i < c.trajectory.size(); ++i) {
        CHECK(std::fabs(c.trajectory.states[i][3] + 0.1 - d.trajectory.states[i][3]) < 1e-9);
        CHECK(std::fabs(c.trajectory.states[i][4] - d.trajectory.states[i][4]) < 1e-9);
    }
}
