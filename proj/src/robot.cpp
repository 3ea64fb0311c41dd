#include "chaoslab/robot.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chaoslab {

void RobotConfig::validate() const {
    if (!(wheel_separation > 0.0)) throw std::invalid_argument("robot: wheel separation must be > 0");
    if (!(wheel_radius > 0.0)) throw std::invalid_argument("robot: wheel radius must be > 0");
    if (!(x_max >= 0.0)) throw std::invalid_argument("robot: x_max must be >= 0");
    if (!(ws_x_min < ws_x_max) || !(ws_y_min < ws_y_max))
        throw std::invalid_argument("robot: degenerate workspace");
    if (cells_x < 1 || cells_y < 1) throw std::invalid_argument("robot: empty coverage grid");
    if (!(step > 0.0)) throw std::invalid_argument("robot: step must be > 0");
}

DriveInputs drive_inputs(double x, double y, const RobotConfig& cfg) {
    return drive_signals(x, y, cfg.wheel_separation, cfg.x_max);
}

WheelSpeeds wheel_speeds(double v, double mu, const RobotConfig& cfg) {
    const double d = cfg.wheel_separation, R = cfg.wheel_radius;
    return {(2.0 * v - d * mu) / (2.0 * R), (2.0 * v + d * mu) / (2.0 * R)};
}

DriveInputs drive_from_wheels(const WheelSpeeds& w, const RobotConfig& cfg) {
    const double d = cfg.wheel_separation, R = cfg.wheel_radius;
    return {R * (w.left + w.right) / 2.0, R * (w.right - w.left) / d};
}

double calibrate_x_max(const Params& p, const State3& s0) {
    IntegratorConfig cfg;
    cfg.mode = IntegratorConfig::Mode::fixed;
    cfg.step = 0.01;
    cfg.max_step = 0.01;
    cfg.t_end = 1050.0;
    cfg.transient = 50.0;
    const Trajectory<3> traj =
        integrate([&p](const State3& s) { return vector_field(p, s); }, s0, cfg);
    if (traj.terminal == Terminal::escaped || traj.empty())
        throw std::runtime_error("calibrate_x_max: reference trajectory escaped");
    double peak = 0.0;
    for (const State3& s : traj.states) peak = std::max(peak, std::fabs(s[0]));
    return peak;
}

namespace {

struct CoverageTracker {
    const RobotConfig& cfg;
    std::vector<std::uint8_t> visited;
    std::size_t hit = 0;

    explicit CoverageTracker(const RobotConfig& c)
        : cfg(c), visited(static_cast<std::size_t>(c.cells_x) * c.cells_y, 0) {}

    void mark(double X, double Y) {
        int ix = static_cast<int>(std::floor((X - cfg.ws_x_min) / (cfg.ws_x_max - cfg.ws_x_min) *
                                             cfg.cells_x));
        int iy = static_cast<int>(std::floor((Y - cfg.ws_y_min) / (cfg.ws_y_max - cfg.ws_y_min) *
                                             cfg.cells_y));
        ix = std::clamp(ix, 0, cfg.cells_x - 1);
        iy = std::clamp(iy, 0, cfg.cells_y - 1);
        std::uint8_t& cell = visited[static_cast<std::size_t>(iy) * cfg.cells_x + ix];
        if (!cell) {
            cell = 1;
            ++hit;
        }
    }

    double fraction() const {
        return static_cast<double>(hit) / static_cast<double>(visited.size());
    }
};

} // namespace

CoverageReport coverage(std::span<const double> times, std::span<const State6> states,
                        const RobotConfig& cfg) {
    cfg.validate();
    if (times.size() != states.size()) throw std::invalid_argument("coverage: size mismatch");

    CoverageTracker tracker(cfg);
    CoverageReport report;
    report.cells_x = cfg.cells_x;
    report.cells_y = cfg.cells_y;

    constexpr double cadence = 0.5;
    double next_record = -1.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        tracker.mark(states[i][3], states[i][4]);
        if (times[i] >= next_record) {
            report.fraction_series.emplace_back(times[i], tracker.fraction());
            next_record = times[i] + cadence;
        }
    }
    if (!times.empty() &&
        (report.fraction_series.empty() || report.fraction_series.back().first != times.back()))
        report.fraction_series.emplace_back(times.back(), tracker.fraction());
    report.visited = std::move(tracker.visited);
    report.final_fraction = states.empty() ? 0.0 : report.fraction_series.back().second;
    return report;
}

std::string CoverageReport::mask_text() const {
    std::string out;
    for (int iy = cells_y - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < cells_x; ++ix) {
            if (ix) out += ' ';
            out += visited[static_cast<std::size_t>(iy) * cells_x + ix] ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

NavigationResult simulate_navigation(const Params& p, const RobotConfig& cfg_in, const State6& s0,
                                     double t_end, double step) {
    RobotConfig cfg = cfg_in;
    if (step > 0.0) cfg.step = step;
    cfg.validate();
    if (cfg.x_max == 0.0) cfg.x_max = calibrate_x_max(p);
    if (!(t_end > 0.0)) throw std::invalid_argument("simulate_navigation: t_end must be > 0");
    if (cfg.boundary == RobotConfig::BoundaryRule::no_motion &&
        (s0[3] < cfg.ws_x_min || s0[3] > cfg.ws_x_max || s0[4] < cfg.ws_y_min ||
         s0[4] > cfg.ws_y_max))
        throw std::invalid_argument("simulate_navigation: start position outside the workspace");

    auto field = [&](const State6& s) { return robot_field(p, cfg.wheel_separation, cfg.x_max, s); };

    NavigationResult result;
    result.x_max_used = cfg.x_max;
    Trajectory<6>& traj = result.trajectory;

    const auto record = [&](double t, const State6& s) {
        traj.times.push_back(t);
        traj.states.push_back(s);
        const DriveInputs u = drive_inputs(s[0], s[1], cfg);
        result.v.push_back(u.v);
        result.mu.push_back(u.mu);
    };

    State6 s = s0;
    record(0.0, s);

    // Step bookkeeping mirrors the fixed-mode integrator exactly so the
    // chaotic substate stays bit-identical to a standalone 3-D run.
    const double h = cfg.step;
    const long n_full = static_cast<long>(std::floor(t_end / h + 1e-9));
    double t = 0.0;
    auto advance = [&](double t_next, double hi) -> bool {
        State6 next = rk4_step(field, s, hi);
        if (cfg.boundary == RobotConfig::BoundaryRule::no_motion &&
            (next[3] < cfg.ws_x_min || next[3] > cfg.ws_x_max || next[4] < cfg.ws_y_min ||
             next[4] > cfg.ws_y_max)) {
            // Suppressing v zeroes exactly the translation components; the
            // chaotic states and the heading evolve as in the full step.
            next[3] = s[3];
            next[4] = s[4];
        }
        if (!detail::finite(next)) {
            traj.terminal = Terminal::escaped;
            traj.terminal_time = t_next;
            traj.terminal_state = next;
            return false;
        }
        s = next;
        t = t_next;
        record(t_next, s);
        return true;
    };
    for (long i = 1; i <= n_full; ++i)
        if (!advance(static_cast<double>(i) * h, h)) break;
    if (traj.terminal != Terminal::escaped && t < t_end - 1e-12 * t_end)
        advance(t_end, t_end - t);

    result.coverage = coverage(traj.times, traj.states, cfg);
    return result;
}

} // namespace chaoslab
