#include "chaoslab/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chaoslab/integrate.hpp"

namespace chaoslab {

void SweepConfig::validate() const {
    if (n_points < 2) throw std::invalid_argument("sweep: n_points must be >= 2");
    if (!(transient < t_end)) throw std::invalid_argument("sweep: need transient < t_end");
    if (!(step > 0.0)) throw std::invalid_argument("sweep: need step > 0");
}

std::vector<double> SweepConfig::grid() const {
    std::vector<double> g(static_cast<std::size_t>(n_points));
    const double span = a8_end - a8_start;
    for (int i = 0; i < n_points; ++i)
        g[static_cast<std::size_t>(i)] = a8_start + span * i / (n_points - 1);
    if (direction == Direction::backward) std::reverse(g.begin(), g.end());
    return g;
}

BifurcationData bifurcation_scan(const Params& p, const SweepConfig& cfg) {
    cfg.validate();

    IntegratorConfig integ;
    integ.mode = IntegratorConfig::Mode::fixed;
    integ.step = cfg.step;
    integ.max_step = cfg.step;
    integ.t_end = cfg.t_end;
    integ.transient = cfg.transient;
    integ.escape_radius = cfg.escape_radius;

    BifurcationData data;
    data.points.reserve(static_cast<std::size_t>(cfg.n_points));

    State3 carry = cfg.initial;
    bool reset_pending = cfg.sign_reset != SweepConfig::SignReset::none;

    for (double a8 : cfg.grid()) {
        State3 s0 = (cfg.ic_policy == SweepConfig::IcPolicy::fixed) ? cfg.initial : carry;
        if (reset_pending && a8 > 0.0) {
            // Entering the bistable range: restart from the configured seed
            // with the requested x sign. A carried state caught mid-burst
            // does not reliably select the branch, the seed does.
            s0 = cfg.initial;
            s0[0] = (cfg.sign_reset == SweepConfig::SignReset::to_negative) ? -std::fabs(s0[0])
                                                                            : std::fabs(s0[0]);
            reset_pending = false;
        }

        const Params q = p.with_a8(a8);
        const Trajectory<3> traj =
            integrate([&q](const State3& s) { return vector_field(q, s); }, s0, integ);

        BifurcationPoint point;
        point.a8 = a8;
        point.escaped = traj.terminal == Terminal::escaped;
        if (!point.escaped) {
            for (const auto& [t, v] : local_maxima(traj, 0)) {
                (void)t;
                point.x_maxima.push_back(v);
            }
        }
        if (cfg.ic_policy == SweepConfig::IcPolicy::continued) {
            // An escaped point cannot seed its neighbor; restart the
            // continuation from the configured initial state.
            carry = (point.escaped || traj.empty()) ? cfg.initial : traj.back();
        }
        data.points.push_back(std::move(point));
    }
    return data;
}

std::vector<ChaosMaskPoint> chaos_mask(const Params& p, std::span<const double> a8_grid,
                                       const State3& s0, const LyapunovOptions& opt) {
    std::vector<ChaosMaskPoint> out;
    out.reserve(a8_grid.size());
    for (double a8 : a8_grid) {
        const Params q = p.with_a8(a8);
        const LyapunovRun run = lyapunov_spectrum(q, s0, opt.step, opt.iterations, opt);
        ChaosMaskPoint m;
        m.a8 = a8;
        m.escaped = run.status == LyapunovStatus::escaped;
        m.L1 = run.exponents[0];
        m.chaotic = !m.escaped && run.exponents[0] > kChaosThreshold;
        out.push_back(m);
    }
    return out;
}

} // namespace chaoslab
