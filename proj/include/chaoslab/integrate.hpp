#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace chaoslab {

enum class Terminal { completed, escaped, converged };

// Adaptive step size fell below 1e-14 * t_end: the right-hand side is stiff
// or singular at the current state.
struct StepUnderflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegratorConfig {
    enum class Mode { fixed, adaptive };

    Mode mode = Mode::adaptive;
    double step = 1e-3;     // fixed step, or initial step when adaptive
    double max_step = 1e-3;
    double rel_tol = 2.2204e-6;
    double abs_tol = 1e-9;
    double t_end = 500.0;
    double transient = 0.0; // samples before this time are dropped
    double escape_radius = 1e6;

    void validate() const {
        if (!(step > 0.0) || !(step <= max_step))
            throw std::invalid_argument("integrator: need 0 < step <= max_step");
        if (!(rel_tol > 0.0) || !(abs_tol >= 0.0))
            throw std::invalid_argument("integrator: need rel_tol > 0 and abs_tol >= 0");
        if (!(transient < t_end))
            throw std::invalid_argument("integrator: need transient < t_end");
        if (!(escape_radius > 0.0))
            throw std::invalid_argument("integrator: need escape_radius > 0");
    }
};

enum class EventKind { local_max, plane_crossing, proximity };
enum class CrossDirection { down = -1, both = 0, up = +1 };

struct EventSpec {
    EventKind kind = EventKind::plane_crossing;
    int coordinate = 0;                      // local_max, plane_crossing
    double level = 0.0;                      // plane_crossing
    CrossDirection direction = CrossDirection::both;
    std::vector<double> center;              // proximity
    double radius = 0.0;
    double dwell = 0.0;

    static EventSpec local_max(int coordinate) {
        EventSpec e;
        e.kind = EventKind::local_max;
        e.coordinate = coordinate;
        return e;
    }
    static EventSpec plane_crossing(int coordinate, double level,
                                    CrossDirection dir = CrossDirection::both) {
        EventSpec e;
        e.kind = EventKind::plane_crossing;
        e.coordinate = coordinate;
        e.level = level;
        e.direction = dir;
        return e;
    }
    template <std::size_t N>
    static EventSpec proximity(const std::array<double, N>& center, double radius, double dwell) {
        if (!(radius > 0.0) || !(dwell >= 0.0))
            throw std::invalid_argument("proximity event: need radius > 0 and dwell >= 0");
        EventSpec e;
        e.kind = EventKind::proximity;
        e.center.assign(center.begin(), center.end());
        e.radius = radius;
        e.dwell = dwell;
        return e;
    }
};

template <std::size_t N>
struct Event {
    double t;
    std::array<double, N> state;
    EventKind kind;
    int spec_index;
};

template <std::size_t N>
struct Trajectory {
    std::vector<double> times;
    std::vector<std::array<double, N>> states;
    std::vector<Event<N>> events;
    Terminal terminal = Terminal::completed;
    // For escaped runs the offending step is kept here, not in `states`;
    // for converged runs this is where the dwell completed.
    double terminal_time = 0.0;
    std::array<double, N> terminal_state{};
    int converged_spec = -1;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
    const std::array<double, N>& back() const { return states.back(); }
};

namespace detail {

template <std::size_t N>
inline double norm(const std::array<double, N>& s) {
    double q = 0.0;
    for (double c : s) q += c * c;
    return std::sqrt(q);
}

template <std::size_t N>
inline bool finite(const std::array<double, N>& s) {
    for (double c : s)
        if (!std::isfinite(c)) return false;
    return true;
}

// Vertex of the parabola through three (t, v) samples; falls back to the
// middle sample when the points are collinear.
inline std::pair<double, double> parabola_vertex(double t0, double v0, double t1, double v1,
                                                 double t2, double v2) {
    const double d1 = t1 - t0;
    const double d2 = t2 - t1;
    const double denom = d1 * d2 * (d1 + d2);
    if (denom == 0.0) return {t1, v1};
    const double a = (d1 * (v2 - v1) + d2 * (v0 - v1)) / denom;
    const double b = (d1 * d1 * (v2 - v1) - d2 * d2 * (v0 - v1)) / denom;
    if (a == 0.0) return {t1, v1};
    return {t1 - b / (2.0 * a), v1 - b * b / (4.0 * a)};
}

// Quadratic Lagrange interpolation of every component at time t.
template <std::size_t N>
inline std::array<double, N> quad_interp(double t, double t0, const std::array<double, N>& s0,
                                         double t1, const std::array<double, N>& s1, double t2,
                                         const std::array<double, N>& s2) {
    const double l0 = (t - t1) * (t - t2) / ((t0 - t1) * (t0 - t2));
    const double l1 = (t - t0) * (t - t2) / ((t1 - t0) * (t1 - t2));
    const double l2 = (t - t0) * (t - t1) / ((t2 - t0) * (t2 - t1));
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = l0 * s0[i] + l1 * s1[i] + l2 * s2[i];
    return out;
}

inline bool crossing_matches(double a, double b, double level, CrossDirection dir) {
    const bool up = a < level && b >= level;
    const bool down = a > level && b <= level;
    switch (dir) {
        case CrossDirection::up: return up;
        case CrossDirection::down: return down;
        case CrossDirection::both: return up || down;
    }
    return false;
}

} // namespace detail

// Classical fourth-order Runge-Kutta step for an autonomous field.
template <std::size_t N, class F>
inline std::array<double, N> rk4_step(F&& f, const std::array<double, N>& y, double h) {
    std::array<double, N> tmp, out;
    const std::array<double, N> k1 = f(y);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const std::array<double, N> k2 = f(tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const std::array<double, N> k3 = f(tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
    const std::array<double, N> k4 = f(tmp);
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// Embedded Dormand-Prince 5(4) pair with the first-same-as-last stage reused
// between accepted steps. Local error per step is bounded by
// abs_tol + rel_tol * |state| componentwise.
template <std::size_t N, class F>
class Dopri45 {
  public:
    Dopri45(F field, const IntegratorConfig& cfg)
        : f_(std::move(field)),
          rel_(cfg.rel_tol),
          abs_(cfg.abs_tol),
          hmax_(cfg.max_step),
          hmin_(1e-14 * cfg.t_end),
          h_(std::min(cfg.step, cfg.max_step)) {}

    struct StepResult {
        double t;
        std::array<double, N> y;
    };

    // Advances from (t, y) by one accepted step, possibly retrying with a
    // smaller h internally. Never steps past t_stop.
    StepResult step(double t, std::array<double, N> y, double t_stop) {
        if (!have_k1_) {
            k_[0] = f_(y);
            have_k1_ = true;
        }
        for (;;) {
            double h = std::min(h_, t_stop - t);
            if (h < hmin_) throw StepUnderflow("adaptive step underflow at t=" + std::to_string(t));
            std::array<double, N> ynew;
            const double err = attempt(y, h, ynew);
            double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            factor = std::min(5.0, std::max(0.2, factor));
            if (err <= 1.0) {
                h_ = std::min(hmax_, h * factor);
                k_[0] = k_[6]; // FSAL
                return {t + h, ynew};
            }
            h_ = h * factor;
            if (h_ < hmin_)
                throw StepUnderflow("adaptive step underflow at t=" + std::to_string(t));
        }
    }

    void reset() { have_k1_ = false; }

  private:
    // One trial step of size h; returns the scaled error norm.
    double attempt(const std::array<double, N>& y, double h, std::array<double, N>& ynew) {
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        std::array<double, N> tmp;
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k_[0][i];
        k_[1] = f_(tmp);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k_[0][i] + a32 * k_[1][i]);
        k_[2] = f_(tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a41 * k_[0][i] + a42 * k_[1][i] + a43 * k_[2][i]);
        k_[3] = f_(tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a51 * k_[0][i] + a52 * k_[1][i] + a53 * k_[2][i] + a54 * k_[3][i]);
        k_[4] = f_(tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a61 * k_[0][i] + a62 * k_[1][i] + a63 * k_[2][i] +
                                 a64 * k_[3][i] + a65 * k_[4][i]);
        k_[5] = f_(tmp);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k_[0][i] + b3 * k_[2][i] + b4 * k_[3][i] + b5 * k_[4][i] +
                                  b6 * k_[5][i]);
        k_[6] = f_(ynew);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] + e5 * k_[4][i] +
                                   e6 * k_[5][i] + e7 * k_[6][i]);
            const double sk = abs_ + rel_ * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            err += (ei / sk) * (ei / sk);
        }
        return std::sqrt(err / static_cast<double>(N));
    }

    F f_;
    double rel_, abs_, hmax_, hmin_, h_;
    std::array<std::array<double, N>, 7> k_{};
    bool have_k1_ = false;
};

namespace detail {

// Online event bookkeeping over the stream of accepted samples.
template <std::size_t N>
class EventMonitor {
  public:
    EventMonitor(const std::vector<EventSpec>& specs, double transient)
        : specs_(specs), transient_(transient), inside_since_(specs.size(), -1.0) {}

    // Returns the index of a proximity spec whose dwell completed (terminal),
    // or -1. Call with every accepted sample in time order.
    int observe(double t, const std::array<double, N>& s, std::vector<Event<N>>& out) {
        for (std::size_t k = 0; k < specs_.size(); ++k) {
            const EventSpec& e = specs_[k];
            if (e.kind == EventKind::proximity) {
                double q = 0.0;
                for (std::size_t i = 0; i < N && i < e.center.size(); ++i)
                    q += (s[i] - e.center[i]) * (s[i] - e.center[i]);
                if (std::sqrt(q) <= e.radius) {
                    if (inside_since_[k] < 0.0) inside_since_[k] = t;
                    if (t - inside_since_[k] >= e.dwell) {
                        out.push_back({t, s, EventKind::proximity, static_cast<int>(k)});
                        return static_cast<int>(k);
                    }
                } else {
                    inside_since_[k] = -1.0;
                }
            }
        }
        if (t >= transient_) {
            if (n_seen_ >= 1) {
                for (std::size_t k = 0; k < specs_.size(); ++k) {
                    const EventSpec& e = specs_[k];
                    if (e.kind != EventKind::plane_crossing) continue;
                    const double a = prev1_[e.coordinate], b = s[e.coordinate];
                    if (crossing_matches(a, b, e.level, e.direction)) {
                        const double frac = (e.level - a) / (b - a);
                        const double tc = tprev1_ + frac * (t - tprev1_);
                        std::array<double, N> sc;
                        for (std::size_t i = 0; i < N; ++i)
                            sc[i] = prev1_[i] + frac * (s[i] - prev1_[i]);
                        out.push_back({tc, sc, EventKind::plane_crossing, static_cast<int>(k)});
                    }
                }
            }
            if (n_seen_ >= 2) {
                for (std::size_t k = 0; k < specs_.size(); ++k) {
                    const EventSpec& e = specs_[k];
                    if (e.kind != EventKind::local_max) continue;
                    const double v0 = prev2_[e.coordinate], v1 = prev1_[e.coordinate],
                                 v2 = s[e.coordinate];
                    if (v0 < v1 && v1 >= v2) {
                        auto [tm, vm] = parabola_vertex(tprev2_, v0, tprev1_, v1, t, v2);
                        std::array<double, N> sm = quad_interp(tm, tprev2_, prev2_, tprev1_,
                                                               prev1_, t, s);
                        sm[e.coordinate] = vm;
                        out.push_back({tm, sm, EventKind::local_max, static_cast<int>(k)});
                    }
                }
            }
            prev2_ = prev1_;
            tprev2_ = tprev1_;
            prev1_ = s;
            tprev1_ = t;
            if (n_seen_ < 2) ++n_seen_;
        }
        return -1;
    }

  private:
    const std::vector<EventSpec>& specs_;
    double transient_;
    std::vector<double> inside_since_;
    std::array<double, N> prev1_{}, prev2_{};
    double tprev1_ = 0.0, tprev2_ = 0.0;
    int n_seen_ = 0;
};

} // namespace detail

// Integrates the autonomous field from s0 over [0, t_end]. Samples before
// cfg.transient are discarded; escape terminates the run without storing the
// escaping state. Events are detected on the accepted-step stream and refined
// by interpolation; a proximity event whose dwell completes is terminal.
template <std::size_t N, class F>
Trajectory<N> integrate(F&& field, const std::array<double, N>& s0, const IntegratorConfig& cfg,
                        const std::vector<EventSpec>& events = {}) {
    cfg.validate();
    if (!detail::finite(s0)) throw std::invalid_argument("integrate: non-finite initial state");

    Trajectory<N> traj;
    detail::EventMonitor<N> monitor(events, cfg.transient);

    double t = 0.0;
    std::array<double, N> s = s0;

    auto accept = [&](double tn, const std::array<double, N>& sn) -> bool {
        if (!detail::finite(sn) || detail::norm(sn) > cfg.escape_radius) {
            traj.terminal = Terminal::escaped;
            traj.terminal_time = tn;
            traj.terminal_state = sn;
            return false;
        }
        const int hit = monitor.observe(tn, sn, traj.events);
        if (tn >= cfg.transient) {
            traj.times.push_back(tn);
            traj.states.push_back(sn);
        }
        if (hit >= 0) {
            traj.terminal = Terminal::converged;
            traj.terminal_time = tn;
            traj.terminal_state = sn;
            traj.converged_spec = hit;
            return false;
        }
        t = tn;
        s = sn;
        return true;
    };

    if (!accept(0.0, s0)) return traj;

    if (cfg.mode == IntegratorConfig::Mode::fixed) {
        const double h = cfg.step;
        const long n_full = static_cast<long>(std::floor(cfg.t_end / h + 1e-9));
        for (long i = 1; i <= n_full; ++i) {
            const std::array<double, N> sn = rk4_step(field, s, h);
            if (!accept(static_cast<double>(i) * h, sn)) return traj;
        }
        if (t < cfg.t_end - 1e-12 * cfg.t_end) {
            const std::array<double, N> sn = rk4_step(field, s, cfg.t_end - t);
            if (!accept(cfg.t_end, sn)) return traj;
        }
    } else {
        Dopri45<N, std::decay_t<F>> stepper(field, cfg);
        while (t < cfg.t_end - 1e-12 * cfg.t_end) {
            auto [tn, sn] = stepper.step(t, s, cfg.t_end);
            if (!accept(tn, sn)) return traj;
        }
    }
    traj.terminal = Terminal::completed;
    traj.terminal_time = t;
    traj.terminal_state = s;
    return traj;
}

// Interior local maxima of one coordinate, refined through the parabola of
// the three bracketing samples. Fewer than three samples yield an empty list.
template <std::size_t N>
std::vector<std::pair<double, double>> local_maxima(const Trajectory<N>& traj, int coordinate) {
    std::vector<std::pair<double, double>> out;
    const std::size_t n = traj.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double v0 = traj.states[i - 1][coordinate];
        const double v1 = traj.states[i][coordinate];
        const double v2 = traj.states[i + 1][coordinate];
        if (v0 < v1 && v1 >= v2)
            out.push_back(detail::parabola_vertex(traj.times[i - 1], v0, traj.times[i], v1,
                                                  traj.times[i + 1], v2));
    }
    return out;
}

// Linear-interpolated crossings of coordinate = level in the given direction.
template <std::size_t N>
std::vector<std::pair<double, std::array<double, N>>>
plane_crossings(const Trajectory<N>& traj, int coordinate, double level,
                CrossDirection dir = CrossDirection::both) {
    std::vector<std::pair<double, std::array<double, N>>> out;
    const std::size_t n = traj.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = traj.states[i][coordinate];
        const double b = traj.states[i + 1][coordinate];
        if (!detail::crossing_matches(a, b, level, dir)) continue;
        const double frac = (level - a) / (b - a);
        const double tc = traj.times[i] + frac * (traj.times[i + 1] - traj.times[i]);
        std::array<double, N> sc;
        for (std::size_t c = 0; c < N; ++c)
            sc[c] = traj.states[i][c] + frac * (traj.states[i + 1][c] - traj.states[i][c]);
        out.emplace_back(tc, sc);
    }
    return out;
}

} // namespace chaoslab
