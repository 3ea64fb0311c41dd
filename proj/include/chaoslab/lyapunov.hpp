#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "chaoslab/dynamics.hpp"
#include "chaoslab/integrate.hpp"

namespace chaoslab {

struct LyapunovOptions {
    double step = 0.01;
    std::int64_t iterations = 1'000'000;
    int renorm_interval = 1;    // Gram-Schmidt cadence in steps
    double transient = 100.0;   // settled onto the attractor before accumulating
    double escape_radius = 1e6;
    std::int64_t trace_stride = 1000;
};

enum class LyapunovStatus { ok, escaped };

struct LyapunovRun {
    std::array<double, 3> exponents{}; // sorted descending, nats per unit time
    double divergence_average = 0.0;   // time-averaged trace(J) along the same run
    LyapunovStatus status = LyapunovStatus::ok;
    std::vector<std::array<double, 4>> trace; // rows of (t, L1, L2, L3)
    LyapunovOptions options;
    State3 initial_state{};

    double sum() const { return exponents[0] + exponents[1] + exponents[2]; }
};

namespace detail {

inline void sort_desc(std::array<double, 3>& v) {
    if (v[0] < v[1]) std::swap(v[0], v[1]);
    if (v[1] < v[2]) std::swap(v[1], v[2]);
    if (v[0] < v[1]) std::swap(v[0], v[1]);
}

} // namespace detail

// Finite-time Lyapunov spectrum of a 3-D flow: the base state and three
// tangent vectors evolve together under the variational equations (tangents
// driven by the Jacobian at the Runge-Kutta stage states), with modified
// Gram-Schmidt reorthonormalization and log-stretch accumulation. The
// divergence (trace of J) is averaged over the same steps, which makes the
// volume-contraction identity directly checkable against the exponent sum.
template <class Field, class Jac>
LyapunovRun lyapunov_spectrum_engine(Field&& field, Jac&& jac, const State3& s0,
                                     const LyapunovOptions& opt) {
    if (opt.iterations < 1) throw std::invalid_argument("lyapunov: iterations must be positive");
    if (opt.renorm_interval < 1)
        throw std::invalid_argument("lyapunov: renorm_interval must be positive");

    LyapunovRun run;
    run.options = opt;
    run.initial_state = s0;

    // w = (state, v1, v2, v3) flattened.
    using W = std::array<double, 12>;
    auto deriv = [&](const W& w) -> W {
        const State3 s{w[0], w[1], w[2]};
        const State3 f = field(s);
        const Mat3 J = jac(s);
        W d;
        d[0] = f[0];
        d[1] = f[1];
        d[2] = f[2];
        for (int v = 0; v < 3; ++v) {
            const double* in = w.data() + 3 + 3 * v;
            double* out = d.data() + 3 + 3 * v;
            for (int r = 0; r < 3; ++r)
                out[r] = J[r][0] * in[0] + J[r][1] * in[1] + J[r][2] * in[2];
        }
        return d;
    };

    auto escaped = [&](const State3& s) {
        return !std::isfinite(s[0]) || !std::isfinite(s[1]) || !std::isfinite(s[2]) ||
               std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]) > opt.escape_radius;
    };

    // Transient: evolve the base state alone.
    State3 s = s0;
    const std::int64_t n_transient = static_cast<std::int64_t>(std::ceil(opt.transient / opt.step));
    for (std::int64_t i = 0; i < n_transient; ++i) {
        s = rk4_step(field, s, opt.step);
        if (escaped(s)) {
            run.status = LyapunovStatus::escaped;
            return run;
        }
    }

    W w{};
    w[0] = s[0];
    w[1] = s[1];
    w[2] = s[2];
    w[3] = w[7] = w[11] = 1.0; // identity tangent frame

    std::array<double, 3> logsum{};
    double div_integral = 0.0;
    double div_prev = (jac(s)[0][0] + jac(s)[1][1] + jac(s)[2][2]);

    auto mgs = [&]() {
        for (int v = 0; v < 3; ++v) {
            double* col = w.data() + 3 + 3 * v;
            for (int u = 0; u < v; ++u) {
                const double* prev = w.data() + 3 + 3 * u;
                const double dot = col[0] * prev[0] + col[1] * prev[1] + col[2] * prev[2];
                col[0] -= dot * prev[0];
                col[1] -= dot * prev[1];
                col[2] -= dot * prev[2];
            }
            const double nrm = std::sqrt(col[0] * col[0] + col[1] * col[1] + col[2] * col[2]);
            logsum[v] += std::log(nrm);
            col[0] /= nrm;
            col[1] /= nrm;
            col[2] /= nrm;
        }
    };

    for (std::int64_t i = 1; i <= opt.iterations; ++i) {
        w = rk4_step(deriv, w, opt.step);
        const State3 cur{w[0], w[1], w[2]};
        if (escaped(cur)) {
            run.status = LyapunovStatus::escaped;
            detail::sort_desc(logsum);
            const double t = static_cast<double>(i - 1) * opt.step;
            if (t > 0.0)
                for (int v = 0; v < 3; ++v) run.exponents[v] = logsum[v] / t;
            return run;
        }
        const Mat3 J = jac(cur);
        const double div_cur = J[0][0] + J[1][1] + J[2][2];
        div_integral += 0.5 * (div_prev + div_cur) * opt.step;
        div_prev = div_cur;

        if (i % opt.renorm_interval == 0) mgs();

        if (opt.trace_stride > 0 && (i % opt.trace_stride == 0)) {
            const double t = static_cast<double>(i) * opt.step;
            std::array<double, 3> est = logsum;
            detail::sort_desc(est);
            run.trace.push_back({t, est[0] / t, est[1] / t, est[2] / t});
        }
    }

    const double total = static_cast<double>(opt.iterations) * opt.step;
    detail::sort_desc(logsum);
    run.exponents = {logsum[0] / total, logsum[1] / total, logsum[2] / total};
    run.divergence_average = div_integral / total;
    if (run.trace.empty() || run.trace.back()[0] != total)
        run.trace.push_back({total, run.exponents[0], run.exponents[1], run.exponents[2]});
    else
        run.trace.back() = {total, run.exponents[0], run.exponents[1], run.exponents[2]};
    return run;
}

inline LyapunovRun lyapunov_spectrum(const Params& p, const State3& s0, double step,
                                     std::int64_t iterations, LyapunovOptions opt = {}) {
    opt.step = step;
    opt.iterations = iterations;
    return lyapunov_spectrum_engine([&p](const State3& s) { return vector_field(p, s); },
                                    [&p](const State3& s) { return jacobian(p, s); }, s0, opt);
}

// Kaplan-Yorke dimension of a descending exponent triple: j is the largest m
// whose partial sum is nonnegative; D = j + (L1+..+Lj)/|L_{j+1}|. An
// all-negative spectrum gives 0 and an all-nonnegative partial-sum sequence
// gives the phase-space dimension.
inline double kaplan_yorke(const std::array<double, 3>& exponents) {
    if (exponents[0] < exponents[1] || exponents[1] < exponents[2])
        throw std::invalid_argument("kaplan_yorke: exponents must be sorted descending");
    if (exponents[0] < 0.0) return 0.0;
    double partial = 0.0;
    int j = 0;
    for (int m = 0; m < 3; ++m) {
        if (partial + exponents[m] < 0.0) break;
        partial += exponents[m];
        j = m + 1;
    }
    if (j == 3) return 3.0;
    return j + partial / std::fabs(exponents[j]);
}

// Time-weighted (trapezoid) mean of the divergence along a stored trajectory.
inline double divergence_time_average(const Params& p, const Trajectory<3>& traj) {
    if (traj.terminal == Terminal::escaped)
        throw std::invalid_argument("divergence_time_average: escaped trajectory");
    if (traj.size() < 2)
        throw std::invalid_argument("divergence_time_average: need at least two samples");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
        const double d0 = divergence(p, traj.states[i]);
        const double d1 = divergence(p, traj.states[i + 1]);
        acc += 0.5 * (d0 + d1) * (traj.times[i + 1] - traj.times[i]);
    }
    return acc / (traj.times.back() - traj.times.front());
}

} // namespace chaoslab
