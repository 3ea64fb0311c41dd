#include "chaoslab/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace chaoslab {

namespace {

// Standard preferred-number series, one decade.
constexpr double kE24[] = {1.0, 1.1, 1.2, 1.3, 1.5, 1.6, 1.8, 2.0, 2.2, 2.4, 2.7, 3.0,
                           3.3, 3.6, 3.9, 4.3, 4.7, 5.1, 5.6, 6.2, 6.8, 7.5, 8.2, 9.1};
constexpr double kE96[] = {
    1.00, 1.02, 1.05, 1.07, 1.10, 1.13, 1.15, 1.18, 1.21, 1.24, 1.27, 1.30, 1.33, 1.37, 1.40,
    1.43, 1.47, 1.50, 1.54, 1.58, 1.62, 1.65, 1.69, 1.74, 1.78, 1.82, 1.87, 1.91, 1.96, 2.00,
    2.05, 2.10, 2.15, 2.21, 2.26, 2.32, 2.37, 2.43, 2.49, 2.55, 2.61, 2.67, 2.74, 2.80, 2.87,
    2.94, 3.01, 3.09, 3.16, 3.24, 3.32, 3.40, 3.48, 3.57, 3.65, 3.74, 3.83, 3.92, 4.02, 4.12,
    4.22, 4.32, 4.42, 4.53, 4.64, 4.75, 4.87, 4.99, 5.11, 5.23, 5.36, 5.49, 5.62, 5.76, 5.90,
    6.04, 6.19, 6.34, 6.49, 6.65, 6.81, 6.98, 7.15, 7.32, 7.50, 7.68, 7.87, 8.06, 8.25, 8.45,
    8.66, 8.87, 9.09, 9.31, 9.53, 9.76};

template <std::size_t N>
double nearest_in_series(double ohms, const double (&series)[N]) {
    const double decade = std::pow(10.0, std::floor(std::log10(ohms)));
    double best = series[0] * decade * 10.0; // wrap-up candidate from the next decade
    double best_err = std::fabs(best - ohms);
    for (double s : series) {
        const double cand = s * decade;
        const double err = std::fabs(cand - ohms);
        if (err < best_err) {
            best = cand;
            best_err = err;
        }
    }
    return best;
}

struct MatchedCoeff {
    const char* name;  // which aj the resistor realizes
    double value;      // matched (scaled-system) coefficient magnitude
};

} // namespace

const char* to_string(RoundingPolicy r) {
    switch (r) {
        case RoundingPolicy::none: return "none";
        case RoundingPolicy::floor_1k: return "floor-1k";
        case RoundingPolicy::e24: return "e24";
        case RoundingPolicy::e96: return "e96";
    }
    return "?";
}

double round_resistance(double ohms, RoundingPolicy policy) {
    switch (policy) {
        case RoundingPolicy::none: return ohms;
        case RoundingPolicy::floor_1k:
            // A relative nudge keeps values that are a rounding error below a
            // 1k boundary (e.g. R = 1/(kappa C) = 999999.9999...) from
            // dropping a whole kilohm.
            return std::floor(ohms * (1.0 + 1e-12) / 1000.0) * 1000.0;
        case RoundingPolicy::e24: return nearest_in_series(ohms, kE24);
        case RoundingPolicy::e96: return nearest_in_series(ohms, kE96);
    }
    return ohms;
}

CircuitRealization synthesize(const Params& p, const ScaleSpec& sc, double C,
                              RoundingPolicy policy, double R9, double R10) {
    if (!sc.valid()) throw std::invalid_argument("synthesize: invalid scale spec");
    if (!(C > 0.0)) throw std::invalid_argument("synthesize: capacitance must be positive");
    if (!(R9 > 0.0) || !(R10 > 0.0))
        throw std::invalid_argument("synthesize: gain divider resistances must be positive");

    CircuitRealization cr;
    cr.requested = p;
    cr.scale = sc;
    cr.C = C;
    cr.kappa = sc.kappa;
    cr.R = 1.0 / (sc.kappa * C);
    cr.R9 = R9;
    cr.R10 = R10;
    cr.policy = policy;

    const auto c = scaled_coefficients(p, sc);
    const MatchedCoeff matched[8] = {
        {"a1", c.lin_x}, {"a2", c.xz},  {"a3", c.yz}, {"a4", c.lin_y},
        {"a5", c.xz2},   {"a6", c.lin_z}, {"a7", c.xy}, {"a8", c.zz},
    };
    for (int i = 0; i < 7; ++i) {
        if (matched[i].value == 0.0)
            throw std::invalid_argument(std::string("synthesize: coefficient ") + matched[i].name +
                                        " is zero, no finite resistance realizes it");
        if (matched[i].value < 0.0)
            throw std::invalid_argument(std::string("synthesize: coefficient ") + matched[i].name +
                                        " is negative, outside the fixed topology");
    }
    if (matched[7].value == 0.0)
        throw std::invalid_argument(
            "synthesize: coefficient a8 is zero, no finite resistance realizes it");
    cr.invert_square_unit = matched[7].value < 0.0;

    cr.R_ideal[0] = cr.R / c.lin_x;
    cr.R_ideal[1] = cr.R / (10.0 * c.xz);
    cr.R_ideal[2] = cr.R / (10.0 * c.yz);
    cr.R_ideal[3] = cr.R * (R10 / R9) / c.lin_y;
    cr.R_ideal[4] = cr.R / (10.0 * c.xz2);
    cr.R_ideal[5] = cr.R / c.lin_z;
    cr.R_ideal[6] = cr.R / (10.0 * c.xy);
    cr.R_ideal[7] = cr.R / (10.0 * std::fabs(c.zz));

    for (int i = 0; i < 8; ++i) {
        cr.R_rounded[i] = round_resistance(cr.R_ideal[i], policy);
        if (!(cr.R_rounded[i] > 0.0))
            throw std::invalid_argument("synthesize: rounding produced a nonpositive resistance");
    }
    cr.realized = realized_params(cr, &cr.rel_error);
    return cr;
}

Params realized_params(const CircuitRealization& cr, std::array<double, 8>* rel_error) {
    const ScaleSpec& sc = cr.scale;
    const double R = cr.R;
    detail::QuadCoeffs c;
    c.lin_x = R / cr.R_rounded[0];
    c.xz = R / (10.0 * cr.R_rounded[1]);
    c.yz = R / (10.0 * cr.R_rounded[2]);
    c.lin_y = (R / cr.R_rounded[3]) * (cr.R10 / cr.R9);
    c.xz2 = R / (10.0 * cr.R_rounded[4]);
    c.lin_z = R / cr.R_rounded[5];
    c.xy = R / (10.0 * cr.R_rounded[6]);
    c.zz = (cr.invert_square_unit ? -1.0 : 1.0) * R / (10.0 * cr.R_rounded[7]);

    Params out;
    out.a1 = c.lin_x;
    out.a2 = c.xz / sc.s3;
    out.a3 = c.yz * sc.s1 / (sc.s2 * sc.s3);
    out.a4 = c.lin_y;
    out.a5 = c.xz2 * sc.s2 / (sc.s1 * sc.s3);
    out.a6 = c.lin_z;
    out.a7 = c.xy * sc.s3 / (sc.s1 * sc.s2);
    out.a8 = c.zz / sc.s3;

    if (rel_error) {
        const double req[8] = {cr.requested.a1, cr.requested.a2, cr.requested.a3, cr.requested.a4,
                               cr.requested.a5, cr.requested.a6, cr.requested.a7, cr.requested.a8};
        const double got[8] = {out.a1, out.a2, out.a3, out.a4, out.a5, out.a6, out.a7, out.a8};
        for (int i = 0; i < 8; ++i)
            (*rel_error)[i] = req[i] == 0.0 ? std::fabs(got[i])
                                            : std::fabs(got[i] - req[i]) / std::fabs(req[i]);
    }
    return out;
}

State3 circuit_field(const CircuitRealization& cr, const State3& W) {
    const double R = cr.R;
    detail::QuadCoeffs c;
    c.lin_x = R / cr.R_rounded[0];
    c.xz = R / (10.0 * cr.R_rounded[1]);
    c.yz = R / (10.0 * cr.R_rounded[2]);
    c.lin_y = (R / cr.R_rounded[3]) * (cr.R10 / cr.R9);
    c.xz2 = R / (10.0 * cr.R_rounded[4]);
    c.lin_z = R / cr.R_rounded[5];
    c.xy = R / (10.0 * cr.R_rounded[6]);
    c.zz = (cr.invert_square_unit ? -1.0 : 1.0) * R / (10.0 * cr.R_rounded[7]);
    return detail::eval_quad(c, W);
}

RangeReport dynamic_range(const Params& p, const ScaleSpec& sc, double rail, const State3& w0,
                          double t_end, double transient) {
    if (!(rail > 0.0)) throw std::invalid_argument("dynamic_range: rail must be positive");
    IntegratorConfig cfg;
    cfg.mode = IntegratorConfig::Mode::fixed;
    cfg.step = 0.005;
    cfg.max_step = 0.005;
    cfg.t_end = t_end;
    cfg.transient = transient;

    RangeReport report;
    report.rail = rail;
    const Trajectory<3> traj =
        integrate([&](const State3& w) { return scaled_field(p, sc, w); }, w0, cfg);
    report.run_status = traj.terminal;
    if (traj.terminal == Terminal::escaped) {
        report.pass = false;
        return report;
    }
    for (const State3& w : traj.states)
        for (int c = 0; c < 3; ++c) report.max_abs[c] = std::max(report.max_abs[c], std::fabs(w[c]));
    report.pass = report.max_abs[0] < rail && report.max_abs[1] < rail && report.max_abs[2] < rail;
    return report;
}

std::string bill_of_materials(const CircuitRealization& cr) {
    char line[160];
    std::string out;
    std::snprintf(line, sizeof(line), "reference R = %.6g ohm, C = %.6g F, kappa = %.6g 1/s\n",
                  cr.R, cr.C, cr.kappa);
    out += line;
    std::snprintf(line, sizeof(line), "gain divider R9 = %.6g ohm, R10 = %.6g ohm\n", cr.R9,
                  cr.R10);
    out += line;
    std::snprintf(line, sizeof(line), "amplitude scale s = (%g, %g, %g), rounding = %s\n",
                  cr.scale.s1, cr.scale.s2, cr.scale.s3, to_string(cr.policy));
    out += line;
    const double req[8] = {cr.requested.a1, cr.requested.a2, cr.requested.a3, cr.requested.a4,
                           cr.requested.a5, cr.requested.a6, cr.requested.a7, cr.requested.a8};
    const double got[8] = {cr.realized.a1, cr.realized.a2, cr.realized.a3, cr.realized.a4,
                           cr.realized.a5, cr.realized.a6, cr.realized.a7, cr.realized.a8};
    out += "component  ideal_ohm      rounded_ohm    coefficient  requested    realized     "
           "error_pct\n";
    for (int i = 0; i < 8; ++i) {
        std::snprintf(line, sizeof(line), "R%-8d %-14.6f %-14.0f a%-10d %-12.6g %-12.6g %.4f\n",
                      i + 1, cr.R_ideal[i], cr.R_rounded[i], i + 1, req[i], got[i],
                      100.0 * cr.rel_error[i]);
        out += line;
    }
    if (cr.invert_square_unit)
        out += "note: z^2 coefficient is negative; invert the squaring unit's output\n";
    return out;
}

} // namespace chaoslab
