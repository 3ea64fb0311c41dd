#include "chaoslab/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chaoslab {

namespace {

double poly(double b, double c, double d, double x) { return ((x + b) * x + c) * x + d; }
double dpoly(double b, double c, double x) { return (3.0 * x + 2.0 * b) * x + c; }

double polish(double b, double c, double d, double x) {
    for (int it = 0; it < 4; ++it) {
        const double f = poly(b, c, d, x);
        const double df = dpoly(b, c, x);
        if (df == 0.0) break;
        const double step = f / df;
        x -= step;
        if (std::fabs(step) <= 1e-16 * (1.0 + std::fabs(x))) break;
    }
    return x;
}

} // namespace

std::array<Complex, 3> cubic_roots(double b, double c, double d) {
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const double shift = -b / 3.0;
    const double disc = q * q / 4.0 + p * p * p / 27.0;

    std::array<Complex, 3> roots;
    if (disc > 0.0) {
        // One real root; pick the cube root of larger magnitude to avoid
        // cancellation, recover the partner from u v = -p/3.
        const double sq = std::sqrt(disc);
        const double u = std::cbrt(q <= 0.0 ? -q / 2.0 + sq : -q / 2.0 - sq);
        const double v = (u == 0.0) ? 0.0 : -p / (3.0 * u);
        const double real_root = polish(b, c, d, u + v + shift);
        // Deflate by the polished real root.
        const double qb = b + real_root;
        const double qc = c + real_root * qb;
        const double half = -qb / 2.0;
        const double qd = half * half - qc;
        if (qd >= 0.0) {
            const double r = std::sqrt(qd);
            roots = {Complex(real_root, 0.0), Complex(half + r, 0.0), Complex(half - r, 0.0)};
        } else {
            const double im = std::sqrt(-qd);
            roots = {Complex(real_root, 0.0), Complex(half, im), Complex(half, -im)};
        }
    } else if (p == 0.0) {
        roots = {Complex(shift, 0.0), Complex(shift, 0.0), Complex(shift, 0.0)};
    } else {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            const double t = m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
            roots[k] = Complex(polish(b, c, d, t + shift), 0.0);
        }
    }
    std::sort(roots.begin(), roots.end(), [](const Complex& l, const Complex& r) {
        if (l.real() != r.real()) return l.real() > r.real();
        return l.imag() > r.imag();
    });
    return roots;
}

std::array<double, 3> characteristic_coefficients(const Mat3& J) {
    const double tr = J[0][0] + J[1][1] + J[2][2];
    const double m0 = J[1][1] * J[2][2] - J[1][2] * J[2][1];
    const double m1 = J[0][0] * J[2][2] - J[0][2] * J[2][0];
    const double m2 = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                       J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                       J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
    return {-tr, m0 + m1 + m2, -det};
}

EquilibriumSet equilibria(const Params& p) {
    if (p.a3 * p.a5 == 0.0)
        throw std::invalid_argument("equilibria: a3*a5 = 0 (z-quadratic degenerate)");
    if (p.a4 == 0.0) throw std::invalid_argument("equilibria: a4 = 0 (y-elimination degenerate)");
    if (p.a7 * p.a5 == 0.0)
        throw std::invalid_argument("equilibria: a7*a5 = 0 (x-amplitude degenerate)");

    EquilibriumSet set;
    for (int i = 0; i < 6; ++i) set.eq[i].id = i + 1;

    set.eq[0] = {1, {0.0, 0.0, 0.0}, true, {}};

    if (p.a8 == 0.0) {
        set.eq[1] = {2, {}, false, "a8 = 0 pushes a6/a8 to infinity"};
    } else {
        set.eq[1] = {2, {0.0, 0.0, p.a6 / p.a8}, true, {}};
    }

    // Nonzero-x branch: a3 a5 z^2 + a2 a4 z - a1 a4 = 0.
    const double qa = p.a3 * p.a5;
    const double qb = p.a2 * p.a4;
    const double qc = -p.a1 * p.a4;
    const double radicand = qb * qb - 4.0 * qa * qc;
    if (radicand < 0.0) {
        set.branch_real = false;
        for (int i = 2; i < 6; ++i)
            set.eq[i] = {i + 1, {}, false, "complex z-roots (negative radicand)"};
        return set;
    }
    set.branch_real = true;
    const double sq = std::sqrt(radicand);
    set.r_plus = (-qb + sq) / (2.0 * qa);
    set.r_minus = (-qb - sq) / (2.0 * qa);

    auto branch = [&](double r, double& p_out, double& q_out) -> bool {
        const double x2 = p.a4 * (p.a6 - p.a8 * r) / (p.a7 * p.a5);
        if (x2 < 0.0) return false;
        p_out = std::sqrt(x2);
        q_out = p.a5 / p.a4 * p_out * r;
        return true;
    };

    if (branch(set.r_minus, set.p_minus, set.q_minus)) {
        set.eq[2] = {3, {set.p_minus, set.q_minus, set.r_minus}, true, {}};
        set.eq[3] = {4, {-set.p_minus, -set.q_minus, set.r_minus}, true, {}};
    } else {
        set.eq[2] = {3, {}, false, "negative radicand for p- (x^2 < 0)"};
        set.eq[3] = {4, {}, false, "negative radicand for p- (x^2 < 0)"};
    }
    if (branch(set.r_plus, set.p_plus, set.q_plus)) {
        set.eq[4] = {5, {-set.p_plus, -set.q_plus, set.r_plus}, true, {}};
        set.eq[5] = {6, {set.p_plus, set.q_plus, set.r_plus}, true, {}};
    } else {
        set.eq[4] = {5, {}, false, "negative radicand for p+ (x^2 < 0)"};
        set.eq[5] = {6, {}, false, "negative radicand for p+ (x^2 < 0)"};
    }
    return set;
}

std::array<Complex, 3> eigenvalues_at(const Params& p, const State3& E) {
    const State3 f = vector_field(p, E);
    const double fn = std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]);
    const double en = std::sqrt(E[0] * E[0] + E[1] * E[1] + E[2] * E[2]);
    if (!(fn < 1e-9 * (1.0 + en)))
        throw std::invalid_argument("eigenvalues_at: point is not an equilibrium");
    const auto [b, c, d] = characteristic_coefficients(jacobian(p, E));
    return cubic_roots(b, c, d);
}

StabilityClass classify_eigenvalues(const std::array<Complex, 3>& ev, int* n_unstable,
                                    double* max_real) {
    double mr = ev[0].real();
    int nu = 0, ns = 0;
    for (const Complex& l : ev) {
        mr = std::max(mr, l.real());
        if (l.real() > kStabilityEps) ++nu;
        if (l.real() < -kStabilityEps) ++ns;
    }
    if (n_unstable) *n_unstable = nu;
    if (max_real) *max_real = mr;
    if (mr < -kStabilityEps) return StabilityClass::stable;
    if (mr <= kStabilityEps) return StabilityClass::marginally_stable;
    return ns > 0 ? StabilityClass::saddle : StabilityClass::unstable;
}

const char* to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::stable: return "stable";
        case StabilityClass::marginally_stable: return "marginally-stable";
        case StabilityClass::saddle: return "saddle";
        case StabilityClass::unstable: return "unstable";
        case StabilityClass::absent: return "absent";
    }
    return "?";
}

std::vector<StabilityReport> stability_sweep(const Params& p, std::span<const double> a8_grid,
                                             int eq_id) {
    if (eq_id < 1 || eq_id > 6) throw std::invalid_argument("stability_sweep: eq_id must be 1..6");
    std::vector<StabilityReport> out;
    out.reserve(a8_grid.size());
    for (double a8 : a8_grid) {
        const Params q = p.with_a8(a8);
        StabilityReport rep;
        rep.eq_id = eq_id;
        rep.a8 = a8;
        const EquilibriumSet set = equilibria(q);
        const Equilibrium& e = set[eq_id];
        rep.exists = e.exists;
        if (e.exists) {
            rep.eigenvalues = eigenvalues_at(q, e.point);
            rep.cls = classify_eigenvalues(rep.eigenvalues, &rep.n_unstable, &rep.max_real);
        }
        out.push_back(rep);
    }
    return out;
}

std::vector<Equilibrium> attracting_equilibria(const Params& p) {
    std::vector<Equilibrium> out;
    for (const Equilibrium& e : equilibria(p).eq) {
        if (!e.exists) continue;
        double mr = 0.0;
        const auto ev = eigenvalues_at(p, e.point);
        classify_eigenvalues(ev, nullptr, &mr);
        if (mr < -kStabilityEps) out.push_back(e);
    }
    return out;
}

} // namespace chaoslab
