#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "chaoslab/dynamics.hpp"

namespace chaoslab {

using Complex = std::complex<double>;

// Max eigenvalue real parts inside [-kStabilityEps, +kStabilityEps] are
// reported as marginal rather than resolved by sign.
inline constexpr double kStabilityEps = 1e-6;

struct Equilibrium {
    int id = 0; // 1..6
    State3 point{};
    bool exists = false;
    std::string absent_reason;
};

// The six closed-form equilibria:
//   E1 = (0,0,0)                E2 = (0,0,a6/a8)
//   E3 = ( p-,  q-, r-)         E4 = (-p-, -q-, r-)
//   E5 = (-p+, -q+, r+)         E6 = ( p+,  q+, r+)
// where r+- are the roots of a3 a5 z^2 + a2 a4 z - a1 a4 = 0,
// p+- = sqrt(a4 (a6 - a8 r+-) / (a7 a5)) and q+- = (a5/a4) p+- r+-.
struct EquilibriumSet {
    std::array<Equilibrium, 6> eq;
    bool branch_real = false; // r+- real
    double r_plus = 0.0, r_minus = 0.0;
    double p_plus = 0.0, p_minus = 0.0;
    double q_plus = 0.0, q_minus = 0.0;

    const Equilibrium& operator[](int id) const { return eq[id - 1]; }
};

enum class StabilityClass { stable, marginally_stable, saddle, unstable, absent };

struct StabilityReport {
    int eq_id = 0;
    double a8 = 0.0;
    bool exists = false;
    std::array<Complex, 3> eigenvalues{};
    StabilityClass cls = StabilityClass::absent;
    int n_unstable = 0;
    double max_real = 0.0;
};

const char* to_string(StabilityClass c);

// Roots of the monic cubic x^3 + b x^2 + c x + d, Cardano/trigonometric with
// Newton polishing, sorted by descending real part (descending imaginary part
// breaks ties). Exactly one real root or three real roots are returned
// depending on the discriminant.
std::array<Complex, 3> cubic_roots(double b, double c, double d);

// Coefficients (b, c, d) of det(lambda I - J) = lambda^3 + b l^2 + c l + d.
std::array<double, 3> characteristic_coefficients(const Mat3& J);

// Closed-form equilibria. Throws std::invalid_argument naming the offending
// coefficient when a denominator (a3 a5, a4, a7 a5) vanishes; a8 = 0 merely
// marks E2 absent and a negative radicand marks the affected branch absent.
EquilibriumSet equilibria(const Params& p);

// Eigenvalues of the Jacobian at an equilibrium, via the explicit
// characteristic cubic. Rejects points whose field residual exceeds
// 1e-9 * (1 + |E|).
std::array<Complex, 3> eigenvalues_at(const Params& p, const State3& E);

StabilityClass classify_eigenvalues(const std::array<Complex, 3>& ev, int* n_unstable = nullptr,
                                    double* max_real = nullptr);

// One report per grid value of a8 for the requested equilibrium id.
std::vector<StabilityReport> stability_sweep(const Params& p, std::span<const double> a8_grid,
                                             int eq_id);

// Equilibria that attract (max eigenvalue real part < -kStabilityEps).
std::vector<Equilibrium> attracting_equilibria(const Params& p);

} // namespace chaoslab
