#pragma once

#include <array>
#include <cmath>

namespace chaoslab {

using State3 = std::array<double, 3>;
using State6 = std::array<double, 6>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// Coefficients of the quadratic three-dimensional flow
//
//   x' = -a1 x + a2 x z + a3 y z
//   y' =  a4 y - a5 x z
//   z' = -a6 z + a7 x y + a8 z^2
//
// The default set is the chaotic reference point used throughout the
// analyses; a8 is the bifurcation parameter and may take either sign.
struct Params {
    double a1 = 1.0;
    double a2 = 1.0;
    double a3 = 2.3;
    double a4 = 2.0;
    double a5 = 1.0;
    double a6 = 6.0;
    double a7 = 1.0;
    double a8 = -0.25;

    static constexpr Params defaults() { return Params{}; }

    constexpr Params with_a8(double v) const {
        Params q = *this;
        q.a8 = v;
        return q;
    }
};

// Amplitude divisors for the voltage-scaled system plus the time-scale
// factor kappa = 1/(R C). The scaled variables are w = (x/s1, y/s2, z/s3).
struct ScaleSpec {
    double s1 = 3.0;
    double s2 = 1.0;
    double s3 = 1.0;
    double kappa = 1000.0;

    static constexpr ScaleSpec identity() { return ScaleSpec{1.0, 1.0, 1.0, 1.0}; }
    constexpr bool valid() const { return s1 > 0 && s2 > 0 && s3 > 0 && kappa > 0; }
};

namespace detail {

// Coefficients of the generic quadratic field shared by the original,
// amplitude-scaled and resistor-realized variants.
struct QuadCoeffs {
    double lin_x, xz, yz;   // x' = -lin_x x + xz x z + yz y z
    double lin_y, xz2;      // y' =  lin_y y - xz2 x z
    double lin_z, xy, zz;   // z' = -lin_z z + xy x y + zz z^2
};

inline State3 eval_quad(const QuadCoeffs& c, const State3& s) {
    return {-c.lin_x * s[0] + c.xz * s[0] * s[2] + c.yz * s[1] * s[2],
            c.lin_y * s[1] - c.xz2 * s[0] * s[2],
            -c.lin_z * s[2] + c.xy * s[0] * s[1] + c.zz * s[2] * s[2]};
}

inline QuadCoeffs coeffs_of(const Params& p) {
    return {p.a1, p.a2, p.a3, p.a4, p.a5, p.a6, p.a7, p.a8};
}

} // namespace detail

// Substituting x = s1 wx, y = s2 wy, z = s3 wz into the flow and dividing
// each equation by its amplitude factor yields these effective coefficients.
inline detail::QuadCoeffs scaled_coefficients(const Params& p, const ScaleSpec& sc) {
    return {p.a1,
            p.a2 * sc.s3,
            p.a3 * sc.s2 * sc.s3 / sc.s1,
            p.a4,
            p.a5 * sc.s1 * sc.s3 / sc.s2,
            p.a6,
            p.a7 * sc.s1 * sc.s2 / sc.s3,
            p.a8 * sc.s3};
}

inline State3 vector_field(const Params& p, const State3& s) {
    return detail::eval_quad(detail::coeffs_of(p), s);
}

inline Mat3 jacobian(const Params& p, const State3& s) {
    const double x = s[0], y = s[1], z = s[2];
    return {{{p.a2 * z - p.a1, p.a3 * z, p.a2 * x + p.a3 * y},
             {-p.a5 * z, p.a4, -p.a5 * x},
             {p.a7 * y, p.a7 * x, 2.0 * p.a8 * z - p.a6}}};
}

// Trace of the Jacobian; state-dependent unless a2 + 2 a8 = 0.
inline double divergence(const Params& p, const State3& s) {
    return (p.a2 + 2.0 * p.a8) * s[2] - (p.a1 - p.a4 + p.a6);
}

inline State3 scaled_field(const Params& p, const ScaleSpec& sc, const State3& w) {
    return detail::eval_quad(scaled_coefficients(p, sc), w);
}

struct DriveInputs {
    double v;  // forward speed, wrapped into [0, x_max/2)
    double mu; // turn rate
};

// Drive laws fed by the chaotic signals: v = mod(|x+y|, x_max)/2 and
// mu = (x-y)/wheel_sep. The modulus is the nonnegative remainder.
inline DriveInputs drive_signals(double x, double y, double wheel_sep, double x_max) {
    return {std::fmod(std::fabs(x + y), x_max) * 0.5, (x - y) / wheel_sep};
}

// Chaotic flow unidirectionally coupled to unicycle kinematics:
// state = (x, y, z, X, Y, Theta).
inline State6 robot_field(const Params& p, double wheel_sep, double x_max, const State6& s) {
    const State3 chaos = vector_field(p, {s[0], s[1], s[2]});
    const DriveInputs u = drive_signals(s[0], s[1], wheel_sep, x_max);
    return {chaos[0], chaos[1], chaos[2], u.v * std::cos(s[5]), u.v * std::sin(s[5]), u.mu};
}

} // namespace chaoslab
