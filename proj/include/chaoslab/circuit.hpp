#pragma once

#include <array>
#include <string>

#include "chaoslab/dynamics.hpp"
#include "chaoslab/integrate.hpp"

namespace chaoslab {

enum class RoundingPolicy { none, floor_1k, e24, e96 };

const char* to_string(RoundingPolicy r);

// Analog realization of the amplitude-scaled flow built from inverting
// integrators and 1/10-scale four-quadrant multipliers:
//
//   dW1/dtau = -(R/R1) W1 + (R/10R2) W1 W3 + (R/10R3) W2 W3
//   dW2/dtau =  (R/R4)(R10/R9) W2 - (R/10R5) W1 W3
//   dW3/dtau = -(R/R6) W3 + (R/10R7) W1 W2 +- (R/10R8) W3^2
//
// with tau = t/(R C). A negative z^2 coefficient is carried as an inversion
// of the squaring unit's output, not as a negative resistance.
struct CircuitRealization {
    Params requested;
    ScaleSpec scale;
    double C = 1e-9;    // farads
    double R = 1e6;     // reference resistance, R = 1/(kappa C)
    double kappa = 1000.0;
    double R9 = 100e3, R10 = 100e3;
    std::array<double, 8> R_ideal{};   // R1..R8, ohms, pre-rounding
    std::array<double, 8> R_rounded{}; // after the rounding policy
    bool invert_square_unit = false;   // z^2 coefficient is negative
    RoundingPolicy policy = RoundingPolicy::floor_1k;
    Params realized;                   // inverted from the rounded resistances
    std::array<double, 8> rel_error{}; // |realized - requested| / |requested| per coefficient
};

// Resistances from coefficient matching between the scaled system and the
// circuit equations. Throws when a matched coefficient is zero or of a sign
// the fixed topology cannot realize (only the z^2 term may be negative).
CircuitRealization synthesize(const Params& p, const ScaleSpec& sc = {}, double C = 1e-9,
                              RoundingPolicy policy = RoundingPolicy::floor_1k, double R9 = 100e3,
                              double R10 = 100e3);

// Inverse of the synthesis map on the rounded resistances.
Params realized_params(const CircuitRealization& cr, std::array<double, 8>* rel_error = nullptr);

// Dimensionless circuit equations evaluated with the stored (rounded)
// resistance ratios.
State3 circuit_field(const CircuitRealization& cr, const State3& W);

double round_resistance(double ohms, RoundingPolicy policy);

struct RangeReport {
    std::array<double, 3> max_abs{}; // per-channel peak |w| over the reference run
    double rail = 10.0;
    bool pass = false;
    Terminal run_status = Terminal::completed;
};

// Peak scaled-channel amplitudes over a long reference run versus the supply
// rail; escape fails the report outright.
RangeReport dynamic_range(const Params& p, const ScaleSpec& sc, double rail = 10.0,
                          const State3& w0 = {1.0 / 3.0, -1.0, 0.0}, double t_end = 1050.0,
                          double transient = 50.0);

// Component table with ideal/rounded values and realized coefficients.
std::string bill_of_materials(const CircuitRealization& cr);

} // namespace chaoslab
