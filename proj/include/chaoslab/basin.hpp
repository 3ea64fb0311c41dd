#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "chaoslab/dynamics.hpp"
#include "chaoslab/equilibria.hpp"

namespace chaoslab {

enum class AttractorLabel : std::uint8_t {
    chaotic1,     // x < 0 branch
    chaotic2,     // x > 0 branch
    fixed_point1, // attracting equilibrium with x < 0
    fixed_point2, // attracting equilibrium with x > 0
    escaped,
    undecided,
};

const char* to_string(AttractorLabel l);
AttractorLabel mirror(AttractorLabel l); // swaps the 1 <-> 2 pairs

struct ClassifierConfig {
    double fp_radius = 0.05;  // proximity ball around an attracting equilibrium
    double fp_dwell = 20.0;   // continuous residence time inside the ball
    int n_crossings = 10;     // consecutive same-sign section crossings
    double t_max = 2000.0;    // classification budget
    double transient = 0.0;   // crossings before this are ignored (0: first fingerprint wins)
    double fp_exclusion = 2.0; // crossings this close to an attracting point don't count
    double escape_radius = 1e6;
    // integrator settings for classification runs
    double step = 0.01;
    double max_step = 0.1;
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;

    void validate() const;
};

// Per-parameter data the classifier needs: the section plane z = r- and the
// attracting equilibria (located by their eigenvalues, not by table index).
struct ClassifierContext {
    double plane_z = 0.0;
    std::vector<State3> attracting; // attracting equilibria, if any
};

ClassifierContext make_classifier_context(const Params& p);

// Integrates up to t_max and fingerprints the attractor reached: dwell near
// an attracting equilibrium, a run of same-sign crossings of z = r-, escape
// (including integrator breakdown), or undecided once the budget is spent.
AttractorLabel classify_ic(const Params& p, const State3& s0, const ClassifierConfig& cfg,
                           const ClassifierContext& ctx);

struct BasinGridSpec {
    double x_min = -10.0, x_max = 10.0;
    double y_min = -10.0, y_max = 10.0;
    int nx = 200, ny = 200;
    // The z = 0 plane reproduces the strict half-plane basin split; NaN asks
    // for the section plane of the nonzero-x equilibria, z = r-(p).
    double z_level = 0.0;
};

struct BasinGrid {
    BasinGridSpec spec;
    double z_level = 0.0;
    std::vector<AttractorLabel> labels; // row-major, index = iy * nx + ix

    AttractorLabel at(int ix, int iy) const { return labels[static_cast<std::size_t>(iy) * spec.nx + ix]; }
    double cell_x(int ix) const;
    double cell_y(int iy) const;
    std::array<std::size_t, 6> counts() const;
    double labeled_fraction() const; // chaotic + fixed-point cells
};

// Classifies every cell center of the z = level plane; cells are independent,
// so the map parallelizes without affecting the result.
BasinGrid basin_grid(const Params& p, const BasinGridSpec& spec, const ClassifierConfig& cfg,
                     int threads = 0);

std::string basin_csv(const BasinGrid& grid);     // x0,y0,label
std::string basin_ppm(const BasinGrid& grid);     // P6 image, one pixel per cell

int basin_class(double gamma, double P0, double dim = 3.0);

struct ScalingConfig {
    std::vector<double> radii;        // strictly increasing; default 10^1..10^6
    int samples_per_radius = 1000;
    std::uint64_t seed = 1;
    bool count_fixed_points = true;   // fixed-point hits count as in-basin
    ClassifierConfig classifier;
    int threads = 0;

    static std::vector<double> default_radii();
};

struct ScalingFit {
    std::vector<double> radii;
    std::vector<double> probability; // in-basin fraction per radius
    double gamma = 0.0;              // decay exponent of P(r) = P0 / r^gamma
    double P0 = 0.0;
    double residual = 0.0;           // rms log-residual of the fit
    int basin_class = 0;
    State3 centroid{};
};

// Places ICs at each radius from the attractor centroid along random
// directions, classifies them, and fits log P = log P0 - gamma log r by least
// squares over the radii with nonzero in-basin probability.
ScalingFit basin_scaling(const Params& p, const ScalingConfig& cfg);

// Least-squares power-law fit over (r, P) pairs with P > 0; throws when fewer
// than three usable radii remain.
void fit_power_law(const std::vector<double>& radii, const std::vector<double>& prob,
                   double& gamma, double& P0, double& residual);

State3 attractor_centroid(const Params& p, const State3& s0 = {1.0, -1.0, 0.0});

} // namespace chaoslab
