#pragma once

#include <span>
#include <vector>

#include "chaoslab/dynamics.hpp"
#include "chaoslab/lyapunov.hpp"

namespace chaoslab {

// Largest exponent above this counts as chaotic.
inline constexpr double kChaosThreshold = 0.01;

struct SweepConfig {
    enum class Direction { forward, backward };
    enum class IcPolicy { fixed, continued };
    enum class SignReset { none, to_negative, to_positive };

    double a8_start = -0.5;
    double a8_end = 1.5;
    int n_points = 401; // 401 puts both 0 and -0.25 exactly on the grid
    Direction direction = Direction::forward;
    IcPolicy ic_policy = IcPolicy::continued;
    State3 initial = {-2.1441, -0.3086, 0.1113};
    double t_end = 450.0;  // 300-unit maxima window clears the slow lobe alternation
    double transient = 150.0;
    double step = 0.005; // fixed-step RK4 keeps the scan bit-reproducible
    SignReset sign_reset = SignReset::none;
    double escape_radius = 1e6;

    std::vector<double> grid() const; // in sweep order

    void validate() const;
};

struct BifurcationPoint {
    double a8 = 0.0;
    std::vector<double> x_maxima; // refined local-max values of x, post-transient
    bool escaped = false;
};

struct BifurcationData {
    std::vector<BifurcationPoint> points; // in sweep order
};

// Per-grid-point integration recording the local maxima of x. Under the
// `continued` policy the final state of a point seeds the next one; the
// sign-reset rule pins the carried x sign at the first swept point with
// a8 > 0, which selects the branch of the bistable pair.
BifurcationData bifurcation_scan(const Params& p, const SweepConfig& cfg);

struct ChaosMaskPoint {
    double a8 = 0.0;
    double L1 = 0.0;
    bool chaotic = false;
    bool escaped = false;
};

// Short Lyapunov run per grid value; true where L1 exceeds kChaosThreshold.
std::vector<ChaosMaskPoint> chaos_mask(const Params& p, std::span<const double> a8_grid,
                                       const State3& s0, const LyapunovOptions& opt = {0.01, 100000});

} // namespace chaoslab
