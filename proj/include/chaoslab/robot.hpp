#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "chaoslab/dynamics.hpp"
#include "chaoslab/integrate.hpp"

namespace chaoslab {

struct RobotConfig {
    enum class BoundaryRule { none, no_motion };

    double wheel_separation = 0.08;
    double wheel_radius = 1.0;
    double x_max = 0.0; // 0 means calibrate from a reference run of the flow
    double ws_x_min = 0.0, ws_x_max = 10.0;
    double ws_y_min = 0.0, ws_y_max = 10.0;
    int cells_x = 10, cells_y = 10;
    BoundaryRule boundary = BoundaryRule::no_motion;
    double step = 0.005;

    void validate() const;
};

struct WheelSpeeds {
    double left = 0.0;
    double right = 0.0;
};

DriveInputs drive_inputs(double x, double y, const RobotConfig& cfg);

// Inverts v = R(wl+wr)/2 and Theta' = R(wr-wl)/d for the wheel rates.
WheelSpeeds wheel_speeds(double v, double mu, const RobotConfig& cfg);
DriveInputs drive_from_wheels(const WheelSpeeds& w, const RobotConfig& cfg);

// Peak |x(t)| over a settled reference run (t in [50, 1050]); used as the
// wrap bound of the drive law when RobotConfig.x_max is left at 0.
double calibrate_x_max(const Params& p, const State3& s0 = {1.0, -1.0, 0.0});

struct CoverageReport {
    int cells_x = 0, cells_y = 0;
    std::vector<std::uint8_t> visited; // row-major, index = iy * cells_x + ix
    std::vector<std::pair<double, double>> fraction_series; // (t, fraction), nondecreasing
    double final_fraction = 0.0;

    std::string mask_text() const; // rows of 0/1, top row = largest y
};

// Cell-visit coverage of sampled positions over the workspace grid.
CoverageReport coverage(std::span<const double> times, std::span<const State6> states,
                        const RobotConfig& cfg);

struct NavigationResult {
    Trajectory<6> trajectory;
    CoverageReport coverage;
    std::vector<double> v;  // commanded drive inputs per stored sample
    std::vector<double> mu;
    double x_max_used = 0.0;
};

// Fixed-step integration of the coupled 6-D system. Under the no-motion rule
// a step that would leave the workspace keeps its chaotic and heading updates
// but suppresses the translation, so the robot turns in place at the wall.
NavigationResult simulate_navigation(const Params& p, const RobotConfig& cfg, const State6& s0,
                                     double t_end, double step = 0.0);

} // namespace chaoslab
