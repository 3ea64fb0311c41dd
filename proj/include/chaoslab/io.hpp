#pragma once

#include <array>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "chaoslab/integrate.hpp"

namespace chaoslab {

// 17 significant digits round-trips a double exactly.
std::string format_full(double v);

void write_text_file(const std::string& path, const std::string& content);

// Header `t,x,y,z` (plus `,X,Y,theta` for 6-D states), full precision.
std::string trajectory_csv(const Trajectory<3>& traj);
std::string trajectory_csv(const Trajectory<6>& traj);

std::string csv_line(std::span<const double> values);

} // namespace chaoslab
