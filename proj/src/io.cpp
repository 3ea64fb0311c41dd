#include "chaoslab/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace chaoslab {

std::string format_full(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string csv_line(std::span<const double> values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_full(values[i]);
    }
    line += '\n';
    return line;
}

namespace {

template <std::size_t N>
std::string traj_csv(const Trajectory<N>& traj, const char* header) {
    std::string out(header);
    out += '\n';
    std::array<double, N + 1> row;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        row[0] = traj.times[i];
        for (std::size_t c = 0; c < N; ++c) row[c + 1] = traj.states[i][c];
        out += csv_line(row);
    }
    return out;
}

} // namespace

std::string trajectory_csv(const Trajectory<3>& traj) { return traj_csv(traj, "t,x,y,z"); }

std::string trajectory_csv(const Trajectory<6>& traj) {
    return traj_csv(traj, "t,x,y,z,X,Y,theta");
}

} // namespace chaoslab
