// chaoslab: analysis bench for a three-dimensional quadratic chaotic flow.
// Subcommands cover trajectory simulation, equilibrium stability, Lyapunov
// spectra, bifurcation sweeps, basin mapping and scaling, analog-circuit
// synthesis, and chaos-driven robot navigation. Every run writes CSV
// artifacts plus a JSON summary with stable keys.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chaoslab/basin.hpp"
#include "chaoslab/bifurcation.hpp"
#include "chaoslab/circuit.hpp"
#include "chaoslab/dynamics.hpp"
#include "chaoslab/equilibria.hpp"
#include "chaoslab/integrate.hpp"
#include "chaoslab/io.hpp"
#include "chaoslab/lyapunov.hpp"
#include "chaoslab/parallel.hpp"
#include "chaoslab/robot.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace chaoslab;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
    std::vector<double> a{1.0, 1.0, 2.3, 2.0, 1.0, 6.0, 1.0, -0.25};
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int threads = 0;

    Params params() const {
        return Params{a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
    }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--a1", c.a[0], "coefficient a1");
    cmd->add_option("--a2", c.a[1], "coefficient a2");
    cmd->add_option("--a3", c.a[2], "coefficient a3");
    cmd->add_option("--a4", c.a[3], "coefficient a4");
    cmd->add_option("--a5", c.a[4], "coefficient a5");
    cmd->add_option("--a6", c.a[5], "coefficient a6");
    cmd->add_option("--a7", c.a[6], "coefficient a7");
    cmd->add_option("--a8", c.a[7], "coefficient a8 (bifurcation parameter)");
    cmd->add_option("--out", c.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", c.seed, "random seed for sampling work")->capture_default_str();
    cmd->add_option("--threads", c.threads,
                    "worker threads (0: CHAOSLAB_THREADS or hardware)")
        ->capture_default_str();
}

std::string out_path(const Common& c, const std::string& name) {
    fs::create_directories(c.out_dir);
    return (fs::path(c.out_dir) / name).string();
}

void write_summary(const Common& c, json j) {
    j["seed"] = c.seed;
    write_text_file(out_path(c, "summary.json"), j.dump(2) + "\n");
}

json params_json(const Params& p) {
    return json::array({p.a1, p.a2, p.a3, p.a4, p.a5, p.a6, p.a7, p.a8});
}

const char* terminal_name(Terminal t) {
    switch (t) {
        case Terminal::completed: return "completed";
        case Terminal::escaped: return "escaped";
        case Terminal::converged: return "converged";
    }
    return "?";
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    Common common;
    std::vector<double> ic{1.0, -1.0, 0.0};
    double t_end = 500.0;
    double transient = 50.0;
    double step = 1e-3;
    double max_step = 1e-3;
    double rel_tol = 2.2204e-6;
    double abs_tol = 1e-9;
    bool fixed = false;
    bool gnuplot = false;
};

int run_simulate(const SimulateArgs& args) {
    const Params p = args.common.params();
    IntegratorConfig cfg;
    cfg.mode = args.fixed ? IntegratorConfig::Mode::fixed : IntegratorConfig::Mode::adaptive;
    cfg.step = args.step;
    cfg.max_step = args.max_step;
    cfg.rel_tol = args.rel_tol;
    cfg.abs_tol = args.abs_tol;
    cfg.t_end = args.t_end;
    cfg.transient = args.transient;
    cfg.validate();

    const State3 s0{args.ic[0], args.ic[1], args.ic[2]};
    const auto traj = integrate([&p](const State3& s) { return vector_field(p, s); }, s0, cfg);
    write_text_file(out_path(args.common, "trajectory.csv"), trajectory_csv(traj));

    if (args.gnuplot) {
        std::string gp = "set datafile separator ','\n"
                         "set xlabel 'x'\nset ylabel 'y'\n"
                         "plot 'trajectory.csv' using 2:3 every ::1 with lines notitle\n";
        write_text_file(out_path(args.common, "phase_portrait.gp"), gp);
    }

    json j;
    j["subcommand"] = "simulate";
    j["a"] = params_json(p);
    j["ic"] = args.ic;
    j["t_end"] = args.t_end;
    j["transient"] = args.transient;
    j["mode"] = args.fixed ? "fixed" : "adaptive";
    j["terminal"] = terminal_name(traj.terminal);
    j["samples"] = traj.size();
    j["csv"] = "trajectory.csv";
    write_summary(args.common, j);

    return traj.terminal == Terminal::escaped ? kExitNumerical : 0;
}

// --------------------------------------------------------------- equilibria

int run_equilibria(const Common& common, double sweep_start, double sweep_end, int sweep_points) {
    const Params p = common.params();
    const EquilibriumSet set = equilibria(p);

    json eq_list = json::array();
    std::string csv = "a8,eq_id,re1,im1,re2,im2,re3,im3,class\n";

    std::vector<double> grid;
    if (sweep_points >= 2) {
        for (int i = 0; i < sweep_points; ++i)
            grid.push_back(sweep_start + (sweep_end - sweep_start) * i / (sweep_points - 1));
    } else {
        grid.push_back(p.a8);
    }

    for (int id = 1; id <= 6; ++id) {
        for (const StabilityReport& rep : stability_sweep(p, grid, id)) {
            char line[256];
            if (rep.exists) {
                std::snprintf(line, sizeof(line), "%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                              rep.a8, id, rep.eigenvalues[0].real(), rep.eigenvalues[0].imag(),
                              rep.eigenvalues[1].real(), rep.eigenvalues[1].imag(),
                              rep.eigenvalues[2].real(), rep.eigenvalues[2].imag(),
                              to_string(rep.cls));
            } else {
                std::snprintf(line, sizeof(line), "%.17g,%d,,,,,,,absent\n", rep.a8, id);
            }
            csv += line;
        }
    }
    write_text_file(out_path(common, "equilibria.csv"), csv);

    for (const Equilibrium& e : set.eq) {
        json item;
        item["id"] = e.id;
        item["exists"] = e.exists;
        if (e.exists) {
            item["point"] = {e.point[0], e.point[1], e.point[2]};
            const auto ev = eigenvalues_at(p, e.point);
            json evj = json::array();
            double max_real = 0.0;
            int n_unstable = 0;
            const StabilityClass cls = classify_eigenvalues(ev, &n_unstable, &max_real);
            for (const Complex& l : ev) evj.push_back({l.real(), l.imag()});
            item["eigenvalues"] = evj;
            item["class"] = to_string(cls);
            item["max_real"] = max_real;
            item["unstable_manifolds"] = n_unstable;
        } else {
            item["reason"] = e.absent_reason;
        }
        eq_list.push_back(item);
    }

    json j;
    j["subcommand"] = "equilibria";
    j["a"] = params_json(p);
    j["r_minus"] = set.branch_real ? json(set.r_minus) : json();
    j["r_plus"] = set.branch_real ? json(set.r_plus) : json();
    j["equilibria"] = eq_list;
    j["csv"] = "equilibria.csv";
    write_summary(common, j);
    return 0;
}

// ----------------------------------------------------------------- lyapunov

int run_lyapunov(const Common& common, std::vector<double> ic, double step, std::int64_t iterations,
                 double transient, bool gnuplot) {
    const Params p = common.params();
    LyapunovOptions opt;
    opt.step = step;
    opt.iterations = iterations;
    opt.transient = transient;
    const LyapunovRun run =
        lyapunov_spectrum(p, {ic[0], ic[1], ic[2]}, opt.step, opt.iterations, opt);

    std::string csv = "t,L1,L2,L3\n";
    for (const auto& row : run.trace) csv += csv_line(std::span<const double>(row.data(), 4));
    write_text_file(out_path(common, "lyapunov_trace.csv"), csv);

    if (gnuplot) {
        write_text_file(out_path(common, "lyapunov_trace.gp"),
                        "set datafile separator ','\nset logscale x\n"
                        "set xlabel 't'\nset ylabel 'running exponent'\n"
                        "plot for [c=2:4] 'lyapunov_trace.csv' using 1:c every ::1 with lines "
                        "title columnheader(c)\n");
    }

    json j;
    j["subcommand"] = "lyapunov";
    j["a"] = params_json(p);
    j["status"] = run.status == LyapunovStatus::ok ? "ok" : "escaped";
    j["L1"] = run.exponents[0];
    j["L2"] = run.exponents[1];
    j["L3"] = run.exponents[2];
    j["sum"] = run.sum();
    j["divergence_average"] = run.divergence_average;
    j["kaplan_yorke"] =
        run.status == LyapunovStatus::ok ? json(kaplan_yorke(run.exponents)) : json();
    j["csv"] = "lyapunov_trace.csv";
    write_summary(common, j);
    return run.status == LyapunovStatus::ok ? 0 : kExitNumerical;
}

// ---------------------------------------------------------------- bifurcate

int run_bifurcate(const Common& common, SweepConfig cfg, bool with_lyapunov, bool gnuplot) {
    const Params p = common.params();
    const BifurcationData data = bifurcation_scan(p, cfg);

    std::string csv = "a8,xmax\n";
    std::size_t rows = 0;
    for (const auto& pt : data.points)
        for (double v : pt.x_maxima) {
            csv += csv_line(std::array<double, 2>{pt.a8, v});
            ++rows;
        }
    write_text_file(out_path(common, "bifurcation.csv"), csv);

    std::size_t escaped_points = 0;
    for (const auto& pt : data.points) escaped_points += pt.escaped;

    json j;
    j["subcommand"] = "bifurcate";
    j["a"] = params_json(p);
    j["points"] = data.points.size();
    j["rows"] = rows;
    j["escaped_points"] = escaped_points;
    j["csv"] = "bifurcation.csv";

    if (with_lyapunov) {
        std::vector<double> grid;
        for (const auto& pt : data.points) grid.push_back(pt.a8);
        LyapunovOptions opt;
        opt.step = 0.01;
        opt.iterations = 100000;
        std::string mask_csv = "a8,L1\n";
        std::size_t chaotic = 0;
        for (const auto& m : chaos_mask(p, grid, cfg.initial, opt)) {
            mask_csv += csv_line(std::array<double, 2>{m.a8, m.L1});
            chaotic += m.chaotic;
        }
        write_text_file(out_path(common, "chaos_mask.csv"), mask_csv);
        j["chaos_csv"] = "chaos_mask.csv";
        j["chaotic_points"] = chaotic;
    }

    if (gnuplot) {
        write_text_file(out_path(common, "bifurcation.gp"),
                        "set datafile separator ','\nset xlabel 'a8'\nset ylabel 'x maxima'\n"
                        "plot 'bifurcation.csv' using 1:2 every ::1 with dots notitle\n");
    }
    write_summary(common, j);
    return 0;
}

// -------------------------------------------------------------------- basin

int run_basin(const Common& common, BasinGridSpec spec, const ClassifierConfig& ccfg,
              bool use_section_plane) {
    const Params p = common.params();
    if (use_section_plane) spec.z_level = std::numeric_limits<double>::quiet_NaN();
    const BasinGrid grid = basin_grid(p, spec, ccfg, common.threads);
    write_text_file(out_path(common, "basin.csv"), basin_csv(grid));
    write_text_file(out_path(common, "basin.ppm"), basin_ppm(grid));

    const auto counts = grid.counts();
    json j;
    j["subcommand"] = "basin";
    j["a"] = params_json(p);
    j["plane_z"] = grid.z_level;
    j["nx"] = spec.nx;
    j["ny"] = spec.ny;
    j["window"] = {spec.x_min, spec.x_max, spec.y_min, spec.y_max};
    j["counts"] = {{"chaotic1", counts[0]}, {"chaotic2", counts[1]},
                   {"fixed_point1", counts[2]}, {"fixed_point2", counts[3]},
                   {"escaped", counts[4]}, {"undecided", counts[5]}};
    j["composite_fraction"] = grid.labeled_fraction();
    j["csv"] = "basin.csv";
    j["image"] = "basin.ppm";
    write_summary(common, j);
    return 0;
}

// -------------------------------------------------------------- basin-class

int run_basin_class(const Common& common, double r_min, double r_max, int n_radii, int samples,
                    bool include_fixed_points) {
    const Params p = common.params();
    if (n_radii < 3) throw std::invalid_argument("basin-class: need at least 3 radii");
    ScalingConfig cfg;
    cfg.samples_per_radius = samples;
    cfg.seed = common.seed;
    cfg.threads = common.threads;
    cfg.count_fixed_points = include_fixed_points;
    cfg.radii.clear();
    for (int i = 0; i < n_radii; ++i)
        cfg.radii.push_back(std::pow(10.0, std::log10(r_min) +
                                               (std::log10(r_max) - std::log10(r_min)) * i /
                                                   (n_radii - 1)));
    const ScalingFit fit = basin_scaling(p, cfg);

    std::string csv = "r,P\n";
    for (std::size_t i = 0; i < fit.radii.size(); ++i)
        csv += csv_line(std::array<double, 2>{fit.radii[i], fit.probability[i]});
    write_text_file(out_path(common, "scaling.csv"), csv);

    json j;
    j["subcommand"] = "basin-class";
    j["a"] = params_json(p);
    j["gamma"] = fit.gamma;
    j["P0"] = fit.P0;
    j["class"] = fit.basin_class;
    j["residual"] = fit.residual;
    j["centroid"] = {fit.centroid[0], fit.centroid[1], fit.centroid[2]};
    j["samples_per_radius"] = samples;
    j["csv"] = "scaling.csv";
    write_summary(common, j);
    return 0;
}

// ------------------------------------------------------------------ circuit

int run_circuit(const Common& common, double kappa, double capacitance, const std::string& rounding,
                double rail, double tau_end) {
    const Params p = common.params();
    RoundingPolicy policy = RoundingPolicy::floor_1k;
    if (rounding == "none") policy = RoundingPolicy::none;
    else if (rounding == "e24") policy = RoundingPolicy::e24;
    else if (rounding == "e96") policy = RoundingPolicy::e96;
    else if (rounding != "floor1k")
        throw std::invalid_argument("--rounding expects one of none|floor1k|e24|e96");

    ScaleSpec sc;
    sc.kappa = kappa;
    const CircuitRealization cr = synthesize(p, sc, capacitance, policy);
    write_text_file(out_path(common, "bom.txt"), bill_of_materials(cr));

    IntegratorConfig cfg;
    cfg.t_end = tau_end;
    cfg.transient = 0.0;
    const auto traj = integrate([&cr](const State3& w) { return circuit_field(cr, w); },
                                State3{1.0 / 3.0, -1.0, 0.0}, cfg);
    write_text_file(out_path(common, "circuit_trajectory.csv"), trajectory_csv(traj));

    const RangeReport range = dynamic_range(p, sc, rail);

    json j;
    j["subcommand"] = "circuit";
    j["a"] = params_json(p);
    j["kappa"] = cr.kappa;
    j["C_farad"] = cr.C;
    j["R_ohm"] = cr.R;
    j["rounding"] = to_string(cr.policy);
    j["R_ideal_ohm"] = cr.R_ideal;
    j["R_rounded_ohm"] = cr.R_rounded;
    j["inverted_square_unit"] = cr.invert_square_unit;
    j["realized"] = params_json(cr.realized);
    j["relative_error"] = cr.rel_error;
    j["rail_volts"] = rail;
    j["range_max_abs"] = range.max_abs;
    j["range_pass"] = range.pass;
    j["bom"] = "bom.txt";
    j["csv"] = "circuit_trajectory.csv";
    write_summary(common, j);
    return traj.terminal == Terminal::escaped ? kExitNumerical : 0;
}

// -------------------------------------------------------------------- robot

int run_robot(const Common& common, RobotConfig cfg, const std::vector<double>& ic, double t_end,
              bool gnuplot) {
    const Params p = common.params();
    const State6 s0{ic[0], ic[1], ic[2], ic[3], ic[4], ic[5]};
    const NavigationResult nav = simulate_navigation(p, cfg, s0, t_end);

    std::string csv = "t,x,y,z,X,Y,theta,v,mu,covered_fraction\n";
    std::size_t series_idx = 0;
    const auto& series = nav.coverage.fraction_series;
    double covered = 0.0;
    for (std::size_t i = 0; i < nav.trajectory.size(); ++i) {
        const double t = nav.trajectory.times[i];
        while (series_idx < series.size() && series[series_idx].first <= t)
            covered = series[series_idx++].second;
        const auto& s = nav.trajectory.states[i];
        csv += csv_line(std::array<double, 10>{t, s[0], s[1], s[2], s[3], s[4], s[5], nav.v[i],
                                               nav.mu[i], covered});
    }
    write_text_file(out_path(common, "robot.csv"), csv);
    write_text_file(out_path(common, "coverage_mask.txt"), nav.coverage.mask_text());

    if (gnuplot) {
        write_text_file(out_path(common, "robot_path.gp"),
                        "set datafile separator ','\nset xlabel 'X'\nset ylabel 'Y'\n"
                        "set size ratio -1\n"
                        "plot 'robot.csv' using 5:6 every ::1 with lines notitle\n");
    }

    json j;
    j["subcommand"] = "robot";
    j["a"] = params_json(p);
    j["ic"] = ic;
    j["t_end"] = t_end;
    j["x_max"] = nav.x_max_used;
    j["coverage"] = nav.coverage.final_fraction;
    j["terminal"] = terminal_name(nav.trajectory.terminal);
    j["csv"] = "robot.csv";
    j["mask"] = "coverage_mask.txt";
    write_summary(common, j);
    return nav.trajectory.terminal == Terminal::escaped ? kExitNumerical : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"analysis bench for a 3-D quadratic chaotic flow: trajectories, equilibria, "
                 "Lyapunov spectra, bifurcation, basins, circuit synthesis, robot navigation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file");
    app.allow_config_extras(false);

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "integrate the flow and export the trajectory");
    add_common(c_sim, sim.common);
    c_sim->add_option("--ic", sim.ic, "initial state x,y,z")->expected(3)->delimiter(',');
    c_sim->add_option("--t-end", sim.t_end, "integration horizon")->capture_default_str();
    c_sim->add_option("--transient", sim.transient, "discard samples before this time")
        ->capture_default_str();
    c_sim->add_option("--step", sim.step, "fixed or initial step")->capture_default_str();
    c_sim->add_option("--max-step", sim.max_step, "adaptive step ceiling")->capture_default_str();
    c_sim->add_option("--rel-tol", sim.rel_tol, "relative tolerance")->capture_default_str();
    c_sim->add_option("--abs-tol", sim.abs_tol, "absolute tolerance")->capture_default_str();
    c_sim->add_flag("--fixed", sim.fixed, "classical RK4 with the exact step");
    c_sim->add_flag("--gnuplot", sim.gnuplot, "emit a phase-portrait plot script");

    Common eq_common;
    double eq_start = -0.5, eq_end = 1.5;
    int eq_points = 0;
    auto* c_eq = app.add_subcommand("equilibria", "closed-form equilibria and their stability");
    add_common(c_eq, eq_common);
    c_eq->add_option("--sweep-start", eq_start, "a8 sweep start")->capture_default_str();
    c_eq->add_option("--sweep-end", eq_end, "a8 sweep end")->capture_default_str();
    c_eq->add_option("--sweep-points", eq_points, "a8 sweep points (0: current a8 only)")
        ->capture_default_str();

    Common ly_common;
    std::vector<double> ly_ic{0.1001, 0.1003, 0.1003};
    double ly_step = 0.01, ly_transient = 100.0;
    std::int64_t ly_iters = 1'000'000;
    bool ly_gnuplot = false;
    auto* c_ly = app.add_subcommand("lyapunov", "finite-time Lyapunov spectrum and dimension");
    add_common(c_ly, ly_common);
    c_ly->add_option("--ic", ly_ic, "initial state x,y,z")->expected(3)->delimiter(',');
    c_ly->add_option("--step", ly_step, "integration step")->capture_default_str();
    c_ly->add_option("--iterations", ly_iters, "accumulation steps")->capture_default_str();
    c_ly->add_option("--transient", ly_transient, "settle time before accumulating")
        ->capture_default_str();
    c_ly->add_flag("--gnuplot", ly_gnuplot, "emit a convergence plot script");

    Common bf_common;
    SweepConfig bf_cfg;
    std::vector<double> bf_ic{-2.1441, -0.3086, 0.1113};
    std::string bf_direction = "forward", bf_policy = "continued", bf_reset = "none";
    bool bf_lyap = false, bf_gnuplot = false;
    auto* c_bf = app.add_subcommand("bifurcate", "local-maxima scatter over an a8 sweep");
    add_common(c_bf, bf_common);
    c_bf->add_option("--start", bf_cfg.a8_start, "sweep start")->capture_default_str();
    c_bf->add_option("--end", bf_cfg.a8_end, "sweep end")->capture_default_str();
    c_bf->add_option("--points", bf_cfg.n_points, "grid points")->capture_default_str();
    c_bf->add_option("--ic", bf_ic, "seed state x,y,z")->expected(3)->delimiter(',');
    c_bf->add_option("--direction", bf_direction, "forward|backward")->capture_default_str();
    c_bf->add_option("--policy", bf_policy, "continued|fixed seeding")->capture_default_str();
    c_bf->add_option("--sign-reset", bf_reset, "none|negative|positive branch pin at a8=0+")
        ->capture_default_str();
    c_bf->add_option("--t-end", bf_cfg.t_end, "per-point horizon")->capture_default_str();
    c_bf->add_option("--transient", bf_cfg.transient, "per-point transient")->capture_default_str();
    c_bf->add_option("--step", bf_cfg.step, "fixed step")->capture_default_str();
    c_bf->add_flag("--with-lyapunov", bf_lyap, "write the companion a8,L1 mask");
    c_bf->add_flag("--gnuplot", bf_gnuplot, "emit a scatter plot script");

    Common bs_common;
    BasinGridSpec bs_spec;
    ClassifierConfig bs_ccfg;
    bool bs_section_plane = false;
    auto* c_bs = app.add_subcommand("basin", "attractor labels over a plane of initial states");
    add_common(c_bs, bs_common);
    c_bs->add_option("--x-min", bs_spec.x_min)->capture_default_str();
    c_bs->add_option("--x-max", bs_spec.x_max)->capture_default_str();
    c_bs->add_option("--y-min", bs_spec.y_min)->capture_default_str();
    c_bs->add_option("--y-max", bs_spec.y_max)->capture_default_str();
    c_bs->add_option("--nx", bs_spec.nx, "grid columns")->capture_default_str();
    c_bs->add_option("--ny", bs_spec.ny, "grid rows")->capture_default_str();
    c_bs->add_option("--z-level", bs_spec.z_level, "plane height")->capture_default_str();
    c_bs->add_flag("--section-plane", bs_section_plane,
                   "place the grid in the section plane z = r- instead");
    c_bs->add_option("--t-max", bs_ccfg.t_max, "classification budget")->capture_default_str();
    c_bs->add_option("--n-crossings", bs_ccfg.n_crossings, "consistent crossings required")
        ->capture_default_str();

    Common bc_common;
    double bc_rmin = 10.0, bc_rmax = 1e6;
    int bc_nradii = 11, bc_samples = 1000;
    bool bc_exclude_fp = false;
    auto* c_bc = app.add_subcommand("basin-class", "power-law size classification of the basin");
    add_common(c_bc, bc_common);
    c_bc->add_option("--radii-min", bc_rmin)->capture_default_str();
    c_bc->add_option("--radii-max", bc_rmax)->capture_default_str();
    c_bc->add_option("--radii-count", bc_nradii)->capture_default_str();
    c_bc->add_option("--samples", bc_samples, "initial conditions per radius")
        ->capture_default_str();
    c_bc->add_flag("--exclude-fixed-points", bc_exclude_fp,
                   "count only chaotic hits as in-basin");

    Common cc_common;
    double cc_kappa = 1000.0, cc_cap = 1e-9, cc_rail = 10.0, cc_tau = 100.0;
    std::string cc_rounding = "floor1k";
    auto* c_cc = app.add_subcommand("circuit", "resistor synthesis of the scaled flow");
    add_common(c_cc, cc_common);
    c_cc->add_option("--kappa", cc_kappa, "time scale 1/(R C)")->capture_default_str();
    c_cc->add_option("--capacitance", cc_cap, "integrator capacitance, farads")
        ->capture_default_str();
    c_cc->add_option("--rounding", cc_rounding, "none|floor1k|e24|e96")->capture_default_str();
    c_cc->add_option("--rail", cc_rail, "supply rail for the range check, volts")
        ->capture_default_str();
    c_cc->add_option("--tau-end", cc_tau, "circuit trajectory horizon in tau")
        ->capture_default_str();

    Common rb_common;
    RobotConfig rb_cfg;
    std::vector<double> rb_ic{0.1, -0.1, 0.0, 0.0, 0.0, 0.0};
    double rb_tend = 500.0;
    bool rb_open = false, rb_gnuplot = false;
    auto* c_rb = app.add_subcommand("robot", "chaos-driven differential-drive navigation");
    add_common(c_rb, rb_common);
    c_rb->add_option("--ic", rb_ic, "initial x,y,z,X,Y,theta")->expected(6)->delimiter(',');
    c_rb->add_option("--t-end", rb_tend, "simulation horizon")->capture_default_str();
    c_rb->add_option("--step", rb_cfg.step, "fixed step")->capture_default_str();
    c_rb->add_option("--wheel-separation", rb_cfg.wheel_separation)->capture_default_str();
    c_rb->add_option("--x-max", rb_cfg.x_max, "drive wrap bound (0: calibrate)")
        ->capture_default_str();
    c_rb->add_option("--cells", rb_cfg.cells_x, "coverage cells per axis")->capture_default_str();
    c_rb->add_flag("--no-boundary", rb_open, "disable the no-motion workspace rule");
    c_rb->add_flag("--gnuplot", rb_gnuplot, "emit a path plot script");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (c_sim->parsed()) return run_simulate(sim);
        if (c_eq->parsed()) return run_equilibria(eq_common, eq_start, eq_end, eq_points);
        if (c_ly->parsed())
            return run_lyapunov(ly_common, ly_ic, ly_step, ly_iters, ly_transient, ly_gnuplot);
        if (c_bf->parsed()) {
            bf_cfg.initial = {bf_ic[0], bf_ic[1], bf_ic[2]};
            if (bf_direction == "backward") bf_cfg.direction = SweepConfig::Direction::backward;
            else if (bf_direction != "forward")
                throw std::invalid_argument("--direction expects forward|backward");
            if (bf_policy == "fixed") bf_cfg.ic_policy = SweepConfig::IcPolicy::fixed;
            else if (bf_policy != "continued")
                throw std::invalid_argument("--policy expects continued|fixed");
            if (bf_reset == "negative") bf_cfg.sign_reset = SweepConfig::SignReset::to_negative;
            else if (bf_reset == "positive") bf_cfg.sign_reset = SweepConfig::SignReset::to_positive;
            else if (bf_reset != "none")
                throw std::invalid_argument("--sign-reset expects none|negative|positive");
            return run_bifurcate(bf_common, bf_cfg, bf_lyap, bf_gnuplot);
        }
        if (c_bs->parsed()) return run_basin(bs_common, bs_spec, bs_ccfg, bs_section_plane);
        if (c_bc->parsed())
            return run_basin_class(bc_common, bc_rmin, bc_rmax, bc_nradii, bc_samples,
                                   !bc_exclude_fp);
        if (c_cc->parsed())
            return run_circuit(cc_common, cc_kappa, cc_cap, cc_rounding, cc_rail, cc_tau);
        if (c_rb->parsed()) {
            if (rb_open) rb_cfg.boundary = RobotConfig::BoundaryRule::none;
            rb_cfg.cells_y = rb_cfg.cells_x;
            return run_robot(rb_common, rb_cfg, rb_ic, rb_tend, rb_gnuplot);
        }
    } catch (const StepUnderflow& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    }
    return 0;
}
