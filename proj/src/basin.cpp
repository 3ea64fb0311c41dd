#include "chaoslab/basin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <stdexcept>

#include "chaoslab/integrate.hpp"
#include "chaoslab/io.hpp"
#include "chaoslab/parallel.hpp"

namespace chaoslab {

const char* to_string(AttractorLabel l) {
    switch (l) {
        case AttractorLabel::chaotic1: return "chaotic-1";
        case AttractorLabel::chaotic2: return "chaotic-2";
        case AttractorLabel::fixed_point1: return "fixed-point-1";
        case AttractorLabel::fixed_point2: return "fixed-point-2";
        case AttractorLabel::escaped: return "escaped";
        case AttractorLabel::undecided: return "undecided";
    }
    return "?";
}

AttractorLabel mirror(AttractorLabel l) {
    switch (l) {
        case AttractorLabel::chaotic1: return AttractorLabel::chaotic2;
        case AttractorLabel::chaotic2: return AttractorLabel::chaotic1;
        case AttractorLabel::fixed_point1: return AttractorLabel::fixed_point2;
        case AttractorLabel::fixed_point2: return AttractorLabel::fixed_point1;
        default: return l;
    }
}

void ClassifierConfig::validate() const {
    if (!(fp_radius > 0.0) || !(fp_dwell >= 0.0))
        throw std::invalid_argument("classifier: need fp_radius > 0 and fp_dwell >= 0");
    if (n_crossings < 1) throw std::invalid_argument("classifier: need n_crossings >= 1");
    if (!(t_max > transient)) throw std::invalid_argument("classifier: need t_max > transient");
    if (!(escape_radius > 0.0)) throw std::invalid_argument("classifier: need escape_radius > 0");
    if (!(step > 0.0) || !(step <= max_step))
        throw std::invalid_argument("classifier: need 0 < step <= max_step");
}

ClassifierContext make_classifier_context(const Params& p) {
    ClassifierContext ctx;
    const EquilibriumSet set = equilibria(p);
    if (!set.branch_real)
        throw std::invalid_argument("classifier: nonzero-x equilibria are complex, no section plane");
    ctx.plane_z = set.r_minus;
    for (const Equilibrium& e : attracting_equilibria(p)) ctx.attracting.push_back(e.point);
    return ctx;
}

namespace {

double dist3(const State3& a, const State3& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

} // namespace

AttractorLabel classify_ic(const Params& p, const State3& s0, const ClassifierConfig& cfg,
                           const ClassifierContext& ctx) {
    cfg.validate();

    IntegratorConfig integ;
    integ.step = cfg.step;
    integ.max_step = cfg.max_step;
    integ.rel_tol = cfg.rel_tol;
    integ.abs_tol = cfg.abs_tol;
    integ.t_end = cfg.t_max;
    integ.escape_radius = cfg.escape_radius;

    auto field = [&p](const State3& s) { return vector_field(p, s); };
    Dopri45<3, decltype(field)> stepper(field, integ);

    std::vector<double> inside_since(ctx.attracting.size(), -1.0);
    int streak = 0;
    int streak_sign = 0;

    double t = 0.0;
    State3 s = s0;
    if (!detail::finite(s)) return AttractorLabel::escaped;

    State3 prev = s;

    while (t < cfg.t_max) {
        double tn;
        State3 sn;
        try {
            auto r = stepper.step(t, s, cfg.t_max);
            tn = r.t;
            sn = r.y;
        } catch (const StepUnderflow&) {
            return AttractorLabel::escaped;
        }
        if (!detail::finite(sn) || detail::norm(sn) > cfg.escape_radius)
            return AttractorLabel::escaped;

        // Dwell near an attracting equilibrium.
        for (std::size_t k = 0; k < ctx.attracting.size(); ++k) {
            if (dist3(sn, ctx.attracting[k]) <= cfg.fp_radius) {
                if (inside_since[k] < 0.0) inside_since[k] = tn;
                if (tn - inside_since[k] >= cfg.fp_dwell)
                    return ctx.attracting[k][0] < 0.0 ? AttractorLabel::fixed_point1
                                                      : AttractorLabel::fixed_point2;
            } else {
                inside_since[k] = -1.0;
            }
        }

        // Same-sign run of section crossings, ignoring crossings close to an
        // attracting point (spirals into an in-plane equilibrium cross too).
        if (tn >= cfg.transient) {
            const double a = prev[2], b = sn[2];
            if ((a < ctx.plane_z && b >= ctx.plane_z) || (a > ctx.plane_z && b <= ctx.plane_z)) {
                const double frac = (ctx.plane_z - a) / (b - a);
                State3 cross;
                for (int c = 0; c < 3; ++c) cross[c] = prev[c] + frac * (sn[c] - prev[c]);
                bool excluded = false;
                for (const State3& fp : ctx.attracting)
                    if (dist3(cross, fp) <= cfg.fp_exclusion) excluded = true;
                if (!excluded && cross[0] != 0.0) {
                    const int sign = cross[0] > 0.0 ? 1 : -1;
                    streak = (sign == streak_sign) ? streak + 1 : 1;
                    streak_sign = sign;
                    if (streak >= cfg.n_crossings)
                        return sign < 0 ? AttractorLabel::chaotic1 : AttractorLabel::chaotic2;
                }
            }
        }
        prev = sn;
        t = tn;
        s = sn;
    }
    return AttractorLabel::undecided;
}

double BasinGrid::cell_x(int ix) const {
    return spec.x_min + (spec.x_max - spec.x_min) * (ix + 0.5) / spec.nx;
}

double BasinGrid::cell_y(int iy) const {
    return spec.y_min + (spec.y_max - spec.y_min) * (iy + 0.5) / spec.ny;
}

std::array<std::size_t, 6> BasinGrid::counts() const {
    std::array<std::size_t, 6> n{};
    for (AttractorLabel l : labels) ++n[static_cast<std::size_t>(l)];
    return n;
}

double BasinGrid::labeled_fraction() const {
    const auto n = counts();
    const std::size_t hit = n[0] + n[1] + n[2] + n[3];
    return static_cast<double>(hit) / static_cast<double>(labels.size());
}

BasinGrid basin_grid(const Params& p, const BasinGridSpec& spec, const ClassifierConfig& cfg,
                     int threads) {
    if (spec.nx < 1 || spec.ny < 1) throw std::invalid_argument("basin_grid: empty grid");
    cfg.validate();

    BasinGrid grid;
    grid.spec = spec;
    grid.z_level = std::isnan(spec.z_level) ? make_classifier_context(p).plane_z : spec.z_level;
    grid.labels.assign(static_cast<std::size_t>(spec.nx) * spec.ny, AttractorLabel::undecided);

    const ClassifierContext ctx = make_classifier_context(p);
    parallel_for(grid.labels.size(), threads, [&](std::size_t idx) {
        const int ix = static_cast<int>(idx % static_cast<std::size_t>(spec.nx));
        const int iy = static_cast<int>(idx / static_cast<std::size_t>(spec.nx));
        const State3 s0{grid.cell_x(ix), grid.cell_y(iy), grid.z_level};
        grid.labels[idx] = classify_ic(p, s0, cfg, ctx);
    });
    return grid;
}

std::string basin_csv(const BasinGrid& grid) {
    std::string out = "x0,y0,label\n";
    for (int iy = 0; iy < grid.spec.ny; ++iy)
        for (int ix = 0; ix < grid.spec.nx; ++ix) {
            out += format_full(grid.cell_x(ix));
            out += ',';
            out += format_full(grid.cell_y(iy));
            out += ',';
            out += to_string(grid.at(ix, iy));
            out += '\n';
        }
    return out;
}

std::string basin_ppm(const BasinGrid& grid) {
    // Colors follow the usual basin-map convention: green/red chaotic
    // branches, magenta/blue fixed-point islands, white escapes.
    static constexpr unsigned char palette[6][3] = {
        {0, 158, 64},    // chaotic-1
        {214, 40, 40},   // chaotic-2
        {232, 62, 232},  // fixed-point-1
        {56, 86, 232},   // fixed-point-2
        {255, 255, 255}, // escaped
        {170, 170, 170}, // undecided
    };
    std::string out = "P6\n" + std::to_string(grid.spec.nx) + " " + std::to_string(grid.spec.ny) +
                      "\n255\n";
    out.reserve(out.size() + grid.labels.size() * 3);
    // Image rows top-to-bottom correspond to decreasing y.
    for (int iy = grid.spec.ny - 1; iy >= 0; --iy)
        for (int ix = 0; ix < grid.spec.nx; ++ix) {
            const auto& c = palette[static_cast<std::size_t>(grid.at(ix, iy))];
            out.push_back(static_cast<char>(c[0]));
            out.push_back(static_cast<char>(c[1]));
            out.push_back(static_cast<char>(c[2]));
        }
    return out;
}

int basin_class(double gamma, double P0, double dim) {
    constexpr double gamma_zero = 5e-3; // below this the decay is flat
    constexpr double p0_one = 0.05;
    constexpr double gamma_dim = 0.5;
    if (gamma <= gamma_zero) return P0 >= 1.0 - p0_one ? 1 : 2;
    if (gamma >= dim - gamma_dim) return 4;
    return 3;
}

std::vector<double> ScalingConfig::default_radii() {
    // Two radii per decade over 10^1..10^6.
    std::vector<double> r;
    for (double e = 1.0; e <= 6.0 + 1e-9; e += 0.5) r.push_back(std::pow(10.0, e));
    return r;
}

State3 attractor_centroid(const Params& p, const State3& s0) {
    IntegratorConfig cfg;
    cfg.mode = IntegratorConfig::Mode::fixed;
    cfg.step = 0.01;
    cfg.max_step = 0.01;
    cfg.t_end = 550.0;
    cfg.transient = 50.0;
    const Trajectory<3> traj =
        integrate([&p](const State3& s) { return vector_field(p, s); }, s0, cfg);
    if (traj.terminal == Terminal::escaped || traj.empty())
        throw std::runtime_error("attractor_centroid: reference trajectory escaped");
    State3 mean{};
    for (const State3& s : traj.states)
        for (int c = 0; c < 3; ++c) mean[c] += s[c];
    for (int c = 0; c < 3; ++c) mean[c] /= static_cast<double>(traj.size());
    return mean;
}

void fit_power_law(const std::vector<double>& radii, const std::vector<double>& prob,
                   double& gamma, double& P0, double& residual) {
    if (radii.size() != prob.size()) throw std::invalid_argument("fit: size mismatch");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (prob[i] > 0.0) {
            lx.push_back(std::log(radii[i]));
            ly.push_back(std::log(prob[i]));
        }
    }
    if (lx.size() < 3)
        throw std::runtime_error("fit: fewer than 3 radii with nonzero in-basin probability");
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::runtime_error("fit: degenerate abscissas");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    gamma = -slope;
    P0 = std::exp(intercept);
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double e = ly[i] - (intercept + slope * lx[i]);
        ss += e * e;
    }
    residual = std::sqrt(ss / n);
}

ScalingFit basin_scaling(const Params& p, const ScalingConfig& cfg) {
    if (cfg.samples_per_radius < 100)
        throw std::invalid_argument("basin_scaling: need samples_per_radius >= 100");
    std::vector<double> radii = cfg.radii.empty() ? ScalingConfig::default_radii() : cfg.radii;
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::invalid_argument("basin_scaling: radii must be strictly increasing");
    if (!radii.empty() && !(radii.front() > 0.0))
        throw std::invalid_argument("basin_scaling: radii must be positive");

    ScalingFit fit;
    fit.radii = radii;
    fit.centroid = attractor_centroid(p);
    fit.probability.assign(radii.size(), 0.0);

    const ClassifierContext ctx = make_classifier_context(p);

    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
        const double r = radii[ri];
        ClassifierConfig ccfg = cfg.classifier;
        // "Escaped" must mean leaving the attractor's neighborhood by a wide
        // margin even when the IC itself starts far out.
        ccfg.escape_radius = std::max(ccfg.escape_radius, 1e3 * r);

        const std::size_t n = static_cast<std::size_t>(cfg.samples_per_radius);
        std::vector<std::uint8_t> in_basin(n, 0);
        parallel_for(n, cfg.threads, [&](std::size_t si) {
            SplitMix64 rng(mix_seed(cfg.seed, ri * 1000003ull + si));
            // Uniform direction: normalized Gaussian triple via Box-Muller.
            double d[3];
            for (;;) {
                const double u1 = rng.uniform_pos(), u2 = rng.uniform();
                const double u3 = rng.uniform_pos(), u4 = rng.uniform();
                const double g0 = std::sqrt(-2.0 * std::log(u1));
                const double g1 = std::sqrt(-2.0 * std::log(u3));
                d[0] = g0 * std::cos(2.0 * std::numbers::pi * u2);
                d[1] = g0 * std::sin(2.0 * std::numbers::pi * u2);
                d[2] = g1 * std::cos(2.0 * std::numbers::pi * u4);
                const double nrm = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
                if (nrm > 1e-12) {
                    d[0] /= nrm;
                    d[1] /= nrm;
                    d[2] /= nrm;
                    break;
                }
            }
            const State3 s0{fit.centroid[0] + r * d[0], fit.centroid[1] + r * d[1],
                            fit.centroid[2] + r * d[2]};
            const AttractorLabel label = classify_ic(p, s0, ccfg, ctx);
            const bool chaotic =
                label == AttractorLabel::chaotic1 || label == AttractorLabel::chaotic2;
            const bool fixed =
                label == AttractorLabel::fixed_point1 || label == AttractorLabel::fixed_point2;
            in_basin[si] = chaotic || (cfg.count_fixed_points && fixed);
        });
        std::size_t hits = 0;
        for (std::uint8_t b : in_basin) hits += b;
        fit.probability[ri] = static_cast<double>(hits) / static_cast<double>(n);
    }

    fit_power_law(fit.radii, fit.probability, fit.gamma, fit.P0, fit.residual);
    fit.basin_class = basin_class(fit.gamma, fit.P0);
    return fit;
}

} // namespace chaoslab
