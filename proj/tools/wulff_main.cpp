// Command-line front end: norm checks, Wulff constants, rearrangement and
// symmetrization pipelines, the verification harness, the torsion
// comparisons, and the fixture generator.

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "wulff/anisotropy.hpp"
#include "wulff/error.hpp"
#include "wulff/fields.hpp"
#include "wulff/rearrange.hpp"
#include "wulff/report.hpp"
#include "wulff/svg.hpp"
#include "wulff/torsion.hpp"
#include "wulff/variation.hpp"

namespace {

using namespace wulff;

struct GlobalOptions {
    int resolution = 0; // 0 = per-operation default
    std::uint64_t seed = 12345;
    double tol_scale = 1.0;
};

void finish_report(Report& rep, const std::string& path) {
    if (!path.empty())
        rep.write(path);
    else
        rep.print();
}

// ---------------------------------------------------------------------------
// norm-check

int cmd_norm_check(const GlobalOptions& g, const std::string& norm_text, int samples, double tol,
                   const std::string& report_path) {
    const AnisotropicNorm norm(NormSpec::parse(norm_text));
    const int n = norm.dimension();
    Report rep;
    rep.kv("command", std::string("norm-check"));
    rep.kv("norm", norm.spec().describe());
    rep.kv("samples", static_cast<long>(samples));
    rep.kv("smooth", norm.smooth() ? std::string("yes") : std::string("no"));
    const auto [alpha, beta] = norm.bounds();
    rep.kv("alpha", alpha);
    rep.kv("beta", beta);

    std::mt19937_64 rng(g.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> scale(-3.0, 3.0);
    std::vector<double> xi(n), eta(n), sum(n);
    const auto draw = [&](std::vector<double>& v) {
        double len = 0.0;
        do {
            for (auto& c : v) c = gauss(rng);
            len = 0.0;
            for (double c : v) len += c * c;
        } while (len < 1e-12);
    };

    double dev_hom = 0.0, dev_tri = 0.0, dev_bounds = 0.0, dev_euler = 0.0, dev_bidual = 0.0;
    // Numeric bidual: polar of the polar over a dense direction fan (n = 2)
    // or sampled sphere (n = 3).
    const int fan = n == 2 ? 4096 : 20000;
    std::vector<std::vector<double>> dirs;
    dirs.reserve(fan);
    if (n == 2) {
        for (int k = 0; k < fan; ++k) {
            const double th = 2.0 * M_PI * k / fan;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    } else {
        std::mt19937_64 rng2(g.seed + 1);
        std::normal_distribution<double> gg(0.0, 1.0);
        for (int k = 0; k < fan; ++k) {
            std::vector<double> d(n);
            double len = 0.0;
            for (auto& c : d) { c = gg(rng2); len += c * c; }
            len = std::sqrt(len);
            for (auto& c : d) c /= len;
            dirs.push_back(std::move(d));
        }
    }
    const auto numeric_bidual = [&](std::span<const double> x) {
        double best = 0.0;
        for (const auto& d : dirs) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += d[i] * x[i];
            const double hp = norm.polar(d);
            if (hp > 0.0) best = std::max(best, dot / hp);
        }
        return best;
    };

    for (int s = 0; s < samples; ++s) {
        draw(xi);
        draw(eta);
        const double t = scale(rng);
        const double hx = norm.value(xi), he = norm.value(eta);
        std::vector<double> txi(n);
        for (int i = 0; i < n; ++i) {
            txi[i] = t * xi[i];
            sum[i] = xi[i] + eta[i];
        }
        dev_hom = std::max(dev_hom,
                           std::abs(norm.value(txi) - std::abs(t) * hx) / (hx * (1.0 + std::abs(t))));
        dev_tri = std::max(dev_tri, (norm.value(sum) - hx - he) / (hx + he));
        double len = 0.0;
        for (double c : xi) len += c * c;
        len = std::sqrt(len);
        dev_bounds = std::max({dev_bounds, alpha * len - hx, hx - beta * len});
        if (norm.smooth()) {
            const auto grad = norm.gradient(xi);
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += grad[i] * xi[i];
            dev_euler = std::max(dev_euler, std::abs(dot - hx) / hx);
        }
        if (s < 64) // bidual sampling is the expensive part
            dev_bidual = std::max(dev_bidual, std::abs(numeric_bidual(xi) - hx) / hx);
    }
    rep.check("homogeneity", dev_hom, 0.0, 1e-12, dev_hom <= 1e-12);
    rep.check("triangle-inequality", dev_tri, 0.0, 1e-12, dev_tri <= 1e-12);
    rep.check("norm-bounds", dev_bounds, 0.0, 1e-9, dev_bounds <= 1e-9);
    const double bidual_tol = 1e-3 * g.tol_scale;
    rep.check("bidual", dev_bidual, 0.0, bidual_tol, dev_bidual <= bidual_tol);
    if (norm.smooth()) {
        rep.check("euler-identity", dev_euler, 0.0, tol, dev_euler <= tol);
        const DualityReport dual = verify_duality_identities(norm, samples, tol, g.seed);
        rep.check("duality-polar-of-grad", dual.max_dev_polar_of_grad, 0.0, tol,
                  dual.max_dev_polar_of_grad <= tol);
        rep.check("duality-norm-of-polar-grad", dual.max_dev_norm_of_polar_grad, 0.0, tol,
                  dual.max_dev_norm_of_polar_grad <= tol);
        rep.check("duality-inversion", dual.max_dev_inversion, 0.0, tol,
                  dual.max_dev_inversion <= tol);
    } else {
        rep.kv("duality", std::string("skipped-nonsmooth"));
    }
    finish_report(rep, report_path);
    return rep.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// wulff

int cmd_wulff(const GlobalOptions& g, const std::string& norm_text, double radius,
              const std::string& svg_path, const std::string& report_path) {
    const AnisotropicNorm norm(NormSpec::parse(norm_text));
    const WulffGeometry geom = wulff_constant(norm, g.resolution);
    Report rep;
    rep.kv("command", std::string("wulff"));
    rep.kv("norm", norm.spec().describe());
    rep.kv("dimension", static_cast<long>(geom.dimension));
    rep.kv("resolution", static_cast<long>(geom.quadrature_resolution));
    rep.kv("kappa", geom.kappa_n);
    rep.kv("kappa-error-estimate", geom.kappa_error_estimate);
    rep.kv("radius", radius);
    rep.kv("perimeter", wulff_perimeter(geom, radius));
    const auto [alpha, beta] = norm.bounds();
    rep.kv("alpha", alpha);
    rep.kv("beta", beta);
    if (!svg_path.empty() && norm.dimension() == 2)
        emit_shape_svg(wulff_boundary(norm, radius), svg_path);
    finish_report(rep, report_path);
    return 0;
}

// ---------------------------------------------------------------------------
// profile output

void write_profile_file(const std::vector<Vec2>& samples, double c0, double omega,
                        const std::string& path) {
    Report out;
    for (const auto& p : samples) out.kv(format_double(p[0]), p[1]);
    out.kv("c0", c0);
    out.kv("omega", omega);
    out.write(path);
}

std::vector<Vec2> staircase_samples(const StaircaseProfile& prof, double trailing) {
    std::vector<Vec2> pts;
    pts.reserve(prof.breaks().size());
    for (std::size_t i = 0; i < prof.pieces(); ++i)
        pts.push_back({prof.breaks()[i], prof.piece_values()[i]});
    pts.push_back({prof.domain(), trailing});
    return pts;
}

int cmd_rearrange(const std::string& field_path, const std::string& direction,
                  const std::string& out_path, const std::string& svg_path) {
    const GridField field = load_field(field_path);
    StaircaseProfile prof = decreasing_rearrangement(field);
    if (direction == "increasing") prof = prof.reflected();
    else if (direction != "decreasing")
        throw_error("config:out-of-range", "direction must be decreasing or increasing");
    const auto samples = staircase_samples(
        prof, direction == "increasing" ? prof.piece_values().back() : 0.0);
    write_profile_file(samples, 0.0, prof.domain(), out_path);
    if (!svg_path.empty()) emit_profile_svg(samples, svg_path);
    return 0;
}

int cmd_symmetrize(const GlobalOptions& g, const std::string& field_path,
                   const std::string& jumps_path, const std::string& norm_text,
                   double extra_singular_mass, const std::string& out_path,
                   const std::string& svg_path, const std::string& report_path) {
    const AnisotropicNorm norm(NormSpec::parse(norm_text));
    const WulffGeometry geom = wulff_constant(norm, g.resolution);
    BVComposite u;
    u.ac = load_field(field_path);
    if (!jumps_path.empty()) u.jumps = load_jumps(jumps_path);
    if (!(extra_singular_mass >= 0.0))
        throw_error("domain:negative-measure", "--singular-mass must be nonnegative");

    const StaircaseProfile gstar = gradient_staircase_of(u, norm);
    const double mass = singular_mass(u.jumps, norm) + extra_singular_mass;
    const SymmetrizedFunction star =
        gradient_symmetrization(gstar, mass, u.ac.omega_measure(), norm, geom);

    const GradientProfile& prof = star.gradient_profile();
    std::vector<Vec2> samples;
    const auto& breaks = star.gradient_profile().gradient_staircase().breaks();
    samples.reserve(breaks.size());
    for (double s : breaks) samples.push_back({s, prof.eval(s)});
    write_profile_file(samples, star.boundary_value(), star.omega(), out_path);
    if (!svg_path.empty()) emit_profile_svg(samples, svg_path);

    if (!report_path.empty()) {
        Report rep;
        rep.kv("command", std::string("symmetrize"));
        rep.kv("norm", norm.spec().describe());
        rep.kv("omega", star.omega());
        rep.kv("wulff-radius", star.radius());
        rep.kv("c0", star.boundary_value());
        rep.kv("singular-mass", mass);
        rep.kv("l1-ustar", star.l1_norm());
        rep.kv("tv-ustar", star.gradient_energy(1.0) +
                               star.boundary_value() * wulff_perimeter(geom, star.radius()));
        rep.write(report_path);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const GlobalOptions& g, const std::string& field_path,
               const std::string& jumps_path, const std::string& norm_text, int levels,
               int truncation_samples, const std::string& report_path,
               const std::string& svg_path) {
    const AnisotropicNorm norm(NormSpec::parse(norm_text));
    const WulffGeometry geom = wulff_constant(norm, g.resolution);
    BVComposite u;
    u.ac = load_field(field_path);
    if (!jumps_path.empty()) u.jumps = load_jumps(jumps_path);
    u.ac.validate_nonnegative();

    Report rep;
    rep.kv("command", std::string("verify"));
    rep.kv("norm", norm.spec().describe());
    rep.kv("field", field_path);
    rep.kv("kappa", geom.kappa_n);

    VerifyOptions opts;
    opts.check_grid_resample = true;
    opts.check_coarea = u.jumps.empty();
    opts.coarea_levels = levels;
    opts.tol_scale = g.tol_scale;
    const VariationReport main = verify_main_theorem(u, norm, geom, opts);
    rep.kv("omega", u.ac.omega_measure());
    rep.kv("h", u.ac.h);
    rep.kv("ac-tv", main.ac_tv);
    rep.kv("singular-tv", main.singular_tv);
    rep.kv("total-tv", main.total_tv);
    rep.kv("l1-u", main.l1_u);
    rep.kv("l1-ustar", main.l1_ustar);
    rep.kv("tv-ustar", main.tv_ustar);
    if (std::isfinite(main.coarea_tv)) rep.kv("coarea-tv", main.coarea_tv);
    for (const auto& c : main.checks) rep.check(c.name, c.lhs, c.rhs, c.tol, c.pass);

    // Truncation functional G at sampled thresholds.
    const double omega = u.ac.omega_measure();
    const double tv = main.total_tv;
    const double h = u.ac.h;
    double prev_g = -1.0;
    for (int j = 1; j <= truncation_samples; ++j) {
        const double s = omega * j / truncation_samples;
        const TruncationVariation G = truncation_variation(u, norm, s, levels);
        const double tol_G = (0.05 * std::max(G.direct, G.level_integral) + 10.0 * h * tv) *
                             g.tol_scale;
        const std::string tag = std::to_string(j);
        rep.check("G-two-routes-" + tag, std::abs(G.direct - G.level_integral), 0.0, tol_G,
                  std::abs(G.direct - G.level_integral) <= tol_G);
        const double g1 = compute_GH1(u, norm, s);
        const double g2 = compute_GH2(u, norm, s);
        rep.check("G-decomposition-" + tag, std::abs(G.direct - g1 - g2), 0.0, tol_G,
                  std::abs(G.direct - g1 - g2) <= tol_G);
        const double theta = decreasing_rearrangement(u.ac).threshold(s);
        const double K = iso_profile_integral(u.ac, geom, theta, levels);
        rep.check("K-below-G-" + tag, K, G.level_integral, tol_G, K <= G.level_integral + tol_G);
        rep.check("G-monotone-" + tag, prev_g, G.direct, tol_G, prev_g <= G.direct + tol_G);
        prev_g = G.direct;
    }
    const double g2_total = compute_GH2(u, norm, omega);
    rep.check("G2-total-mass", std::abs(g2_total - main.singular_tv), 0.0,
              1e-9 * (1.0 + main.singular_tv),
              std::abs(g2_total - main.singular_tv) <= 1e-9 * (1.0 + main.singular_tv));

    // Isoperimetric deficit of the domain mask.
    const double ph_mask = anisotropic_perimeter_mask(u.ac, norm);
    const double deficit = isoperimetric_deficit(u.ac, norm, geom);
    const double tol_iso = 0.03 * ph_mask * g.tol_scale;
    rep.check("isoperimetric-mask", -deficit, 0.0, tol_iso, -deficit <= tol_iso);

    // Bounds sandwich on extracted level sets.
    const auto [alpha, beta] = norm.bounds();
    const double top = u.ac.max_abs();
    double sandwich_dev = 0.0;
    for (int k = 1; k <= 5; ++k) {
        const auto ls = superlevel_geometry(u.ac, norm, top * k / 6.0);
        sandwich_dev = std::max({sandwich_dev, alpha * ls.perimeter_euclid - ls.perimeter_H,
                                 ls.perimeter_H - beta * ls.perimeter_euclid});
    }
    rep.check("perimeter-bounds-sandwich", sandwich_dev, 0.0, 1e-9, sandwich_dev <= 1e-9);

    // Polya-Szego for jump-free fields.
    if (u.jumps.empty()) {
        const StaircaseProfile ustar = decreasing_rearrangement(u.ac);
        for (double p : {1.0, 2.0}) {
            double grid_energy = 0.0;
            const auto grad = ac_gradient(u.ac);
            for (std::size_t i = 0; i < grad.size(); ++i)
                if (u.ac.mask[i])
                    grid_energy += std::pow(norm.value2(grad[i][0], grad[i][1]), p);
            grid_energy *= u.ac.cell_area();
            const double prof_energy =
                symmetrized_dirichlet_energy(ustar, geom, p, std::max(32, u.ac.nx / 4));
            const double tol_ps = 0.02 * grid_energy * g.tol_scale;
            rep.check("polya-szego-p" + format_double(p), prof_energy, grid_energy, tol_ps,
                      prof_energy <= grid_energy + tol_ps);
        }
    }

    if (!svg_path.empty()) {
        std::vector<std::vector<std::vector<Vec2>>> levels_loops;
        for (int k = 1; k <= 5; ++k) {
            const auto ext = extract_superlevel_boundary(u.ac, top * k / 6.0);
            levels_loops.push_back(stitch_loops(ext));
        }
        emit_level_sets_svg(levels_loops, svg_path);
    }

    finish_report(rep, report_path);
    return rep.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// shapes

Polygon parse_shape(const std::string& text, const AnisotropicNorm& norm) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw_error("config:bad-shape", "shape must be wulff:<R>, square:<a> or polygon:<path>");
    const std::string head = text.substr(0, colon);
    const std::string body = text.substr(colon + 1);
    if (head == "wulff") {
        const double R = std::stod(body);
        if (!(R > 0.0)) throw_error("domain:nonpositive-radius", "wulff radius must be positive");
        Polygon poly;
        for (const auto& p : wulff_boundary(norm, R, 512)) poly.vertices.push_back({p[0], p[1]});
        return poly;
    }
    if (head == "square") {
        const double a = std::stod(body);
        if (!(a > 0.0)) throw_error("config:bad-shape", "square side must be positive");
        return Polygon{{{0.0, 0.0}, {a, 0.0}, {a, a}, {0.0, a}}};
    }
    if (head == "polygon") {
        std::ifstream in(body);
        if (!in) throw_error("io:file-not-found", "cannot open polygon file '" + body + "'");
        Polygon poly;
        double x, y;
        while (in >> x >> y) poly.vertices.push_back({x, y});
        if (poly.size() < 3) throw_error("config:bad-shape", "polygon needs at least 3 vertices");
        if (!poly.is_simple()) throw_error("domain:polygon-not-simple", "polygon must be simple");
        return poly;
    }
    throw_error("config:bad-shape", "unknown shape kind '" + head + "'");
}

int cmd_torsion(const GlobalOptions& g, const std::string& shape_text,
                const std::string& norm_text, TorsionMode mode, double parameter, int trials,
                int grid_res, const std::string& report_path, const std::string& svg_path) {
    const AnisotropicNorm norm(NormSpec::parse(norm_text));
    const WulffGeometry geom = wulff_constant(norm, g.resolution);
    const Polygon poly = parse_shape(shape_text, norm);
    const GridField grid = rasterize_polygon(poly, grid_res);

    SaintVenantOptions opts;
    opts.mode = mode;
    if (mode == TorsionMode::Penalized) opts.lambda = parameter;
    else opts.m = parameter;
    opts.trials = trials;
    opts.seed = g.seed;
    opts.tol_scale = g.tol_scale;
    const TorsionReport tr = saint_venant_compare(grid, poly, norm, geom, opts);

    Report rep;
    rep.kv("command", mode == TorsionMode::Penalized ? std::string("torsion")
                                                     : std::string("insulation"));
    rep.kv("norm", norm.spec().describe());
    rep.kv("shape", shape_text);
    rep.kv(mode == TorsionMode::Penalized ? "lambda" : "m", tr.parameter);
    rep.kv("omega", grid.omega_measure());
    rep.kv("wulff-radius", tr.wulff_radius);
    rep.kv("omega-value", tr.omega_value);
    rep.kv("star-value", tr.star_value);
    if (tr.radial) {
        rep.kv("dead-core-radius", tr.radial->dead_core_radius);
        rep.kv("dense-scan-fallback", tr.radial->dense_scan_fallback ? std::string("yes")
                                                                     : std::string("no"));
    }
    rep.check("saint-venant", tr.omega_value, tr.star_value, tr.inequality_tol,
              tr.inequality_pass);
    for (std::size_t i = 0; i < tr.trials.size(); ++i) {
        const auto& rel = tr.trials[i].relations;
        const std::string tag = std::to_string(i);
        rep.kv("trial-" + tag + "-objective", tr.trials[i].objective);
        rep.check("competitor-energy-" + tag, rel.energy_lhs, rel.energy_rhs,
                  1e-9 * std::max(1.0, rel.energy_lhs),
                  std::abs(rel.energy_lhs - rel.energy_rhs) <=
                      1e-9 * std::max(1.0, rel.energy_lhs));
        rep.check("competitor-boundary-" + tag, rel.boundary_dev, 0.0, 1e-9,
                  rel.boundary_dev <= 1e-9 * std::max(1.0, rel.energy_lhs));
        rep.check("competitor-l1-" + tag, rel.l1_lhs, rel.l1_rhs, rel.l1_tol,
                  rel.l1_lhs <= rel.l1_rhs + rel.l1_tol);
        if (mode == TorsionMode::Penalized)
            rep.check("competitor-support-" + tag, rel.support_lhs, rel.support_rhs,
                      1e-9 * std::max(1.0, rel.support_lhs),
                      std::abs(rel.support_lhs - rel.support_rhs) <=
                          1e-9 * std::max(1.0, rel.support_lhs) + 1e-12);
    }

    if (!svg_path.empty() && tr.radial) {
        std::vector<Vec2> curve;
        for (std::size_t i = 0; i < tr.radial->r_samples.size(); ++i)
            curve.push_back({tr.radial->r_samples[i], tr.radial->phi_samples[i]});
        emit_profile_svg(curve, svg_path);
    }
    finish_report(rep, report_path);
    return rep.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// fixtures

int cmd_fixtures(const std::string& out_dir, int resolution) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const AnisotropicNorm euclid(NormSpec::pnorm(2.0));

    const auto disk_field = [&](const std::function<double(double, double)>& f) {
        const double L = 1.1;
        const double h = 2.0 * L / resolution;
        GridField grid = GridField::full(resolution, resolution, -L, -L, h);
        for (int iy = 0; iy < resolution; ++iy)
            for (int ix = 0; ix < resolution; ++ix) {
                const double x = grid.cx(ix), y = grid.cy(iy);
                const std::size_t id = grid.index(ix, iy);
                if (std::hypot(x, y) < 1.0) {
                    grid.values[id] = f(x, y);
                } else {
                    grid.mask[id] = 0;
                }
            }
        return grid;
    };

    // Cone (1 - |x|)_+ on the unit disk: the fixed point of the construction.
    save_field(disk_field([](double x, double y) { return 1.0 - std::hypot(x, y); }),
               fs::path(out_dir) / "cone.fld");

    // Characteristic function of the unit disk plus its boundary jump set.
    save_field(disk_field([](double, double) { return 1.0; }),
               fs::path(out_dir) / "wulff-ball.fld");
    JumpSet circle;
    const int nseg = 256;
    for (int k = 0; k < nseg; ++k) {
        const double t0 = 2.0 * M_PI * k / nseg, t1 = 2.0 * M_PI * (k + 1) / nseg;
        circle.segments.push_back(
            {{std::cos(t0), std::sin(t0)}, {std::cos(t1), std::sin(t1)}, 1.0});
    }
    save_jumps(circle, fs::path(out_dir) / "wulff-ball.jmp");

    // Smooth bump (1 - |x|^2)_+^2.
    save_field(disk_field([](double x, double y) {
                   const double r2 = x * x + y * y;
                   return (1.0 - r2) * (1.0 - r2);
               }),
               fs::path(out_dir) / "bump.fld");

    // Square torsion start: separable bump vanishing on the boundary ring.
    {
        const double h = 1.1 / resolution;
        GridField grid = GridField::full(resolution, resolution, -0.05, -0.05, h);
        for (int iy = 0; iy < resolution; ++iy)
            for (int ix = 0; ix < resolution; ++ix) {
                const double x = grid.cx(ix), y = grid.cy(iy);
                const std::size_t id = grid.index(ix, iy);
                if (x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0)
                    grid.values[id] = 16.0 * x * (1.0 - x) * y * (1.0 - y);
                else
                    grid.mask[id] = 0;
            }
        save_field(grid, fs::path(out_dir) / "square.fld");
        save_jumps(rectangle_boundary_jumps({0.0, 0.0}, {1.0, 1.0}, 1.0),
                   fs::path(out_dir) / "square.jmp");
    }
    (void)euclid;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic Wulff rearrangement toolkit"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--resolution", g.resolution, "quadrature resolution (0 = default)");
    app.add_option("--seed", g.seed, "seed for random trials");
    app.add_option("--tol-scale", g.tol_scale, "multiplies all default tolerances");

    std::function<int()> runner;

    // norm-check
    {
        auto* c = app.add_subcommand("norm-check", "validate norm identities by sampling");
        auto norm = std::make_shared<std::string>();
        auto samples = std::make_shared<int>(1000);
        auto tol = std::make_shared<double>(1e-6);
        auto report = std::make_shared<std::string>();
        c->add_option("--norm", *norm, "norm spec")->required();
        c->add_option("--samples", *samples, "number of random samples");
        c->add_option("--tol", *tol, "identity tolerance");
        c->add_option("--report", *report, "report output path");
        c->callback([&runner, &g, norm, samples, tol, report] {
            runner = [&g, norm, samples, tol, report] {
                return cmd_norm_check(g, *norm, *samples, *tol, *report);
            };
        });
    }
    // wulff
    {
        auto* c = app.add_subcommand("wulff", "Wulff ball constants and shape");
        auto norm = std::make_shared<std::string>();
        auto radius = std::make_shared<double>(1.0);
        auto svg = std::make_shared<std::string>();
        auto report = std::make_shared<std::string>();
        c->add_option("--norm", *norm, "norm spec")->required();
        c->add_option("--radius", *radius, "Wulff radius for the perimeter");
        c->add_option("--svg", *svg, "SVG output of the unit Wulff shape");
        c->add_option("--report", *report, "report output path");
        c->callback([&runner, &g, norm, radius, svg, report] {
            runner = [&g, norm, radius, svg, report] {
                return cmd_wulff(g, *norm, *radius, *svg, *report);
            };
        });
    }
    // rearrange
    {
        auto* c = app.add_subcommand("rearrange", "decreasing/increasing rearrangement profile");
        auto field = std::make_shared<std::string>();
        auto direction = std::make_shared<std::string>("decreasing");
        auto out = std::make_shared<std::string>();
        auto svg = std::make_shared<std::string>();
        c->add_option("--field", *field, "input field")->required();
        c->add_option("--direction", *direction, "decreasing|increasing");
        c->add_option("--out-profile", *out, "profile output path")->required();
        c->add_option("--svg", *svg, "SVG of the profile");
        c->callback([&runner, field, direction, out, svg] {
            runner = [field, direction, out, svg] {
                return cmd_rearrange(*field, *direction, *out, *svg);
            };
        });
    }
    // symmetrize
    {
        auto* c = app.add_subcommand("symmetrize", "gradient symmetrization profile");
        auto field = std::make_shared<std::string>();
        auto jumps = std::make_shared<std::string>();
        auto norm = std::make_shared<std::string>();
        auto mass = std::make_shared<double>(0.0);
        auto out = std::make_shared<std::string>();
        auto svg = std::make_shared<std::string>();
        auto report = std::make_shared<std::string>();
        c->add_option("--field", *field, "input field")->required();
        c->add_option("--jumps", *jumps, "declared jump set");
        c->add_option("--norm", *norm, "norm spec")->required();
        c->add_option("--singular-mass", *mass, "additional scalar singular mass");
        c->add_option("--out-profile", *out, "profile output path")->required();
        c->add_option("--svg", *svg, "SVG of the profile");
        c->add_option("--report", *report, "report output path");
        c->callback([&runner, &g, field, jumps, norm, mass, out, svg, report] {
            runner = [&g, field, jumps, norm, mass, out, svg, report] {
                return cmd_symmetrize(g, *field, *jumps, *norm, *mass, *out, *svg, *report);
            };
        });
    }
    // verify
    {
        auto* c = app.add_subcommand("verify", "run the comparison-theorem harness");
        auto field = std::make_shared<std::string>();
        auto jumps = std::make_shared<std::string>();
        auto norm = std::make_shared<std::string>();
        auto levels = std::make_shared<int>(128);
        auto tsamples = std::make_shared<int>(8);
        auto report = std::make_shared<std::string>();
        auto svg = std::make_shared<std::string>();
        c->add_option("--field", *field, "input field")->required();
        c->add_option("--jumps", *jumps, "declared jump set");
        c->add_option("--norm", *norm, "norm spec")->required();
        c->add_option("--levels", *levels, "coarea quadrature levels");
        c->add_option("--truncation-samples", *tsamples, "sampled s values for G checks");
        c->add_option("--report", *report, "report output path");
        c->add_option("--svg", *svg, "SVG of 5 level sets");
        c->callback([&runner, &g, field, jumps, norm, levels, tsamples, report, svg] {
            runner = [&g, field, jumps, norm, levels, tsamples, report, svg] {
                return cmd_verify(g, *field, *jumps, *norm, *levels, *tsamples, *report, *svg);
            };
        });
    }
    // torsion / insulation
    for (const bool penalized : {true, false}) {
        auto* c = app.add_subcommand(penalized ? "torsion" : "insulation",
                                     penalized ? "penalized Saint-Venant comparison"
                                               : "insulation Saint-Venant comparison");
        auto shape = std::make_shared<std::string>();
        auto norm = std::make_shared<std::string>();
        auto param = std::make_shared<double>(penalized ? 0.0 : 1.0);
        auto trials = std::make_shared<int>(3);
        auto grid = std::make_shared<int>(64);
        auto report = std::make_shared<std::string>();
        auto svg = std::make_shared<std::string>();
        c->add_option("--shape", *shape, "wulff:<R> | square:<a> | polygon:<path>")->required();
        c->add_option("--norm", *norm, "norm spec")->required();
        if (penalized) c->add_option("--lambda", *param, "support penalty");
        else c->add_option("--m", *param, "insulation parameter")->required();
        c->add_option("--trials", *trials, "random descent trials");
        c->add_option("--grid", *grid, "grid resolution for the descent");
        c->add_option("--report", *report, "report output path");
        c->add_option("--svg", *svg, "SVG of the radial profile");
        c->callback([&runner, &g, shape, norm, param, trials, grid, report, svg, penalized] {
            runner = [&g, shape, norm, param, trials, grid, report, svg, penalized] {
                return cmd_torsion(g, *shape, *norm,
                                   penalized ? TorsionMode::Penalized : TorsionMode::Insulation,
                                   *param, *trials, *grid, *report, *svg);
            };
        });
    }
    // fixtures
    {
        auto* c = app.add_subcommand("fixtures", "write the canonical test fields");
        auto out = std::make_shared<std::string>("fixtures");
        auto res = std::make_shared<int>(256);
        c->add_option("--out", *out, "output directory");
        c->add_option("--resolution", *res, "grid resolution");
        c->callback([&runner, out, res] {
            runner = [out, res] { return cmd_fixtures(*out, *res); };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return runner ? runner() : 2;
    } catch (const wulff::Error& e) {
        std::cerr << "error:" << e.code() << " " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error:internal:unhandled " << e.what() << "\n";
        return 2;
    }
}
