#include "wulff/variation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "wulff/error.hpp"

namespace wulff {

namespace {

// Node lattice for marching squares: cell centers plus one ghost ring of
// zero-extension nodes, so contours close around the domain.
struct NodeGrid {
    const GridField& f;
    double t;
    int nxn, nyn; // node counts

    NodeGrid(const GridField& field, double threshold)
        : f(field), t(threshold), nxn(field.nx + 2), nyn(field.ny + 2) {}

    double phi(int I, int J) const { return f.value_or_zero(I - 1, J - 1) - t; }
    double nx_of(int I) const { return f.x0 + (I - 0.5) * f.h; }
    double ny_of(int J) const { return f.y0 + (J - 0.5) * f.h; }
};

} // namespace

LevelExtraction extract_superlevel_boundary(const GridField& field, double t) {
    const NodeGrid g(field, t);
    LevelExtraction out;

    // Edge ids: ((J * (nxn + 1) + I) << 1) | axis, axis 0 = +x edge at node (I, J).
    const auto key = [&](int I, int J, int axis) {
        return ((static_cast<long>(J) * (g.nxn + 1) + I) << 1) | axis;
    };
    const auto cross_x = [&](int I, int J, double pa, double pb) -> Vec2 {
        const double f = pa / (pa - pb);
        return {g.nx_of(I) + f * field.h, g.ny_of(J)};
    };
    const auto cross_y = [&](int I, int J, double pa, double pb) -> Vec2 {
        const double f = pa / (pa - pb);
        return {g.nx_of(I), g.ny_of(J) + f * field.h};
    };

    // Per square: edge index 0 bottom, 1 right, 2 top, 3 left.
    static const signed char table[16][4] = {
        {-1, -1, -1, -1}, {0, 3, -1, -1}, {0, 1, -1, -1}, {3, 1, -1, -1},
        {2, 1, -1, -1},   {-2, -2, -2, -2} /*case 5 ambiguous*/, {0, 2, -1, -1}, {3, 2, -1, -1},
        {3, 2, -1, -1},   {0, 2, -1, -1}, {-2, -2, -2, -2} /*case 10*/, {2, 1, -1, -1},
        {3, 1, -1, -1},   {0, 1, -1, -1}, {0, 3, -1, -1},   {-1, -1, -1, -1}};

    for (int J = 0; J + 1 < g.nyn; ++J) {
        for (int I = 0; I + 1 < g.nxn; ++I) {
            const double p00 = g.phi(I, J), p10 = g.phi(I + 1, J);
            const double p11 = g.phi(I + 1, J + 1), p01 = g.phi(I, J + 1);
            const int c = (p00 > 0.0 ? 1 : 0) | (p10 > 0.0 ? 2 : 0) | (p11 > 0.0 ? 4 : 0) |
                          (p01 > 0.0 ? 8 : 0);
            if (c == 0 || c == 15) continue;

            Vec2 pt[4];
            long kid[4];
            pt[0] = cross_x(I, J, p00, p10);
            kid[0] = key(I, J, 0);
            pt[1] = cross_y(I + 1, J, p10, p11);
            kid[1] = key(I + 1, J, 1);
            pt[2] = cross_x(I, J + 1, p01, p11);
            kid[2] = key(I, J + 1, 0);
            pt[3] = cross_y(I, J, p00, p01);
            kid[3] = key(I, J, 1);

            const auto emit = [&](int ea, int eb) {
                out.segments.push_back({pt[ea], pt[eb]});
                out.endpoint_keys.push_back({kid[ea], kid[eb]});
            };
            if (c == 5 || c == 10) {
                const double center = 0.25 * (p00 + p10 + p11 + p01);
                const bool through = center > 0.0;
                if (c == 5) { // v00, v11 inside
                    if (through) { emit(0, 1); emit(3, 2); }
                    else { emit(0, 3); emit(1, 2); }
                } else { // v10, v01 inside
                    if (through) { emit(0, 3); emit(1, 2); }
                    else { emit(0, 1); emit(3, 2); }
                }
            } else {
                emit(table[c][0], table[c][1]);
            }
        }
    }
    return out;
}

std::vector<std::vector<Vec2>> stitch_loops(const LevelExtraction& extraction) {
    // Each crossing point lies on a unique lattice edge; walk key-to-key.
    std::map<long, std::vector<std::pair<std::size_t, int>>> at_key;
    for (std::size_t i = 0; i < extraction.segments.size(); ++i) {
        at_key[extraction.endpoint_keys[i][0]].push_back({i, 0});
        at_key[extraction.endpoint_keys[i][1]].push_back({i, 1});
    }
    std::vector<bool> used(extraction.segments.size(), false);
    std::vector<std::vector<Vec2>> loops;
    for (std::size_t start = 0; start < extraction.segments.size(); ++start) {
        if (used[start]) continue;
        std::vector<Vec2> loop;
        std::size_t cur = start;
        int enter = 0;
        while (!used[cur]) {
            used[cur] = true;
            const auto& seg = extraction.segments[cur];
            loop.push_back(enter == 0 ? seg.a : seg.b);
            const long exit_key = extraction.endpoint_keys[cur][enter == 0 ? 1 : 0];
            const auto& cands = at_key[exit_key];
            std::size_t next = cur;
            int next_enter = 0;
            for (const auto& [si, end] : cands) {
                if (si == cur || used[si]) continue;
                next = si;
                next_enter = end;
                break;
            }
            if (next == cur) break; // loop closed (or open chain end)
            cur = next;
            enter = next_enter;
        }
        if (loop.size() >= 3) loops.push_back(std::move(loop));
    }
    return loops;
}

namespace {

double pixel_perimeter(const GridField& f, const std::vector<std::uint8_t>& in,
                       const AnisotropicNorm& norm, double* euclid_out) {
    const double hx = norm.value2(1.0, 0.0);
    const double hy = norm.value2(0.0, 1.0);
    const auto is_in = [&](int ix, int iy) {
        if (ix < 0 || ix >= f.nx || iy < 0 || iy >= f.ny) return false;
        return in[f.index(ix, iy)] != 0;
    };
    long vertical = 0, horizontal = 0; // edge normals along x / along y
    for (int iy = 0; iy < f.ny; ++iy)
        for (int ix = 0; ix < f.nx; ++ix) {
            if (!is_in(ix, iy)) continue;
            vertical += !is_in(ix - 1, iy);
            vertical += !is_in(ix + 1, iy);
            horizontal += !is_in(ix, iy - 1);
            horizontal += !is_in(ix, iy + 1);
        }
    if (euclid_out) *euclid_out = f.h * static_cast<double>(vertical + horizontal);
    return f.h * (static_cast<double>(vertical) * hx + static_cast<double>(horizontal) * hy);
}

double segment_perimeter(const std::vector<Segment>& segs, const AnisotropicNorm& norm,
                         double* euclid_out) {
    double ph = 0.0, pe = 0.0;
    for (const auto& s : segs) {
        const double len = s.length();
        if (!(len > 0.0)) continue;
        const Vec2 nu = segment_normal(s.a, s.b);
        ph += len * norm.value2(nu[0], nu[1]);
        pe += len;
    }
    if (euclid_out) *euclid_out = pe;
    return ph;
}

} // namespace

LevelSetGeometry superlevel_geometry(const GridField& field, const AnisotropicNorm& norm,
                                     double t, PerimeterMode mode) {
    LevelSetGeometry g;
    g.threshold = t;
    g.measure = distribution_function(field, t);
    if (mode == PerimeterMode::Pixel) {
        std::vector<std::uint8_t> in(field.values.size(), 0);
        for (std::size_t i = 0; i < in.size(); ++i)
            in[i] = field.mask[i] && std::abs(field.values[i]) > t;
        g.perimeter_H = pixel_perimeter(field, in, norm, &g.perimeter_euclid);
    } else {
        auto ext = extract_superlevel_boundary(field, t);
        g.perimeter_H = segment_perimeter(ext.segments, norm, &g.perimeter_euclid);
        g.segments = std::move(ext.segments);
    }
    return g;
}

double anisotropic_perimeter_mask(const GridField& field, const AnisotropicNorm& norm,
                                  PerimeterMode mode) {
    if (field.cells_inside() == 0) return 0.0;
    if (mode == PerimeterMode::Pixel)
        return pixel_perimeter(field, field.mask, norm, nullptr);
    // One bilinear smoothing step of the indicator; raw 0/1 samples would
    // pin every crossing to an edge midpoint and overestimate oblique
    // boundaries by several percent.
    GridField ind = field;
    std::fill(ind.mask.begin(), ind.mask.end(), 1);
    const auto bin = [&](int ix, int iy) {
        return field.inside(ix, iy) ? 1.0 : 0.0;
    };
    static const double tent[3] = {0.25, 0.5, 0.25};
    for (int iy = 0; iy < ind.ny; ++iy)
        for (int ix = 0; ix < ind.nx; ++ix) {
            double v = 0.0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    v += tent[dx + 1] * tent[dy + 1] * bin(ix + dx, iy + dy);
            ind.values[ind.index(ix, iy)] = v;
        }
    const auto ext = extract_superlevel_boundary(ind, 0.5);
    return segment_perimeter(ext.segments, norm, nullptr);
}

bool VariationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const VariationCheck& c) { return c.pass; });
}

VariationReport anisotropic_tv(const BVComposite& u, const AnisotropicNorm& norm) {
    u.ac.validate();
    VariationReport rep;
    const auto grad = ac_gradient(u.ac, u.jumps);
    double acc = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i)
        if (u.ac.mask[i]) acc += norm.value2(grad[i][0], grad[i][1]);
    rep.ac_tv = u.ac.cell_area() * acc;
    rep.singular_tv = singular_mass(u.jumps, norm);
    rep.total_tv = rep.ac_tv + rep.singular_tv;
    return rep;
}

double coarea_tv(const GridField& field, const AnisotropicNorm& norm, int num_levels) {
    if (num_levels < 4)
        throw_error("domain:levels-too-few", "coarea quadrature needs at least 4 levels");
    field.validate();
    field.validate_nonnegative();
    const double top = field.max_abs();
    if (top == 0.0) return 0.0;
    const double dt = top / num_levels;
    double acc = 0.0;
    for (int k = 0; k < num_levels; ++k) {
        const double t = (k + 0.5) * dt;
        const auto ext = extract_superlevel_boundary(field, t);
        acc += segment_perimeter(ext.segments, norm, nullptr) * dt;
    }
    return acc;
}

namespace {

// Trace pair across a jump segment, sampled one cell away on each side. The
// declared amplitude is authoritative; the grid supplies the lower trace.
struct JumpTraces {
    std::vector<double> lower; // per subsample
    double sub_length = 0.0;
    double h_nu = 0.0;
    double amplitude = 0.0;
};

JumpTraces sample_jump_traces(const GridField& f, const JumpSegment& seg,
                              const AnisotropicNorm& norm) {
    JumpTraces tr;
    const double len = norm2(seg.b - seg.a);
    const Vec2 nu = segment_normal(seg.a, seg.b);
    tr.h_nu = norm.value2(nu[0], nu[1]);
    tr.amplitude = std::abs(seg.amplitude);
    const int k = std::max(8, static_cast<int>(std::ceil(len / f.h)));
    tr.sub_length = len / k;
    const double off = 0.75 * f.h;
    const auto cell_value = [&](Vec2 p) {
        const int ix = static_cast<int>(std::floor((p[0] - f.x0) / f.h));
        const int iy = static_cast<int>(std::floor((p[1] - f.y0) / f.h));
        return f.value_or_zero(ix, iy);
    };
    tr.lower.reserve(k);
    for (int i = 0; i < k; ++i) {
        const double fr = (i + 0.5) / k;
        const Vec2 m = seg.a + fr * (seg.b - seg.a);
        const double vplus = cell_value(m + off * nu);
        const double vminus = cell_value(m - off * nu);
        tr.lower.push_back(std::min(vplus, vminus));
    }
    return tr;
}

// Jump mass surviving the truncation (u - theta)_+ across all segments.
double truncated_jump_mass(const BVComposite& u, const AnisotropicNorm& norm, double theta) {
    double acc = 0.0;
    for (const auto& seg : u.jumps.segments) {
        const JumpTraces tr = sample_jump_traces(u.ac, seg, norm);
        for (double lo : tr.lower) {
            const double up = lo + tr.amplitude;
            const double amp = std::max(up - theta, 0.0) - std::max(lo - theta, 0.0);
            acc += amp * tr.sub_length * tr.h_nu;
        }
    }
    return acc;
}

double threshold_at(const BVComposite& u, double s) {
    const double omega = u.ac.omega_measure();
    if (s < 0.0 || s > omega * (1.0 + 1e-12))
        throw_error("domain:out-of-range", "s must lie in [0, |Omega|]");
    return decreasing_rearrangement(u.ac).threshold(std::min(s, omega));
}

} // namespace

TruncationVariation truncation_variation(const BVComposite& u, const AnisotropicNorm& norm,
                                         double s, int num_levels) {
    u.ac.validate();
    u.ac.validate_nonnegative();
    const double theta = threshold_at(u, s);

    TruncationVariation out;

    // Route (a): TV of the truncated composite.
    BVComposite trunc;
    trunc.ac = u.ac;
    for (std::size_t i = 0; i < trunc.ac.values.size(); ++i)
        trunc.ac.values[i] = trunc.ac.mask[i] ? std::max(trunc.ac.values[i] - theta, 0.0) : 0.0;
    trunc.jumps = u.jumps;
    const auto grad = ac_gradient(trunc.ac, trunc.jumps);
    double ac = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i)
        if (trunc.ac.mask[i]) ac += norm.value2(grad[i][0], grad[i][1]);
    out.direct = trunc.ac.cell_area() * ac + truncated_jump_mass(u, norm, theta);

    // Route (b): level integral of P_H({u > t}) above the threshold.
    const double top = u.ac.max_abs();
    if (theta < top) {
        if (num_levels < 4)
            throw_error("domain:levels-too-few", "level integral needs at least 4 levels");
        const double dt = (top - theta) / num_levels;
        double acc = 0.0;
        for (int k = 0; k < num_levels; ++k) {
            const double t = theta + (k + 0.5) * dt;
            const auto ext = extract_superlevel_boundary(u.ac, t);
            acc += segment_perimeter(ext.segments, norm, nullptr) * dt;
        }
        out.level_integral = acc;
    }
    return out;
}

double compute_GH1(const BVComposite& u, const AnisotropicNorm& norm, double s) {
    u.ac.validate();
    const double theta = threshold_at(u, s);
    const auto grad = ac_gradient(u.ac, u.jumps);
    double acc = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i)
        if (u.ac.mask[i] && u.ac.values[i] > theta)
            acc += norm.value2(grad[i][0], grad[i][1]);
    return u.ac.cell_area() * acc;
}

double compute_GH2(const BVComposite& u, const AnisotropicNorm& norm, double s) {
    const double theta = threshold_at(u, s);
    return truncated_jump_mass(u, norm, theta);
}

double iso_profile_integral(const GridField& field, const WulffGeometry& geom, double tau,
                            int num_levels) {
    if (!(tau >= 0.0))
        throw_error("domain:out-of-range", "tau must be nonnegative");
    field.validate();
    const double top = field.max_abs();
    if (tau >= top) return 0.0;
    const double nd = geom.dimension;
    const double coef = nd * std::pow(geom.kappa_n, 1.0 / nd);
    const double dt = (top - tau) / num_levels;
    double acc = 0.0;
    for (int k = 0; k < num_levels; ++k) {
        const double t = tau + (k + 0.5) * dt;
        acc += coef * std::pow(distribution_function(field, t), 1.0 - 1.0 / nd) * dt;
    }
    return acc;
}

double isoperimetric_deficit(const GridField& field, const AnisotropicNorm& norm,
                             const WulffGeometry& geom, PerimeterMode mode) {
    const double volume = field.omega_measure();
    const double ph = anisotropic_perimeter_mask(field, norm, mode);
    const double nd = geom.dimension;
    return ph - nd * std::pow(geom.kappa_n, 1.0 / nd) * std::pow(volume, 1.0 - 1.0 / nd);
}

double symmetrized_dirichlet_energy(const StaircaseProfile& ustar, const WulffGeometry& geom,
                                    double p, int radial_resolution) {
    if (radial_resolution < 8)
        throw_error("domain:out-of-range", "radial resolution too small");
    const double omega = ustar.domain();
    const double R = geom.radius_for_volume(omega);
    const double nd = geom.dimension;
    const double dr = R / radial_resolution;
    double acc = 0.0;
    double prev = ustar.eval(0.0);
    for (int j = 1; j <= radial_resolution; ++j) {
        const double r = j * dr;
        const double cur = ustar.eval(std::min(geom.kappa_n * std::pow(r, nd), omega));
        const double slope = (cur - prev) / dr;
        const double rmid = r - 0.5 * dr;
        acc += std::pow(std::abs(slope), p) * nd * geom.kappa_n * std::pow(rmid, nd - 1.0) * dr;
        prev = cur;
    }
    return acc;
}

VariationReport verify_main_theorem(const BVComposite& u, const AnisotropicNorm& norm,
                                    const WulffGeometry& geom, const VerifyOptions& opts) {
    u.ac.validate();
    u.ac.validate_nonnegative();

    VariationReport rep = anisotropic_tv(u, norm);
    rep.l1_u = field_lp_norm(u.ac, 1.0);

    const SymmetrizedFunction ustar = symmetrize_bv(u, norm, geom);
    const GradientProfile& prof = ustar.gradient_profile();
    rep.l1_ustar = ustar.l1_norm();

    const double omega = u.ac.omega_measure();
    const double ph_star = wulff_perimeter(geom, ustar.radius());
    const double c0 = ustar.boundary_value();
    rep.tv_ustar = ustar.gradient_energy(1.0) + c0 * ph_star;

    const double h = u.ac.h;
    const double eps_disc = 10.0 * h * rep.total_tv * opts.tol_scale;
    const auto add = [&](const std::string& name, double lhs, double rhs, double tol) {
        rep.checks.push_back({name, lhs, rhs, tol, lhs <= rhs + tol});
    };

    // Theorem 3.3 inequality.
    add("l1-comparison", rep.l1_u, rep.l1_ustar, eps_disc);

    // TV preservation and the boundary constant, exact at profile level.
    const double exact_tol = 1e-9 * std::max(1.0, rep.total_tv);
    add("tv-preservation", std::abs(rep.total_tv - rep.tv_ustar), 0.0, exact_tol);
    add("boundary-constant", std::abs(c0 * ph_star - rep.singular_tv), 0.0, exact_tol);

    // Monotonicity of the output profile and its gradient staircase.
    double worst = 0.0;
    const int samples = 257;
    double prev = prof.eval(0.0);
    for (int i = 1; i <= samples; ++i) {
        const double cur = prof.eval(omega * i / samples);
        worst = std::max(worst, cur - prev);
        prev = cur;
    }
    add("profile-nonincreasing", worst, 0.0, 1e-12 * std::max(1.0, prof.sup_value()));
    const StaircaseProfile gs = prof.gradient_staircase();
    double worst_g = 0.0;
    for (std::size_t i = 0; i + 1 < gs.piece_values().size(); ++i)
        worst_g = std::max(worst_g, gs.piece_values()[i] - gs.piece_values()[i + 1]);
    add("gstar-nondecreasing", worst_g, 0.0, 0.0);

    // Equidistribution: the gradient staircase of the output equals the
    // increasing rearrangement of H(grad^a u).
    const StaircaseProfile gin = gradient_staircase_of(u, norm);
    double dev = 0.0;
    if (gin.breaks() == gs.breaks() && gin.pieces() == gs.pieces()) {
        for (std::size_t i = 0; i < gs.pieces(); ++i)
            dev = std::max(dev, std::abs(gin.piece_values()[i] - gs.piece_values()[i]));
    } else {
        dev = std::numeric_limits<double>::infinity();
    }
    add("equidistribution", dev, 0.0, 0.0);

    if (opts.check_grid_resample) {
        const GridField sampled = ustar.sample_to_grid(opts.resample_resolution);
        BVComposite star_comp{sampled, {}};
        const VariationReport star_tv = anisotropic_tv(star_comp, norm);
        // The sampled grid sees only the interior gradient; the boundary trace
        // carries the exact c0 P_H term.
        const double grid_total = star_tv.ac_tv + c0 * ph_star;
        const double tol = 0.02 * std::max(1.0, rep.tv_ustar) * opts.tol_scale;
        add("tv-grid-resample", std::abs(grid_total - rep.tv_ustar), 0.0, tol);
    }
    if (opts.check_coarea) {
        rep.coarea_tv = coarea_tv(u.ac, norm, opts.coarea_levels);
        const double tol = (0.05 * rep.total_tv + 10.0 * h * rep.total_tv) * opts.tol_scale;
        add("coarea-consistency", std::abs(rep.coarea_tv - rep.total_tv), 0.0, tol);
    }
    return rep;
}

} // namespace wulff
