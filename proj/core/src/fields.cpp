#include "wulff/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "wulff/error.hpp"

namespace wulff {

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, int line, const std::string& what) {
    throw_error("parse:bad-field-file",
                path.string() + ":" + std::to_string(line) + ": " + what);
}

// Whole-file tokenizer that remembers the source line of every token.
struct TokenStream {
    std::vector<std::pair<std::string, int>> tokens;
    std::size_t pos = 0;
    std::filesystem::path path;

    explicit TokenStream(const std::filesystem::path& p) : path(p) {
        std::ifstream in(p);
        if (!in)
            throw_error("io:file-not-found", "cannot open '" + p.string() + "'");
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::stringstream ls(line);
            std::string tok;
            while (ls >> tok) tokens.emplace_back(tok, lineno);
        }
    }
    bool done() const { return pos >= tokens.size(); }
    /// Line of the most recently consumed token.
    int line() const {
        if (tokens.empty()) return 0;
        const std::size_t i = pos == 0 ? 0 : pos - 1;
        return tokens[std::min(i, tokens.size() - 1)].second;
    }
    std::string next(const char* what) {
        if (done()) parse_fail(path, line(), std::string("unexpected end of file, expected ") + what);
        return tokens[pos++].first;
    }
    double next_double(const char* what) {
        const std::string tok = next(what);
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            parse_fail(path, tokens[pos - 1].second, std::string("bad ") + what + " '" + tok + "'");
        }
    }
    long next_long(const char* what) {
        const std::string tok = next(what);
        try {
            std::size_t used = 0;
            const long v = std::stol(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            parse_fail(path, tokens[pos - 1].second, std::string("bad ") + what + " '" + tok + "'");
        }
    }
};

void format_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

} // namespace

GridField GridField::full(int nx, int ny, double x0, double y0, double h) {
    GridField f;
    f.nx = nx;
    f.ny = ny;
    f.x0 = x0;
    f.y0 = y0;
    f.h = h;
    f.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    f.mask.assign(static_cast<std::size_t>(nx) * ny, 1);
    return f;
}

std::size_t GridField::cells_inside() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

double GridField::omega_measure() const { return cell_area() * static_cast<double>(cells_inside()); }

double GridField::max_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (mask[i]) m = std::max(m, std::abs(values[i]));
    return m;
}

void GridField::validate() const {
    if (nx <= 0 || ny <= 0)
        throw_error("domain:empty-domain", "grid dimensions must be positive");
    if (!(h > 0.0) || !std::isfinite(h))
        throw_error("domain:out-of-range", "grid spacing must be positive");
    const std::size_t count = static_cast<std::size_t>(nx) * ny;
    if (values.size() != count || mask.size() != count)
        throw_error("domain:out-of-range", "values/mask size does not match dims");
    std::size_t in = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::isfinite(values[i]))
            throw_error("invalid:non-finite", "grid value is not finite");
        if (mask[i]) ++in;
        else if (values[i] != 0.0)
            throw_error("domain:nonzero-outside", "masked-out cells must have value 0 (zero extension)");
    }
    if (in == 0)
        throw_error("domain:empty-domain", "mask selects no cells, |Omega| = 0");
}

void GridField::validate_nonnegative() const {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (mask[i] && values[i] < 0.0)
            throw_error("domain:negative-values", "field must be nonnegative");
}

GridField load_field(const std::filesystem::path& path) {
    TokenStream ts(path);
    if (ts.next("magic") != "wulff-field" || ts.next("version") != "v1")
        parse_fail(path, 1, "expected header 'wulff-field v1'");
    if (ts.next("dims keyword") != "dims") parse_fail(path, ts.line(), "expected 'dims'");
    const long nx = ts.next_long("dims entry");
    const long ny = ts.next_long("dims entry");
    if (nx <= 0 || ny <= 0) parse_fail(path, ts.line(), "grid dims must be positive");
    if (ts.next("origin keyword") != "origin") parse_fail(path, ts.line(), "expected 'origin'");
    const double x0 = ts.next_double("origin entry");
    const double y0 = ts.next_double("origin entry");
    if (ts.next("spacing keyword") != "spacing") parse_fail(path, ts.line(), "expected 'spacing'");
    const double h = ts.next_double("spacing");
    if (!(h > 0.0)) parse_fail(path, ts.line(), "spacing must be positive");
    if (ts.next("mask keyword") != "mask") parse_fail(path, ts.line(), "expected 'mask'");
    const std::string mode = ts.next("mask mode");

    GridField f;
    f.nx = static_cast<int>(nx);
    f.ny = static_cast<int>(ny);
    f.x0 = x0;
    f.y0 = y0;
    f.h = h;
    const std::size_t count = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    f.mask.assign(count, 1);
    if (mode == "inline") {
        for (std::size_t i = 0; i < count; ++i) {
            const long b = ts.next_long("mask bit");
            if (b != 0 && b != 1) parse_fail(path, ts.line(), "mask entries must be 0 or 1");
            f.mask[i] = static_cast<std::uint8_t>(b);
        }
    } else if (mode != "full") {
        parse_fail(path, ts.line(), "mask mode must be 'inline' or 'full'");
    }
    f.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double v = ts.next_double("value");
        if (!std::isfinite(v)) parse_fail(path, ts.line(), "non-finite grid value");
        f.values[i] = v;
    }
    if (!ts.done()) parse_fail(path, ts.line(), "trailing tokens after grid values");
    try {
        f.validate();
    } catch (const Error& e) {
        parse_fail(path, 0, e.what());
    }
    return f;
}

void save_field(const GridField& field, const std::filesystem::path& path) {
    field.validate();
    std::string out;
    out.reserve(field.values.size() * 20);
    out += "wulff-field v1\n";
    out += "dims " + std::to_string(field.nx) + " " + std::to_string(field.ny) + "\n";
    out += "origin ";
    format_double(out, field.x0);
    out += " ";
    format_double(out, field.y0);
    out += "\nspacing ";
    format_double(out, field.h);
    out += "\n";
    const bool full = field.cells_inside() == field.mask.size();
    out += full ? "mask full\n" : "mask inline\n";
    if (!full) {
        for (int iy = 0; iy < field.ny; ++iy) {
            for (int ix = 0; ix < field.nx; ++ix) {
                out += field.mask[field.index(ix, iy)] ? '1' : '0';
                out += ix + 1 == field.nx ? '\n' : ' ';
            }
        }
    }
    for (int iy = 0; iy < field.ny; ++iy) {
        for (int ix = 0; ix < field.nx; ++ix) {
            format_double(out, field.values[field.index(ix, iy)]);
            out += ix + 1 == field.nx ? '\n' : ' ';
        }
    }
    std::ofstream f(path, std::ios::trunc);
    if (!f || !(f << out))
        throw_error("io:write-failed", "cannot write '" + path.string() + "'");
}

void JumpSet::validate() const {
    for (const auto& s : segments) {
        if (!std::isfinite(s.amplitude) || !std::isfinite(s.a[0]) || !std::isfinite(s.a[1]) ||
            !std::isfinite(s.b[0]) || !std::isfinite(s.b[1]))
            throw_error("invalid:non-finite", "jump segment data must be finite");
        if (!(norm2(s.b - s.a) > 0.0))
            throw_error("domain:degenerate-segment", "jump segment has zero length");
    }
}

JumpSet load_jumps(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw_error("io:file-not-found", "cannot open '" + path.string() + "'");
    JumpSet js;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::stringstream ls(line);
        JumpSegment s;
        if (!(ls >> s.a[0])) continue; // blank line
        if (!(ls >> s.a[1] >> s.b[0] >> s.b[1] >> s.amplitude))
            throw_error("parse:bad-jump-file", path.string() + ":" + std::to_string(lineno) +
                                                   ": expected 'x1 y1 x2 y2 amplitude'");
        std::string extra;
        if (ls >> extra)
            throw_error("parse:bad-jump-file",
                        path.string() + ":" + std::to_string(lineno) + ": trailing tokens");
        js.segments.push_back(s);
    }
    js.validate();
    return js;
}

void save_jumps(const JumpSet& jumps, const std::filesystem::path& path) {
    std::string out;
    for (const auto& s : jumps.segments) {
        const double row[5] = {s.a[0], s.a[1], s.b[0], s.b[1], s.amplitude};
        for (int i = 0; i < 5; ++i) {
            format_double(out, row[i]);
            out += i == 4 ? '\n' : ' ';
        }
    }
    std::ofstream f(path, std::ios::trunc);
    if (!f || !(f << out))
        throw_error("io:write-failed", "cannot write '" + path.string() + "'");
}

JumpSet rectangle_boundary_jumps(Vec2 lo, Vec2 hi, double amplitude) {
    JumpSet js;
    js.segments = {{{lo[0], lo[1]}, {hi[0], lo[1]}, amplitude},
                   {{hi[0], lo[1]}, {hi[0], hi[1]}, amplitude},
                   {{hi[0], hi[1]}, {lo[0], hi[1]}, amplitude},
                   {{lo[0], hi[1]}, {lo[0], lo[1]}, amplitude}};
    return js;
}

StaircaseProfile::StaircaseProfile(std::vector<double> breaks, std::vector<double> values,
                                   bool nonincreasing)
    : breaks_(std::move(breaks)), values_(std::move(values)), nonincreasing_(nonincreasing) {
    if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size())
        throw_error("domain:out-of-range", "staircase needs k+1 breakpoints for k pieces");
    if (breaks_.front() != 0.0)
        throw_error("domain:out-of-range", "staircase breakpoints must start at 0");
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
        if (!(breaks_[i] < breaks_[i + 1]))
            throw_error("domain:out-of-range", "staircase breakpoints must be strictly increasing");
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
        const bool ok = nonincreasing_ ? values_[i] >= values_[i + 1] : values_[i] <= values_[i + 1];
        if (!ok)
            throw_error("domain:not-monotone", "staircase values violate the monotonicity flag");
    }
    for (double v : values_)
        if (!std::isfinite(v))
            throw_error("invalid:non-finite", "staircase values must be finite");
}

double StaircaseProfile::eval(double s) const {
    if (values_.empty()) return 0.0;
    if (s < breaks_.front()) return values_.front();
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), s);
    const std::ptrdiff_t i = (it - breaks_.begin()) - 1;
    const std::size_t idx = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
        i, 0, static_cast<std::ptrdiff_t>(values_.size()) - 1));
    return values_[idx];
}

double StaircaseProfile::threshold(double s) const { return s >= domain() ? 0.0 : eval(s); }

double StaircaseProfile::integral() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        acc += values_[i] * (breaks_[i + 1] - breaks_[i]);
    return acc;
}

double StaircaseProfile::integral_abs_pow(double p) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        acc += std::pow(std::abs(values_[i]), p) * (breaks_[i + 1] - breaks_[i]);
    return acc;
}

double StaircaseProfile::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

double StaircaseProfile::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

StaircaseProfile StaircaseProfile::reflected() const {
    const double d = domain();
    std::vector<double> rb(breaks_.size()), rv(values_.rbegin(), values_.rend());
    for (std::size_t i = 0; i < breaks_.size(); ++i) rb[i] = d - breaks_[breaks_.size() - 1 - i];
    rb.front() = 0.0; // guard rounding
    rb.back() = d;
    return StaircaseProfile(std::move(rb), std::move(rv), !nonincreasing_);
}

double integral_product(const StaircaseProfile& f, const StaircaseProfile& g) {
    const double d = std::min(f.domain(), g.domain());
    const auto& fb = f.breaks();
    const auto& gb = g.breaks();
    std::size_t fi = 0, gi = 0;
    double s = 0.0, acc = 0.0;
    while (s < d) {
        const double fe = fb[fi + 1], ge = gb[gi + 1];
        const double e = std::min({fe, ge, d});
        acc += f.piece_values()[fi] * g.piece_values()[gi] * (e - s);
        if (fe <= e && fi + 2 < fb.size()) ++fi;
        if (ge <= e && gi + 2 < gb.size()) ++gi;
        if (e <= s) break; // zero-length guard
        s = e;
    }
    return acc;
}

namespace {

// Blocked-link table for jump-aware differencing: link 0 = (ix,iy)-(ix+1,iy),
// link 1 = (ix,iy)-(ix,iy+1), keyed by the lower-left cell of the pair.
struct LinkBlocks {
    int nx = 0, ny = 0;
    std::vector<std::uint8_t> bits; // bit 0: +x link, bit 1: +y link
    bool blocked(int ix, int iy, int axis) const {
        if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) return false;
        return (bits[static_cast<std::size_t>(iy) * nx + ix] >> axis) & 1;
    }
};

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
    const auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); };
    const double o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    const double o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != o2 && o3 != o4) return true;
    // Touching configurations count as blocked as well.
    const auto on = [&](Vec2 a, Vec2 b, Vec2 c, double o) {
        if (std::abs(o) > 1e-14 * (1.0 + norm2(b - a) * norm2(c - a))) return false;
        return std::min(a[0], b[0]) - 1e-14 <= c[0] && c[0] <= std::max(a[0], b[0]) + 1e-14 &&
               std::min(a[1], b[1]) - 1e-14 <= c[1] && c[1] <= std::max(a[1], b[1]) + 1e-14;
    };
    return on(p1, p2, q1, o1) || on(p1, p2, q2, o2) || on(q1, q2, p1, o3) || on(q1, q2, p2, o4);
}

LinkBlocks build_blocks(const GridField& f, const JumpSet& jumps) {
    LinkBlocks lb;
    lb.nx = f.nx;
    lb.ny = f.ny;
    lb.bits.assign(static_cast<std::size_t>(f.nx) * f.ny, 0);
    for (const auto& seg : jumps.segments) {
        const double xlo = std::min(seg.a[0], seg.b[0]), xhi = std::max(seg.a[0], seg.b[0]);
        const double ylo = std::min(seg.a[1], seg.b[1]), yhi = std::max(seg.a[1], seg.b[1]);
        const int i0 = std::max(0, static_cast<int>(std::floor((xlo - f.x0) / f.h)) - 2);
        const int i1 = std::min(f.nx - 1, static_cast<int>(std::ceil((xhi - f.x0) / f.h)) + 2);
        const int j0 = std::max(0, static_cast<int>(std::floor((ylo - f.y0) / f.h)) - 2);
        const int j1 = std::min(f.ny - 1, static_cast<int>(std::ceil((yhi - f.y0) / f.h)) + 2);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
                const Vec2 c{f.cx(i), f.cy(j)};
                if (i + 1 < f.nx &&
                    segments_intersect(c, {f.cx(i + 1), f.cy(j)}, seg.a, seg.b))
                    lb.bits[static_cast<std::size_t>(j) * f.nx + i] |= 1;
                if (j + 1 < f.ny &&
                    segments_intersect(c, {f.cx(i), f.cy(j + 1)}, seg.a, seg.b))
                    lb.bits[static_cast<std::size_t>(j) * f.nx + i] |= 2;
            }
    }
    return lb;
}

std::vector<Vec2> gradient_impl(const GridField& f, const LinkBlocks* blocks) {
    f.validate();
    std::vector<Vec2> g(f.values.size(), Vec2{0.0, 0.0});
    const auto usable = [&](int from_x, int from_y, int to_x, int to_y, int axis) {
        if (!f.inside(to_x, to_y)) return false;
        if (!blocks) return true;
        const int lx = std::min(from_x, to_x), ly = std::min(from_y, to_y);
        return !blocks->blocked(lx, ly, axis);
    };
    for (int iy = 0; iy < f.ny; ++iy)
        for (int ix = 0; ix < f.nx; ++ix) {
            if (!f.inside(ix, iy)) continue;
            const double v = f.at(ix, iy);
            Vec2 grad{0.0, 0.0};
            for (int axis = 0; axis < 2; ++axis) {
                const int dx = axis == 0 ? 1 : 0, dy = axis == 0 ? 0 : 1;
                const bool plus = usable(ix, iy, ix + dx, iy + dy, axis);
                const bool minus = usable(ix, iy, ix - dx, iy - dy, axis);
                if (plus && minus)
                    grad[axis] = (f.at(ix + dx, iy + dy) - f.at(ix - dx, iy - dy)) / (2.0 * f.h);
                else if (plus)
                    grad[axis] = (f.at(ix + dx, iy + dy) - v) / f.h;
                else if (minus)
                    grad[axis] = (v - f.at(ix - dx, iy - dy)) / f.h;
            }
            g[f.index(ix, iy)] = grad;
        }
    return g;
}

} // namespace

std::vector<Vec2> ac_gradient(const GridField& field) { return gradient_impl(field, nullptr); }

std::vector<Vec2> ac_gradient(const GridField& field, const JumpSet& jumps) {
    if (jumps.empty()) return gradient_impl(field, nullptr);
    jumps.validate();
    const LinkBlocks lb = build_blocks(field, jumps);
    return gradient_impl(field, &lb);
}

double distribution_function(const GridField& field, double t) {
    if (!(t >= 0.0))
        throw_error("domain:out-of-range", "distribution function threshold must be >= 0");
    std::size_t count = 0;
    for (std::size_t i = 0; i < field.values.size(); ++i)
        if (field.mask[i] && std::abs(field.values[i]) > t) ++count;
    return field.cell_area() * static_cast<double>(count);
}

StaircaseProfile decreasing_rearrangement(std::vector<double> values, double cell_measure) {
    if (values.empty())
        throw_error("domain:empty-domain", "cannot rearrange an empty value set");
    std::stable_sort(values.begin(), values.end(), std::greater<double>());
    std::vector<double> breaks{0.0}, pieces;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!pieces.empty() && pieces.back() == values[i]) {
            breaks.back() = static_cast<double>(i + 1) * cell_measure;
        } else {
            pieces.push_back(values[i]);
            breaks.push_back(static_cast<double>(i + 1) * cell_measure);
        }
    }
    return StaircaseProfile(std::move(breaks), std::move(pieces), /*nonincreasing=*/true);
}

StaircaseProfile decreasing_rearrangement(const GridField& field) {
    field.validate();
    field.validate_nonnegative();
    std::vector<double> vals;
    vals.reserve(field.cells_inside());
    for (std::size_t i = 0; i < field.values.size(); ++i)
        if (field.mask[i]) vals.push_back(field.values[i]);
    return decreasing_rearrangement(std::move(vals), field.cell_area());
}

StaircaseProfile increasing_rearrangement(const StaircaseProfile& decreasing) {
    return decreasing.reflected();
}

StaircaseProfile increasing_rearrangement(const GridField& field) {
    return decreasing_rearrangement(field).reflected();
}

double field_lp_norm(const GridField& field, double p) {
    if (p == std::numeric_limits<double>::infinity()) return field.max_abs();
    double acc = 0.0;
    for (std::size_t i = 0; i < field.values.size(); ++i)
        if (field.mask[i]) acc += std::pow(std::abs(field.values[i]), p);
    return std::pow(field.cell_area() * acc, 1.0 / p);
}

} // namespace wulff
