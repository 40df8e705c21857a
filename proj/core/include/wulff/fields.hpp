#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "wulff/anisotropy.hpp"
#include "wulff/geometry.hpp"

namespace wulff {

/// Cell-centered scalar samples on a uniform n = 2 grid with a domain mask.
/// Values are zero on masked-out cells (zero extension outside Omega); each
/// masked-in cell carries measure h^2.
struct GridField {
    int nx = 0, ny = 0;
    double x0 = 0.0, y0 = 0.0; // lower-left corner of cell (0, 0)
    double h = 1.0;
    std::vector<double> values;      // iy * nx + ix
    std::vector<std::uint8_t> mask;  // 1 = inside Omega

    static GridField full(int nx, int ny, double x0, double y0, double h);

    std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * nx + ix; }
    bool inside(int ix, int iy) const {
        return ix >= 0 && ix < nx && iy >= 0 && iy < ny && mask[index(ix, iy)] != 0;
    }
    double at(int ix, int iy) const { return values[index(ix, iy)]; }
    /// Zero extension: masked-out and off-grid cells read as 0.
    double value_or_zero(int ix, int iy) const {
        return inside(ix, iy) ? values[index(ix, iy)] : 0.0;
    }
    double cx(int ix) const { return x0 + (ix + 0.5) * h; }
    double cy(int iy) const { return y0 + (iy + 0.5) * h; }

    double cell_area() const { return h * h; }
    double omega_measure() const;
    std::size_t cells_inside() const;
    double max_abs() const;

    /// Checks finiteness, zero extension and a nonempty domain; throws on violation.
    void validate() const;
    void validate_nonnegative() const;
};

GridField load_field(const std::filesystem::path& path);
void save_field(const GridField& field, const std::filesystem::path& path);

/// Jump-type singular part in n = 2: polyline segments carrying a jump of
/// size |amplitude| across them.
struct JumpSegment {
    Vec2 a{0.0, 0.0};
    Vec2 b{0.0, 0.0};
    double amplitude = 0.0;
};

struct JumpSet {
    std::vector<JumpSegment> segments;
    bool empty() const { return segments.empty(); }
    void validate() const; // positive lengths, finite amplitudes
};

JumpSet load_jumps(const std::filesystem::path& path);
void save_jumps(const JumpSet& jumps, const std::filesystem::path& path);

/// Axis-aligned rectangle boundary as four jump segments (used for declared
/// zero-extension jumps of indicator-like fields).
JumpSet rectangle_boundary_jumps(Vec2 lo, Vec2 hi, double amplitude);

/// u = (absolutely continuous grid part, declared jump part).
struct BVComposite {
    GridField ac;
    JumpSet jumps;
};

/// One-dimensional piecewise-constant monotone function on [0, domain],
/// right-continuous: value(s) = values[i] on [breaks[i], breaks[i+1]).
class StaircaseProfile {
public:
    StaircaseProfile() = default;
    StaircaseProfile(std::vector<double> breaks, std::vector<double> values,
                     bool nonincreasing);

    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<double>& piece_values() const { return values_; }
    bool nonincreasing() const { return nonincreasing_; }
    std::size_t pieces() const { return values_.size(); }
    double domain() const { return breaks_.empty() ? 0.0 : breaks_.back(); }

    /// Right-continuous evaluation; clamps to the first/last piece outside
    /// [0, domain). For rearrangements of BV0 functions use threshold() when
    /// the convention u*(|Omega|) = 0 matters.
    double eval(double s) const;
    /// eval(s) for s < domain, 0 for s >= domain.
    double threshold(double s) const;

    double integral() const;
    double integral_abs_pow(double p) const; // integral of |value|^p
    double max_value() const;
    double min_value() const;

    /// Reflection about domain/2: staircase of s -> value(domain - s),
    /// re-normalized to the right-continuous convention.
    StaircaseProfile reflected() const;

private:
    std::vector<double> breaks_; // k + 1 entries, strictly increasing, starts at 0
    std::vector<double> values_; // k entries
    bool nonincreasing_ = true;
};

/// Exact integral of the product of two staircases on the common domain.
double integral_product(const StaircaseProfile& f, const StaircaseProfile& g);

/// Per-cell gradient of the grid part: central differences where both
/// neighbors are masked-in, one-sided toward the interior at domain edges.
/// Masked-out cells get (0, 0).
std::vector<Vec2> ac_gradient(const GridField& field);

/// Jump-aware variant: differences whose stencil crosses a declared jump
/// segment fall back to the one-sided difference on their own side, so the
/// declared singular part is not also smeared into the gradient.
std::vector<Vec2> ac_gradient(const GridField& field, const JumpSet& jumps);

/// mu(t) = h^2 #{masked-in cells with |value| > t}.
double distribution_function(const GridField& field, double t);

/// Sorted staircase of the cell values (nonincreasing), each cell carrying
/// measure h^2; equal adjacent values are merged.
StaircaseProfile decreasing_rearrangement(const GridField& field);
StaircaseProfile increasing_rearrangement(const GridField& field);
StaircaseProfile increasing_rearrangement(const StaircaseProfile& decreasing);

/// Staircase rearrangements of an arbitrary multiset of (value, measure)
/// pairs; used for rearranging gradient magnitudes.
StaircaseProfile decreasing_rearrangement(std::vector<double> values, double cell_measure);

double field_lp_norm(const GridField& field, double p);

} // namespace wulff
