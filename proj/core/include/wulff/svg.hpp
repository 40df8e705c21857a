#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wulff/geometry.hpp"

namespace wulff {

/// Minimal deterministic SVG writer: a fixed viewport with labeled axes and
/// polyline/path primitives in data coordinates.
class SvgCanvas {
public:
    SvgCanvas(double xmin, double xmax, double ymin, double ymax,
              std::string x_label, std::string y_label);

    void polyline(const std::vector<Vec2>& pts, const std::string& color, bool close = false);
    void circle(Vec2 center, double radius_px, const std::string& color);
    void title(const std::string& text);

    void write(const std::filesystem::path& path) const;

private:
    double px(double x) const;
    double py(double y) const;
    double xmin_, xmax_, ymin_, ymax_;
    std::string body_;
};

/// Profile plot: the (s, value) graph of a rearrangement profile.
void emit_profile_svg(const std::vector<Vec2>& samples, const std::filesystem::path& path);

/// Closed boundary curve of a Wulff shape.
void emit_shape_svg(const std::vector<std::array<double, 2>>& boundary,
                    const std::filesystem::path& path);

/// One closed path per level-set loop.
void emit_level_sets_svg(const std::vector<std::vector<std::vector<Vec2>>>& level_loops,
                         const std::filesystem::path& path);

} // namespace wulff
