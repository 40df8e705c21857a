#include "wulff/svg.hpp"

#include <algorithm>
#include <fstream>

#include "wulff/error.hpp"
#include "wulff/report.hpp"

namespace wulff {

namespace {

constexpr double kWidth = 640.0, kHeight = 480.0, kMargin = 56.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#7f7f7f"};

} // namespace

SvgCanvas::SvgCanvas(double xmin, double xmax, double ymin, double ymax, std::string x_label,
                     std::string y_label)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax) {
    if (!(xmax_ > xmin_)) xmax_ = xmin_ + 1.0;
    if (!(ymax_ > ymin_)) ymax_ = ymin_ + 1.0;
    body_ += "<rect x=\"0\" y=\"0\" width=\"" + format_double(kWidth) + "\" height=\"" +
             format_double(kHeight) + "\" fill=\"white\"/>\n";
    // Axes with tick labels at the corners.
    body_ += "<line x1=\"" + format_double(kMargin) + "\" y1=\"" + format_double(kHeight - kMargin) +
             "\" x2=\"" + format_double(kWidth - kMargin) + "\" y2=\"" +
             format_double(kHeight - kMargin) + "\" stroke=\"black\"/>\n";
    body_ += "<line x1=\"" + format_double(kMargin) + "\" y1=\"" + format_double(kMargin) +
             "\" x2=\"" + format_double(kMargin) + "\" y2=\"" + format_double(kHeight - kMargin) +
             "\" stroke=\"black\"/>\n";
    body_ += "<text x=\"" + format_double(kWidth / 2) + "\" y=\"" + format_double(kHeight - 12.0) +
             "\" text-anchor=\"middle\" font-size=\"14\">" + x_label + "</text>\n";
    body_ += "<text x=\"16\" y=\"" + format_double(kHeight / 2) +
             "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 16 " +
             format_double(kHeight / 2) + ")\">" + y_label + "</text>\n";
    const auto tick = [&](double vx, double vy, const std::string& label, bool xaxis) {
        body_ += "<text x=\"" + format_double(vx) + "\" y=\"" + format_double(vy) +
                 (xaxis ? "\" text-anchor=\"middle\"" : "\" text-anchor=\"end\"") +
                 " font-size=\"11\">" + label + "</text>\n";
    };
    tick(kMargin, kHeight - kMargin + 18.0, format_double(xmin_), true);
    tick(kWidth - kMargin, kHeight - kMargin + 18.0, format_double(xmax_), true);
    tick(kMargin - 6.0, kHeight - kMargin, format_double(ymin_), false);
    tick(kMargin - 6.0, kMargin + 4.0, format_double(ymax_), false);
}

double SvgCanvas::px(double x) const {
    return kMargin + (x - xmin_) / (xmax_ - xmin_) * (kWidth - 2.0 * kMargin);
}

double SvgCanvas::py(double y) const {
    return kHeight - kMargin - (y - ymin_) / (ymax_ - ymin_) * (kHeight - 2.0 * kMargin);
}

void SvgCanvas::polyline(const std::vector<Vec2>& pts, const std::string& color, bool close) {
    if (pts.empty()) return;
    std::string d = "M";
    for (const auto& p : pts)
        d += " " + format_double(px(p[0])) + " " + format_double(py(p[1]));
    if (close) d += " Z";
    body_ += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
}

void SvgCanvas::circle(Vec2 center, double radius_px, const std::string& color) {
    body_ += "<circle cx=\"" + format_double(px(center[0])) + "\" cy=\"" +
             format_double(py(center[1])) + "\" r=\"" + format_double(radius_px) + "\" fill=\"" +
             color + "\"/>\n";
}

void SvgCanvas::title(const std::string& text) {
    body_ += "<text x=\"" + format_double(kWidth / 2) +
             "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + text + "</text>\n";
}

void SvgCanvas::write(const std::filesystem::path& path) const {
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      format_double(kWidth) + "\" height=\"" + format_double(kHeight) + "\">\n" +
                      body_ + "</svg>\n";
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f || !(f << out))
            throw_error("io:write-failed", "cannot write '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw_error("io:write-failed", "cannot rename temp SVG: " + ec.message());
}

void emit_profile_svg(const std::vector<Vec2>& samples, const std::filesystem::path& path) {
    if (samples.empty())
        throw_error("domain:empty-domain", "profile plot needs at least one sample");
    double xmax = 0.0, ymax = 0.0;
    for (const auto& p : samples) {
        xmax = std::max(xmax, p[0]);
        ymax = std::max(ymax, p[1]);
    }
    SvgCanvas canvas(0.0, xmax, 0.0, std::max(ymax, 1e-12), "s (measure)", "value");
    canvas.title("rearrangement profile");
    canvas.polyline(samples, kPalette[0]);
    canvas.write(path);
}

void emit_shape_svg(const std::vector<std::array<double, 2>>& boundary,
                    const std::filesystem::path& path) {
    if (boundary.empty())
        throw_error("domain:empty-domain", "shape plot needs boundary points");
    double ext = 0.0;
    for (const auto& p : boundary) ext = std::max({ext, std::abs(p[0]), std::abs(p[1])});
    ext *= 1.1;
    SvgCanvas canvas(-ext, ext, -ext, ext, "x", "y");
    canvas.title("Wulff shape");
    std::vector<Vec2> pts(boundary.begin(), boundary.end());
    canvas.polyline(pts, kPalette[1], /*close=*/true);
    canvas.circle({0.0, 0.0}, 2.0, "black");
    canvas.write(path);
}

void emit_level_sets_svg(const std::vector<std::vector<std::vector<Vec2>>>& level_loops,
                         const std::filesystem::path& path) {
    if (level_loops.empty())
        throw_error("domain:empty-domain", "level-set plot needs at least one level");
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    bool first = true;
    for (const auto& level : level_loops)
        for (const auto& loop : level)
            for (const auto& p : loop) {
                if (first) {
                    xmin = xmax = p[0];
                    ymin = ymax = p[1];
                    first = false;
                }
                xmin = std::min(xmin, p[0]);
                xmax = std::max(xmax, p[0]);
                ymin = std::min(ymin, p[1]);
                ymax = std::max(ymax, p[1]);
            }
    SvgCanvas canvas(xmin, xmax, ymin, ymax, "x", "y");
    canvas.title("level sets");
    for (std::size_t k = 0; k < level_loops.size(); ++k)
        for (const auto& loop : level_loops[k])
            canvas.polyline(loop, kPalette[k % 8], /*close=*/true);
    canvas.write(path);
}

} // namespace wulff
