#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace wulff {

using Vec2 = std::array<double, 2>;

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double t, Vec2 a) { return {t * a[0], t * a[1]}; }
inline double dot(Vec2 a, Vec2 b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm2(Vec2 a) { return std::hypot(a[0], a[1]); }
inline double cross(Vec2 a, Vec2 b) { return a[0] * b[1] - a[1] * b[0]; }

/// Left-hand unit normal of the segment a->b. For even norms the side does
/// not matter.
inline Vec2 segment_normal(Vec2 a, Vec2 b) {
    const Vec2 d = b - a;
    const double len = norm2(d);
    return {-d[1] / len, d[0] / len};
}

struct Segment {
    Vec2 a{0.0, 0.0};
    Vec2 b{0.0, 0.0};
    double length() const { return norm2(b - a); }
};

/// Simple closed polygon, vertices in order (either orientation).
struct Polygon {
    std::vector<Vec2> vertices;

    std::size_t size() const { return vertices.size(); }

    double signed_area() const {
        double s = 0.0;
        const std::size_t n = vertices.size();
        for (std::size_t i = 0; i < n; ++i)
            s += cross(vertices[i], vertices[(i + 1) % n]);
        return 0.5 * s;
    }
    double area() const { return std::abs(signed_area()); }

    Segment edge(std::size_t i) const {
        return {vertices[i], vertices[(i + 1) % vertices.size()]};
    }

    bool is_simple() const;
    bool contains(Vec2 p) const; // even-odd rule; boundary points unspecified
};

} // namespace wulff
