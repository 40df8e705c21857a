#include "wulff/geometry.hpp"

namespace wulff {

namespace {

bool proper_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
    const auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); };
    const double o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    const double o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

} // namespace

bool Polygon::is_simple() const {
    const std::size_t n = vertices.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Segment si = edge(i);
        if (!(si.length() > 0.0)) return false;
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue; // adjacent through the wrap
            const Segment sj = edge(j);
            if (proper_intersect(si.a, si.b, sj.a, sj.b)) return false;
        }
    }
    return true;
}

bool Polygon::contains(Vec2 p) const {
    // Even-odd ray casting toward +x.
    bool in = false;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = vertices[i], b = vertices[(i + 1) % n];
        if ((a[1] > p[1]) != (b[1] > p[1])) {
            const double x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if (p[0] < x) in = !in;
        }
    }
    return in;
}

} // namespace wulff
