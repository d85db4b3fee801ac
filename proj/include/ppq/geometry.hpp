#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>

namespace ppq {

/// A 2-D position or displacement in dataset coordinate units.
struct Point {
    double x = 0.0;
    double y = 0.0;

    Point operator+(const Point& o) const { return {x + o.x, y + o.y}; }
    Point operator-(const Point& o) const { return {x - o.x, y - o.y}; }
    Point operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Point& o) const { return x == o.x && y == o.y; }
};

inline double norm2(const Point& p) { return std::hypot(p.x, p.y); }
inline double dist(const Point& a, const Point& b) { return norm2(a - b); }

inline std::ostream& operator<<(std::ostream& os, const Point& p) {
    return os << "(" << p.x << ", " << p.y << ")";
}

/// Axis-aligned rectangle, min corner <= max corner componentwise.
/// Containment is closed on all edges; disjointness refers to interiors.
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    bool contains(const Point& p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }

    bool overlaps_interior(const Rect& o) const {
        return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
    }
    Rect intersection(const Rect& o) const {
        return {std::max(x0, o.x0), std::max(y0, o.y0),
                std::min(x1, o.x1), std::min(y1, o.y1)};
    }
    bool empty() const { return x1 <= x0 || y1 <= y0; }

    bool operator==(const Rect& o) const {
        return x0 == o.x0 && y0 == o.y0 && x1 == o.x1 && y1 == o.y1;
    }
};

/// Distance from a point to a closed rectangle (0 when inside).
inline double dist_to_rect(const Point& p, const Rect& r) {
    double dx = std::max({r.x0 - p.x, 0.0, p.x - r.x1});
    double dy = std::max({r.y0 - p.y, 0.0, p.y - r.y1});
    return std::hypot(dx, dy);
}

} // namespace ppq
