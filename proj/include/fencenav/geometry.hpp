#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fencenav {

inline constexpr double kEps = 1e-9;

struct Point {
    double x{0.0};
    double y{0.0};

    friend bool operator==(const Point& a, const Point& b) {
        return a.x == b.x && a.y == b.y;
    }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
};

inline double dist(const Point& a, const Point& b) {
    return std::hypot(b.x - a.x, b.y - a.y);
}

inline bool near(double a, double b, double eps = kEps) {
    return std::fabs(a - b) <= eps;
}

inline bool near(const Point& a, const Point& b, double eps = kEps) {
    return near(a.x, b.x, eps) && near(a.y, b.y, eps);
}

// Axis directions used by rays and greedy motion.
enum class Dir { pos_x, neg_x, pos_y, neg_y };

inline Point step(const Point& p, Dir d, double amount) {
    switch (d) {
        case Dir::pos_x: return {p.x + amount, p.y};
        case Dir::neg_x: return {p.x - amount, p.y};
        case Dir::pos_y: return {p.x, p.y + amount};
        case Dir::neg_y: return {p.x, p.y - amount};
    }
    return p;
}

struct Rect {
    double x_min{0}, y_min{0}, x_max{0}, y_max{0};

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    bool contains_closed(const Point& p, double eps = kEps) const {
        return p.x >= x_min - eps && p.x <= x_max + eps &&
               p.y >= y_min - eps && p.y <= y_max + eps;
    }
    bool contains_open(const Point& p, double eps = kEps) const {
        return p.x > x_min + eps && p.x < x_max - eps &&
               p.y > y_min + eps && p.y < y_max - eps;
    }
};

using Polyline = std::vector<Point>;

inline double polyline_length(const Polyline& p) {
    double len = 0;
    for (std::size_t i = 1; i < p.size(); ++i) len += dist(p[i - 1], p[i]);
    return len;
}

// Appends a vertex, dropping duplicates and merging collinear axis-parallel runs.
inline void append_point(Polyline& poly, const Point& p) {
    if (!poly.empty() && near(poly.back(), p, 0.0)) return;
    if (poly.size() >= 2) {
        const Point& a = poly[poly.size() - 2];
        const Point& b = poly.back();
        const bool same_x = (a.x == b.x && b.x == p.x);
        const bool same_y = (a.y == b.y && b.y == p.y);
        if (same_x || same_y) {
            const double da = same_x ? (b.y - a.y) : (b.x - a.x);
            const double db = same_x ? (p.y - b.y) : (p.x - b.x);
            if ((da >= 0) == (db >= 0)) {
                poly.back() = p;
                return;
            }
        }
    }
    poly.push_back(p);
}

inline Polyline reversed(Polyline p) {
    std::reverse(p.begin(), p.end());
    return p;
}

inline void append_polyline(Polyline& dst, const Polyline& src) {
    for (const Point& p : src) append_point(dst, p);
}

// True when q lies on the axis-parallel segment [a,b] within eps.
inline bool on_axis_segment(const Point& a, const Point& b, const Point& q,
                            double eps = kEps) {
    if (near(a.x, b.x, 0.0)) {
        const double lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
        return near(q.x, a.x, eps) && q.y >= lo - eps && q.y <= hi + eps;
    }
    const double lo = std::min(a.x, b.x), hi = std::max(a.x, b.x);
    return near(q.y, a.y, eps) && q.x >= lo - eps && q.x <= hi + eps;
}

[[noreturn]] inline void internal_fault(const std::string& msg) {
    throw std::logic_error("internal fault: " + msg);
}

}  // namespace fencenav
