#pragma once

#include "fencenav/geometry.hpp"
#include "fencenav/scene.hpp"

namespace fencenav {

// Outcome of a rightward tau-path: either a post-forming contact (nearest
// corner at least tau away) or the wall.
struct TauCore {
    bool wall{false};
    Point post_center{};
    std::int64_t obstacle_id{-1};
    double dx{0};
    double length{0};
};

// Single implementation of the tau-path rule, shared by the robot simulator
// and the geometric tree construction so both produce identical posts.
//
// Walker needs: Point position() const; void move_to(const Point&);
// void on_hit(const Hit&).
template <typename Walker>
TauCore tau_path_core(const Scene& scene, Walker& w, double tau) {
    TauCore res;
    const double wall_x = static_cast<double>(scene.n());
    const double x0 = w.position().x;
    const double y0 = w.position().y;
    auto finish = [&](bool wall) {
        res.wall = wall;
        res.dx = w.position().x - x0;
        return res;
    };
    for (;;) {
        if (w.position().x >= wall_x - kEps) return finish(true);
        const auto ray = scene.first_hit(w.position(), Dir::pos_x,
                                         wall_x - w.position().x + 1.0);
        if (ray.kind != Scene::RayResult::Kind::hit) {
            w.move_to({wall_x, y0});
            return finish(true);
        }
        const Point hit_pt = step(w.position(), Dir::pos_x, ray.distance);
        w.move_to(hit_pt);
        w.on_hit(ray.hit);
        if (ray.hit.corner_distance >= tau - kEps) {
            res.post_center = hit_pt;
            res.obstacle_id = ray.hit.obstacle_id;
            return finish(false);
        }
        const Obstacle o = scene.obstacle(ray.hit.obstacle_id);
        const Point corner = ray.hit.nearest_corner;
        w.move_to({hit_pt.x, corner.y});
        w.move_to({o.x_max, corner.y});
        if (w.position().x >= wall_x - kEps) return finish(true);
        w.move_to({o.x_max, y0});
    }
}

// Scene-query-only walker; accumulates the polyline.
struct PureWalker {
    Point pos{};
    Polyline poly;
    double length{0};

    explicit PureWalker(Point start) : pos(start) { poly.push_back(start); }
    const Point& position() const { return pos; }
    void move_to(const Point& p) {
        length += dist(pos, p);
        pos = p;
        append_point(poly, p);
    }
    void on_hit(const Hit&) {}
};

struct TauTrace {
    TauCore core;
    Polyline poly;
};

inline TauTrace trace_tau_path(const Scene& scene, Point start, double tau) {
    PureWalker w(start);
    TauTrace t;
    t.core = tau_path_core(scene, w, tau);
    t.core.length = w.length;
    t.poly = std::move(w.poly);
    return t;
}

}  // namespace fencenav
