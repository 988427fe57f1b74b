#include "fencenav/robot.hpp"

#include <algorithm>
#include <cmath>

#include "fencenav/tau_trace.hpp"

namespace fencenav {

const char* traj_tag_name(TrajTag t) {
    switch (t) {
        case TrajTag::edge_up: return "edge-up";
        case TrajTag::edge_down: return "edge-down";
        case TrajTag::transition: return "transition";
        case TrajTag::godown: return "godown";
        case TrajTag::gobackdown: return "gobackdown";
        case TrajTag::backtrack: return "backtrack";
        case TrajTag::follow: return "follow";
        case TrajTag::search: return "search";
    }
    return "?";
}

namespace {

// Earliest parameter on [a,b] where the moving point lies on segment [c,d].
// All segments are axis-parallel.
std::optional<double> seg_touch_t(const Point& a, const Point& b, const Point& c,
                                  const Point& d) {
    const bool ab_vert = near(a.x, b.x, 0.0);
    const bool cd_vert = near(c.x, d.x, 0.0);
    const double ab_len = ab_vert ? std::fabs(b.y - a.y) : std::fabs(b.x - a.x);
    if (ab_len <= 0) {
        return on_axis_segment(c, d, a) ? std::optional<double>(0.0) : std::nullopt;
    }
    auto param = [&](const Point& p) {
        return ab_vert ? (p.y - a.y) / (b.y - a.y) : (p.x - a.x) / (b.x - a.x);
    };
    const double tol = kEps;
    if (ab_vert && cd_vert) {
        if (!near(a.x, c.x, tol)) return std::nullopt;
        const double lo = std::min(c.y, d.y), hi = std::max(c.y, d.y);
        // Earliest point of [a,b] within [lo,hi].
        const double t0 = param({a.x, std::clamp(a.y, lo, hi)});
        const double t1 = param({a.x, std::clamp(b.y, lo, hi)});
        const double t = std::min(std::max(0.0, t0), std::max(0.0, t1));
        const double yy = a.y + (b.y - a.y) * t;
        if (yy >= lo - tol && yy <= hi + tol && t <= 1 + tol) {
            return std::clamp(t, 0.0, 1.0);
        }
        return std::nullopt;
    }
    if (!ab_vert && !cd_vert) {
        if (!near(a.y, c.y, tol)) return std::nullopt;
        const double lo = std::min(c.x, d.x), hi = std::max(c.x, d.x);
        const double t0 = param({std::clamp(a.x, lo, hi), a.y});
        const double t1 = param({std::clamp(b.x, lo, hi), a.y});
        const double t = std::min(std::max(0.0, t0), std::max(0.0, t1));
        const double xx = a.x + (b.x - a.x) * t;
        if (xx >= lo - tol && xx <= hi + tol && t <= 1 + tol) {
            return std::clamp(t, 0.0, 1.0);
        }
        return std::nullopt;
    }
    if (ab_vert) {
        // [a,b] vertical, [c,d] horizontal.
        const double lo = std::min(c.x, d.x), hi = std::max(c.x, d.x);
        if (a.x < lo - tol || a.x > hi + tol) return std::nullopt;
        const double t = param({a.x, c.y});
        if (t < -tol || t > 1 + tol) return std::nullopt;
        return std::clamp(t, 0.0, 1.0);
    }
    // [a,b] horizontal, [c,d] vertical.
    const double lo = std::min(c.y, d.y), hi = std::max(c.y, d.y);
    if (a.y < lo - tol || a.y > hi + tol) return std::nullopt;
    const double t = param({c.x, a.y});
    if (t < -tol || t > 1 + tol) return std::nullopt;
    return std::clamp(t, 0.0, 1.0);
}

}  // namespace

StopSpec::Event StopSpec::first_stop(const Point& a, const Point& b,
                                     double wall_x) const {
    Event best;
    best.t = 2.0;
    auto consider = [&](Event::Kind kind, double t, const Point& p, int index) {
        if (t < best.t - 1e-15) {
            best.kind = kind;
            best.t = t;
            best.point = p;
            best.index = index;
        }
    };
    const bool vert = near(a.x, b.x, 0.0);
    const double len = vert ? (b.y - a.y) : (b.x - a.x);
    auto point_at = [&](double t) {
        return vert ? Point{a.x, a.y + (b.y - a.y) * t}
                    : Point{a.x + (b.x - a.x) * t, a.y};
    };
    if (y_leq) {
        if (a.y <= *y_leq + kEps) {
            consider(Event::Kind::y_level, 0.0, a, -1);
        } else if (vert && len < 0 && b.y <= *y_leq + kEps) {
            const double t = (a.y - *y_leq) / (a.y - b.y);
            consider(Event::Kind::y_level, std::clamp(t, 0.0, 1.0),
                     {a.x, *y_leq}, -1);
        }
    }
    if (x_leq) {
        if (a.x <= *x_leq + kEps) {
            consider(Event::Kind::x_level, 0.0, a, -1);
        } else if (!vert && len < 0 && b.x <= *x_leq + kEps) {
            const double t = (a.x - *x_leq) / (a.x - b.x);
            consider(Event::Kind::x_level, std::clamp(t, 0.0, 1.0),
                     {*x_leq, a.y}, -1);
        }
    }
    if (wall) {
        if (a.x >= wall_x - kEps) {
            consider(Event::Kind::wall, 0.0, {wall_x, a.y}, -1);
        } else if (!vert && len > 0 && b.x >= wall_x - kEps) {
            const double t = (wall_x - a.x) / (b.x - a.x);
            consider(Event::Kind::wall, std::clamp(t, 0.0, 1.0), {wall_x, a.y}, -1);
        }
    }
    if (posts) {
        for (std::size_t i = 0; i < posts->size(); ++i) {
            const PostSegment& ps = (*posts)[i];
            const Point c{ps.x, ps.y_lo}, d{ps.x, ps.y_hi};
            if (auto t = seg_touch_t(a, b, c, d)) {
                consider(Event::Kind::post, *t, point_at(*t), static_cast<int>(i));
            }
        }
    }
    if (path && path->size() >= 2) {
        for (std::size_t i = 0; i + 1 < path->size(); ++i) {
            if (auto t = seg_touch_t(a, b, (*path)[i], (*path)[i + 1])) {
                consider(Event::Kind::path, *t, point_at(*t), static_cast<int>(i));
            }
        }
    } else if (path && path->size() == 1) {
        if (auto t = seg_touch_t(a, b, (*path)[0], (*path)[0])) {
            consider(Event::Kind::path, *t, point_at(*t), 0);
        }
    }
    if (rects) {
        for (std::size_t i = 0; i < rects->size(); ++i) {
            const Rect& r = (*rects)[i];
            // Earliest parameter where the point is inside the closed rect.
            double t0 = 0, t1 = 1;
            bool ok = true;
            const double dx = b.x - a.x, dy = b.y - a.y;
            if (std::fabs(dx) < 1e-300) {
                ok = a.x >= r.x_min - kEps && a.x <= r.x_max + kEps;
            } else {
                double ta = (r.x_min - a.x) / dx, tb = (r.x_max - a.x) / dx;
                if (ta > tb) std::swap(ta, tb);
                t0 = std::max(t0, ta);
                t1 = std::min(t1, tb);
            }
            if (ok) {
                if (std::fabs(dy) < 1e-300) {
                    ok = a.y >= r.y_min - kEps && a.y <= r.y_max + kEps;
                } else {
                    double ta = (r.y_min - a.y) / dy, tb = (r.y_max - a.y) / dy;
                    if (ta > tb) std::swap(ta, tb);
                    t0 = std::max(t0, ta);
                    t1 = std::min(t1, tb);
                }
            }
            if (ok && t0 <= t1 + kEps) {
                const double t = std::clamp(t0, 0.0, 1.0);
                consider(Event::Kind::rect, t, point_at(t), static_cast<int>(i));
            }
        }
    }
    if (best.kind == Event::Kind::none) best.t = 0;
    return best;
}

void RobotState::begin_trip() {
    ++trip_;
    trip_odometer_ = 0;
    trip_moves_ = 0;
}

void RobotState::record(const Point& to, TrajTag tag) {
    if (++moves_ > kMoveBudget || ++trip_moves_ > kMoveBudget) {
        internal_fault("move budget exceeded (nontermination guard)");
    }
    const double d = dist(pos_, to);
    if (d == 0) return;
    traj_.push_back({trip_, tag, pos_, to});
    odometer_ += d;
    trip_odometer_ += d;
    pos_ = to;
}

void RobotState::note_hit(const Hit& h) {
    if (!hits_.empty()) {
        const Hit& last = hits_.back();
        if (last.obstacle_id == h.obstacle_id && last.point == h.point) return;
    }
    hits_.push_back(h);
    touched_.insert(h.obstacle_id);
}

RobotState::MoveResult RobotState::straight_move(const Point& target, TrajTag tag) {
    MoveResult res;
    if (near(target, pos_, 0.0)) return res;
    Dir dir;
    double span;
    if (near(target.x, pos_.x, 0.0)) {
        dir = target.y > pos_.y ? Dir::pos_y : Dir::neg_y;
        span = std::fabs(target.y - pos_.y);
    } else if (near(target.y, pos_.y, 0.0)) {
        dir = target.x > pos_.x ? Dir::pos_x : Dir::neg_x;
        span = std::fabs(target.x - pos_.x);
    } else {
        internal_fault("straight_move: target not axis-aligned with position");
    }
    // A contact exactly at the target is an arrival, not a bump.
    const auto ray = scene_->first_hit(pos_, dir, span);
    if (ray.kind == Scene::RayResult::Kind::hit && ray.distance < span - kEps) {
        const Point stop = step(pos_, dir, ray.distance);
        record(stop, tag);
        res.blocked = true;
        res.hit = ray.hit;
        note_hit(ray.hit);
        return res;
    }
    // Reaching the wall is not a block; the caller sees it via position.
    record(target, tag);
    return res;
}

void RobotState::teleport_check(const Point& expected) const {
    if (!near(pos_, expected)) {
        internal_fault("robot position mismatch");
    }
}

Polyline RobotState::collect(std::size_t from_mark) const {
    Polyline out;
    if (from_mark > traj_.size()) internal_fault("collect: bad mark");
    if (from_mark == traj_.size()) {
        out.push_back(pos_);
        return out;
    }
    out.push_back(traj_[from_mark].a);
    for (std::size_t i = from_mark; i < traj_.size(); ++i) {
        append_point(out, traj_[i].b);
    }
    return out;
}

namespace {

// One primitive of a greedy walk: move toward `dir` as far as `max_span`,
// honoring the stop spec continuously. Returns the stop event, the hit (if
// blocked) and whether anything remains.
struct LegOutcome {
    bool stopped{false};
    StopSpec::Event event{};
    bool blocked{false};
    Hit hit{};
};

LegOutcome walk_leg(RobotState& rs, Dir dir, double max_span, const StopSpec& stop,
                    TrajTag tag) {
    LegOutcome out;
    const Point a = rs.position();
    const double wall_x = static_cast<double>(rs.scene().n());
    const auto ray = rs.scene().first_hit(a, dir, max_span);
    double span = max_span;
    bool blocked = false;
    Hit hit;
    if (ray.kind == Scene::RayResult::Kind::hit) {
        span = ray.distance;
        blocked = true;
        hit = ray.hit;
    } else if (ray.kind == Scene::RayResult::Kind::wall) {
        span = ray.distance;
    }
    const Point b = step(a, dir, span);
    const auto ev = stop.first_stop(a, b, wall_x);
    if (ev.kind != StopSpec::Event::Kind::none) {
        const Point stop_pt = ev.point;
        if (dist(a, stop_pt) <= span + kEps) {
            rs.straight_move(stop_pt, tag);
            out.stopped = true;
            out.event = ev;
            return out;
        }
    }
    if (blocked) {
        const auto mv = rs.straight_move(b, tag);
        if (!mv.blocked && near(rs.position(), b)) {
            // Entry at distance `span`; straight_move repeats the ray query, so
            // a mismatch here would be a scene-index bug.
            rs.note_hit(hit);
        }
        out.blocked = true;
        out.hit = hit;
        return out;
    }
    rs.straight_move(b, tag);
    return out;
}

}  // namespace

GreedyResult greedy_path(RobotState& rs, Dir primary, Dir secondary,
                         const StopSpec& stop, TrajTag tag) {
    GreedyResult res;
    const double wall_x = static_cast<double>(rs.scene().n());
    const double start_len = rs.odometer();
    const double kBig = 4.0e9;
    for (;;) {
        // Stop conditions that already hold at the current point.
        const auto ev0 = stop.first_stop(rs.position(), rs.position(), wall_x);
        if (ev0.kind != StopSpec::Event::Kind::none) {
            res.event = ev0;
            res.length = rs.odometer() - start_len;
            return res;
        }
        LegOutcome leg = walk_leg(rs, primary, kBig, stop, tag);
        if (leg.stopped) {
            res.event = leg.event;
            res.length = rs.odometer() - start_len;
            return res;
        }
        if (!leg.blocked) {
            if (primary == Dir::pos_x && near(rs.position().x, wall_x)) {
                res.cause = GreedyResult::Cause::wall;
                res.length = rs.odometer() - start_len;
                return res;
            }
            internal_fault("greedy_path: unbounded primary motion");
        }
        // Secondary hop to the blocking obstacle's corner in that direction.
        const Obstacle o = rs.scene().obstacle(leg.hit.obstacle_id);
        Point corner;
        switch (secondary) {
            case Dir::neg_y:
                corner = {leg.hit.point.x, o.y_min};
                break;
            case Dir::pos_y:
                corner = {leg.hit.point.x, o.y_max};
                break;
            case Dir::neg_x:
                corner = {o.x_min, leg.hit.point.y};
                break;
            case Dir::pos_x:
                corner = {o.x_max, leg.hit.point.y};
                break;
        }
        const Point a = rs.position();
        const auto ev = stop.first_stop(a, corner, wall_x);
        if (ev.kind != StopSpec::Event::Kind::none) {
            rs.straight_move(ev.point, tag);
            res.event = ev;
            res.length = rs.odometer() - start_len;
            return res;
        }
        const auto mv = rs.straight_move(corner, tag);
        if (mv.blocked) {
            internal_fault("greedy_path: secondary hop blocked");
        }
    }
}

namespace {

// Drives the shared tau-path rule through the robot so trajectory, odometer
// and knowledge are updated while the decisions stay identical to the
// geometric tracer.
struct RobotWalker {
    RobotState& rs;
    TrajTag tag;

    const Point& position() const { return rs.position(); }
    void move_to(const Point& p) {
        const auto mv = rs.straight_move(p, tag);
        if (mv.blocked && !near(rs.position(), p)) {
            internal_fault("tau_path: unexpected block");
        }
    }
    void on_hit(const Hit& h) { rs.note_hit(h); }
};

}  // namespace

TauPathResult tau_path(RobotState& rs, double tau, TrajTag tag) {
    TauPathResult res;
    const double start_len = rs.odometer();
    RobotWalker w{rs, tag};
    const TauCore core = tau_path_core(rs.scene(), w, tau);
    res.wall = core.wall;
    res.post_center = core.post_center;
    res.obstacle_id = core.obstacle_id;
    res.stat.dx = core.dx;
    res.stat.length = rs.odometer() - start_len;
    res.stat.tau = tau;
    if (res.stat.length > res.stat.dx * (1 + 2 * tau) + 1e-6) {
        internal_fault("tau_path: length bound violated");
    }
    return res;
}

void follow_path(RobotState& rs, const Polyline& path, bool reverse, TrajTag tag) {
    if (path.empty()) return;
    Polyline p = reverse ? reversed(path) : path;
    rs.teleport_check(p.front());
    for (std::size_t i = 1; i < p.size(); ++i) {
        const auto mv = rs.straight_move(p[i], tag);
        if (mv.blocked && !near(rs.position(), p[i])) {
            internal_fault("follow_path: path intersects an interior");
        }
    }
}

StopSpec::Event follow_path_until(RobotState& rs, const Polyline& path,
                                  bool reverse, const StopSpec& stop,
                                  TrajTag tag) {
    StopSpec::Event none;
    if (path.empty()) return none;
    Polyline p = reverse ? reversed(path) : path;
    rs.teleport_check(p.front());
    const double wall_x = static_cast<double>(rs.scene().n());
    for (std::size_t i = 1; i < p.size(); ++i) {
        const Point a = rs.position();
        const auto ev = stop.first_stop(a, p[i], wall_x);
        if (ev.kind != StopSpec::Event::Kind::none) {
            const auto mv = rs.straight_move(ev.point, tag);
            if (mv.blocked && !near(rs.position(), ev.point)) {
                internal_fault("follow_path_until: path intersects an interior");
            }
            return ev;
        }
        const auto mv = rs.straight_move(p[i], tag);
        if (mv.blocked && !near(rs.position(), p[i])) {
            internal_fault("follow_path_until: path intersects an interior");
        }
    }
    return none;
}

}  // namespace fencenav
