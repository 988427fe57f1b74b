#include "fencenav/scene.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

namespace fencenav {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

std::int64_t zigzag(std::int64_t v) { return v >= 0 ? 2 * v : -2 * v - 1; }
std::int64_t unzigzag(std::int64_t v) { return (v % 2 == 0) ? v / 2 : -(v + 1) / 2; }

}  // namespace

std::string format_double(double v) {
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    if (std::strtod(buf, nullptr) != v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
    }
    return buf;
}

Point nearest_corner_of(const Obstacle& o, const Point& p) {
    const Point corners[4] = {{o.x_min, o.y_min},
                              {o.x_max, o.y_min},
                              {o.x_min, o.y_max},
                              {o.x_max, o.y_max}};
    Point best = corners[0];
    double best_d = dist(p, corners[0]);
    for (int i = 1; i < 4; ++i) {
        const double d = dist(p, corners[i]);
        if (d < best_d - kEps) {
            best = corners[i];
            best_d = d;
        } else if (d <= best_d + kEps) {
            if (corners[i].y < best.y - kEps ||
                (near(corners[i].y, best.y) && corners[i].x < best.x - kEps)) {
                best = corners[i];
                best_d = std::min(best_d, d);
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// BrickPattern

Obstacle BrickPattern::brick(std::int64_t c, std::int64_t j) const {
    const double h = p_.h;
    Obstacle o;
    o.id = encode(c, j);
    o.x_min = static_cast<double>(c);
    o.x_max = static_cast<double>(c + 1);
    if (((c % 2) + 2) % 2 == 0) {
        o.y_min = j * h - h / 2;
        o.y_max = j * h + h / 2;
    } else {
        o.y_min = j * h;
        o.y_max = (j + 1) * h;
    }
    return o;
}

std::optional<Obstacle> BrickPattern::brick_containing(std::int64_t c,
                                                       double y) const {
    const double h = p_.h;
    std::int64_t j;
    if (((c % 2) + 2) % 2 == 0) {
        j = static_cast<std::int64_t>(std::floor(y / h + 0.5));
    } else {
        j = static_cast<std::int64_t>(std::floor(y / h));
    }
    for (std::int64_t cand = j - 1; cand <= j + 1; ++cand) {
        Obstacle o = brick(c, cand);
        if (y > o.y_min && y < o.y_max) return o;
    }
    return std::nullopt;
}

std::int64_t BrickPattern::encode(std::int64_t c, std::int64_t j) {
    const std::int64_t a = zigzag(c), b = zigzag(j);
    return a * (std::int64_t{1} << 31) + b;
}

void BrickPattern::decode(std::int64_t id, std::int64_t& c, std::int64_t& j) {
    const std::int64_t shift = std::int64_t{1} << 31;
    c = unzigzag(id / shift);
    j = unzigzag(id % shift);
}

int BrickPattern::color(std::int64_t id) const {
    std::int64_t c, j;
    decode(id, c, j);
    if (((c % 2) + 2) % 2 == 0) {
        const std::int64_t pair = floor_div(c, 2);
        return static_cast<int>(((j + pair) % 2 + 2) % 2);
    }
    const std::int64_t pair = floor_div(c - 1, 2);
    return 2 + static_cast<int>(((j + pair) % 2 + 2) % 2);
}

std::vector<Obstacle> BrickPattern::materialize(const Rect& region) const {
    std::vector<Obstacle> out;
    const std::int64_t c_lo = static_cast<std::int64_t>(std::floor(region.x_min)) - 1;
    const std::int64_t c_hi = static_cast<std::int64_t>(std::ceil(region.x_max));
    const double h = p_.h;
    for (std::int64_t c = c_lo; c <= c_hi; ++c) {
        const bool even = ((c % 2) + 2) % 2 == 0;
        const double off = even ? -h / 2 : 0.0;
        std::int64_t j_lo =
            static_cast<std::int64_t>(std::floor((region.y_min - off) / h)) - 1;
        std::int64_t j_hi =
            static_cast<std::int64_t>(std::ceil((region.y_max - off) / h)) + 1;
        for (std::int64_t j = j_lo; j <= j_hi; ++j) {
            Obstacle o = brick(c, j);
            if (o.x_max < region.x_min || o.x_min > region.x_max ||
                o.y_max < region.y_min || o.y_min > region.y_max) {
                continue;
            }
            out.push_back(o);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scene

Scene Scene::explicit_scene(std::int64_t n, std::vector<Obstacle> obstacles) {
    Scene s;
    s.n_ = n;
    s.obstacles_ = std::move(obstacles);
    for (std::size_t i = 0; i < s.obstacles_.size(); ++i) {
        s.obstacles_[i].id = static_cast<std::int64_t>(i);
    }
    s.build_index();
    return s;
}

Scene Scene::brick_scene(std::int64_t n, double h) {
    Scene s;
    s.n_ = n;
    s.bricks_.emplace(BrickParams{n, h});
    return s;
}

Obstacle Scene::obstacle(std::int64_t id) const {
    if (bricks_) {
        std::int64_t c, j;
        BrickPattern::decode(id, c, j);
        return bricks_->brick(c, j);
    }
    return obstacles_.at(static_cast<std::size_t>(id));
}

Scene Scene::materialize(const Rect& region) const {
    if (!bricks_) return *this;
    Scene s = explicit_scene(n_, bricks_->materialize(region));
    s.set_generator_tag(tag_);
    return s;
}

void Scene::build_index() {
    grid_ = GridIndex{};
    if (obstacles_.empty()) return;
    double x0 = obstacles_[0].x_min, x1 = obstacles_[0].x_max;
    double y0 = obstacles_[0].y_min, y1 = obstacles_[0].y_max;
    double total_area = 0;
    for (const Obstacle& o : obstacles_) {
        x0 = std::min(x0, o.x_min);
        x1 = std::max(x1, o.x_max);
        y0 = std::min(y0, o.y_min);
        y1 = std::max(y1, o.y_max);
        total_area += (o.x_max - o.x_min) * (o.y_max - o.y_min);
    }
    const double avg_dim =
        std::sqrt(std::max(1.0, total_area / static_cast<double>(obstacles_.size())));
    double cell = std::max(1.0, avg_dim);
    const double span = std::max(x1 - x0, y1 - y0);
    cell = std::max(cell, span / 2048.0);
    grid_.x0 = x0;
    grid_.y0 = y0;
    grid_.cell = cell;
    grid_.nx = static_cast<int>(std::floor((x1 - x0) / cell)) + 1;
    grid_.ny = static_cast<int>(std::floor((y1 - y0) / cell)) + 1;
    grid_.cells.assign(static_cast<std::size_t>(grid_.nx) * grid_.ny, {});
    for (const Obstacle& o : obstacles_) {
        const int cx0 = std::clamp(
            static_cast<int>(std::floor((o.x_min - x0) / cell)), 0, grid_.nx - 1);
        const int cx1 = std::clamp(
            static_cast<int>(std::floor((o.x_max - x0) / cell)), 0, grid_.nx - 1);
        const int cy0 = std::clamp(
            static_cast<int>(std::floor((o.y_min - y0) / cell)), 0, grid_.ny - 1);
        const int cy1 = std::clamp(
            static_cast<int>(std::floor((o.y_max - y0) / cell)), 0, grid_.ny - 1);
        for (int cx = cx0; cx <= cx1; ++cx) {
            for (int cy = cy0; cy <= cy1; ++cy) {
                grid_.cells[static_cast<std::size_t>(cy) * grid_.nx + cx].push_back(
                    static_cast<std::int32_t>(o.id));
            }
        }
    }
    grid_.row_occupied.assign(static_cast<std::size_t>(grid_.ny), {});
    grid_.col_occupied.assign(static_cast<std::size_t>(grid_.nx), {});
    for (int cy = 0; cy < grid_.ny; ++cy) {
        for (int cx = 0; cx < grid_.nx; ++cx) {
            if (!grid_.cells[static_cast<std::size_t>(cy) * grid_.nx + cx].empty()) {
                grid_.row_occupied[static_cast<std::size_t>(cy)].push_back(cx);
                grid_.col_occupied[static_cast<std::size_t>(cx)].push_back(cy);
            }
        }
    }
}

std::vector<std::string> Scene::validate() const {
    std::vector<std::string> out;
    if (n_ < 1) out.push_back("n must be >= 1");
    if (bricks_) {
        const double h = bricks_->params().h;
        if (h < std::sqrt(static_cast<double>(n_)) - kEps) {
            out.push_back("brick height below sqrt(n)");
        }
        return out;
    }
    for (const Obstacle& o : obstacles_) {
        const std::string id = "obstacle " + std::to_string(o.id);
        if (o.x_max - o.x_min < 1.0 - kEps) out.push_back(id + ": width < 1");
        if (o.y_max - o.y_min < 1.0 - kEps) out.push_back(id + ": height < 1");
        if (!near(o.x_min, std::round(o.x_min)) || !near(o.x_max, std::round(o.x_max))) {
            out.push_back(id + ": non-integral x corner");
        }
        if (o.x_min < static_cast<double>(n_) - kEps &&
            o.x_max > static_cast<double>(n_) + kEps) {
            out.push_back(id + ": interior crosses the wall");
        }
        if (o.rect().contains_open({0, 0})) {
            out.push_back(id + ": contains the start point");
        }
    }
    for (std::size_t i = 0; i < obstacles_.size(); ++i) {
        for (std::size_t j = i + 1; j < obstacles_.size(); ++j) {
            const Obstacle& a = obstacles_[i];
            const Obstacle& b = obstacles_[j];
            const bool x_overlap =
                a.x_min < b.x_max - kEps && b.x_min < a.x_max - kEps;
            const bool y_overlap =
                a.y_min < b.y_max - kEps && b.y_min < a.y_max - kEps;
            if (x_overlap && y_overlap) {
                out.push_back("obstacles " + std::to_string(a.id) + " and " +
                              std::to_string(b.id) + " overlap");
            }
        }
    }
    return out;
}

bool Scene::point_in_interior(const Point& p) const {
    if (bricks_) {
        const std::int64_t c = static_cast<std::int64_t>(std::floor(p.x));
        if (near(p.x, std::round(p.x))) return false;
        auto o = bricks_->brick_containing(c, p.y);
        return o.has_value() && p.y > o->y_min && p.y < o->y_max;
    }
    if (grid_.empty()) return false;
    const int cx = static_cast<int>(std::floor((p.x - grid_.x0) / grid_.cell));
    const int cy = static_cast<int>(std::floor((p.y - grid_.y0) / grid_.cell));
    if (cx < 0 || cx >= grid_.nx || cy < 0 || cy >= grid_.ny) return false;
    for (std::int32_t id : grid_.cells[static_cast<std::size_t>(cy) * grid_.nx + cx]) {
        const Obstacle& o = obstacles_[static_cast<std::size_t>(id)];
        if (p.x > o.x_min + kEps && p.x < o.x_max - kEps && p.y > o.y_min + kEps &&
            p.y < o.y_max - kEps) {
            return true;
        }
    }
    return false;
}

namespace {

// Entry distance of an axis ray into the open interior, or nullopt.
std::optional<double> ray_entry(const Obstacle& o, const Point& origin, Dir dir) {
    switch (dir) {
        case Dir::pos_x:
            if (origin.y > o.y_min + kEps && origin.y < o.y_max - kEps &&
                o.x_min >= origin.x - kEps) {
                return std::max(0.0, o.x_min - origin.x);
            }
            return std::nullopt;
        case Dir::neg_x:
            if (origin.y > o.y_min + kEps && origin.y < o.y_max - kEps &&
                o.x_max <= origin.x + kEps) {
                return std::max(0.0, origin.x - o.x_max);
            }
            return std::nullopt;
        case Dir::pos_y:
            if (origin.x > o.x_min + kEps && origin.x < o.x_max - kEps &&
                o.y_min >= origin.y - kEps) {
                return std::max(0.0, o.y_min - origin.y);
            }
            return std::nullopt;
        case Dir::neg_y:
            if (origin.x > o.x_min + kEps && origin.x < o.x_max - kEps &&
                o.y_max <= origin.y + kEps) {
                return std::max(0.0, origin.y - o.y_max);
            }
            return std::nullopt;
    }
    return std::nullopt;
}

Hit make_hit(const Obstacle& o, const Point& origin, Dir dir, double d) {
    Hit h;
    h.obstacle_id = o.id;
    h.point = step(origin, dir, d);
    h.nearest_corner = nearest_corner_of(o, h.point);
    h.corner_distance = dist(h.point, h.nearest_corner);
    return h;
}

}  // namespace

Scene::RayResult Scene::first_hit(const Point& origin, Dir dir, double limit) const {
    if (point_in_interior(origin)) {
        throw std::invalid_argument("first_hit: embedded origin");
    }
    RayResult r =
        bricks_ ? first_hit_bricks(origin, dir, limit) : first_hit_explicit(origin, dir, limit);
    if (dir == Dir::pos_x) {
        const double wall_d = static_cast<double>(n_) - origin.x;
        if (wall_d >= -kEps && wall_d <= limit + kEps) {
            if (r.kind != RayResult::Kind::hit || r.distance > wall_d + kEps) {
                RayResult w;
                w.kind = RayResult::Kind::wall;
                w.distance = std::max(0.0, wall_d);
                return w;
            }
        }
    }
    return r;
}

Scene::RayResult Scene::first_hit_explicit(const Point& origin, Dir dir,
                                           double limit) const {
    RayResult best;
    if (grid_.empty()) return best;
    const bool horizontal = (dir == Dir::pos_x || dir == Dir::neg_x);
    const double sign = (dir == Dir::pos_x || dir == Dir::pos_y) ? 1.0 : -1.0;
    const double cell = grid_.cell;

    const double cross = horizontal ? origin.y : origin.x;
    const double cross0 = horizontal ? grid_.y0 : grid_.x0;
    const int cross_n = horizontal ? grid_.ny : grid_.nx;
    const int ci = static_cast<int>(std::floor((cross - cross0) / cell));
    if (ci < 0 || ci >= cross_n) return best;

    const double along = horizontal ? origin.x : origin.y;
    const double along0 = horizontal ? grid_.x0 : grid_.y0;
    const int along_n = horizontal ? grid_.nx : grid_.ny;

    int ai = static_cast<int>(std::floor((along - along0) / cell));
    const int astep = sign > 0 ? 1 : -1;
    if (ai < 0 && astep < 0) return best;
    if (ai >= along_n && astep > 0) return best;
    ai = std::clamp(ai, 0, along_n - 1);

    // Iterate only occupied cells of this row/column.
    const auto& occupied = horizontal
                               ? grid_.row_occupied[static_cast<std::size_t>(ci)]
                               : grid_.col_occupied[static_cast<std::size_t>(ci)];
    double best_d = std::numeric_limits<double>::infinity();
    auto visit = [&](int a) {
        const double cell_near =
            sign > 0 ? (along0 + a * cell - along) : (along - (along0 + (a + 1) * cell));
        if (cell_near > limit + kEps || cell_near > best_d + kEps) return false;
        const auto& bucket =
            horizontal ? grid_.cells[static_cast<std::size_t>(ci) * grid_.nx + a]
                       : grid_.cells[static_cast<std::size_t>(a) * grid_.nx + ci];
        for (std::int32_t id : bucket) {
            const Obstacle& o = obstacles_[static_cast<std::size_t>(id)];
            const auto d = ray_entry(o, origin, dir);
            if (d && *d < best_d - kEps && *d <= limit + kEps) {
                best_d = *d;
                best.kind = RayResult::Kind::hit;
                best.hit = make_hit(o, origin, dir, *d);
                best.distance = *d;
            }
        }
        return true;
    };
    if (astep > 0) {
        auto it = std::lower_bound(occupied.begin(), occupied.end(), ai);
        for (; it != occupied.end(); ++it) {
            if (!visit(*it)) break;
        }
    } else {
        auto it = std::upper_bound(occupied.begin(), occupied.end(), ai);
        while (it != occupied.begin()) {
            --it;
            if (!visit(*it)) break;
        }
    }
    return best;
}

Scene::RayResult Scene::first_hit_bricks(const Point& origin, Dir dir,
                                         double limit) const {
    RayResult best;
    const BrickPattern& bp = *bricks_;
    if (dir == Dir::pos_y || dir == Dir::neg_y) {
        if (near(origin.x, std::round(origin.x))) return best;  // free column line
        const std::int64_t c = static_cast<std::int64_t>(std::floor(origin.x));
        const double h = bp.params().h;
        const bool up = dir == Dir::pos_y;
        const std::int64_t j0 =
            static_cast<std::int64_t>(std::floor(origin.y / h)) - 2;
        std::optional<Obstacle> found;
        double found_d = std::numeric_limits<double>::infinity();
        for (std::int64_t j = j0; j <= j0 + 5; ++j) {
            const Obstacle o = bp.brick(c, j);
            double d;
            if (up) {
                if (o.y_max <= origin.y + kEps) continue;
                d = std::max(0.0, o.y_min - origin.y);
            } else {
                if (o.y_min >= origin.y - kEps) continue;
                d = std::max(0.0, origin.y - o.y_max);
            }
            if (d < found_d) {
                found = o;
                found_d = d;
            }
        }
        if (found && found_d <= limit + kEps) {
            best.kind = RayResult::Kind::hit;
            best.hit = make_hit(*found, origin, dir, found_d);
            best.distance = found_d;
        }
        return best;
    }
    const double sign = dir == Dir::pos_x ? 1.0 : -1.0;
    std::int64_t c = static_cast<std::int64_t>(
        sign > 0 ? std::floor(origin.x) : std::ceil(origin.x) - 1);
    for (;; c += static_cast<std::int64_t>(sign)) {
        const double edge = sign > 0 ? static_cast<double>(c) : static_cast<double>(c + 1);
        const double d = sign > 0 ? edge - origin.x : origin.x - edge;
        if (d > limit + kEps) break;
        if (d < -kEps) continue;
        auto o = bp.brick_containing(c, origin.y);
        if (o) {
            const double entry = std::max(0.0, d);
            best.kind = RayResult::Kind::hit;
            best.hit = make_hit(*o, origin, dir, entry);
            best.distance = entry;
            break;
        }
    }
    return best;
}

template <typename Fn>
void Scene::for_cells_on_segment(const Point& a, const Point& b, Fn&& fn) const {
    if (grid_.empty()) return;
    const double cell = grid_.cell;
    const double x0 = std::min(a.x, b.x) - kEps, x1 = std::max(a.x, b.x) + kEps;
    const double y0 = std::min(a.y, b.y) - kEps, y1 = std::max(a.y, b.y) + kEps;
    int cx0 = static_cast<int>(std::floor((x0 - grid_.x0) / cell));
    int cx1 = static_cast<int>(std::floor((x1 - grid_.x0) / cell));
    int cy0 = static_cast<int>(std::floor((y0 - grid_.y0) / cell));
    int cy1 = static_cast<int>(std::floor((y1 - grid_.y0) / cell));
    cx0 = std::clamp(cx0, 0, grid_.nx - 1);
    cx1 = std::clamp(cx1, 0, grid_.nx - 1);
    cy0 = std::clamp(cy0, 0, grid_.ny - 1);
    cy1 = std::clamp(cy1, 0, grid_.ny - 1);
    const double dx = b.x - a.x, dy = b.y - a.y;
    for (int cy = cy0; cy <= cy1; ++cy) {
        for (int cx = cx0; cx <= cx1; ++cx) {
            // Conservative cell/segment overlap test.
            const double rx0 = grid_.x0 + cx * cell, rx1 = rx0 + cell;
            const double ry0 = grid_.y0 + cy * cell, ry1 = ry0 + cell;
            double t0 = 0, t1 = 1;
            bool ok = true;
            if (std::fabs(dx) < 1e-300) {
                ok = a.x >= rx0 - kEps && a.x <= rx1 + kEps;
            } else {
                double ta = (rx0 - a.x) / dx, tb = (rx1 - a.x) / dx;
                if (ta > tb) std::swap(ta, tb);
                t0 = std::max(t0, ta);
                t1 = std::min(t1, tb);
            }
            if (ok) {
                if (std::fabs(dy) < 1e-300) {
                    ok = a.y >= ry0 - kEps && a.y <= ry1 + kEps;
                } else {
                    double ta = (ry0 - a.y) / dy, tb = (ry1 - a.y) / dy;
                    if (ta > tb) std::swap(ta, tb);
                    t0 = std::max(t0, ta);
                    t1 = std::min(t1, tb);
                }
            }
            if (!ok || t0 > t1 + kEps) continue;
            if (!fn(grid_.cells[static_cast<std::size_t>(cy) * grid_.nx + cx])) return;
        }
    }
}

bool Scene::segment_free(const Point& a, const Point& b) const {
    if (bricks_) {
        // Used only on materialized scenes; handle the lazy case by sampling
        // the columns the segment spans.
        const Rect region{std::min(a.x, b.x) - 2, std::min(a.y, b.y) - 2,
                          std::max(a.x, b.x) + 2, std::max(a.y, b.y) + 2};
        for (const Obstacle& o : bricks_->materialize(region)) {
            double t0 = 0, t1 = 1;
            const double dx = b.x - a.x, dy = b.y - a.y;
            bool ok = true;
            if (std::fabs(dx) < 1e-300) {
                ok = a.x > o.x_min + kEps && a.x < o.x_max - kEps;
            } else {
                double ta = (o.x_min - a.x) / dx, tb = (o.x_max - a.x) / dx;
                if (ta > tb) std::swap(ta, tb);
                t0 = std::max(t0, ta);
                t1 = std::min(t1, tb);
            }
            if (ok) {
                if (std::fabs(dy) < 1e-300) {
                    ok = a.y > o.y_min + kEps && a.y < o.y_max - kEps;
                } else {
                    double ta = (o.y_min - a.y) / dy, tb = (o.y_max - a.y) / dy;
                    if (ta > tb) std::swap(ta, tb);
                    t0 = std::max(t0, ta);
                    t1 = std::min(t1, tb);
                }
            }
            if (ok && t1 - t0 > 1e-12 && t1 > kEps && t0 < 1 - kEps) return false;
        }
        return true;
    }
    bool free = true;
    for_cells_on_segment(a, b, [&](const std::vector<std::int32_t>& bucket) {
        for (std::int32_t id : bucket) {
            const Obstacle& o = obstacles_[static_cast<std::size_t>(id)];
            const double dx = b.x - a.x, dy = b.y - a.y;
            double t0 = 0, t1 = 1;
            bool inside = true;
            if (std::fabs(dx) < 1e-300) {
                inside = a.x > o.x_min + kEps && a.x < o.x_max - kEps;
            } else {
                double ta = (o.x_min - a.x) / dx, tb = (o.x_max - a.x) / dx;
                if (ta > tb) std::swap(ta, tb);
                t0 = std::max(t0, ta);
                t1 = std::min(t1, tb);
            }
            if (inside) {
                if (std::fabs(dy) < 1e-300) {
                    inside = a.y > o.y_min + kEps && a.y < o.y_max - kEps;
                } else {
                    double ta = (o.y_min - a.y) / dy, tb = (o.y_max - a.y) / dy;
                    if (ta > tb) std::swap(ta, tb);
                    t0 = std::max(t0, ta);
                    t1 = std::min(t1, tb);
                }
            }
            if (inside && t1 - t0 > 1e-12 && t1 > kEps && t0 < 1 - kEps) {
                free = false;
                return false;
            }
        }
        return true;
    });
    return free;
}

bool operator==(const Scene& a, const Scene& b) {
    if (a.n_ != b.n_) return false;
    if (a.bricks_.has_value() != b.bricks_.has_value()) return false;
    if (a.bricks_) {
        return a.bricks_->params().n == b.bricks_->params().n &&
               a.bricks_->params().h == b.bricks_->params().h;
    }
    return a.obstacles_ == b.obstacles_;
}

// ---------------------------------------------------------------------------
// Parsing and emission (scene file v1)

Scene parse_scene(std::string_view text) {
    std::int64_t n = -1;
    std::optional<BrickParams> bricks;
    std::vector<Obstacle> obstacles;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error("scene parse error at line " +
                                 std::to_string(line_no) + ": " + msg);
    };
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.remove_suffix(1);
        }
        while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
        if (line.empty() || line.front() == '#') continue;
        std::istringstream iss{std::string(line)};
        std::string kw;
        iss >> kw;
        if (kw == "n") {
            if (!(iss >> n)) fail("expected integer after 'n'");
        } else if (kw == "obstacle") {
            Obstacle o;
            if (!(iss >> o.x_min >> o.y_min >> o.x_max >> o.y_max)) {
                fail("expected 4 reals after 'obstacle'");
            }
            if (o.x_max - o.x_min < 1.0 - kEps) fail("obstacle width < 1");
            if (o.y_max - o.y_min < 1.0 - kEps) fail("obstacle height < 1");
            o.id = static_cast<std::int64_t>(obstacles.size());
            obstacles.push_back(o);
        } else if (kw == "bricks") {
            BrickParams p;
            if (!(iss >> p.n >> p.h)) fail("expected n and h after 'bricks'");
            bricks = p;
        } else {
            fail("unknown keyword '" + kw + "'");
        }
    }
    if (bricks) {
        if (!obstacles.empty()) {
            throw std::runtime_error("scene parse error: bricks scene with obstacles");
        }
        return Scene::brick_scene(bricks->n, bricks->h);
    }
    if (n < 0) throw std::runtime_error("scene parse error: missing 'n' line");
    return Scene::explicit_scene(n, std::move(obstacles));
}

std::string emit_scene(const Scene& scene,
                       const std::vector<std::string>& header_comments) {
    std::string out;
    for (const std::string& c : header_comments) {
        out += "# " + c + "\n";
    }
    if (scene.is_lazy()) {
        const BrickParams& p = scene.bricks()->params();
        out += "bricks " + std::to_string(p.n) + " " + format_double(p.h) + "\n";
        return out;
    }
    out += "n " + std::to_string(scene.n()) + "\n";
    for (const Obstacle& o : scene.obstacles()) {
        out += "obstacle " + format_double(o.x_min) + " " + format_double(o.y_min) +
               " " + format_double(o.x_max) + " " + format_double(o.y_max) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generators

Scene gen_random(std::int64_t n, double density, double y_extent,
                 std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_random: n must be >= 1");
    if (density < 0 || density >= 1) {
        throw std::invalid_argument("gen_random: density must be in [0,1)");
    }
    std::mt19937_64 rng(seed);
    std::vector<Obstacle> placed;
    const double box_w = static_cast<double>(n - 2);
    const double box_area = box_w * 2 * y_extent;
    const double target = density * box_area;

    // A mix of tall towers and squat blocks; towers carry fence posts, and
    // the dimensions scale with n so scene sizes stay tractable.
    const std::int64_t w_max = std::max<std::int64_t>(2, n / 128);
    const double h_min = 4.0;
    const double h_max = std::max(24.0, static_cast<double>(n) / 4.0);

    double covered = 0;
    std::int64_t attempts = 0;
    const std::int64_t max_attempts = 200000 + 400 * n;
    bool warning = false;
    std::uniform_int_distribution<std::int64_t> wd(1, w_max);
    std::uniform_real_distribution<double> hd(h_min, h_max);
    std::uniform_real_distribution<double> tower_hd(
        static_cast<double>(n) / 3.0, static_cast<double>(n));
    std::uniform_real_distribution<double> yd(-y_extent, y_extent);
    std::uniform_int_distribution<int> shape(0, 3);
    while (covered < target && n > 2) {
        if (++attempts > max_attempts) {
            warning = true;
            break;
        }
        const bool tower = shape(rng) == 0;
        const std::int64_t w =
            tower ? std::min<std::int64_t>(w_max, 2) : wd(rng);
        std::uniform_int_distribution<std::int64_t> xd(1, std::max<std::int64_t>(1, n - 1 - w));
        const std::int64_t x = xd(rng);
        const double h = tower ? tower_hd(rng) : hd(rng);
        double y = yd(rng);
        if (y + h > y_extent) y = y_extent - h;
        Obstacle o;
        o.x_min = static_cast<double>(x);
        o.x_max = static_cast<double>(x + w);
        o.y_min = std::floor(y);
        o.y_max = std::floor(y) + std::ceil(h);
        bool ok = true;
        for (const Obstacle& p : placed) {
            const bool x_overlap =
                o.x_min < p.x_max - kEps && p.x_min < o.x_max - kEps;
            const bool y_overlap =
                o.y_min < p.y_max - kEps && p.y_min < o.y_max - kEps;
            if (x_overlap && y_overlap) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        o.id = static_cast<std::int64_t>(placed.size());
        placed.push_back(o);
        covered += (o.x_max - o.x_min) * (o.y_max - o.y_min);
    }
    Scene s = Scene::explicit_scene(n, std::move(placed));
    char tag[96];
    std::snprintf(tag, sizeof(tag), "random-n%lld-d%g-s%llu",
                  static_cast<long long>(n), density,
                  static_cast<unsigned long long>(seed));
    s.set_generator_tag(tag);
    s.set_generation_warning(warning);
    return s;
}

Scene gen_bricks(std::int64_t n, double h) {
    if (h < std::sqrt(static_cast<double>(n)) - kEps) {
        throw std::invalid_argument("gen_bricks: h must be >= sqrt(n)");
    }
    Scene s = Scene::brick_scene(n, h);
    char tag[64];
    std::snprintf(tag, sizeof(tag), "bricks-n%lld-h%g", static_cast<long long>(n), h);
    s.set_generator_tag(tag);
    return s;
}

}  // namespace fencenav
