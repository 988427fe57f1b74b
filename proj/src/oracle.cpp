#include "fencenav/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <unordered_map>

namespace fencenav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// Visibility-graph shortest path (A* with corner nodes)

OraclePath shortest_wall_path(const Scene& scene) {
    if (scene.is_lazy()) {
        throw std::invalid_argument(
            "shortest_wall_path: lazy scene; materialize a region first");
    }
    if (scene.point_in_interior({0, 0})) {
        throw std::invalid_argument("shortest_wall_path: start is embedded");
    }
    const double wall_x = static_cast<double>(scene.n());

    std::vector<Point> nodes;
    std::map<std::pair<double, double>, int> index;
    auto add_node = [&](const Point& p) {
        auto [it, fresh] = index.try_emplace({p.x, p.y}, static_cast<int>(nodes.size()));
        if (fresh) nodes.push_back(p);
        return it->second;
    };
    const int start = add_node({0, 0});
    for (const Obstacle& o : scene.obstacles()) {
        add_node({o.x_min, o.y_min});
        add_node({o.x_max, o.y_min});
        add_node({o.x_min, o.y_max});
        add_node({o.x_max, o.y_max});
    }
    const int V = static_cast<int>(nodes.size());
    auto h = [&](int v) { return std::max(0.0, wall_x - nodes[v].x); };

    // Feasible escape routes prime the incumbent so candidate edges can be
    // pruned before the expensive segment test.
    double best_goal = kInf;
    int best_goal_node = -1;
    auto try_goal = [&](int u, double g) {
        const double wall_d = std::max(0.0, wall_x - nodes[u].x);
        if (g + wall_d >= best_goal - 1e-12) return;
        if (scene.segment_free(nodes[u], {wall_x, nodes[u].y})) {
            best_goal = g + wall_d;
            best_goal_node = u;
        }
    };
    double escape_len = kInf;
    Point escape_corner{};
    if (!scene.obstacles().empty()) {
        double y_hi = scene.obstacles()[0].y_max, y_lo = scene.obstacles()[0].y_min;
        for (const Obstacle& o : scene.obstacles()) {
            y_hi = std::max(y_hi, o.y_max);
            y_lo = std::min(y_lo, o.y_min);
        }
        for (const Point c : {Point{0, y_hi + 1}, Point{0, y_lo - 1}}) {
            if (scene.segment_free({0, 0}, c) &&
                scene.segment_free(c, {wall_x, c.y})) {
                const double len = std::fabs(c.y) + wall_x;
                if (len < escape_len) {
                    escape_len = len;
                    escape_corner = c;
                }
            }
        }
        best_goal = escape_len;
    }

    std::vector<double> g(V, kInf);
    std::vector<int> parent(V, -1);
    std::vector<bool> closed(V, false);
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    g[start] = 0;
    pq.push({h(start), start});
    while (!pq.empty()) {
        const auto [f, u] = pq.top();
        pq.pop();
        if (closed[u] || f > g[u] + h(u) + 1e-12) continue;
        closed[u] = true;
        if (f >= best_goal - 1e-12) break;
        try_goal(u, g[u]);
        for (int v = 0; v < V; ++v) {
            if (closed[v] || v == u) continue;
            const double w = dist(nodes[u], nodes[v]);
            const double cand = g[u] + w;
            if (cand >= g[v] - 1e-12) continue;
            if (cand + h(v) >= best_goal - 1e-12) continue;
            if (!scene.segment_free(nodes[u], nodes[v])) continue;
            g[v] = cand;
            parent[v] = u;
            pq.push({cand + h(v), v});
        }
    }

    OraclePath out;
    if (best_goal_node >= 0) {
        std::vector<Point> rev;
        rev.push_back({wall_x, nodes[best_goal_node].y});
        for (int v = best_goal_node; v != -1; v = parent[v]) rev.push_back(nodes[v]);
        std::reverse(rev.begin(), rev.end());
        out.vertices = std::move(rev);
        out.length = best_goal;
    } else if (escape_len < kInf) {
        out.vertices = {{0, 0}, escape_corner, {wall_x, escape_corner.y}};
        out.length = escape_len;
    } else {
        internal_fault("shortest_wall_path: no path found");
    }
    if (out.vertices.size() >= 2 && near(out.vertices[0], out.vertices[1], 0.0)) {
        out.vertices.erase(out.vertices.begin() + 1);
    }
    out.exact = true;
    return out;
}

// ---------------------------------------------------------------------------
// Brick-lattice shortest paths

namespace {

struct LatticeResult {
    Polyline path;
    double length{0};
    bool touched_range_edge{false};
};

// Dijkstra over the boundary lattice: vertical integer lines (always free)
// and horizontal rungs of pitch h/2. `h_free` decides whether the unit rung
// (c -> c+1) at row r is passable.
template <typename HFree>
LatticeResult lattice_dijkstra(std::int64_t n, double h, std::int64_t r_lo,
                               std::int64_t r_hi, HFree&& h_free) {
    const std::int64_t cols = n + 1;
    const std::int64_t rows = r_hi - r_lo + 1;
    const std::size_t total = static_cast<std::size_t>(cols * rows);
    std::vector<double> dist(total, kInf);
    std::vector<std::int32_t> parent(total, -1);
    auto id = [&](std::int64_t c, std::int64_t r) {
        return static_cast<std::size_t>(c * rows + (r - r_lo));
    };
    using QE = std::pair<double, std::size_t>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    const std::size_t s = id(0, 0);
    dist[s] = 0;
    pq.push({0, s});
    const double half = h / 2;
    LatticeResult res;
    std::size_t goal = SIZE_MAX;
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u] + 1e-12) continue;
        const std::int64_t c = static_cast<std::int64_t>(u) / rows;
        const std::int64_t r = static_cast<std::int64_t>(u) % rows + r_lo;
        if (c == n) {
            goal = u;
            res.length = d;
            break;
        }
        if (r == r_lo || r == r_hi) res.touched_range_edge = true;
        auto relax = [&](std::int64_t nc, std::int64_t nr, double w) {
            if (nr < r_lo || nr > r_hi || nc < 0 || nc > n) return;
            const std::size_t v = id(nc, nr);
            if (dist[u] + w < dist[v] - 1e-12) {
                dist[v] = dist[u] + w;
                parent[v] = static_cast<std::int32_t>(u);
                pq.push({dist[v], v});
            }
        };
        relax(c, r + 1, half);
        relax(c, r - 1, half);
        if (h_free(c, r)) relax(c + 1, r, 1.0);
        if (c > 0 && h_free(c - 1, r)) relax(c - 1, r, 1.0);
    }
    if (goal == SIZE_MAX) internal_fault("lattice_dijkstra: wall unreachable");
    std::vector<Point> rev;
    for (std::size_t v = goal;; v = static_cast<std::size_t>(parent[v])) {
        const std::int64_t c = static_cast<std::int64_t>(v) / rows;
        const std::int64_t r = static_cast<std::int64_t>(v) % rows + r_lo;
        rev.push_back({static_cast<double>(c), static_cast<double>(r) * half});
        if (parent[v] < 0) break;
    }
    std::reverse(rev.begin(), rev.end());
    for (const Point& p : rev) append_point(res.path, p);
    return res;
}

}  // namespace

OraclePath wall_path_bricks_full(const BrickParams& params) {
    const std::int64_t n = params.n;
    const double h = params.h;
    std::int64_t half_range = 8;
    for (;;) {
        auto r = lattice_dijkstra(n, h, -half_range, half_range,
                                  [&](std::int64_t c, std::int64_t row) {
                                      // Rung free iff it lies on a brick
                                      // boundary of column c.
                                      const bool col_even = ((c % 2) + 2) % 2 == 0;
                                      const bool row_even = ((row % 2) + 2) % 2 == 0;
                                      return col_even != row_even;
                                  });
        if (!r.touched_range_edge) {
            OraclePath out;
            out.vertices = r.path;
            out.length = r.length;
            out.exact = true;
            return out;
        }
        half_range *= 2;
    }
}

OraclePath wall_path_upper_bricks(const Scene& reduced, double h) {
    if (reduced.is_lazy()) {
        throw std::invalid_argument("wall_path_upper_bricks: explicit scene expected");
    }
    const std::int64_t n = reduced.n();
    const double half = h / 2;
    // Column -> sorted brick y-ranges.
    std::unordered_map<std::int64_t, std::vector<std::pair<double, double>>> cols;
    double y_lo = 0, y_hi = 0;
    for (const Obstacle& o : reduced.obstacles()) {
        const std::int64_t c = static_cast<std::int64_t>(std::llround(o.x_min));
        cols[c].emplace_back(o.y_min, o.y_max);
        y_lo = std::min(y_lo, o.y_min);
        y_hi = std::max(y_hi, o.y_max);
    }
    for (auto& [c, v] : cols) std::sort(v.begin(), v.end());
    auto h_free = [&](std::int64_t c, std::int64_t row) {
        auto it = cols.find(c);
        if (it == cols.end()) return true;
        const double y = static_cast<double>(row) * half;
        const auto& v = it->second;
        auto lb = std::upper_bound(v.begin(), v.end(),
                                   std::make_pair(y, kInf));
        if (lb == v.begin()) return true;
        --lb;
        return !(y > lb->first + kEps && y < lb->second - kEps);
    };
    std::int64_t r_lo = static_cast<std::int64_t>(std::floor(y_lo / half)) - 2;
    std::int64_t r_hi = static_cast<std::int64_t>(std::ceil(y_hi / half)) + 2;
    r_lo = std::min(r_lo, std::int64_t{-2});
    r_hi = std::max(r_hi, std::int64_t{2});
    auto r = lattice_dijkstra(n, h, r_lo, r_hi, h_free);

    // Shortcut smoothing against the explicit scene.
    Polyline pts = r.path;
    for (int pass = 0; pass < 2; ++pass) {
        Polyline smooth;
        std::size_t i = 0;
        smooth.push_back(pts[0]);
        while (i + 1 < pts.size()) {
            std::size_t best = i + 1;
            const std::size_t hi = std::min(pts.size() - 1, i + 128);
            for (std::size_t j = hi; j > i + 1; --j) {
                if (reduced.segment_free(pts[i], pts[j])) {
                    best = j;
                    break;
                }
            }
            append_point(smooth, pts[best]);
            i = best;
        }
        pts = std::move(smooth);
    }
    OraclePath out;
    out.vertices = pts;
    out.length = polyline_length(pts);
    out.exact = false;
    return out;
}

// ---------------------------------------------------------------------------
// Geometric fence-tree construction

OracleTreeResult fence_tree_oracle(const Scene& scene, Point root,
                                   std::int64_t root_obstacle, int k, int M,
                                   double tau) {
    if (tau <= 0) throw std::invalid_argument("fence_tree_oracle: tau must be > 0");
    OracleTreeResult res;
    FenceTree& t = res.tree;
    t.k = k;
    t.M = M;
    t.tau = tau;
    t.base_y = root.y;
    t.posts.assign(static_cast<std::size_t>(k), {});
    t.edges.assign(static_cast<std::size_t>(k), {});
    t.posts[0].push_back(Post{root.x, 0, root_obstacle});
    t.edges[0].push_back(std::nullopt);

    auto center = [&](int i, int m) { return t.center(i, m); };
    // Child via a vertical hop of tau and a tau-path; records the edge.
    auto extend = [&](int pi, int pm, int ci, int cm, EdgeKind kind) -> bool {
        const Point p = center(pi, pm);
        const double y_start = kind == EdgeKind::up ? p.y + tau : p.y - tau;
        TauTrace trace = trace_tau_path(scene, {p.x, y_start}, tau);
        TreeEdge e;
        e.parent_i = pi;
        e.parent_m = pm;
        e.kind = kind;
        e.poly.push_back(p);
        append_point(e.poly, {p.x, y_start});
        append_polyline(e.poly, trace.poly);
        e.tau_dx = trace.core.dx;
        e.tau_len = trace.core.length;
        e.length = tau + trace.core.length;
        if (trace.core.wall) return false;
        if (trace.core.obstacle_id >= 0) {
            const Obstacle o = scene.obstacle(trace.core.obstacle_id);
            if (trace.core.post_center.y - tau < o.y_min - kEps ||
                trace.core.post_center.y + tau > o.y_max + kEps) {
                internal_fault("fence_tree_oracle: post does not fit the edge");
            }
        }
        t.posts[static_cast<std::size_t>(ci - 1)].push_back(
            Post{trace.core.post_center.x, FenceTree::row_off(ci, cm),
                 trace.core.obstacle_id});
        t.edges[static_cast<std::size_t>(ci - 1)].push_back(std::move(e));
        return true;
    };

    // First column: P_i^1 is the down-child of P_{i-1}^1.
    for (int i = 2; i <= k; ++i) {
        if (!extend(i - 1, 1, i, 1, EdgeKind::down)) {
            res.wall_reached = true;
            return res;
        }
    }
    for (int m = 2; m <= M; ++m) {
        if (!extend(1, m - 1, 1, m, EdgeKind::up)) {
            res.wall_reached = true;
            return res;
        }
        for (int i = 2; i <= k; ++i) {
            const double x_above = t.posts[static_cast<std::size_t>(i - 2)]
                                          [static_cast<std::size_t>(m - 1)].x;
            const double x_own = t.posts[static_cast<std::size_t>(i - 1)]
                                        [static_cast<std::size_t>(m - 2)].x;
            const bool down = x_above > x_own;
            const bool ok = down ? extend(i - 1, m, i, m, EdgeKind::down)
                                 : extend(i, m - 1, i, m, EdgeKind::up);
            if (!ok) {
                res.wall_reached = true;
                return res;
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Fence crossing cost

namespace {

enum class Side { unknown, left, right, inside, outside };

Side side_at(const Fence& f, const std::vector<Band>& bands, const Point& p) {
    const double y1 = f.center(0).y;
    const double yM = f.center(f.posts.size() - 1).y;
    if (p.y < y1 - kEps || p.y > yM + kEps) return Side::outside;
    const double tau = f.tau;
    bool any_left = false, any_right = false, any_in = false;
    const double rel = (p.y - y1) / tau;
    const long lo = std::lround(std::floor(rel - 1));
    const long hi = std::lround(std::ceil(rel + 1));
    for (long s = std::max(0L, lo); s <= hi && s < static_cast<long>(bands.size()); ++s) {
        const Rect& r = bands[static_cast<std::size_t>(s)].rect;
        if (p.y < r.y_min - kEps || p.y > r.y_max + kEps) continue;
        if (p.x < r.x_min - kEps) {
            any_left = true;
        } else if (p.x > r.x_max + kEps) {
            any_right = true;
        } else {
            any_in = true;
        }
    }
    if (any_in) return Side::inside;
    if (any_left && any_right) return Side::inside;
    if (any_left) return Side::left;
    if (any_right) return Side::right;
    return Side::outside;
}

}  // namespace

CrossingCost crossing_cost(const OraclePath& path, const Fence& fence) {
    CrossingCost out;
    if (path.vertices.size() < 2 || fence.posts.size() < 2) return out;
    const std::vector<Band> bands = bands_of(fence);
    const double y1 = fence.center(0).y;
    const double tau = fence.tau;

    Side active = Side::unknown;
    double acc = 0;
    double best = kInf;

    auto arrive = [&](Side s) {
        if (s == Side::outside) {
            active = Side::unknown;
            acc = 0;
            return;
        }
        if (s == Side::left || s == Side::right) {
            if ((active == Side::left && s == Side::right) ||
                (active == Side::right && s == Side::left)) {
                best = std::min(best, acc);
                out.crossed = true;
            }
            active = s;
            acc = 0;
        }
    };

    arrive(side_at(fence, bands, path.vertices[0]));
    for (std::size_t seg = 1; seg < path.vertices.size(); ++seg) {
        const Point a = path.vertices[seg - 1];
        const Point b = path.vertices[seg];
        // Split at fence row levels so each piece stays within one slab.
        std::vector<double> ts{0.0, 1.0};
        if (std::fabs(b.y - a.y) > 1e-15) {
            const double tlo = std::min(a.y, b.y), thi = std::max(a.y, b.y);
            const long s_lo = std::lround(std::floor((tlo - y1) / tau)) - 1;
            const long s_hi = std::lround(std::ceil((thi - y1) / tau)) + 1;
            for (long s = s_lo; s <= s_hi; ++s) {
                const double level = y1 + static_cast<double>(s) * tau;
                const double t = (level - a.y) / (b.y - a.y);
                if (t > 1e-12 && t < 1 - 1e-12) ts.push_back(t);
            }
            std::sort(ts.begin(), ts.end());
        }
        for (std::size_t pi = 1; pi < ts.size(); ++pi) {
            const double t0 = ts[pi - 1], t1 = ts[pi];
            const Point pa{a.x + (b.x - a.x) * t0, a.y + (b.y - a.y) * t0};
            const Point pb{a.x + (b.x - a.x) * t1, a.y + (b.y - a.y) * t1};
            const Point mid{(pa.x + pb.x) / 2, (pa.y + pb.y) / 2};
            // Vertical contribution inside the slab's band, if non-empty.
            const double rel = (mid.y - y1) / tau;
            const long s = std::lround(std::floor(rel));
            if (s >= 0 && s < static_cast<long>(bands.size()) &&
                !bands[static_cast<std::size_t>(s)].empty) {
                const Rect& r = bands[static_cast<std::size_t>(s)].rect;
                double u0 = 0, u1 = 1;
                const double dx = pb.x - pa.x;
                if (std::fabs(dx) > 1e-15) {
                    double ua = (r.x_min - pa.x) / dx, ub = (r.x_max - pa.x) / dx;
                    if (ua > ub) std::swap(ua, ub);
                    u0 = std::max(0.0, ua);
                    u1 = std::min(1.0, ub);
                } else if (pa.x < r.x_min - kEps || pa.x > r.x_max + kEps) {
                    u1 = u0;
                }
                if (u1 > u0) {
                    acc += std::fabs(pb.y - pa.y) * (u1 - u0);
                }
            }
            arrive(side_at(fence, bands, pb));
        }
    }
    if (out.crossed) out.min_vertical = best;
    return out;
}

}  // namespace fencenav
