#include "fencenav/navigate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fencenav/tau_trace.hpp"

namespace fencenav {

SearchParams make_params(std::int64_t n, int k, double L_guess) {
    if (k < 1 || static_cast<std::int64_t>(k) > n) {
        throw std::invalid_argument("make_params: need 1 <= k <= n");
    }
    SearchParams p;
    p.n = n;
    p.k = k;
    p.L = L_guess;
    const double nk = static_cast<double>(n) * k;
    const double span = std::ceil(2.0 * std::sqrt(nk) - 1e-9);
    p.M = k + static_cast<int>(span);
    p.tau = 2.0 * L_guess / span;
    p.group_cap = std::max(
        1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n) / k) + 1e-9)));
    return p;
}

double GroupResult::delta_x() const {
    double hi = root.x;
    for (const auto& row : tree.posts) {
        for (const Post& p : row) hi = std::max(hi, p.x);
    }
    return hi - root.x;
}

Polyline compose_path(const std::vector<GroupResult>& groups) {
    Polyline out;
    for (const GroupResult& g : groups) {
        append_polyline(out, g.transition);
        append_polyline(out, g.crossing);
    }
    return out;
}

// ---------------------------------------------------------------------------
// FindFenceTree and its subroutines

namespace {

struct TreeSearch {
    RobotState& rs;
    const SearchParams& params;
    GroupResult& group;
    SearchState st;
    std::vector<Polyline> descent_stack;
    bool halted{false};

    TreeSearch(RobotState& rs_in, const SearchParams& p, GroupResult& g,
               Point root, std::int64_t root_obstacle)
        : rs(rs_in), params(p), group(g) {
        FenceTree& t = group.tree;
        t.k = p.k;
        t.M = p.M;
        t.tau = p.tau;
        t.base_y = root.y;
        t.posts.assign(static_cast<std::size_t>(p.k), {});
        t.edges.assign(static_cast<std::size_t>(p.k), {});
        t.posts[0].push_back(Post{root.x, 0, root_obstacle});
        t.edges[0].push_back(std::nullopt);
        st.fences.assign(static_cast<std::size_t>(p.k) + 1, {});
        st.fences[1] = {1, root.x, -std::numeric_limits<double>::infinity()};
        for (int j = 2; j <= p.k; ++j) {
            st.fences[static_cast<std::size_t>(j)] = {
                0, 0.0, -std::numeric_limits<double>::infinity()};
        }
        st.i = 1;
        group.root = root;
        group.params = p;
    }

    SearchState::FenceProgress& f(int j) {
        return st.fences[static_cast<std::size_t>(j)];
    }
    FenceTree& tree() { return group.tree; }
    Point center(int i, int m) { return tree().center(i, m); }
    Point cur_post() { return center(st.i, f(st.i).m); }

    bool complete() const { return halted && !group.halted_at_wall; }

    // One iteration of the case loop. Returns walked distance.
    double step() {
        const double before = rs.odometer();
        rs.teleport_check(cur_post());
        const int i = st.i;
        const int k = params.k;
        const int M = params.M;
        auto bucket = [&](double d, int idx) {
            group.walked += d;
            group.case_count[idx] += 1;
        };
        if (i < k && f(i + 1).m > 0 && f(i).x > f(i + 1).x &&
            f(i).m > f(i + 1).m + 1) {
            // Case 1: lower fence extendable from itself, current fence ahead.
            const double d0 = rs.odometer();
            const std::size_t mark = rs.mark();
            go_back_down(i, f(i).m, f(i + 1).m);
            descent_stack.push_back(rs.collect(mark));
            st.i += 1;
            group.gobackdown_len += rs.odometer() - d0;
            bucket(rs.odometer() - d0, 1);
        } else if (i < k && (f(i + 1).m == 0 || f(i).x > f(i + 1).x)) {
            // Case 2: traverse a new down-edge.
            if (f(i).m != f(i + 1).m + 1) {
                internal_fault("case 2: fence counts out of step");
            }
            const double d0 = rs.odometer();
            const std::size_t mark = rs.mark();
            const bool wall = traverse_edge(i, f(i).m, i + 1, f(i + 1).m + 1,
                                            EdgeKind::down, TrajTag::edge_down);
            group.edges_len += rs.odometer() - d0;
            bucket(rs.odometer() - d0, 2);
            if (wall) {
                halt_at_wall(i, f(i).m);
            } else {
                descent_stack.push_back(rs.collect(mark));
                st.i += 1;
            }
        } else if ((i == 1 && f(1).m < M) ||
                   (i > 1 && (f(i - 1).m > f(i).m + 1 ||
                              (f(i - 1).m == f(i).m + 1 && f(i - 1).x <= f(i).x)))) {
            // Case 3: traverse a new up-edge.
            const double d0 = rs.odometer();
            const std::size_t mark = rs.mark();
            const bool wall = traverse_edge(i, f(i).m, i, f(i).m + 1, EdgeKind::up,
                                            TrajTag::edge_up);
            group.edges_len += rs.odometer() - d0;
            bucket(rs.odometer() - d0, 3);
            if (wall) {
                halt_at_wall(i, f(i).m);
            } else if (!descent_stack.empty()) {
                append_polyline(descent_stack.back(), rs.collect(mark));
            }
        } else if (i < k && f(i).m > f(i + 1).m &&
                   (f(i).m == M || rule2_applies(i))) {
            // Case 4: go down to the last post of the lower fence.
            const double d0 = rs.odometer();
            const std::size_t mark = rs.mark();
            go_down(i, f(i).m, f(i + 1).m, TrajTag::godown);
            descent_stack.push_back(rs.collect(mark));
            st.i += 1;
            group.godown_len += rs.odometer() - d0;
            bucket(rs.odometer() - d0, 4);
        } else if (i == k && f(k).m == M) {
            // Case 5: the last post of the lowest fence has been found.
            halted = true;
            group.complete = true;
            TreePath tp = tree_path(tree(), 1, 1, params.k, params.M);
            group.crossing = tp.poly;
            group.crossing_len = tp.length;
            bucket(0, 5);
        } else {
            // Case 6: return to the fence above by the last path used.
            check_lemma6();
            if (i <= 1 || descent_stack.empty()) {
                internal_fault("case 6 with no fence above");
            }
            const double d0 = rs.odometer();
            Polyline back = reversed(descent_stack.back());
            descent_stack.pop_back();
            follow_path(rs, back, false, TrajTag::backtrack);
            st.i -= 1;
            rs.teleport_check(cur_post());
            group.backtrack_len += rs.odometer() - d0;
            bucket(rs.odometer() - d0, 6);
        }
        check_invariants();
        return rs.odometer() - before;
    }

    bool rule2_applies(int i) {
        for (int u = 1; u < i; ++u) {
            if (f(u).m == f(i).m + 1 && f(u).x > f(i + 1).x) return true;
        }
        return false;
    }

    // Walks a new edge: a vertical hop of tau, then a tau-path. Returns true
    // when the wall cut the edge short.
    bool traverse_edge(int pi, int pm, int ci, int cm, EdgeKind kind, TrajTag tag) {
        const Point parent = center(pi, pm);
        rs.teleport_check(parent);
        const Point start{parent.x,
                          tree().base_y +
                              static_cast<double>(FenceTree::row_off(ci, cm)) *
                                  params.tau};
        const std::size_t mark = rs.mark();
        if (rs.straight_move(start, tag).blocked) {
            internal_fault("edge: vertical hop blocked");
        }
        TauPathResult t = tau_path(rs, params.tau, tag);
        group.tau_paths.push_back(t.stat);
        TreeEdge e;
        e.parent_i = pi;
        e.parent_m = pm;
        e.kind = kind;
        e.poly = rs.collect(mark);
        e.length = polyline_length(e.poly);
        e.tau_dx = t.stat.dx;
        e.tau_len = t.stat.length;
        if (t.wall) {
            pending_partial_edge_ = e.poly;
            return true;
        }
        if (t.obstacle_id >= 0) {
            const Obstacle o = rs.scene().obstacle(t.obstacle_id);
            if (t.post_center.y - params.tau < o.y_min - kEps ||
                t.post_center.y + params.tau > o.y_max + kEps) {
                internal_fault("edge: post does not fit the stopping edge");
            }
        }
        FenceTree& tr = tree();
        auto& row = tr.posts[static_cast<std::size_t>(ci - 1)];
        if (static_cast<int>(row.size()) != cm - 1) {
            internal_fault("edge: posts added out of order");
        }
        row.push_back(Post{t.post_center.x, FenceTree::row_off(ci, cm), t.obstacle_id});
        tr.edges[static_cast<std::size_t>(ci - 1)].push_back(std::move(e));
        auto& fp = f(ci);
        fp.prev_x = fp.m >= 1 ? fp.x : -std::numeric_limits<double>::infinity();
        fp.m = cm;
        fp.x = t.post_center.x;
        return false;
    }

    void halt_at_wall(int launch_i, int launch_m) {
        halted = true;
        group.halted_at_wall = true;
        TreePath tp = tree_path(tree(), 1, 1, launch_i, launch_m);
        Polyline cross = tp.poly;
        append_polyline(cross, pending_partial_edge_);
        group.crossing = cross;
        group.crossing_len = polyline_length(cross);
    }

    void go_down(int i, int m, int q, TrajTag tag) {
        if (q < 1 || m < q) internal_fault("go_down: bad arguments");
        const Point target = center(i + 1, q);
        const Point from = center(i, m);
        const Point pos = rs.position();
        if (from.x > target.x + kEps) internal_fault("go_down: fences out of order");
        if (pos.x < from.x - kEps || pos.x > target.x + kEps ||
            pos.y < target.y - kEps || pos.y > from.y + kEps) {
            internal_fault("go_down: initial position out of range");
        }
        // Step 1: greedy down-left to the top of the target post's row.
        StopSpec s1;
        s1.y_leq = target.y + params.tau;
        greedy_path(rs, Dir::neg_y, Dir::neg_x, s1, tag);
        // Step 2: greedy right-down until the target post or the tree path
        // leading to it is touched.
        TreePath tp = tree_path(tree(), 1, 1, i + 1, q);
        std::vector<PostSegment> post_stops{PostSegment{
            target.x, target.y - params.tau, target.y + params.tau, target}};
        StopSpec s2;
        s2.posts = &post_stops;
        s2.path = &tp.poly;
        GreedyResult r = greedy_path(rs, Dir::pos_x, Dir::neg_y, s2, tag);
        if (r.cause == GreedyResult::Cause::wall) {
            internal_fault("go_down: reached the wall before the tree path");
        }
        // Step 3: to the post center, following recorded edges when needed.
        if (r.event.kind == StopSpec::Event::Kind::post) {
            if (rs.straight_move(target, tag).blocked) {
                internal_fault("go_down: slide along the post blocked");
            }
        } else if (r.event.kind == StopSpec::Event::Kind::path) {
            Polyline rest;
            rest.push_back(rs.position());
            for (std::size_t v = static_cast<std::size_t>(r.event.index) + 1;
                 v < tp.poly.size(); ++v) {
                append_point(rest, tp.poly[v]);
            }
            follow_path(rs, rest, false, tag);
        } else {
            internal_fault("go_down: unexpected stop");
        }
        rs.teleport_check(target);
    }

    void go_back_down(int i, int m, int q) {
        const TrajTag tag = TrajTag::gobackdown;
        if (m < q + 2) internal_fault("go_back_down: m < q + 2");
        const Point target = center(i + 1, q);
        if (!(f(i).x > target.x && target.x >= f(i).prev_x - kEps)) {
            internal_fault("go_back_down: ordering precondition violated");
        }
        // Step 1: follow the tree path backward until x = X_{i+1}^q.
        TreePath tp = tree_path(tree(), 1, 1, i, m);
        StopSpec s1;
        s1.x_leq = target.x;
        const auto ev = follow_path_until(rs, tp.poly, true, s1, tag);
        if (ev.kind == StopSpec::Event::Kind::none) {
            internal_fault("go_back_down: backward walk missed the threshold");
        }
        // Step 2: greedy down-left until a band region between the (m-1) row
        // posts of two higher fences is entered, or the row of P_i^{m-1}.
        std::vector<Rect> regions;
        for (int j = 1; j < i; ++j) {
            const Point a = center(j, m - 1);
            const Point b = center(j + 1, m - 1);
            regions.push_back(Rect{a.x, b.y, b.x, a.y});
        }
        const double row_y = center(i, m - 1).y;
        StopSpec s2;
        s2.rects = &regions;
        s2.y_leq = row_y;
        GreedyResult r = greedy_path(rs, Dir::neg_y, Dir::neg_x, s2, tag);
        if (r.event.kind == StopSpec::Event::Kind::rect) {
            for (int j = r.event.index + 1; j < i; ++j) {
                go_down(j, m - 1, m - 1, tag);
            }
        }
        go_down(i, m - 1, q, tag);
        rs.teleport_check(target);
    }

    void check_lemma6() {
        const int i = st.i;
        if (i <= 1) return;
        const int m_above = f(i - 1).m;
        if (f(i).x >= f(i - 1).x && f(i).m != m_above) {
            internal_fault("lemma 6(a) violated at case 6");
        }
        for (int s = i; s <= params.k; ++s) {
            if (f(s).x < f(i - 1).x && f(s).m != m_above - 1) {
                internal_fault("lemma 6(b) violated at case 6");
            }
        }
        st.invariant_checks += 1;
    }

    void check_invariants() {
        const int k = params.k;
        for (int j = 1; j < k; ++j) {
            if (f(j).m < f(j + 1).m) {
                internal_fault("fence post counts not nonincreasing");
            }
        }
        for (int j = st.i + 1; j < k; ++j) {
            if (f(j + 1).m == 0) continue;
            if (f(j).x > f(j + 1).x + kEps) {
                internal_fault("x-ordering violated below the current fence");
            }
        }
        // X_j^{M_j - 1} <= X_l for every l > j, via one suffix-minimum pass.
        double suffix_min = std::numeric_limits<double>::infinity();
        for (int j = k; j >= 1; --j) {
            if (f(j).m >= 2 && f(j).prev_x > suffix_min + kEps) {
                internal_fault("almost-x-ordering violated");
            }
            if (f(j).m > 0) suffix_min = std::min(suffix_min, f(j).x);
        }
        st.invariant_checks += 1;
    }

    Polyline pending_partial_edge_;
};

}  // namespace

GroupResult find_fence_tree(RobotState& rs, const SearchParams& params,
                            Point root, std::int64_t root_obstacle) {
    GroupResult g;
    rs.teleport_check(root);
    TreeSearch ts(rs, params, g, root, root_obstacle);
    while (!ts.halted) ts.step();
    g.walked = g.edges_len + g.godown_len + g.gobackdown_len + g.backtrack_len;
    return g;
}

// ---------------------------------------------------------------------------
// SearchDriver

struct SearchDriver::Impl {
    const Scene& scene;
    RobotState& rs;
    int k;
    std::optional<double> L_known;
    SearchParams params;

    enum class Phase { transition, root_path, tree, return_to_start, done };
    Phase phase{Phase::transition};

    std::vector<GroupResult> groups;
    std::vector<EpochStats> epochs;
    GroupResult cur;
    std::unique_ptr<TreeSearch> tree_search;
    long long inv_checks{0};

    Impl(const Scene& s, RobotState& r, int k_in, std::optional<double> L)
        : scene(s), rs(r), k(k_in), L_known(L) {
        const double guess = L ? *L : static_cast<double>(s.n());
        params = make_params(s.n(), k, guess);
        epochs.push_back(EpochStats{params.L, 0, 0, false});
        cur = GroupResult{};
        cur.params = params;
    }

    bool done() const { return phase == Phase::done; }

    Point pause_position() const { return rs.position(); }

    double step() {
        const double before = rs.odometer();
        switch (phase) {
            case Phase::transition: {
                const std::size_t mark = rs.mark();
                StopSpec stop;
                stop.y_leq = -params.L;
                stop.wall = true;
                GreedyResult r = greedy_path(rs, Dir::pos_x, Dir::neg_y, stop,
                                             TrajTag::transition);
                append_polyline(cur.transition, rs.collect(mark));
                cur.transition_len = polyline_length(cur.transition);
                if (r.cause == GreedyResult::Cause::wall ||
                    r.event.kind == StopSpec::Event::Kind::wall) {
                    cur.halted_at_wall = true;
                    finish_group();
                    phase = Phase::done;
                } else {
                    phase = Phase::root_path;
                }
                break;
            }
            case Phase::root_path: {
                const std::size_t mark = rs.mark();
                TauPathResult t = tau_path(rs, params.tau, TrajTag::search);
                cur.tau_paths.push_back(t.stat);
                append_polyline(cur.transition, rs.collect(mark));
                cur.transition_len = polyline_length(cur.transition);
                if (t.wall) {
                    cur.halted_at_wall = true;
                    finish_group();
                    phase = Phase::done;
                } else {
                    tree_search = std::make_unique<TreeSearch>(
                        rs, params, cur, t.post_center, t.obstacle_id);
                    phase = Phase::tree;
                }
                break;
            }
            case Phase::tree: {
                tree_search->step();
                if (tree_search->halted) {
                    inv_checks += tree_search->st.invariant_checks;
                    const bool at_wall = cur.halted_at_wall;
                    cur.walked = cur.edges_len + cur.godown_len +
                                 cur.gobackdown_len + cur.backtrack_len;
                    finish_group();
                    tree_search.reset();
                    if (at_wall) {
                        phase = Phase::done;
                    } else if (static_cast<int>(groups.size()) >= params.group_cap) {
                        if (L_known) {
                            internal_fault(
                                "group cap exceeded with known path length");
                        }
                        epochs.back().overflowed = true;
                        phase = Phase::return_to_start;
                    } else {
                        phase = Phase::transition;
                    }
                }
                break;
            }
            case Phase::return_to_start: {
                Polyline back = reversed(compose_path(groups));
                follow_path(rs, back, false, TrajTag::follow);
                rs.teleport_check({0, 0});
                groups.clear();
                params = make_params(scene.n(), k, params.L * 2);
                epochs.push_back(EpochStats{params.L, 0, 0, false});
                cur = GroupResult{};
                cur.params = params;
                phase = Phase::transition;
                break;
            }
            case Phase::done:
                break;
        }
        return rs.odometer() - before;
    }

    void finish_group() {
        groups.push_back(std::move(cur));
        if (groups.back().complete) {
            epochs.back().complete_groups += 1;
            epochs.back().complete_fences += k;
        } else {
            for (const auto& row : groups.back().tree.posts) {
                if (static_cast<int>(row.size()) == params.M) {
                    epochs.back().complete_fences += 1;
                }
            }
        }
        cur = GroupResult{};
        cur.params = params;
    }

    Polyline resume_path() const {
        Polyline out;
        out.push_back({0, 0});
        append_polyline(out, compose_path(groups));
        if (phase == Phase::root_path || phase == Phase::tree) {
            append_polyline(out, cur.transition);
        }
        if (phase == Phase::tree && tree_search) {
            auto& ts = *tree_search;
            TreePath tp = tree_path(cur.tree, 1, 1, ts.st.i,
                                    ts.f(ts.st.i).m);
            append_polyline(out, tp.poly);
        }
        return out;
    }
};

SearchDriver::SearchDriver(const Scene& scene, RobotState& rs, int k,
                           std::optional<double> L_known)
    : impl_(std::make_unique<Impl>(scene, rs, k, L_known)) {}
SearchDriver::~SearchDriver() = default;
SearchDriver::SearchDriver(SearchDriver&&) noexcept = default;

bool SearchDriver::done() const { return impl_->done(); }
double SearchDriver::step() { return impl_->step(); }
const std::vector<GroupResult>& SearchDriver::groups() const {
    return impl_->groups;
}
const std::vector<EpochStats>& SearchDriver::epochs() const {
    return impl_->epochs;
}
const SearchParams& SearchDriver::params() const { return impl_->params; }
Polyline SearchDriver::resume_path() const { return impl_->resume_path(); }
Polyline SearchDriver::compose() const { return compose_path(impl_->groups); }
Point SearchDriver::pause_position() const { return impl_->pause_position(); }
long long SearchDriver::invariant_checks() const {
    long long c = impl_->inv_checks;
    if (impl_->tree_search) c += impl_->tree_search->st.invariant_checks;
    return c;
}

// ---------------------------------------------------------------------------
// Trip-level drivers

SearchTripResult search_trip(const Scene& scene, RobotState& rs, int k,
                             std::optional<double> L_known) {
    SearchDriver driver(scene, rs, k, L_known);
    const double before = rs.odometer();
    while (!driver.done()) driver.step();
    SearchTripResult out;
    out.groups = driver.groups();
    out.epochs = driver.epochs();
    out.composed = driver.compose();
    out.trip_length = rs.odometer() - before;
    out.final_L_guess = driver.params().L;
    out.final_params = driver.params();
    out.invariant_checks = driver.invariant_checks();
    return out;
}

RunResult run_cumulative(const Scene& scene, int k,
                         std::optional<double> L_known) {
    if (k < 1 || static_cast<std::int64_t>(k) > scene.n()) {
        throw std::invalid_argument("run_cumulative: need 1 <= k <= n");
    }
    RobotState rs(scene);
    RunResult out;
    out.search = search_trip(scene, rs, k, L_known);
    out.composed = out.search.composed;
    out.trip_lengths.push_back(rs.trip_odometer());
    if (!out.composed.empty() &&
        !near(out.composed.back(), rs.position())) {
        internal_fault("run_cumulative: composed path does not end at the wall");
    }
    for (int trip = 2; trip <= k; ++trip) {
        rs.begin_trip();
        follow_path(rs, out.composed, trip % 2 == 0, TrajTag::follow);
        out.trip_lengths.push_back(rs.trip_odometer());
    }
    out.trajectory = rs.trajectory();
    out.touched = rs.touched();
    return out;
}

RunResult run_incremental(const Scene& scene, int trips) {
    const std::int64_t n = scene.n();
    if (trips < 1 || static_cast<std::int64_t>(trips) > n) {
        throw std::invalid_argument("run_incremental: need 1 <= trips <= n");
    }
    constexpr double kSearchFold = 126.0;  // see docs/bounds.md
    RobotState rs(scene);
    RunResult out;
    out.search = search_trip(scene, rs, 1);
    Polyline pi = out.search.composed;
    out.trip_lengths.push_back(rs.trip_odometer());
    out.known_path_lengths.push_back(polyline_length(pi));

    int trips_done = 1;
    long long i_epoch = 1;
    while (trips_done < trips) {
        const int k_prime = static_cast<int>(std::min<std::int64_t>(
            std::max<std::int64_t>(2 * i_epoch, 1), n));
        SearchDriver driver(scene, rs, k_prime, std::nullopt);
        // The epoch always spans at least one outward trip.
        const long long epoch_target = std::max(2 * i_epoch, i_epoch + 2);
        bool overran = false;
        while (trips_done < trips &&
               (trips_done < epoch_target || !driver.done())) {
            if (trips_done >= epoch_target) overran = true;
            rs.begin_trip();
            ++trips_done;
            const bool even = trips_done % 2 == 0;
            if (even) {
                // Homeward trips only retrace the known path; search work
                // happens on outward trips, whose frontier hangs off s.
                follow_path(rs, pi, true, TrajTag::follow);
            } else if (!driver.done()) {
                // Quota spread over the epoch's outward trips.
                const double quota =
                    2.0 * kSearchFold * driver.params().L *
                    std::sqrt(2.0 * static_cast<double>(n) /
                              static_cast<double>(i_epoch));
                const std::size_t mark = rs.mark();
                follow_path(rs, driver.resume_path(), false, TrajTag::follow);
                double walked = 0;
                while (!driver.done() && walked < quota) walked += driver.step();
                if (driver.done()) {
                    pi = driver.compose();
                } else {
                    Polyline prefix = rs.collect(mark);
                    follow_path(rs, reversed(prefix), false, TrajTag::backtrack);
                    follow_path(rs, pi, false, TrajTag::follow);
                }
            } else {
                follow_path(rs, pi, false, TrajTag::follow);
            }
            out.trip_lengths.push_back(rs.trip_odometer());
            out.known_path_lengths.push_back(polyline_length(pi));
        }
        if (overran) out.epoch_overruns += 1;
        i_epoch = std::max<long long>(2 * i_epoch, trips_done);
        if (trips_done >= trips) break;
    }
    out.composed = pi;
    out.trajectory = rs.trajectory();
    out.touched = rs.touched();
    return out;
}

}  // namespace fencenav
