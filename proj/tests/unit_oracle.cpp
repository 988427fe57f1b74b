#include <cmath>

#include "doctest.h"
#include "fencenav/navigate.hpp"
#include "fencenav/oracle.hpp"

using namespace fencenav;

TEST_CASE("empty scene: straight to the wall") {
    Scene s = Scene::explicit_scene(100, {});
    const auto p = shortest_wall_path(s);
    CHECK(p.length == doctest::Approx(100));
    REQUIRE(p.vertices.size() == 2);
    CHECK(p.vertices[0] == Point{0, 0});
    CHECK(p.vertices[1].x == doctest::Approx(100));
}

TEST_CASE("single column: around the nearer corner") {
    Scene s = Scene::explicit_scene(100, {Obstacle{0, 50, -10, 51, 10}});
    const auto p = shortest_wall_path(s);
    CHECK(p.length == doctest::Approx(std::sqrt(2600.0) + 50).epsilon(1e-9));
}

TEST_CASE("oracle length never beats the horizontal displacement") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        Scene s = gen_random(48, 0.25, 48, seed);
        const auto p = shortest_wall_path(s);
        CHECK(p.length >= 48 - kEps);
        // Path vertices avoid every interior.
        for (std::size_t i = 1; i < p.vertices.size(); ++i) {
            CHECK(s.segment_free(p.vertices[i - 1], p.vertices[i]));
        }
        CHECK(p.vertices.front() == Point{0, 0});
        CHECK(p.vertices.back().x == doctest::Approx(48));
    }
}

TEST_CASE("L equals n exactly when a free corridor exists") {
    Scene corridor = Scene::explicit_scene(
        60, {Obstacle{0, 10, 2, 14, 9}, Obstacle{1, 30, -8, 33, -1}});
    CHECK(shortest_wall_path(corridor).length == doctest::Approx(60));
    Scene blocked = Scene::explicit_scene(
        60, {Obstacle{0, 10, -3, 14, 9}});
    CHECK(shortest_wall_path(blocked).length > 60 + 1e-6);
}

TEST_CASE("full-tiling lattice path: half a brick height per column") {
    const auto p = wall_path_bricks_full(BrickParams{16, 4});
    // Per column: 1 across plus h/2 vertically, plus the first drop.
    CHECK(p.length <= 16 * (1 + 2.0) + 2 + 1e-9);
    CHECK(p.length >= 16.0);
    CHECK(p.exact);
}

TEST_CASE("reduced-scene upper bound stays above the exact length") {
    // Keep only a handful of bricks; both oracles must agree on soundness.
    Scene lazy = gen_bricks(16, 4);
    Scene some = lazy.materialize(Rect{0, -6, 8, 6});
    Scene reduced = Scene::explicit_scene(16, some.obstacles());
    const auto exact = shortest_wall_path(reduced);
    const auto upper = wall_path_upper_bricks(reduced, 4);
    CHECK(upper.length >= exact.length - 1e-9);
    CHECK(upper.length <= exact.length * 1.5 + 8);
    for (std::size_t i = 1; i < upper.vertices.size(); ++i) {
        CHECK(reduced.segment_free(upper.vertices[i - 1], upper.vertices[i]));
    }
}

TEST_CASE("single-column tree: forced post grid") {
    Scene s = Scene::explicit_scene(100, {Obstacle{0, 50, -400, 51, 400}});
    const int k = 4, M = 8;
    const double tau = 5, L = 100;
    const auto res = fence_tree_oracle(s, {50, -L}, 0, k, M, tau);
    REQUIRE_FALSE(res.wall_reached);
    REQUIRE(res.tree.complete());
    for (int i = 1; i <= k; ++i) {
        for (int m = 1; m <= M; ++m) {
            const Point c = res.tree.center(i, m);
            CHECK(c.x == 50);
            CHECK(c.y == doctest::Approx(-L - (i - 1) * tau + (m - 1) * tau));
        }
    }
    // Row spans obey the exact offset bookkeeping.
    CHECK(res.tree.posts[k - 1][M - 1].row_off -
              res.tree.posts[0][0].row_off ==
          M - k);
}

TEST_CASE("empty half-plane: the first up-child runs into the wall") {
    Scene s = Scene::explicit_scene(100, {Obstacle{0, 50, -107, 51, -93}});
    const auto res = fence_tree_oracle(s, {50, -100}, 0, 2, 6, 5);
    CHECK(res.wall_reached);
}

TEST_CASE("oracle tree matches the searched tree on random scenes") {
    for (std::uint64_t seed : {7ull, 13ull}) {
        Scene s = gen_random(96, 0.25, 192, seed);
        RobotState rs(s);
        const auto trip = search_trip(s, rs, 3);
        int compared = 0;
        for (const GroupResult& g : trip.groups) {
            if (!g.complete) continue;
            const auto oracle = fence_tree_oracle(
                s, g.root, g.tree.posts[0][0].obstacle_id, g.params.k,
                g.params.M, g.params.tau);
            REQUIRE_FALSE(oracle.wall_reached);
            for (int i = 1; i <= g.params.k; ++i) {
                for (int m = 1; m <= g.params.M; ++m) {
                    const Post& a = g.tree.posts[i - 1][m - 1];
                    const Post& b = oracle.tree.posts[i - 1][m - 1];
                    REQUIRE(a == b);
                }
            }
            ++compared;
        }
        CHECK(compared >= 0);
    }
}

TEST_CASE("fences from oracle trees are disjoint and ordered") {
    Scene s = gen_random(96, 0.25, 192, 17);
    RobotState rs(s);
    const auto trip = search_trip(s, rs, 2);
    for (const GroupResult& g : trip.groups) {
        if (!g.complete) continue;
        const auto fences = fences_of(g.tree);
        CHECK(fences_disjoint(fences));
        for (const Fence& f : fences) {
            CHECK_FALSE(check_fence(f).has_value());
        }
    }
}

TEST_CASE("crossing cost: synthetic staircase fence") {
    Fence f;
    f.tau = 2;
    f.base_y = 0;
    f.posts = {Post{0, 0, 0}, Post{4, 1, 0}, Post{8, 2, 0}};
    // Diagonal path through the second band pays its full height.
    OraclePath diag;
    diag.vertices = {{-1, 2.2}, {10, 3.8}};
    diag.length = polyline_length(diag.vertices);
    const auto c = crossing_cost(diag, f);
    REQUIRE(c.crossed);
    CHECK(c.min_vertical == doctest::Approx(1.6 * (8.0 - 4.0) / 11.0));

    // A path that stays below never crosses.
    OraclePath below;
    below.vertices = {{-1, -5}, {10, -5}};
    const auto c2 = crossing_cost(below, f);
    CHECK_FALSE(c2.crossed);
}

TEST_CASE("crossing cost: vertical travel inside one band") {
    Fence f;
    f.tau = 3;
    f.base_y = 0;
    f.posts = {Post{0, 0, 0}, Post{6, 1, 0}};
    OraclePath p;
    p.vertices = {{-1, 0.5}, {3, 0.5}, {3, 2.9}, {7, 2.9}};
    const auto c = crossing_cost(p, f);
    REQUIRE(c.crossed);
    CHECK(c.min_vertical == doctest::Approx(2.4));

    // Leaving the slab voids the attempt: no crossing.
    OraclePath exits;
    exits.vertices = {{-1, 0.5}, {3, 0.5}, {3, 5}, {7, 5}};
    CHECK_FALSE(crossing_cost(exits, f).crossed);
}

TEST_CASE("oracle shortest paths pay tau to cross discovered fences") {
    Scene s = gen_random(96, 0.25, 192, 21);
    RobotState rs(s);
    const auto trip = search_trip(s, rs, 2);
    const auto oracle = shortest_wall_path(s);
    for (const GroupResult& g : trip.groups) {
        if (!g.complete) continue;
        for (const Fence& f : fences_of(g.tree)) {
            const auto c = crossing_cost(oracle, f);
            if (c.crossed) {
                CHECK(c.min_vertical >= g.params.tau - 1e-9);
            }
        }
    }
}
