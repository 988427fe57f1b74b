#include "doctest.h"
#include "fencenav/fences.hpp"
#include "fencenav/navigate.hpp"
#include "fencenav/oracle.hpp"

using namespace fencenav;

namespace {

Fence make_fence(double tau, std::vector<double> xs) {
    Fence f;
    f.tau = tau;
    f.base_y = 0;
    for (std::size_t m = 0; m < xs.size(); ++m) {
        f.posts.push_back(Post{xs[m], static_cast<int>(m), 0});
    }
    return f;
}

// Tall single column hosting every post of a k x M tree.
Scene tall_column(double y0, double y1) {
    return Scene::explicit_scene(100, {Obstacle{0, 50, y0, 51, y1}});
}

}  // namespace

TEST_CASE("check_fence accepts the spacing relation and rejects breaks") {
    CHECK_FALSE(check_fence(make_fence(2, {3, 7})).has_value());
    CHECK(check_fence(make_fence(2, {7, 3})).has_value());
    Fence off = make_fence(2, {3, 7});
    off.posts[1].row_off = 2;  // spacing 2*tau instead of tau
    CHECK(check_fence(off).has_value());
}

TEST_CASE("bands are empty exactly when consecutive posts share x") {
    Fence f = make_fence(2, {3, 3, 7});
    const auto b = bands_of(f);
    REQUIRE(b.size() == 2);
    CHECK(b[0].empty);
    CHECK_FALSE(b[1].empty);
    CHECK(b[1].rect.height() == doctest::Approx(2));
}

TEST_CASE("a single-column tree yields identical-x fences, all bands empty") {
    Scene s = tall_column(-300, 300);
    const auto res = fence_tree_oracle(s, {50, -100}, 0, 3, 5, 5);
    REQUIRE_FALSE(res.wall_reached);
    const auto fences = fences_of(res.tree);
    REQUIRE(fences.size() == 3);
    for (const Fence& f : fences) {
        CHECK_FALSE(check_fence(f).has_value());
        for (const Band& b : bands_of(f)) CHECK(b.empty);
    }
    CHECK(fences_disjoint(fences));
}

TEST_CASE("fences_of rejects incomplete trees and handles k = 1") {
    Scene s = tall_column(-300, 300);
    auto res = fence_tree_oracle(s, {50, -100}, 0, 1, 4, 5);
    REQUIRE_FALSE(res.wall_reached);
    CHECK(fences_of(res.tree).size() == 1);

    FenceTree partial = res.tree;
    partial.posts[0].pop_back();
    CHECK_THROWS_AS(fences_of(partial), std::logic_error);
}

TEST_CASE("tree_path through a single column costs (M + k - 2) tau") {
    const int k = 4, M = 6;
    const double tau = 5;
    Scene s = tall_column(-300, 300);
    const auto res = fence_tree_oracle(s, {50, -100}, 0, k, M, tau);
    REQUIRE_FALSE(res.wall_reached);
    const auto tp = tree_path(res.tree, 1, 1, k, M);
    CHECK(tp.length == doctest::Approx((M + k - 2) * tau));
    CHECK(static_cast<int>(tp.edges.size()) == M + k - 2);

    const auto self = tree_path(res.tree, 2, 3, 2, 3);
    CHECK(self.length == 0);
    CHECK_THROWS_AS(tree_path(res.tree, 0, 9, 1, 1), std::logic_error);
}

TEST_CASE("tree-path edges never overlap in x") {
    Scene s = gen_random(64, 0.25, 128, 3);
    RobotState rs(s);
    auto trip = search_trip(s, rs, 2);
    for (const GroupResult& g : trip.groups) {
        if (!g.complete) continue;
        const auto tp = tree_path(g.tree, 1, 1, g.params.k, g.params.M);
        double reach = -1e18;
        for (const TreeEdge* e : tp.edges) {
            const double x0 = e->poly.front().x;
            const double x1 = e->poly.back().x;
            CHECK(x0 >= reach - kEps);
            reach = std::max(reach, x1);
        }
    }
}
