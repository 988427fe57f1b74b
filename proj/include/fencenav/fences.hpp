#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fencenav/geometry.hpp"

namespace fencenav {

// A height-2*tau portion of an obstacle's left edge, identified by its center.
// y is stored as base_y + row_off * tau so the fence spacing relation is exact.
struct Post {
    double x{0};
    int row_off{0};
    std::int64_t obstacle_id{-1};

    double y(double base_y, double tau) const { return base_y + row_off * tau; }
    friend bool operator==(const Post& a, const Post& b) {
        return a.x == b.x && a.row_off == b.row_off && a.obstacle_id == b.obstacle_id;
    }
};

struct Fence {
    std::vector<Post> posts;
    double tau{0};
    double base_y{0};

    Point center(std::size_t m) const {
        return {posts[m].x, posts[m].y(base_y, tau)};
    }
};

// Height-tau rectangle spanned by consecutive posts; empty when both share x.
struct Band {
    Rect rect;
    bool empty{false};
};

std::vector<Band> bands_of(const Fence& f);

enum class EdgeKind { up, down };

struct TreeEdge {
    int parent_i{0};
    int parent_m{0};
    EdgeKind kind{EdgeKind::up};
    Polyline poly;   // parent center -> child center (or partial when the wall cut it)
    double length{0};
    double tau_dx{0};   // x extent of the tau-path portion
    double tau_len{0};  // length of the tau-path portion
};

// A k x M grid of posts discovered (or constructed) with parent edges.
// posts[i-1] lists fence F_i front-to-back; edges[i-1][m-1] is the parent
// edge of P_i^m (the root has none).
struct FenceTree {
    int k{0};
    int M{0};
    double tau{0};
    double base_y{0};  // y of the root row
    std::vector<std::vector<Post>> posts;
    std::vector<std::vector<std::optional<TreeEdge>>> edges;

    bool complete() const;
    int post_count() const;
    Point center(int i, int m) const {
        return {posts[i - 1][m - 1].x,
                posts[i - 1][m - 1].y(base_y, tau) };
    }
    // Row offset of P_i^m relative to the root: m - i.
    static int row_off(int i, int m) { return m - i; }
};

std::vector<Fence> fences_of(const FenceTree& tree);

struct FenceViolation {
    std::string message;
};

std::optional<FenceViolation> check_fence(const Fence& f);

struct TreePath {
    Polyline poly;
    double length{0};
    std::vector<const TreeEdge*> edges;
};

// Unique tree path between two posts, replayed from recorded edge geometry.
TreePath tree_path(const FenceTree& tree, int from_i, int from_m, int to_i,
                   int to_m);

// True when the non-empty bands of all fences are pairwise disjoint.
bool fences_disjoint(const std::vector<Fence>& fences);

}  // namespace fencenav
