#include "fencenav/fences.hpp"

#include <algorithm>

namespace fencenav {

std::vector<Band> bands_of(const Fence& f) {
    std::vector<Band> out;
    for (std::size_t m = 1; m < f.posts.size(); ++m) {
        const Point a = f.center(m - 1);
        const Point b = f.center(m);
        Band band;
        band.rect = {std::min(a.x, b.x), a.y, std::max(a.x, b.x), b.y};
        band.empty = a.x == b.x;
        out.push_back(band);
    }
    return out;
}

bool FenceTree::complete() const {
    if (static_cast<int>(posts.size()) != k) return false;
    for (const auto& row : posts) {
        if (static_cast<int>(row.size()) != M) return false;
    }
    return true;
}

int FenceTree::post_count() const {
    int c = 0;
    for (const auto& row : posts) c += static_cast<int>(row.size());
    return c;
}

std::vector<Fence> fences_of(const FenceTree& tree) {
    if (!tree.complete()) internal_fault("fences_of: incomplete tree");
    std::vector<Fence> out;
    for (int i = 1; i <= tree.k; ++i) {
        Fence f;
        f.tau = tree.tau;
        f.base_y = tree.base_y;
        f.posts = tree.posts[static_cast<std::size_t>(i - 1)];
        out.push_back(std::move(f));
    }
    return out;
}

std::optional<FenceViolation> check_fence(const Fence& f) {
    for (std::size_t m = 1; m < f.posts.size(); ++m) {
        if (f.posts[m - 1].x > f.posts[m].x + kEps) {
            return FenceViolation{"posts " + std::to_string(m - 1) + "," +
                                  std::to_string(m) + ": x not nondecreasing"};
        }
        if (f.posts[m].row_off != f.posts[m - 1].row_off + 1) {
            return FenceViolation{"posts " + std::to_string(m - 1) + "," +
                                  std::to_string(m) +
                                  ": y spacing is not exactly tau"};
        }
    }
    return std::nullopt;
}

namespace {

// Chain of (i,m) indices from the root to the given post, inclusive.
std::vector<std::pair<int, int>> root_chain(const FenceTree& tree, int i, int m) {
    std::vector<std::pair<int, int>> chain;
    int ci = i, cm = m;
    while (!(ci == 1 && cm == 1)) {
        chain.emplace_back(ci, cm);
        const auto& e = tree.edges[static_cast<std::size_t>(ci - 1)]
                                  [static_cast<std::size_t>(cm - 1)];
        if (!e) internal_fault("tree_path: missing parent edge");
        ci = e->parent_i;
        cm = e->parent_m;
    }
    chain.emplace_back(1, 1);
    std::reverse(chain.begin(), chain.end());
    return chain;
}

}  // namespace

TreePath tree_path(const FenceTree& tree, int from_i, int from_m, int to_i,
                   int to_m) {
    auto valid = [&](int i, int m) {
        return i >= 1 && i <= static_cast<int>(tree.posts.size()) && m >= 1 &&
               m <= static_cast<int>(tree.posts[static_cast<std::size_t>(i - 1)].size());
    };
    if (!valid(from_i, from_m) || !valid(to_i, to_m)) {
        internal_fault("tree_path: nonexistent post index");
    }
    TreePath out;
    if (from_i == to_i && from_m == to_m) {
        out.poly.push_back(tree.center(from_i, from_m));
        return out;
    }
    auto a = root_chain(tree, from_i, from_m);
    auto b = root_chain(tree, to_i, to_m);
    std::size_t lca = 0;
    while (lca + 1 < a.size() && lca + 1 < b.size() && a[lca + 1] == b[lca + 1]) {
        ++lca;
    }
    // Walk from `from` down to the LCA (reversed edges), then up to `to`.
    out.poly.push_back(tree.center(from_i, from_m));
    for (std::size_t idx = a.size() - 1; idx > lca; --idx) {
        const auto [ci, cm] = a[idx];
        const TreeEdge& e = *tree.edges[static_cast<std::size_t>(ci - 1)]
                                       [static_cast<std::size_t>(cm - 1)];
        Polyline rev = reversed(e.poly);
        append_polyline(out.poly, rev);
        out.edges.push_back(&e);
    }
    for (std::size_t idx = lca + 1; idx < b.size(); ++idx) {
        const auto [ci, cm] = b[idx];
        const TreeEdge& e = *tree.edges[static_cast<std::size_t>(ci - 1)]
                                       [static_cast<std::size_t>(cm - 1)];
        append_polyline(out.poly, e.poly);
        out.edges.push_back(&e);
    }
    out.length = polyline_length(out.poly);
    return out;
}

bool fences_disjoint(const std::vector<Fence>& fences) {
    std::vector<Rect> rects;
    for (const Fence& f : fences) {
        for (const Band& b : bands_of(f)) {
            if (!b.empty) rects.push_back(b.rect);
        }
    }
    for (std::size_t i = 0; i < rects.size(); ++i) {
        for (std::size_t j = i + 1; j < rects.size(); ++j) {
            const Rect& a = rects[i];
            const Rect& b = rects[j];
            const bool x_overlap =
                a.x_min < b.x_max - kEps && b.x_min < a.x_max - kEps;
            const bool y_overlap =
                a.y_min < b.y_max - kEps && b.y_min < a.y_max - kEps;
            if (x_overlap && y_overlap) return false;
        }
    }
    return true;
}

}  // namespace fencenav
