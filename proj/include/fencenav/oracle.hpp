#pragma once

#include <optional>
#include <vector>

#include "fencenav/fences.hpp"
#include "fencenav/geometry.hpp"
#include "fencenav/scene.hpp"
#include "fencenav/tau_trace.hpp"

namespace fencenav {

struct OraclePath {
    std::vector<Point> vertices;
    double length{0};
    bool exact{true};
};

// Globally shortest path from s = (0,0) to the wall x = n, over the
// visibility graph of obstacle corners. Explicit scenes only.
OraclePath shortest_wall_path(const Scene& scene);

// Shortest path through the boundary lattice of the full brick tiling.
// Exact: the tiling leaves no two-dimensional free space.
OraclePath wall_path_bricks_full(const BrickParams& params);

// Upper bound for a reduced brick scene (a subset of the tiling): lattice
// Dijkstra followed by shortcut smoothing against the explicit scene.
OraclePath wall_path_upper_bricks(const Scene& reduced, double h);

struct OracleTreeResult {
    bool wall_reached{false};
    FenceTree tree;
};

// Constructs the unique k x M fence-tree with the given root directly from
// scene geometry (no robot).
OracleTreeResult fence_tree_oracle(const Scene& scene, Point root,
                                   std::int64_t root_obstacle, int k, int M,
                                   double tau);

struct CrossingCost {
    bool crossed{false};
    double min_vertical{0};
};

// Minimum, over crossing sub-paths of `path`, of the vertical motion spent
// inside the fence's non-empty bands.
CrossingCost crossing_cost(const OraclePath& path, const Fence& fence);

}  // namespace fencenav
