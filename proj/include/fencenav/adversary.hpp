#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fencenav/navigate.hpp"
#include "fencenav/scene.hpp"

namespace fencenav {

// Deterministic strategy run against a scene (run_cumulative by default).
using Strategy = std::function<RunResult(const Scene&)>;

struct AdversaryResult {
    Scene reduced;          // touched bricks only (including the start brick)
    RunResult full_run;     // the strategy's run on the full tiling
    RunResult reduced_run;  // identical replay on the reduced scene
    std::int64_t touched_count{0};
    bool replay_identical{false};
};

// Simulates the strategy on the full brick tiling, keeps only the bricks it
// touched, and replays it on the reduced scene to confirm the trajectories
// coincide vertex for vertex.
AdversaryResult build_adversary(std::int64_t n, int k, double h,
                                const Strategy& strategy);

struct TheoremCheck {
    std::string name;
    bool ok{false};
    double measured{0};
    double bound{0};
};

struct LowerBoundReport {
    std::vector<TheoremCheck> checks;
    double total_distance{0};
    double reduced_path_upper{0};  // upper bound on L of the reduced scene
    double ratio_lower{0};         // sound lower bound on the achieved ratio
    bool all_ok() const;
};

// Checks the lower-bound chain: M >= n, R >= n*k*h/2, an upper bound on the
// reduced scene's shortest path below 3*sqrt(8*h*R), the resulting ratio at
// least sqrt(n/k)/12, brick coverage of every unit column, and the sparse-row
// existence bound.
LowerBoundReport verify_lower_bound(const AdversaryResult& adv, std::int64_t n,
                                    int k, double h);

}  // namespace fencenav
