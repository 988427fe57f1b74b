#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "fencenav/fences.hpp"
#include "fencenav/robot.hpp"
#include "fencenav/scene.hpp"

namespace fencenav {

struct SearchParams {
    std::int64_t n{0};
    int k{1};
    double L{0};      // window half-height in effect
    double tau{0};    // adjusted so (M - k) * tau == 2L exactly
    int M{0};
    int group_cap{0}; // complete groups allowed before the guess doubles
};

SearchParams make_params(std::int64_t n, int k, double L_guess);

// One group: the fence-tree found plus cost ledgers for the bound checks.
struct GroupResult {
    FenceTree tree;
    Point root{};
    SearchParams params;
    Polyline transition;       // end of previous group (or s) -> root
    double transition_len{0};
    Polyline crossing;         // root -> P_k^M (or partial, to the wall)
    double crossing_len{0};
    bool complete{false};
    bool halted_at_wall{false};
    double walked{0};          // all motion inside FindFenceTree
    double edges_len{0};       // cases 2 and 3
    double godown_len{0};      // case 4
    double gobackdown_len{0};  // case 1
    double backtrack_len{0};   // case 6
    int case_count[7] = {0, 0, 0, 0, 0, 0, 0};
    std::vector<TauPathStat> tau_paths;
    double delta_x() const;
};

// Per-fence search state of FindFenceTree.
struct SearchState {
    struct FenceProgress {
        int m{0};
        double x{0};
        double prev_x{0};  // x of the next-to-last post, for the invariants
    };
    int i{1};
    std::vector<FenceProgress> fences;  // 1-based externally
    long long invariant_checks{0};
};

// Runs the 6-case dispatch from the given root post until P_k^M or the wall.
GroupResult find_fence_tree(RobotState& rs, const SearchParams& params,
                            Point root, std::int64_t root_obstacle);

struct EpochStats {
    double L_guess{0};
    int complete_groups{0};
    int complete_fences{0};
    bool overflowed{false};
};

// Stepwise search: one step is a group transition, a root acquisition, one
// FindFenceTree case action, or a return-to-start when the guess doubles.
class SearchDriver {
  public:
    SearchDriver(const Scene& scene, RobotState& rs, int k,
                 std::optional<double> L_known);
    ~SearchDriver();
    SearchDriver(SearchDriver&&) noexcept;

    bool done() const;
    double step();  // walked distance of this step
    const std::vector<GroupResult>& groups() const;
    const std::vector<EpochStats>& epochs() const;
    const SearchParams& params() const;
    Polyline resume_path() const;  // s -> current pause point
    Polyline compose() const;       // after done(): full s -> wall path
    Point pause_position() const;
    long long invariant_checks() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct SearchTripResult {
    std::vector<GroupResult> groups;   // final-epoch groups
    std::vector<EpochStats> epochs;
    Polyline composed;
    double trip_length{0};
    double final_L_guess{0};
    SearchParams final_params;
    long long invariant_checks{0};
};

SearchTripResult search_trip(const Scene& scene, RobotState& rs, int k,
                             std::optional<double> L_known = std::nullopt);

Polyline compose_path(const std::vector<GroupResult>& groups);

struct RunResult {
    std::vector<double> trip_lengths;
    SearchTripResult search;
    Polyline composed;
    std::vector<TrajSegment> trajectory;
    std::set<std::int64_t> touched;
    // Incremental bookkeeping.
    std::vector<double> known_path_lengths;  // |pi| after each trip
    int epoch_overruns{0};
};

// Searches on trip 1, then follows the composed path on trips 2..k.
RunResult run_cumulative(const Scene& scene, int k,
                         std::optional<double> L_known = std::nullopt);

// Spreads a growing virtual search over the trips so every trip stays short.
RunResult run_incremental(const Scene& scene, int trips);

}  // namespace fencenav
