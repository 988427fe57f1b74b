#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fencenav/navigate.hpp"
#include "fencenav/oracle.hpp"
#include "fencenav/scene.hpp"

namespace fencenav {

struct BoundCheck {
    std::string name;
    bool ok{true};
    double measured{0};
    double bound{0};
    double slack() const { return bound - measured; }
};

struct BoundReport {
    std::vector<BoundCheck> checks;
    int violations() const;
};

// Per-group cost envelopes of the tree traversal plus the per-window fence
// budget; pure checker, never mutates run data.
BoundReport check_bounds(const std::vector<GroupResult>& groups,
                         const std::vector<EpochStats>& epochs,
                         std::int64_t n, int k);

struct RunReport {
    std::string scene_id;
    std::int64_t n{0};
    int k{0};
    std::vector<double> trip_lengths;
    double oracle_length{0};
    bool oracle_exact{true};
    double cumulative_ratio{0};              // sum R_i / (k * L)
    std::vector<double> per_trip_ratios;     // R_i / L
    int group_count{0};
    int fence_count{0};
    std::vector<double> group_delta_x;
    BoundReport bounds;
    int epoch_overruns{0};
    std::vector<double> known_path_lengths;  // incremental only
    double measured_search_constant{0};      // walked / (L * sqrt(n k))
    double measured_path_constant{0};        // |path| / (L * sqrt(n / k))
};

RunReport make_report(const Scene& scene, const RunResult& run,
                      const OraclePath& oracle, int k);

std::string report_to_json(const RunReport& report);

// CSV with the fixed schema
// scene_id,n,k,trip,length,L,ratio,cum_ratio,groups,fences
std::string report_csv_header();
void append_report_csv(std::string& csv, const RunReport& report);

struct BenchGrid {
    std::vector<std::int64_t> n_values;
    std::vector<int> k_values;
    int seeds{1};
    double density{0.2};
    double y_extent_factor{2.0};
    std::string mode{"cumulative"};
};

BenchGrid parse_grid_file(const std::string& text);

struct BenchOutput {
    std::string csv;
    std::vector<RunReport> reports;
    double regression_slope{0};
    int regression_points{0};
    std::string summary;
};

BenchOutput bench(const BenchGrid& grid, int threads = 0);

// Least-squares slope of log(ratio) against log(n/k).
std::optional<double> loglog_slope(const std::vector<std::pair<double, double>>& nk_ratio);

std::string render_svg(const Scene& scene,
                       const std::vector<std::pair<std::string, Polyline>>& trajectories,
                       const std::vector<Fence>& fences,
                       const OraclePath* oracle_path);

}  // namespace fencenav
