// Command-line front end: scene generation, runs with reports and bound
// checks, the shortest-path oracle, and benchmark sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fencenav/adversary.hpp"
#include "fencenav/harness.hpp"
#include "fencenav/navigate.hpp"
#include "fencenav/oracle.hpp"
#include "fencenav/scene.hpp"

namespace {

using namespace fencenav;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

OraclePath oracle_for(const Scene& scene) {
    if (scene.is_lazy()) {
        return wall_path_bricks_full(scene.bricks()->params());
    }
    // Reduced adversary scenes are too large for the visibility graph;
    // fall back to the lattice upper bound.
    if (scene.obstacles().size() > 4000 &&
        scene.generator_tag().rfind("adversary", 0) == 0) {
        double h = 0;
        for (const Obstacle& o : scene.obstacles()) {
            h = std::max(h, o.y_max - o.y_min);
        }
        return wall_path_upper_bricks(scene, h);
    }
    return shortest_wall_path(scene);
}

int cmd_gen(const std::string& kind, std::int64_t n, int k, double h,
            double density, std::uint64_t seed, double y_extent,
            const std::string& out_path) {
    if (kind == "random") {
        Scene s = gen_random(n, density, y_extent > 0 ? y_extent : 2.0 * n, seed);
        if (s.generation_warning()) {
            std::cerr << "warning: density target not reached\n";
        }
        write_file(out_path, emit_scene(s));
    } else if (kind == "bricks") {
        Scene s = gen_bricks(n, h);
        write_file(out_path, emit_scene(s));
    } else if (kind == "adversary") {
        AdversaryResult adv = build_adversary(
            n, k, h, [&](const Scene& sc) { return run_cumulative(sc, k); });
        char header[96];
        std::snprintf(header, sizeof(header), "adversary n=%lld k=%d h=%s",
                      static_cast<long long>(n), k, format_double(h).c_str());
        write_file(out_path, emit_scene(adv.reduced, {header}));
        LowerBoundReport rep = verify_lower_bound(adv, n, k, h);
        for (const TheoremCheck& c : rep.checks) {
            std::printf("%-45s %s  measured=%.6g bound=%.6g\n", c.name.c_str(),
                        c.ok ? "ok" : "FAIL", c.measured, c.bound);
        }
        return rep.all_ok() ? 0 : 1;
    } else {
        std::cerr << "unknown generator kind: " << kind << "\n";
        return 2;
    }
    return 0;
}

int cmd_run(const std::string& scene_path, int k, const std::string& mode,
            const std::string& report_path, const std::string& svg_path,
            bool check_bounds_flag) {
    Scene scene = parse_scene(read_file(scene_path));
    if (k < 1 || static_cast<std::int64_t>(k) > scene.n()) {
        std::cerr << "run: need 1 <= k <= n\n";
        return 2;
    }
    RunResult run = mode == "incremental" ? run_incremental(scene, k)
                                          : run_cumulative(scene, k);
    OraclePath oracle = oracle_for(scene);
    RunReport rep = make_report(scene, run, oracle, k);
    if (!report_path.empty()) write_file(report_path, report_to_json(rep));
    if (!svg_path.empty()) {
        std::vector<std::pair<std::string, Polyline>> trips;
        Polyline cur;
        int trip = 1;
        for (const TrajSegment& seg : run.trajectory) {
            if (seg.trip != trip) {
                trips.push_back({"trip " + std::to_string(trip), cur});
                cur.clear();
                trip = seg.trip;
            }
            if (cur.empty()) cur.push_back(seg.a);
            append_point(cur, seg.b);
        }
        if (!cur.empty()) trips.push_back({"trip " + std::to_string(trip), cur});
        std::vector<Fence> fences;
        for (const GroupResult& g : run.search.groups) {
            if (!g.complete) continue;
            for (Fence& f : fences_of(g.tree)) fences.push_back(std::move(f));
        }
        const Scene drawable =
            scene.is_lazy()
                ? scene.materialize(Rect{-2.0, -3.0 * scene.n(),
                                         static_cast<double>(scene.n()) + 2,
                                         3.0 * scene.n()})
                : scene;
        write_file(svg_path, render_svg(drawable, trips, fences, &oracle));
    }
    std::printf("scene=%s n=%lld k=%d trips=%zu L=%.6g ratio=%.6g groups=%d fences=%d\n",
                rep.scene_id.c_str(), static_cast<long long>(rep.n), rep.k,
                rep.trip_lengths.size(), rep.oracle_length, rep.cumulative_ratio,
                rep.group_count, rep.fence_count);
    if (check_bounds_flag) {
        const int v = rep.bounds.violations();
        for (const BoundCheck& c : rep.bounds.checks) {
            if (!c.ok) {
                std::printf("VIOLATION %s measured=%.6g bound=%.6g\n",
                            c.name.c_str(), c.measured, c.bound);
            }
        }
        std::printf("bound checks: %zu, violations: %d\n",
                    rep.bounds.checks.size(), v);
        if (v > 0) return 1;
    }
    return 0;
}

int cmd_oracle(const std::string& scene_path) {
    Scene scene = parse_scene(read_file(scene_path));
    OraclePath p = oracle_for(scene);
    std::printf("%.9g\n", p.length);
    return 0;
}

int cmd_bench(const std::string& grid_path, const std::string& out_path,
              const std::string& mode, int threads) {
    BenchGrid grid = parse_grid_file(read_file(grid_path));
    if (!mode.empty()) grid.mode = mode;
    BenchOutput out = bench(grid, threads);
    write_file(out_path, out.csv);
    std::fputs(out.summary.c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"navigation benchmark for multi-trip travel among "
                 "axis-parallel rectangular obstacles"};
    app.require_subcommand(1);

    std::string kind = "random", out_path, scene_path, mode = "cumulative";
    std::string report_path, svg_path, grid_path;
    std::int64_t n = 128;
    int k = 4, threads = 0;
    double h = 16, density = 0.2, y_extent = 0;
    std::uint64_t seed = 1;
    bool check_bounds_flag = false;

    auto* gen = app.add_subcommand("gen", "generate a scene file");
    gen->add_option("--kind", kind, "random|bricks|adversary");
    gen->add_option("--n", n, "wall distance");
    gen->add_option("--k", k, "trips (adversary)");
    gen->add_option("--h", h, "brick height");
    gen->add_option("--density", density, "covered-area fraction");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--y-extent", y_extent, "half-height of the sampling box");
    gen->add_option("--out", out_path, "output scene file")->required();

    auto* run = app.add_subcommand("run", "run trips on a scene");
    run->add_option("--scene", scene_path, "scene file")->required();
    run->add_option("--k", k, "number of trips")->required();
    run->add_option("--mode", mode, "cumulative|incremental");
    run->add_option("--report", report_path, "write JSON report");
    run->add_option("--svg", svg_path, "write SVG drawing");
    run->add_flag("--check-bounds", check_bounds_flag, "verify cost envelopes");

    auto* oracle = app.add_subcommand("oracle", "print the shortest wall-path length");
    oracle->add_option("--scene", scene_path, "scene file")->required();

    auto* bench_cmd = app.add_subcommand("bench", "sweep a parameter grid");
    bench_cmd->add_option("--grid-file", grid_path, "grid description")->required();
    bench_cmd->add_option("--out", out_path, "output CSV")->required();
    bench_cmd->add_option("--mode", mode, "cumulative|incremental");
    bench_cmd->add_option("--threads", threads, "worker threads (0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen(kind, n, k, h, density, seed, y_extent, out_path);
        }
        if (run->parsed()) {
            return cmd_run(scene_path, k, mode, report_path, svg_path,
                           check_bounds_flag);
        }
        if (oracle->parsed()) return cmd_oracle(scene_path);
        if (bench_cmd->parsed()) return cmd_bench(grid_path, out_path, mode, threads);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
