#include "fencenav/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "vendor_json.hpp"

namespace fencenav {

int BoundReport::violations() const {
    int v = 0;
    for (const BoundCheck& c : checks) {
        if (!c.ok) ++v;
    }
    return v;
}

BoundReport check_bounds(const std::vector<GroupResult>& groups,
                         const std::vector<EpochStats>& epochs,
                         std::int64_t n, int k) {
    BoundReport rep;
    const double tol = 1e-6;
    auto add = [&](const std::string& name, double measured, double bound) {
        rep.checks.push_back({name, measured <= bound + tol, measured, bound});
    };
    int gi = 0;
    for (const GroupResult& g : groups) {
        ++gi;
        const double L = g.params.L;
        const double tau = g.params.tau;
        const double dx = g.delta_x();
        const double kk = static_cast<double>(g.params.k);
        const std::string p = "group " + std::to_string(gi) + ": ";
        if (g.complete) {
            add(p + "crossing path within 4L + 3*tau*dx", g.crossing_len,
                4 * L + 3 * tau * dx);
        }
        add(p + "edge walk within k(3L + 3*tau*dx)", g.edges_len,
            kk * (3 * L + 3 * tau * dx));
        add(p + "descents within k(9L + 9*tau*dx)", g.godown_len,
            kk * (9 * L + 9 * tau * dx));
        add(p + "back-descents within k(18L + 19*tau*dx)", g.gobackdown_len,
            kk * (18 * L + 19 * tau * dx));
        add(p + "returns within the forward work", g.backtrack_len,
            g.edges_len + g.godown_len + g.gobackdown_len + tol);
        add(p + "total walk within k(60L + 62*tau*dx)", g.walked,
            kk * (60 * L + 62 * tau * dx));
        for (const TauPathStat& t : g.tau_paths) {
            if (t.length > t.dx * (1 + 2 * t.tau) + tol) {
                rep.checks.push_back({p + "tau-path length within dx(1+2*tau)",
                                      false, t.length, t.dx * (1 + 2 * t.tau)});
            }
        }
    }
    if (!groups.empty()) {
        rep.checks.push_back({"every tau-path within its length bound", true, 0, 0});
    }
    for (std::size_t e = 0; e < epochs.size(); ++e) {
        const double bound =
            std::sqrt(static_cast<double>(n) * k) + static_cast<double>(k);
        add("epoch " + std::to_string(e + 1) + ": fences within sqrt(nk) + k",
            static_cast<double>(epochs[e].complete_fences), bound);
    }
    return rep;
}

RunReport make_report(const Scene& scene, const RunResult& run,
                      const OraclePath& oracle, int k) {
    RunReport rep;
    rep.scene_id = scene.generator_tag().empty() ? "scene" : scene.generator_tag();
    rep.n = scene.n();
    rep.k = k;
    rep.trip_lengths = run.trip_lengths;
    rep.oracle_length = oracle.length;
    rep.oracle_exact = oracle.exact;
    double total = 0;
    for (double r : run.trip_lengths) {
        total += r;
        rep.per_trip_ratios.push_back(r / oracle.length);
    }
    rep.cumulative_ratio =
        total / (static_cast<double>(run.trip_lengths.size()) * oracle.length);
    rep.group_count = static_cast<int>(run.search.groups.size());
    int fences = 0;
    for (const GroupResult& g : run.search.groups) {
        rep.group_delta_x.push_back(g.delta_x());
        for (const auto& row : g.tree.posts) {
            if (static_cast<int>(row.size()) == g.params.M) ++fences;
        }
    }
    rep.fence_count = fences;
    rep.bounds = check_bounds(run.search.groups, run.search.epochs, scene.n(), k);
    rep.epoch_overruns = run.epoch_overruns;
    rep.known_path_lengths = run.known_path_lengths;
    const double nk = static_cast<double>(scene.n()) * k;
    if (!run.trip_lengths.empty() && oracle.length > 0) {
        rep.measured_search_constant =
            run.trip_lengths.front() / (oracle.length * std::sqrt(nk));
        rep.measured_path_constant =
            polyline_length(run.composed) /
            (oracle.length * std::sqrt(static_cast<double>(scene.n()) / k));
    }
    return rep;
}

std::string report_to_json(const RunReport& rep) {
    nlohmann::json j;
    j["scene_id"] = rep.scene_id;
    j["n"] = rep.n;
    j["k"] = rep.k;
    j["trip_lengths"] = rep.trip_lengths;
    j["oracle_length"] = rep.oracle_length;
    j["oracle_exact"] = rep.oracle_exact;
    j["cumulative_ratio"] = rep.cumulative_ratio;
    j["per_trip_ratios"] = rep.per_trip_ratios;
    j["groups"] = rep.group_count;
    j["fences"] = rep.fence_count;
    j["group_delta_x"] = rep.group_delta_x;
    j["epoch_overruns"] = rep.epoch_overruns;
    j["known_path_lengths"] = rep.known_path_lengths;
    j["measured_search_constant"] = rep.measured_search_constant;
    j["measured_path_constant"] = rep.measured_path_constant;
    nlohmann::json checks = nlohmann::json::array();
    for (const BoundCheck& c : rep.bounds.checks) {
        checks.push_back({{"name", c.name},
                          {"ok", c.ok},
                          {"measured", c.measured},
                          {"bound", c.bound}});
    }
    j["bound_checks"] = checks;
    return j.dump(2) + "\n";
}

std::string report_csv_header() {
    return "scene_id,n,k,trip,length,L,ratio,cum_ratio,groups,fences\n";
}

namespace {

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

void append_report_csv(std::string& csv, const RunReport& rep) {
    double cum = 0;
    for (std::size_t t = 0; t < rep.trip_lengths.size(); ++t) {
        cum += rep.trip_lengths[t];
        const double cum_ratio =
            cum / (static_cast<double>(t + 1) * rep.oracle_length);
        csv += rep.scene_id + "," + std::to_string(rep.n) + "," +
               std::to_string(rep.k) + "," + std::to_string(t + 1) + "," +
               csv_num(rep.trip_lengths[t]) + "," + csv_num(rep.oracle_length) +
               "," + csv_num(rep.per_trip_ratios[t]) + "," + csv_num(cum_ratio) +
               "," + std::to_string(rep.group_count) + "," +
               std::to_string(rep.fence_count) + "\n";
    }
}

BenchGrid parse_grid_file(const std::string& text) {
    BenchGrid grid;
    std::istringstream iss(text);
    std::string line;
    while (std::getline(iss, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "n") {
            std::int64_t v;
            while (ls >> v) grid.n_values.push_back(v);
        } else if (key == "k") {
            int v;
            while (ls >> v) grid.k_values.push_back(v);
        } else if (key == "seeds") {
            ls >> grid.seeds;
        } else if (key == "density") {
            ls >> grid.density;
        } else if (key == "y_extent_factor") {
            ls >> grid.y_extent_factor;
        } else if (key == "mode") {
            ls >> grid.mode;
        } else {
            throw std::runtime_error("grid file: unknown key '" + key + "'");
        }
    }
    if (grid.n_values.empty() || grid.k_values.empty()) {
        throw std::runtime_error("grid file: need n and k lines");
    }
    return grid;
}

std::optional<double> loglog_slope(
    const std::vector<std::pair<double, double>>& nk_ratio) {
    if (nk_ratio.size() < 2) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int c = 0;
    for (const auto& [x, y] : nk_ratio) {
        if (x <= 0 || y <= 0) continue;
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++c;
    }
    if (c < 2) return std::nullopt;
    const double denom = c * sxx - sx * sx;
    if (std::fabs(denom) < 1e-12) return std::nullopt;
    return (c * sxy - sx * sy) / denom;
}

BenchOutput bench(const BenchGrid& grid, int threads) {
    struct Cell {
        std::int64_t n;
        int k;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::int64_t n : grid.n_values) {
        for (int k : grid.k_values) {
            if (static_cast<std::int64_t>(k) > n) continue;
            for (int s = 0; s < grid.seeds; ++s) {
                cells.push_back({n, k, static_cast<std::uint64_t>(s + 1)});
            }
        }
    }
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int nthreads =
        threads > 0 ? threads : std::clamp(hw, 1, 8);

    std::vector<RunReport> reports(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) return;
            const Cell& c = cells[idx];
            Scene scene = gen_random(c.n, grid.density,
                                     grid.y_extent_factor * static_cast<double>(c.n),
                                     c.seed);
            RunResult run = grid.mode == "incremental"
                                ? run_incremental(scene, c.k)
                                : run_cumulative(scene, c.k);
            OraclePath oracle = shortest_wall_path(scene);
            reports[idx] = make_report(scene, run, oracle, c.k);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    BenchOutput out;
    out.csv = report_csv_header();
    std::vector<std::pair<double, double>> pts;
    for (const RunReport& r : reports) {
        append_report_csv(out.csv, r);
        pts.push_back({static_cast<double>(r.n) / r.k, r.cumulative_ratio});
    }
    out.reports = std::move(reports);
    if (auto s = loglog_slope(pts)) {
        out.regression_slope = *s;
        out.regression_points = static_cast<int>(pts.size());
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "cells=%zu slope(log ratio vs log n/k)=%.4f points=%d\n",
                  cells.size(), out.regression_slope, out.regression_points);
    out.summary = buf;
    return out;
}

// ---------------------------------------------------------------------------
// SVG rendering

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#17becf", "#bcbd22"};

std::string svg_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string render_svg(
    const Scene& scene,
    const std::vector<std::pair<std::string, Polyline>>& trajectories,
    const std::vector<Fence>& fences, const OraclePath* oracle_path) {
    if (scene.is_lazy()) {
        throw std::invalid_argument("render_svg: explicit scene required");
    }
    double x0 = 0, x1 = static_cast<double>(scene.n()), y0 = -1, y1 = 1;
    auto grow = [&](const Point& p) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    };
    for (const Obstacle& o : scene.obstacles()) {
        grow({o.x_min, o.y_min});
        grow({o.x_max, o.y_max});
    }
    for (const auto& [name, poly] : trajectories) {
        for (const Point& p : poly) grow(p);
    }
    if (oracle_path) {
        for (const Point& p : oracle_path->vertices) grow(p);
    }
    const double margin = std::max(1.0, (x1 - x0) * 0.02);
    x0 -= margin;
    x1 += margin;
    y0 -= margin;
    y1 += margin;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + svg_num(x0) +
           " " + svg_num(-y1) + " " + svg_num(x1 - x0) + " " + svg_num(y1 - y0) +
           "\">\n";
    // Flip y so +y points up in the drawing.
    svg += "<g transform=\"scale(1,-1)\">\n";
    svg += "<line x1=\"" + svg_num(static_cast<double>(scene.n())) + "\" y1=\"" +
           svg_num(y0) + "\" x2=\"" + svg_num(static_cast<double>(scene.n())) +
           "\" y2=\"" + svg_num(y1) + "\" stroke=\"#444\" stroke-width=\"" +
           svg_num((x1 - x0) / 400) + "\"/>\n";
    for (std::size_t fi = 0; fi < fences.size(); ++fi) {
        const char* color = kPalette[fi % 8];
        for (const Band& b : bands_of(fences[fi])) {
            if (b.empty) continue;
            svg += "<rect x=\"" + svg_num(b.rect.x_min) + "\" y=\"" +
                   svg_num(b.rect.y_min) + "\" width=\"" +
                   svg_num(b.rect.width()) + "\" height=\"" +
                   svg_num(b.rect.height()) + "\" fill=\"" + color +
                   "\" fill-opacity=\"0.25\" stroke=\"none\"/>\n";
        }
    }
    for (const Obstacle& o : scene.obstacles()) {
        svg += "<rect x=\"" + svg_num(o.x_min) + "\" y=\"" + svg_num(o.y_min) +
               "\" width=\"" + svg_num(o.x_max - o.x_min) + "\" height=\"" +
               svg_num(o.y_max - o.y_min) + "\" fill=\"#555\"/>\n";
    }
    auto polyline_svg = [&](const Polyline& poly, const std::string& style) {
        if (poly.size() < 2) return;
        std::string pts;
        for (const Point& p : poly) {
            pts += svg_num(p.x) + "," + svg_num(p.y) + " ";
        }
        pts.pop_back();
        svg += "<polyline points=\"" + pts + "\" fill=\"none\" " + style + "/>\n";
    };
    const double w = (x1 - x0) / 600;
    for (std::size_t ti = 0; ti < trajectories.size(); ++ti) {
        const char* color = kPalette[(ti + 3) % 8];
        polyline_svg(trajectories[ti].second,
                     "stroke=\"" + std::string(color) + "\" stroke-width=\"" +
                         svg_num(w) + "\"");
    }
    if (oracle_path) {
        polyline_svg(oracle_path->vertices,
                     "stroke=\"#000\" stroke-width=\"" + svg_num(w) +
                         "\" stroke-dasharray=\"" + svg_num(4 * w) + " " +
                         svg_num(2 * w) + "\"");
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

}  // namespace fencenav
