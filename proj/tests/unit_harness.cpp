#include <algorithm>
#include "doctest.h"
#include "fencenav/harness.hpp"

using namespace fencenav;

namespace {

RunReport report_for(const Scene& s, int k) {
    const auto run = run_cumulative(s, k);
    const auto oracle = shortest_wall_path(s);
    return make_report(s, run, oracle, k);
}

}  // namespace

TEST_CASE("single-column run passes every cost envelope with zero x spread") {
    Scene s = Scene::explicit_scene(100, {Obstacle{0, 50, -105, 51, 105}});
    const auto run = run_cumulative(s, 2, 100.0);
    const auto rep = check_bounds(run.search.groups, run.search.epochs, 100, 2);
    CHECK(rep.violations() == 0);
    CHECK(!rep.checks.empty());
    REQUIRE(!run.search.groups.empty());
    CHECK(run.search.groups[0].delta_x() == 0);
}

TEST_CASE("a corrupted ledger is flagged") {
    Scene s = Scene::explicit_scene(100, {Obstacle{0, 50, -105, 51, 105}});
    auto run = run_cumulative(s, 2, 100.0);
    REQUIRE(!run.search.groups.empty());
    run.search.groups[0].edges_len = 1e9;
    const auto rep = check_bounds(run.search.groups, run.search.epochs, 100, 2);
    CHECK(rep.violations() >= 1);
}

TEST_CASE("reports carry the ratio identities") {
    Scene s = Scene::explicit_scene(100, {});
    const auto rep = report_for(s, 5);
    CHECK(rep.cumulative_ratio == doctest::Approx(1.0));
    REQUIRE(rep.per_trip_ratios.size() == 5);
    double total = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(rep.per_trip_ratios[i] ==
              doctest::Approx(rep.trip_lengths[i] / rep.oracle_length));
        total += rep.trip_lengths[i];
    }
    CHECK(rep.cumulative_ratio ==
          doctest::Approx(total / (5 * rep.oracle_length)));
}

TEST_CASE("csv rows follow the fixed schema and are deterministic") {
    Scene s = gen_random(64, 0.2, 128, 3);
    const auto rep = report_for(s, 2);
    std::string a = report_csv_header(), b = report_csv_header();
    append_report_csv(a, rep);
    append_report_csv(b, rep);
    CHECK(a == b);
    CHECK(a.rfind("scene_id,n,k,trip,length,L,ratio,cum_ratio,groups,fences\n",
                  0) == 0);
    // One row per trip.
    CHECK(std::count(a.begin(), a.end(), '\n') == 3);
}

TEST_CASE("grid files parse and the regression slope is well defined") {
    const auto grid = parse_grid_file(
        "# sweep\nn 32 64\nk 1 2\nseeds 1\ndensity 0.15\nmode cumulative\n");
    CHECK(grid.n_values.size() == 2);
    CHECK(grid.k_values.size() == 2);
    CHECK(grid.density == doctest::Approx(0.15));

    std::vector<std::pair<double, double>> pts{{2, 2}, {4, 4}, {8, 8}};
    const auto slope = loglog_slope(pts);
    REQUIRE(slope.has_value());
    CHECK(*slope == doctest::Approx(1.0));
}

TEST_CASE("svg output is deterministic and draws every layer") {
    Scene s = Scene::explicit_scene(100, {Obstacle{0, 50, -10, 51, 10}});
    const auto run = run_cumulative(s, 1);
    const auto oracle = shortest_wall_path(s);
    std::vector<std::pair<std::string, Polyline>> trips{{"trip 1", run.composed}};
    std::vector<Fence> fences;
    const std::string a = render_svg(s, trips, fences, &oracle);
    const std::string b = render_svg(s, trips, fences, &oracle);
    CHECK(a == b);
    CHECK(a.find("<svg") != std::string::npos);
    CHECK(a.find("<rect") != std::string::npos);
    CHECK(a.find("<polyline") != std::string::npos);
    CHECK(a.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("empty scene svg contains a single trajectory polyline") {
    Scene s = Scene::explicit_scene(100, {});
    Polyline line{{0, 0}, {100, 0}};
    const std::string svg =
        render_svg(s, {{"trip 1", line}}, {}, nullptr);
    std::size_t count = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++count;
        pos += 1;
    }
    CHECK(count == 1);
}

TEST_CASE("three-fence drawing shades the bands per fence") {
    Scene s = gen_random(64, 0.3, 96, 12);
    std::vector<Fence> fences;
    for (int i = 0; i < 3; ++i) {
        Fence f;
        f.tau = 2;
        f.base_y = -10.0 - 2 * i;
        f.posts = {Post{2.0 + i, 0, 0}, Post{6.0 + i, 1, 0}, Post{9.0 + i, 2, 0},
                   Post{12.0 + i, 3, 0}};
        fences.push_back(f);
    }
    const std::string svg = render_svg(s, {}, fences, nullptr);
    CHECK(svg.find("#1f77b4") != std::string::npos);
    CHECK(svg.find("#ff7f0e") != std::string::npos);
    CHECK(svg.find("#2ca02c") != std::string::npos);
}

TEST_CASE("report json serializes the bound checks") {
    Scene s = Scene::explicit_scene(100, {});
    const auto rep = report_for(s, 2);
    const std::string j = report_to_json(rep);
    CHECK(j.find("\"cumulative_ratio\"") != std::string::npos);
    CHECK(j.find("\"bound_checks\"") != std::string::npos);
}
