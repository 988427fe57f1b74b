#include <cmath>

#include "doctest.h"
#include "fencenav/robot.hpp"

using namespace fencenav;

namespace {

Scene column_scene() {
    return Scene::explicit_scene(100, {Obstacle{0, 50, -10, 51, 10}});
}

double traj_length(const RobotState& rs) {
    double len = 0;
    for (const TrajSegment& s : rs.trajectory()) len += dist(s.a, s.b);
    return len;
}

}  // namespace

TEST_CASE("straight_move runs to the target in an empty scene") {
    Scene s = Scene::explicit_scene(100, {});
    RobotState rs(s);
    const auto mv = rs.straight_move({10, 0}, TrajTag::search);
    CHECK_FALSE(mv.blocked);
    CHECK(rs.position() == Point{10, 0});
    CHECK(rs.odometer() == doctest::Approx(10));
}

TEST_CASE("straight_move stops at the first interior contact") {
    Scene s = column_scene();
    RobotState rs(s);
    const auto mv = rs.straight_move({60, 0}, TrajTag::search);
    CHECK(mv.blocked);
    CHECK(mv.hit.point == Point{50, 0});
    CHECK(rs.odometer() == doctest::Approx(50));
    CHECK(rs.touched().count(0) == 1);
}

TEST_CASE("motion along a shared brick boundary is free") {
    Scene s = gen_bricks(16, 4);
    RobotState rs(s, {0, 2});
    const auto mv = rs.straight_move({1, 2}, TrajTag::search);
    CHECK_FALSE(mv.blocked);
    CHECK(rs.position() == Point{1, 2});
}

TEST_CASE("odometer equals the summed trajectory length") {
    Scene s = column_scene();
    RobotState rs(s);
    rs.straight_move({60, 0}, TrajTag::search);
    rs.straight_move({50, -10}, TrajTag::search);
    rs.straight_move({70, -10}, TrajTag::search);
    CHECK(rs.odometer() == doctest::Approx(traj_length(rs)).epsilon(1e-12));
    CHECK(rs.position() == rs.trajectory().back().b);
}

TEST_CASE("greedy right-down reaches the wall in an empty scene") {
    Scene s = Scene::explicit_scene(100, {});
    RobotState rs(s);
    StopSpec stop;
    stop.wall = true;
    const auto r = greedy_path(rs, Dir::pos_x, Dir::neg_y, stop, TrajTag::transition);
    CHECK(r.event.kind == StopSpec::Event::Kind::wall);
    CHECK(rs.odometer() == doctest::Approx(100));
}

TEST_CASE("greedy right-down drops to the lower corner and continues") {
    Scene s = column_scene();
    RobotState rs(s);
    StopSpec stop;
    stop.wall = true;
    greedy_path(rs, Dir::pos_x, Dir::neg_y, stop, TrajTag::transition);
    CHECK(rs.position() == Point{100, -10});
    CHECK(rs.odometer() == doctest::Approx(110));  // 50 + 10 + 50
}

TEST_CASE("greedy down-left is monotone and stops at the y level") {
    Scene s = Scene::explicit_scene(
        100, {Obstacle{0, 10, -20, 14, -15}, Obstacle{1, 4, -40, 9, -30}});
    RobotState rs(s, {13, 0});
    StopSpec stop;
    stop.y_leq = -35;
    const auto r = greedy_path(rs, Dir::neg_y, Dir::neg_x, stop, TrajTag::godown);
    CHECK(r.event.kind == StopSpec::Event::Kind::y_level);
    CHECK(rs.position().y == doctest::Approx(-35));
    const Point p = rs.position();
    CHECK(rs.odometer() ==
          doctest::Approx(std::fabs(13 - p.x) + std::fabs(0 - p.y)));
}

TEST_CASE("tau-path stops at a wide edge and forms a post") {
    Scene s = column_scene();
    RobotState rs(s);
    const auto r = tau_path(rs, 5, TrajTag::search);
    CHECK_FALSE(r.wall);
    CHECK(r.post_center == Point{50, 0});
    CHECK(r.obstacle_id == 0);
}

TEST_CASE("tau-path detours around a near corner and resumes its line") {
    Scene s = Scene::explicit_scene(100, {Obstacle{0, 10, 0.2, 11, 3}});
    RobotState rs(s, {0, 1});
    const auto r = tau_path(rs, 5, TrajTag::search);
    CHECK(r.wall);
    // Detour: down to (10,0.2), across to (11,0.2), back up to (11,1).
    bool resumed = false;
    for (const TrajSegment& seg : rs.trajectory()) {
        if (seg.a == Point{11, 0.2} && seg.b == Point{11, 1}) resumed = true;
    }
    CHECK(resumed);
    CHECK(rs.position() == Point{100, 1});
    CHECK(r.stat.length <= r.stat.dx * (1 + 2 * 5) + 1e-9);
}

TEST_CASE("tau-path reaches the wall in an empty scene") {
    Scene s = Scene::explicit_scene(100, {});
    RobotState rs(s, {0, -30});
    const auto r = tau_path(rs, 5, TrajTag::search);
    CHECK(r.wall);
    CHECK(r.stat.length == doctest::Approx(100));
}

TEST_CASE("follow then reverse-follow returns to the start") {
    Scene s = column_scene();
    Polyline path{{0, 0}, {50, 0}, {50, -10}, {100, -10}};
    RobotState rs(s);
    follow_path(rs, path, false, TrajTag::follow);
    CHECK(rs.position() == Point{100, -10});
    follow_path(rs, path, true, TrajTag::follow);
    CHECK(rs.position() == Point{0, 0});
    CHECK(rs.odometer() == doctest::Approx(2 * polyline_length(path)));
}

TEST_CASE("follow_path faults when the path clips an interior") {
    Scene s = column_scene();
    Polyline bad{{0, 0}, {100, 0}};
    RobotState rs(s);
    CHECK_THROWS_AS(follow_path(rs, bad, false, TrajTag::follow),
                    std::logic_error);
}

TEST_CASE("identical scenes and moves give identical trajectories") {
    auto drive = [](RobotState& rs) {
        StopSpec stop;
        stop.wall = true;
        greedy_path(rs, Dir::pos_x, Dir::neg_y, stop, TrajTag::transition);
    };
    Scene s1 = gen_random(64, 0.25, 64, 5);
    Scene s2 = gen_random(64, 0.25, 64, 5);
    RobotState a(s1), b(s2);
    drive(a);
    drive(b);
    REQUIRE(a.trajectory().size() == b.trajectory().size());
    for (std::size_t i = 0; i < a.trajectory().size(); ++i) {
        CHECK(a.trajectory()[i].a == b.trajectory()[i].a);
        CHECK(a.trajectory()[i].b == b.trajectory()[i].b);
    }
}

TEST_CASE("tactile honesty: every known obstacle was contacted by the walk") {
    Scene s = gen_random(64, 0.25, 64, 6);
    RobotState rs(s);
    StopSpec stop;
    stop.wall = true;
    greedy_path(rs, Dir::pos_x, Dir::neg_y, stop, TrajTag::transition);
    for (const Hit& h : rs.hits()) {
        bool touched = false;
        for (const TrajSegment& seg : rs.trajectory()) {
            if (on_axis_segment(seg.a, seg.b, h.point)) {
                touched = true;
                break;
            }
        }
        CHECK(touched);
    }
    CHECK(!rs.hits().empty());
}
