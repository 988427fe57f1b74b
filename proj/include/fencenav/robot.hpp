#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "fencenav/geometry.hpp"
#include "fencenav/scene.hpp"

namespace fencenav {

enum class TrajTag {
    edge_up,
    edge_down,
    transition,
    godown,
    gobackdown,
    backtrack,
    follow,
    search,
};

const char* traj_tag_name(TrajTag t);

struct TrajSegment {
    int trip{1};
    TrajTag tag{TrajTag::search};
    Point a{};
    Point b{};
};

// Continuous stop conditions evaluated along every primitive move. All robot
// motion is axis-parallel, so the earliest-event computation is exact.
struct PostSegment {
    double x{0};
    double y_lo{0};
    double y_hi{0};
    Point center{};
};

struct StopSpec {
    std::optional<double> y_leq;                 // stop once y <= value
    std::optional<double> x_leq;                 // stop once x <= value
    bool wall = false;                           // stop at x = n
    const std::vector<PostSegment>* posts = nullptr;
    const Polyline* path = nullptr;              // stop on touching this polyline
    const std::vector<Rect>* rects = nullptr;    // stop on entering any rect

    struct Event {
        enum class Kind { none, y_level, x_level, wall, post, path, rect };
        Kind kind{Kind::none};
        double t{0};
        Point point{};
        int index{-1};  // post index / rect index / path segment index
    };

    // Earliest stop on the axis-parallel segment [a,b]; Kind::none if clear.
    Event first_stop(const Point& a, const Point& b, double wall_x) const;
};

// Tactile robot: position, odometer, tagged trajectory, contact ledger.
class RobotState {
  public:
    explicit RobotState(const Scene& scene, Point start = {0, 0})
        : scene_(&scene), pos_(start) {}

    const Scene& scene() const { return *scene_; }
    const Point& position() const { return pos_; }
    double odometer() const { return odometer_; }
    double trip_odometer() const { return trip_odometer_; }
    int trip() const { return trip_; }
    const std::vector<TrajSegment>& trajectory() const { return traj_; }
    const std::vector<Hit>& hits() const { return hits_; }
    const std::set<std::int64_t>& touched() const { return touched_; }
    long long moves() const { return moves_; }

    void begin_trip();

    struct MoveResult {
        bool blocked{false};
        Hit hit{};
    };

    // Move toward target (axis-parallel) until the target or the first
    // interior contact; boundaries are passable.
    MoveResult straight_move(const Point& target, TrajTag tag);

    // Record a contact without moving (used when a move is blocked at
    // distance zero by a wall-adjacent obstacle).
    void note_hit(const Hit& h);

    std::size_t mark() const { return traj_.size(); }
    Polyline collect(std::size_t from_mark) const;

    void teleport_check(const Point& expected) const;

  private:
    void record(const Point& to, TrajTag tag);

    const Scene* scene_;
    Point pos_;
    double odometer_{0};
    double trip_odometer_{0};
    int trip_{1};
    std::vector<TrajSegment> traj_;
    std::vector<Hit> hits_;
    std::set<std::int64_t> touched_;
    long long moves_{0};
    long long trip_moves_{0};
    static constexpr long long kMoveBudget = 100'000'000;
};

struct GreedyResult {
    enum class Cause { stop, wall };
    Cause cause{Cause::stop};
    StopSpec::Event event{};
    double length{0};
};

// Alternates `primary` motion with `secondary` hops to the blocking
// obstacle's corner; the stop spec is evaluated continuously. The resulting
// path is monotone. `primary`/`secondary` must be orthogonal.
GreedyResult greedy_path(RobotState& rs, Dir primary, Dir secondary,
                         const StopSpec& stop, TrajTag tag);

struct TauPathStat {
    double dx{0};
    double length{0};
    double tau{0};
};

struct TauPathResult {
    bool wall{false};
    Point post_center{};
    std::int64_t obstacle_id{-1};
    TauPathStat stat{};
};

// Rightward motion along the current y: detours around corners nearer than
// tau, stops on a contact whose nearest corner is at least tau away (the
// contact point is then the center of a valid post) or at the wall.
TauPathResult tau_path(RobotState& rs, double tau, TrajTag tag);

// Replay a previously walked (hence collision-free) polyline.
void follow_path(RobotState& rs, const Polyline& path, bool reverse, TrajTag tag);

// Walk a polyline with a continuous stop spec; returns the stop event (or
// none when the whole polyline was walked).
StopSpec::Event follow_path_until(RobotState& rs, const Polyline& path,
                                  bool reverse, const StopSpec& stop,
                                  TrajTag tag);

}  // namespace fencenav
