#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fencenav/geometry.hpp"

namespace fencenav {

struct Obstacle {
    std::int64_t id{0};
    double x_min{0}, y_min{0}, x_max{0}, y_max{0};

    Rect rect() const { return {x_min, y_min, x_max, y_max}; }
    friend bool operator==(const Obstacle& a, const Obstacle& b) {
        return a.x_min == b.x_min && a.y_min == b.y_min && a.x_max == b.x_max &&
               a.y_max == b.y_max;
    }
};

// Result of a tactile contact: where, which obstacle, and the corner hint.
struct Hit {
    std::int64_t obstacle_id{0};
    Point point{};
    Point nearest_corner{};
    double corner_distance{0};
};

struct BrickParams {
    std::int64_t n{0};
    double h{0};
};

// Staggered unit-width brick tiling of the whole plane, generated on demand.
// Even columns hold bricks [c,c+1] x [j*h - h/2, j*h + h/2]; odd columns are
// shifted by h/2. Pure arithmetic, no state.
class BrickPattern {
  public:
    explicit BrickPattern(BrickParams p) : p_(p) {}

    const BrickParams& params() const { return p_; }

    // Brick of column c whose open y-range contains y, if any.
    std::optional<Obstacle> brick_containing(std::int64_t c, double y) const;
    Obstacle brick(std::int64_t c, std::int64_t j) const;
    static std::int64_t encode(std::int64_t c, std::int64_t j);
    static void decode(std::int64_t id, std::int64_t& c, std::int64_t& j);

    // One of four classes; bricks in the same class are at least h/2 of
    // travel apart in the full tiling.
    int color(std::int64_t id) const;

    std::vector<Obstacle> materialize(const Rect& region) const;

  private:
    BrickParams p_;
};

class Scene {
  public:
    Scene() = default;
    static Scene explicit_scene(std::int64_t n, std::vector<Obstacle> obstacles);
    static Scene brick_scene(std::int64_t n, double h);

    std::int64_t n() const { return n_; }
    bool is_lazy() const { return bricks_.has_value(); }
    const std::vector<Obstacle>& obstacles() const { return obstacles_; }
    const BrickPattern* bricks() const {
        return bricks_ ? &*bricks_ : nullptr;
    }
    Obstacle obstacle(std::int64_t id) const;

    // Explicit scene over the bricks intersecting `region` (lazy scenes only).
    Scene materialize(const Rect& region) const;

    std::vector<std::string> validate() const;

    struct RayResult {
        enum class Kind { hit, wall, none };
        Kind kind{Kind::none};
        Hit hit{};
        double distance{0};
    };

    // First strict interior entry of the open ray from `origin`; boundaries
    // are passable. For pos_x the wall x = n is reported when reached first.
    RayResult first_hit(const Point& origin, Dir dir, double limit) const;

    // True when the open segment (a,b) avoids every obstacle interior.
    bool segment_free(const Point& a, const Point& b) const;

    bool point_in_interior(const Point& p) const;

    std::string generator_tag() const { return tag_; }
    void set_generator_tag(std::string t) { tag_ = std::move(t); }
    bool generation_warning() const { return gen_warning_; }
    void set_generation_warning(bool w) { gen_warning_ = w; }

    friend bool operator==(const Scene& a, const Scene& b);

  private:
    void build_index();
    RayResult first_hit_explicit(const Point& origin, Dir dir, double limit) const;
    RayResult first_hit_bricks(const Point& origin, Dir dir, double limit) const;

    std::int64_t n_{0};
    std::vector<Obstacle> obstacles_;
    std::optional<BrickPattern> bricks_;
    std::string tag_;
    bool gen_warning_{false};

    // Uniform grid over the obstacle bounding box, with per-row/column lists
    // of occupied cells so axis rays skip empty stretches.
    struct GridIndex {
        double x0{0}, y0{0}, cell{1};
        int nx{0}, ny{0};
        std::vector<std::vector<std::int32_t>> cells;
        std::vector<std::vector<std::int32_t>> row_occupied;  // per cy: cx list
        std::vector<std::vector<std::int32_t>> col_occupied;  // per cx: cy list
        bool empty() const { return nx == 0 || ny == 0; }
    };
    GridIndex grid_;
    template <typename Fn>
    void for_cells_on_segment(const Point& a, const Point& b, Fn&& fn) const;
};

Scene parse_scene(std::string_view text);
std::string emit_scene(const Scene& scene,
                       const std::vector<std::string>& header_comments = {});

Scene gen_random(std::int64_t n, double density, double y_extent,
                 std::uint64_t seed);
Scene gen_bricks(std::int64_t n, double h);

// Static corner hint for a contact point on an obstacle boundary; ties go
// toward -y, then -x.
Point nearest_corner_of(const Obstacle& o, const Point& p);

std::string format_double(double v);

}  // namespace fencenav
