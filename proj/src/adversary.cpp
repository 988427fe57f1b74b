#include "fencenav/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fencenav/oracle.hpp"

namespace fencenav {

namespace {

bool trajectories_equal(const std::vector<TrajSegment>& a,
                        const std::vector<TrajSegment>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].trip != b[i].trip || a[i].tag != b[i].tag ||
            a[i].a != b[i].a || a[i].b != b[i].b) {
            return false;
        }
    }
    return true;
}

}  // namespace

namespace {

// Bricks whose boundary the trajectory touches. Squeezing between two
// touching bricks contacts both, so boundary travel counts alongside the
// ray-stop contacts already in the knowledge ledger.
void collect_boundary_touches(const BrickPattern& bp,
                              const std::vector<TrajSegment>& traj,
                              std::set<std::int64_t>& touched) {
    const double h = bp.params().h;
    auto add_if_boundary = [&](std::int64_t c, double y_lo, double y_hi) {
        const std::int64_t j0 =
            static_cast<std::int64_t>(std::floor(y_lo / h)) - 2;
        const std::int64_t j1 =
            static_cast<std::int64_t>(std::ceil(y_hi / h)) + 2;
        for (std::int64_t j = j0; j <= j1; ++j) {
            const Obstacle o = bp.brick(c, j);
            if (o.y_max >= y_lo - kEps && o.y_min <= y_hi + kEps) {
                touched.insert(o.id);
            }
        }
    };
    for (const TrajSegment& seg : traj) {
        if (near(seg.a.x, seg.b.x, 0.0)) {
            const double x = seg.a.x;
            const double y_lo = std::min(seg.a.y, seg.b.y);
            const double y_hi = std::max(seg.a.y, seg.b.y);
            if (near(x, std::round(x))) {
                const std::int64_t c = static_cast<std::int64_t>(std::llround(x));
                add_if_boundary(c - 1, y_lo, y_hi);
                add_if_boundary(c, y_lo, y_hi);
            }
        } else {
            const double y = seg.a.y;
            const double x_lo = std::min(seg.a.x, seg.b.x);
            const double x_hi = std::max(seg.a.x, seg.b.x);
            const std::int64_t c0 =
                static_cast<std::int64_t>(std::floor(x_lo - kEps));
            const std::int64_t c1 =
                static_cast<std::int64_t>(std::ceil(x_hi + kEps));
            for (std::int64_t c = c0; c < c1; ++c) {
                // Bricks of column c met along y: the one whose top or
                // bottom edge carries the slide, or whose interior abuts it.
                const std::int64_t j0 =
                    static_cast<std::int64_t>(std::floor(y / h)) - 2;
                for (std::int64_t j = j0; j <= j0 + 4; ++j) {
                    const Obstacle o = bp.brick(c, j);
                    if (o.x_max < x_lo - kEps || o.x_min > x_hi + kEps) continue;
                    if (near(y, o.y_min) || near(y, o.y_max)) {
                        touched.insert(o.id);
                    }
                }
            }
        }
    }
}

}  // namespace

AdversaryResult build_adversary(std::int64_t n, int k, double h,
                                const Strategy& strategy) {
    if (h < std::sqrt(static_cast<double>(n)) - kEps) {
        throw std::invalid_argument("build_adversary: h must be >= sqrt(n)");
    }
    AdversaryResult out;
    const Scene full = gen_bricks(n, h);
    out.full_run = strategy(full);

    std::set<std::int64_t> touched = out.full_run.touched;
    collect_boundary_touches(*full.bricks(), out.full_run.trajectory, touched);
    touched.insert(BrickPattern::encode(0, 0));  // brick holding the start

    std::vector<Obstacle> bricks;
    const BrickPattern pattern(BrickParams{n, h});
    for (std::int64_t id : touched) {
        std::int64_t c, j;
        BrickPattern::decode(id, c, j);
        bricks.push_back(pattern.brick(c, j));
    }
    std::sort(bricks.begin(), bricks.end(), [](const Obstacle& a, const Obstacle& b) {
        return a.x_min < b.x_min || (a.x_min == b.x_min && a.y_min < b.y_min);
    });
    out.reduced = Scene::explicit_scene(n, std::move(bricks));
    out.reduced.set_generator_tag("adversary-n" + std::to_string(n) + "-k" +
                                  std::to_string(k) + "-h" +
                                  format_double(h));
    out.touched_count = static_cast<std::int64_t>(touched.size());

    out.reduced_run = strategy(out.reduced);
    out.replay_identical =
        trajectories_equal(out.full_run.trajectory, out.reduced_run.trajectory);
    return out;
}

bool LowerBoundReport::all_ok() const {
    for (const TheoremCheck& c : checks) {
        if (!c.ok) return false;
    }
    return true;
}

LowerBoundReport verify_lower_bound(const AdversaryResult& adv, std::int64_t n,
                                    int k, double h) {
    LowerBoundReport rep;
    double total = 0;
    for (double r : adv.full_run.trip_lengths) total += r;
    rep.total_distance = total;

    const double M = static_cast<double>(adv.touched_count);
    rep.checks.push_back(
        {"touched obstacles at least n", M >= static_cast<double>(n), M,
         static_cast<double>(n)});
    rep.checks.push_back({"k-trip distance at least n*k*h/2",
                          total >= static_cast<double>(n) * k * h / 2.0, total,
                          static_cast<double>(n) * k * h / 2.0});

    const OraclePath upper = wall_path_upper_bricks(adv.reduced, h);
    rep.reduced_path_upper = upper.length;
    const double short_path_bound = 3.0 * std::sqrt(8.0 * h * total);
    rep.checks.push_back({"reduced scene has a short wall path",
                          upper.length <= short_path_bound + 1e-6, upper.length,
                          short_path_bound});

    rep.ratio_lower = total / (static_cast<double>(k) * upper.length);
    const double ratio_bound =
        std::sqrt(static_cast<double>(n) / k) / 12.0;
    rep.checks.push_back({"ratio at least sqrt(n/k)/12",
                          rep.ratio_lower >= ratio_bound - 1e-9, rep.ratio_lower,
                          ratio_bound});

    rep.checks.push_back({"full and reduced trajectories identical",
                          adv.replay_identical,
                          adv.replay_identical ? 1.0 : 0.0, 1.0});

    // Every unit column [c, c+1] in front of the wall holds a touched brick.
    std::vector<bool> covered(static_cast<std::size_t>(n), false);
    for (const Obstacle& o : adv.reduced.obstacles()) {
        const std::int64_t c = static_cast<std::int64_t>(std::llround(o.x_min));
        if (c >= 0 && c < n) covered[static_cast<std::size_t>(c)] = true;
    }
    bool all_covered = true;
    for (bool b : covered) all_covered = all_covered && b;
    rep.checks.push_back({"every unit column before the wall touched",
                          all_covered, all_covered ? 1.0 : 0.0, 1.0});

    // Some row y = j*h with 0 <= j <= sqrt(M) holds at most sqrt(M) brick
    // centers.
    std::map<std::int64_t, std::int64_t> row_counts;
    for (const Obstacle& o : adv.reduced.obstacles()) {
        const double cy = (o.y_min + o.y_max) / 2.0;
        const double jr = cy / h;
        if (near(jr, std::round(jr), 1e-6)) {
            row_counts[static_cast<std::int64_t>(std::llround(jr))] += 1;
        }
    }
    const double sqrtM = std::sqrt(M);
    double min_count = std::numeric_limits<double>::infinity();
    for (std::int64_t j = 0; j <= static_cast<std::int64_t>(std::floor(sqrtM)); ++j) {
        auto it = row_counts.find(j);
        const double c = it == row_counts.end() ? 0.0 : static_cast<double>(it->second);
        min_count = std::min(min_count, c);
    }
    rep.checks.push_back({"a sparse brick row exists within sqrt(M) rows",
                          min_count <= sqrtM + 1e-9, min_count, sqrtM});
    return rep;
}

}  // namespace fencenav
