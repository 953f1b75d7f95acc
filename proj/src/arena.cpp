#include "swarmft/arena.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace swarmft {

std::string_view to_string(Environment env) {
    return env == Environment::Open ? "open" : "constrained";
}

Environment parse_environment(std::string_view text) {
    if (text == "open") return Environment::Open;
    if (text == "constrained") return Environment::Constrained;
    throw std::invalid_argument("environment: expected open|constrained, got '" + std::string(text) + "'");
}

ArenaSpec build_arena(Environment variant) {
    ArenaSpec arena;
    arena.environment = variant;
    arena.nests = {{{2.0, 8.0}, 1.0}, {{5.0, 8.0}, 1.0}, {{8.0, 8.0}, 1.0}};
    if (variant == Environment::Constrained) {
        // Solid blocks between y = 3 and y = 8 leave three 2 m corridors
        // centred on x = 2, 5, 8, each opposite a nest.
        constexpr double y0 = 3.0;
        constexpr double y1 = 8.0;
        arena.internal_walls = {
            {{0.0, y0}, {1.0, y1}},
            {{3.0, y0}, {4.0, y1}},
            {{6.0, y0}, {7.0, y1}},
            {{9.0, y0}, {10.0, y1}},
        };
    }
    return arena;
}

ObstacleSet::ObstacleSet() : cells_(kGrid * kGrid) {}

std::pair<int, int> ObstacleSet::cell_of(Vec2 p) const {
    const int cx = std::clamp(static_cast<int>(std::floor(p.x)), 0, kGrid - 1);
    const int cy = std::clamp(static_cast<int>(std::floor(p.y)), 0, kGrid - 1);
    return {cx, cy};
}

void ObstacleSet::add(Disc disc) {
    const auto [cx, cy] = cell_of(disc.center);
    cells_[static_cast<std::size_t>(cy * kGrid + cx)].push_back(discs_.size());
    discs_.push_back(disc);
    max_radius_ = std::max(max_radius_, disc.radius);
}

namespace {

bool segment_hits_rect(Vec2 a, Vec2 b, const Rect& r) {
    // Liang-Barsky clip of the parametric segment against the rectangle.
    double t0 = 0.0;
    double t1 = 1.0;
    const double d[2] = {b.x - a.x, b.y - a.y};
    const double p0[2] = {a.x, a.y};
    const double lo[2] = {r.min.x, r.min.y};
    const double hi[2] = {r.max.x, r.max.y};
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) {
            if (p0[axis] < lo[axis] || p0[axis] > hi[axis]) return false;
            continue;
        }
        double ta = (lo[axis] - p0[axis]) / d[axis];
        double tb = (hi[axis] - p0[axis]) / d[axis];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

}  // namespace

bool line_of_sight(Vec2 a, Vec2 b, const ArenaSpec& arena, const ObstacleSet& obstacles) {
    // Canonical endpoint order keeps the predicate exactly symmetric in floating point.
    if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
    for (const auto& wall : arena.internal_walls) {
        if (segment_hits_rect(a, b, wall)) return false;
    }
    bool clear = true;
    const Vec2 lo{std::min(a.x, b.x), std::min(a.y, b.y)};
    const Vec2 hi{std::max(a.x, b.x), std::max(a.y, b.y)};
    obstacles.for_each_near(lo, hi, [&](const Disc& disc) {
        if (clear && distance_to_segment(disc.center, a, b) < disc.radius) clear = false;
    });
    return clear;
}

std::optional<double> ray_disc_hit(Vec2 origin, Vec2 dir, const Disc& disc) {
    const Vec2 oc = origin - disc.center;
    const double b = dot(oc, dir);
    const double c = oc.squared_norm() - disc.radius * disc.radius;
    if (c <= 0.0) return 0.0;  // origin inside the disc
    const double disc2 = b * b - c;
    if (disc2 < 0.0) return std::nullopt;
    const double t = -b - std::sqrt(disc2);
    if (t < 0.0) return std::nullopt;
    return t;
}

std::optional<double> ray_rect_hit(Vec2 origin, Vec2 dir, const Rect& rect) {
    double t0 = 0.0;
    double t1 = std::numeric_limits<double>::infinity();
    const double o[2] = {origin.x, origin.y};
    const double d[2] = {dir.x, dir.y};
    const double lo[2] = {rect.min.x, rect.min.y};
    const double hi[2] = {rect.max.x, rect.max.y};
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) {
            if (o[axis] < lo[axis] || o[axis] > hi[axis]) return std::nullopt;
            continue;
        }
        double ta = (lo[axis] - o[axis]) / d[axis];
        double tb = (hi[axis] - o[axis]) / d[axis];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return std::nullopt;
    }
    return t0;
}

double raycast_distance(Vec2 origin, double heading, const ArenaSpec& arena,
                        const ObstacleSet& obstacles, double max_range,
                        std::span<const Disc> extra_discs) {
    const Vec2 dir = unit_vector(heading);
    double best = max_range;

    // Exit distance through the solid boundary.
    const auto& bb = arena.bounds;
    if (dir.x > 0.0) best = std::min(best, (bb.max.x - origin.x) / dir.x);
    if (dir.x < 0.0) best = std::min(best, (bb.min.x - origin.x) / dir.x);
    if (dir.y > 0.0) best = std::min(best, (bb.max.y - origin.y) / dir.y);
    if (dir.y < 0.0) best = std::min(best, (bb.min.y - origin.y) / dir.y);

    for (const auto& wall : arena.internal_walls) {
        if (auto t = ray_rect_hit(origin, dir, wall); t && *t < best) best = *t;
    }
    const Vec2 end = origin + dir * best;
    obstacles.for_each_near({std::min(origin.x, end.x), std::min(origin.y, end.y)},
                            {std::max(origin.x, end.x), std::max(origin.y, end.y)},
                            [&](const Disc& disc) {
                                if (auto t = ray_disc_hit(origin, dir, disc); t && *t < best) best = *t;
                            });
    for (const auto& disc : extra_discs) {
        if (auto t = ray_disc_hit(origin, dir, disc); t && *t < best) best = *t;
    }
    return std::max(0.0, best);
}

}  // namespace swarmft
