#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "swarmft/geometry.hpp"

namespace swarmft {

enum class Environment { Open, Constrained };

std::string_view to_string(Environment env);
Environment parse_environment(std::string_view text);

struct NestSpec {
    Vec2 center;
    double radius = 1.0;

    /// Distance from p to the nest edge; zero inside the nest.
    double edge_distance(Vec2 p) const { return std::max(0.0, distance(p, center) - radius); }
};

/// The robot base: the band y <= top spanning the arena width.
struct BaseRegion {
    double top = 2.0;

    bool contains(Vec2 p) const { return p.y <= top; }
    Vec2 nearest_point(Vec2 p) const { return {p.x, std::min(p.y, top)}; }
    double distance_to(Vec2 p) const { return std::max(0.0, p.y - top); }
};

/// Static geometry of the 10 m x 10 m foraging arena.
struct ArenaSpec {
    Environment environment = Environment::Open;
    Rect bounds{{0.0, 0.0}, {10.0, 10.0}};
    std::vector<Rect> internal_walls;
    std::vector<NestSpec> nests;
    BaseRegion base;

    bool inside(Vec2 p) const { return bounds.contains(p); }
};

ArenaSpec build_arena(Environment variant);

/// Static circular obstacles (inert robots). Bucketed on a 1 m grid so
/// proximity queries stay cheap when hundreds of robots have been shut down.
class ObstacleSet {
public:
    ObstacleSet();

    void add(Disc disc);
    std::span<const Disc> discs() const { return discs_; }
    std::size_t size() const { return discs_.size(); }
    bool empty() const { return discs_.empty(); }

    /// Calls fn(disc) for every disc that may overlap the box [lo, hi].
    template <typename Fn>
    void for_each_near(Vec2 lo, Vec2 hi, Fn&& fn) const {
        if (discs_.empty()) return;
        const auto [cx0, cy0] = cell_of({lo.x - max_radius_, lo.y - max_radius_});
        const auto [cx1, cy1] = cell_of({hi.x + max_radius_, hi.y + max_radius_});
        for (int cy = cy0; cy <= cy1; ++cy) {
            for (int cx = cx0; cx <= cx1; ++cx) {
                for (const auto idx : cells_[static_cast<std::size_t>(cy * kGrid + cx)]) {
                    fn(discs_[idx]);
                }
            }
        }
    }

private:
    static constexpr int kGrid = 10;
    std::pair<int, int> cell_of(Vec2 p) const;

    std::vector<Disc> discs_;
    std::vector<std::vector<std::size_t>> cells_;
    double max_radius_ = 0.0;
};

/// True iff segment a-b crosses no internal wall and no obstacle disc.
bool line_of_sight(Vec2 a, Vec2 b, const ArenaSpec& arena, const ObstacleSet& obstacles);

/// Distance along a ray to the first wall, boundary, or obstacle, capped at max_range.
/// Optional extra discs (e.g. other live robots) are tested as well.
double raycast_distance(Vec2 origin, double heading, const ArenaSpec& arena,
                        const ObstacleSet& obstacles, double max_range,
                        std::span<const Disc> extra_discs = {});

/// Ray-circle hit distance (no hit, or hit behind the origin, gives nullopt).
std::optional<double> ray_disc_hit(Vec2 origin, Vec2 dir, const Disc& disc);

/// Ray-rectangle hit distance via slabs; nullopt if the ray misses.
std::optional<double> ray_rect_hit(Vec2 origin, Vec2 dir, const Rect& rect);

}  // namespace swarmft
