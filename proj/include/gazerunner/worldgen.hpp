#pragma once

#include "gazerunner/attention.hpp"
#include "gazerunner/geometry.hpp"
#include "gazerunner/rng.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

namespace gazerunner {

// Corridor lanes share the screen's Left/Center/Right partition.
using Lane = ScreenRegion;

struct WorldgenConfig {
    double tile_length = 10.0;
    double corridor_half_width = 3.0;
    double center_half_width = 1.0;
    int markers_per_tile = 8;
    double tree_probability = 0.66;
    double tree_offset_radius = 0.5;
    double tree_height_min = 4.0;
    double tree_height_max = 8.0;
    double spawn_probability = 0.33;
    double obstacle_probability = 0.55;
    double runner_probability = 0.20;
    int initial_tiles = 15;
    int spawn_warmup_tiles = 8;

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

/// Lateral coordinate of a lane's center line.
double lane_center_x(Lane lane, const WorldgenConfig& config);

struct Marker {
    Vec3 position;
};

struct TreeDecoration {
    Vec3 position;
    double yaw = 0.0;
    double height = 0.0;
};

enum class SpawnKind : std::uint8_t { Rock, Branch, Walker, Runner };

std::string_view to_string(SpawnKind kind);
inline bool is_obstacle(SpawnKind k) { return k == SpawnKind::Rock || k == SpawnKind::Branch; }
inline bool is_enemy(SpawnKind k) { return !is_obstacle(k); }

struct SpawnDecision {
    SpawnKind kind = SpawnKind::Rock;
    Lane lane = Lane::Center;

    friend bool operator==(const SpawnDecision&, const SpawnDecision&) = default;
};

struct Tile {
    std::int64_t index = 0;
    double z_start = 0.0;
    double z_end = 0.0;
    std::vector<Marker> markers;
    std::vector<TreeDecoration> decorations;
    std::optional<SpawnDecision> spawn;
};

/// Separate generators per consumer, so draws in one never shift another.
struct SpawnStreams {
    Rng spawn;
    Rng enemy_kind;
    Rng tiebreak;
};

struct SpawnContext {
    std::optional<Lane> previous_region;
    RegionHistogram region_histogram;
    SpawnStreams rng;
    /// Tiles generated so far, counting the one being decided.
    std::int64_t tiles_spawned = 0;
};

/// One entry per spawn, with the inputs the region rule saw.
struct SpawnRecord {
    std::int64_t tile_index = 0;
    SpawnDecision decision;
    std::optional<Lane> previous_region;
    RegionHistogram histogram;
};

struct World {
    WorldgenConfig config;
    std::deque<Tile> tiles;
    SpawnContext spawn;
    Rng decoration;
    GazeWindow gaze;
    std::vector<SpawnRecord> spawn_log;
    std::int64_t next_index = 1;
};

/// Places the tile's side-strip markers.
void place_markers(Tile& tile, Rng& rng, const WorldgenConfig& config);

/// Each marker independently receives a tree with `tree_probability`.
Tile decorate_tile(Tile tile, Rng& rng, const WorldgenConfig& config);

/// Lane rule: after a side spawn (or before any spawn) the next goes to the
/// center; after a center spawn it goes to the least-gazed side.
Lane decide_region(const SpawnContext& ctx, Rng& tiebreak);

/// Spawn cascade for the tile being generated. Draw order is fixed:
/// occurrence, obstacle/enemy, enemy kind, region tiebreak. Updates
/// `previous_region` when a spawn occurs.
std::optional<SpawnDecision> decide_spawn(SpawnContext& ctx, const WorldgenConfig& config);

/// Builds the initial tile window from a master seed.
World init_world(const WorldgenConfig& config, std::uint64_t seed);

struct TileAdvance {
    std::vector<std::int64_t> despawned;
    std::vector<Tile> spawned;  // copies of the tiles appended this call
};

/// Despawns every tile the avatar has passed, appending one new tile per
/// despawn and rolling the gaze window once per crossing.
TileAdvance advance_tiles(World& world, double avatar_z);

}  // namespace gazerunner
