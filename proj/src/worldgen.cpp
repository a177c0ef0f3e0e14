#include "gazerunner/worldgen.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gazerunner {
namespace {

void require_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string("worldgen: ") + name + " must lie in [0,1]");
    }
}

Tile make_tile(World& world, std::int64_t index) {
    const auto& cfg = world.config;
    Tile tile;
    tile.index = index;
    tile.z_start = static_cast<double>(index - 1) * cfg.tile_length;
    tile.z_end = tile.z_start + cfg.tile_length;
    place_markers(tile, world.decoration, cfg);
    tile = decorate_tile(std::move(tile), world.decoration, cfg);

    world.spawn.tiles_spawned = index;
    const auto previous = world.spawn.previous_region;
    tile.spawn = decide_spawn(world.spawn, cfg);
    if (tile.spawn) {
        world.spawn_log.push_back({index, *tile.spawn, previous, world.spawn.region_histogram});
    }
    return tile;
}

}  // namespace

void WorldgenConfig::validate() const {
    if (!(tile_length > 0.0)) throw std::invalid_argument("worldgen: tile_length must be positive");
    if (!(center_half_width > 0.0) || !(corridor_half_width > center_half_width)) {
        throw std::invalid_argument("worldgen: need 0 < center_half_width < corridor_half_width");
    }
    if (markers_per_tile < 0) throw std::invalid_argument("worldgen: markers_per_tile must be >= 0");
    if (!(tree_offset_radius >= 0.0) ||
        2.0 * tree_offset_radius > corridor_half_width - center_half_width) {
        throw std::invalid_argument("worldgen: tree_offset_radius does not fit in the side strip");
    }
    if (!(tree_height_min > 0.0) || !(tree_height_max >= tree_height_min)) {
        throw std::invalid_argument("worldgen: tree height range invalid");
    }
    require_probability(tree_probability, "tree_probability");
    require_probability(spawn_probability, "spawn_probability");
    require_probability(obstacle_probability, "obstacle_probability");
    require_probability(runner_probability, "runner_probability");
    if (initial_tiles < 1) throw std::invalid_argument("worldgen: initial_tiles must be >= 1");
    if (spawn_warmup_tiles < 0) throw std::invalid_argument("worldgen: spawn_warmup_tiles must be >= 0");
}

double lane_center_x(Lane lane, const WorldgenConfig& config) {
    const double side = 0.5 * (config.center_half_width + config.corridor_half_width);
    switch (lane) {
        case Lane::Left: return -side;
        case Lane::Center: return 0.0;
        case Lane::Right: return side;
    }
    return 0.0;
}

std::string_view to_string(SpawnKind kind) {
    switch (kind) {
        case SpawnKind::Rock: return "rock";
        case SpawnKind::Branch: return "branch";
        case SpawnKind::Walker: return "walker";
        case SpawnKind::Runner: return "runner";
    }
    return "unknown";
}

void place_markers(Tile& tile, Rng& rng, const WorldgenConfig& config) {
    // Inset by the tree offset radius so decorated trees stay in the strip.
    const double inner = config.center_half_width + config.tree_offset_radius;
    const double outer = config.corridor_half_width - config.tree_offset_radius;
    tile.markers.clear();
    tile.markers.reserve(static_cast<std::size_t>(config.markers_per_tile));
    for (int i = 0; i < config.markers_per_tile; ++i) {
        const double sign = rng.bernoulli(0.5) ? -1.0 : 1.0;
        const double x = sign * rng.uniform(inner, outer);
        const double z = rng.uniform(tile.z_start, tile.z_end);
        tile.markers.push_back({{x, 0.0, z}});
    }
}

Tile decorate_tile(Tile tile, Rng& rng, const WorldgenConfig& config) {
    tile.decorations.clear();
    for (const auto& marker : tile.markers) {
        if (!rng.bernoulli(config.tree_probability)) {
            continue;
        }
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double radius = config.tree_offset_radius * std::sqrt(rng.uniform());
        TreeDecoration tree;
        tree.position = marker.position + Vec3{radius * std::cos(angle), 0.0, radius * std::sin(angle)};
        tree.yaw = rng.uniform(0.0, 2.0 * std::numbers::pi);
        tree.height = rng.uniform(config.tree_height_min, config.tree_height_max);
        tile.decorations.push_back(tree);
    }
    return tile;
}

Lane decide_region(const SpawnContext& ctx, Rng& tiebreak) {
    if (ctx.previous_region == Lane::Center) {
        return least_gazed_side(ctx.region_histogram, tiebreak);
    }
    return Lane::Center;
}

std::optional<SpawnDecision> decide_spawn(SpawnContext& ctx, const WorldgenConfig& config) {
    if (ctx.tiles_spawned <= config.spawn_warmup_tiles) {
        return std::nullopt;
    }
    if (!ctx.rng.spawn.bernoulli(config.spawn_probability)) {
        return std::nullopt;
    }
    const bool obstacle = ctx.rng.spawn.bernoulli(config.obstacle_probability);
    bool runner = false;
    if (!obstacle) {
        runner = ctx.rng.enemy_kind.bernoulli(config.runner_probability);
    }
    SpawnDecision decision;
    decision.lane = decide_region(ctx, ctx.rng.tiebreak);
    if (obstacle) {
        decision.kind = decision.lane == Lane::Center ? SpawnKind::Rock : SpawnKind::Branch;
    } else {
        decision.kind = runner ? SpawnKind::Runner : SpawnKind::Walker;
    }
    ctx.previous_region = decision.lane;
    return decision;
}

World init_world(const WorldgenConfig& config, std::uint64_t seed) {
    config.validate();
    World world;
    world.config = config;
    world.decoration = Rng::stream(seed, "decoration");
    world.spawn.rng.spawn = Rng::stream(seed, "spawn");
    world.spawn.rng.enemy_kind = Rng::stream(seed, "enemy_kind");
    world.spawn.rng.tiebreak = Rng::stream(seed, "tiebreak");
    for (int i = 0; i < config.initial_tiles; ++i) {
        world.tiles.push_back(make_tile(world, world.next_index++));
    }
    return world;
}

TileAdvance advance_tiles(World& world, double avatar_z) {
    TileAdvance out;
    while (!world.tiles.empty() && avatar_z >= world.tiles.front().z_end) {
        out.despawned.push_back(world.tiles.front().index);
        world.tiles.pop_front();
        world.gaze.roll();
        world.spawn.region_histogram = world.gaze.two_tile();
        world.tiles.push_back(make_tile(world, world.next_index++));
        out.spawned.push_back(world.tiles.back());
    }
    return out;
}

}  // namespace gazerunner
