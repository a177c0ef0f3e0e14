#include "gazerunner/rules.hpp"

#include <algorithm>
#include <stdexcept>

namespace gazerunner {
namespace {

constexpr double kAvatarHalfWidth = 0.4;
constexpr double kAvatarHeight = 1.8;
constexpr double kAvatarHalfDepth = 0.3;
constexpr double kSlabHeight = 3.0;

// Body stand-ins replacing the meshes.
Aabb obstacle_body(ObstacleKind kind, double x, double z) {
    if (kind == ObstacleKind::Rock) {
        return Aabb::centered({x, 0.5, z}, {0.8, 0.5, 0.8});
    }
    // Hanging branch: the horizontal limb across head height.
    return Aabb::centered({x, 1.5, z}, {1.0, 0.25, 0.3});
}

Aabb enemy_body(double x, double z) { return Aabb::centered({x, 0.9, z}, {0.4, 0.9, 0.3}); }

// Full-width slab across the corridor between z0 and z1.
Aabb corridor_slab(double z0, double z1, const WorldgenConfig& world) {
    return {{-world.corridor_half_width, 0.0, z0}, {world.corridor_half_width, kSlabHeight, z1}};
}

void damage(Avatar& avatar, int amount) { avatar.health = std::max(0, avatar.health - amount); }

Event despawn_event(EntityId id, const char* reason) {
    Event e;
    e.kind = EventKind::EntityDespawned;
    e.id = id;
    e.data.reason = reason;
    return e;
}

}  // namespace

void RulesConfig::validate() const {
    if (max_health < 1) throw std::invalid_argument("rules: max_health must be >= 1");
    if (enemy_hp < 1) throw std::invalid_argument("rules: enemy_hp must be >= 1");
    if (!(avatar_speed > 0.0)) throw std::invalid_argument("rules: avatar_speed must be positive");
    if (!(walker_speed >= 0.0)) throw std::invalid_argument("rules: walker_speed must be >= 0");
    if (!(runner_speed_factor > 0.0)) throw std::invalid_argument("rules: runner_speed_factor must be positive");
    if (!(death_animation_seconds >= 0.0)) throw std::invalid_argument("rules: death_animation_seconds must be >= 0");
    if (death_variants < 1) throw std::invalid_argument("rules: death_variants must be >= 1");
    if (!(obstacle_trigger_depth > 0.0) || !(enemy_attack_range > 0.0) || !(passage_depth > 0.0)) {
        throw std::invalid_argument("rules: box depths must be positive");
    }
}

std::string_view to_string(ObstacleKind kind) { return kind == ObstacleKind::Rock ? "rock" : "branch"; }
std::string_view to_string(EnemyKind kind) { return kind == EnemyKind::Walker ? "walker" : "runner"; }
std::string_view to_string(EnemyAnim anim) {
    switch (anim) {
        case EnemyAnim::Walking: return "walking";
        case EnemyAnim::Attacking: return "attacking";
        case EnemyAnim::Dying: return "dying";
        case EnemyAnim::Dead: return "dead";
    }
    return "unknown";
}

Aabb avatar_box(const Avatar& avatar, double previous_z) {
    const double lo = std::min(previous_z, avatar.z);
    const double hi = std::max(previous_z, avatar.z);
    return {{-kAvatarHalfWidth, 0.0, lo - kAvatarHalfDepth}, {kAvatarHalfWidth, kAvatarHeight, hi + kAvatarHalfDepth}};
}

Obstacle make_obstacle(EntityId id, ObstacleKind kind, Lane lane, double z, const BoxLayout& layout) {
    Obstacle o;
    o.id = id;
    o.kind = kind;
    o.lane = lane;
    o.z = z;
    const Aabb body = obstacle_body(kind, lane_center_x(lane, layout.world), z);
    o.box_a = body.scaled(layout.gaze_box_scale);
    o.box_b = corridor_slab(body.min.z - layout.rules.obstacle_trigger_depth, body.min.z, layout.world);
    o.box_c = corridor_slab(body.max.z, body.max.z + layout.rules.passage_depth, layout.world);
    return o;
}

void place_enemy_boxes(Enemy& enemy, const BoxLayout& layout) {
    const Aabb body = enemy_body(lane_center_x(enemy.lane, layout.world), enemy.z);
    enemy.box_a = corridor_slab(body.min.z - layout.rules.enemy_attack_range, body.min.z, layout.world);
    enemy.box_b = body.scaled(layout.gaze_box_scale);
    enemy.box_c = corridor_slab(body.max.z, body.max.z + layout.rules.passage_depth, layout.world);
}

Enemy make_enemy(EntityId id, EnemyKind kind, Lane lane, double z, const BoxLayout& layout) {
    Enemy e;
    e.id = id;
    e.kind = kind;
    e.lane = lane;
    e.z = z;
    e.speed = layout.rules.walker_speed * (kind == EnemyKind::Runner ? layout.rules.runner_speed_factor : 1.0);
    e.hp = layout.rules.enemy_hp;
    place_enemy_boxes(e, layout);
    return e;
}

Events fire(const Ray& shot, std::span<Enemy> enemies, Rng& death_variants, const RulesConfig& config) {
    std::vector<GazeTarget> targets;
    for (const auto& e : enemies) {
        if (e.active()) {
            targets.push_back({e.id, e.box_b});
        }
    }
    const auto hit = resolve_attended(shot, targets);
    if (!hit) {
        return {};
    }
    auto it = std::find_if(enemies.begin(), enemies.end(), [&](const Enemy& e) { return e.id == *hit; });
    Enemy& enemy = *it;
    if (enemy.attention.noticed()) {
        enemy.hp = 0;
    } else {
        enemy.hp = std::max(0, enemy.hp - 1);
    }
    const bool lethal = enemy.hp == 0;
    if (lethal) {
        enemy.anim = EnemyAnim::Dying;
        enemy.dying_elapsed = 0.0;
        enemy.death_variant = static_cast<int>(death_variants.below(static_cast<std::uint64_t>(config.death_variants)));
    }
    Event e;
    e.kind = EventKind::Shot;
    e.id = enemy.id;
    e.data.lethal = lethal;
    return {e};
}

Events obstacle_approach(Avatar& avatar, Obstacle& obstacle) {
    if (obstacle.approached) {
        return {};
    }
    obstacle.approached = true;
    Event e;
    e.id = obstacle.id;
    if (obstacle.attention.noticed()) {
        e.kind = EventKind::ObstacleAvoided;
    } else {
        damage(avatar, 1);
        e.kind = EventKind::ObstacleCollision;
    }
    e.data.health = avatar.health;
    return {e};
}

Events enemy_approach(Avatar& avatar, Enemy& enemy) {
    if (!enemy.active() || enemy.attacked) {
        return {};
    }
    enemy.attacked = true;
    enemy.anim = EnemyAnim::Attacking;
    const bool lethal = !enemy.attention.noticed();
    if (lethal) {
        avatar.health = 0;
    } else {
        damage(avatar, 1);
    }
    Event e;
    e.kind = EventKind::EnemyAttack;
    e.id = enemy.id;
    e.data.lethal = lethal;
    e.data.health = avatar.health;
    return {e};
}

Events resolve_box_triggers(Avatar& avatar, const Aabb& swept_avatar, std::span<Obstacle> obstacles,
                            std::span<Enemy> enemies) {
    Events out;
    for (auto& o : obstacles) {
        if (!o.approached && swept_avatar.overlaps(o.box_b)) {
            auto ev = obstacle_approach(avatar, o);
            out.insert(out.end(), ev.begin(), ev.end());
        }
    }
    for (auto& e : enemies) {
        if (e.active() && !e.attacked && swept_avatar.overlaps(e.box_a)) {
            auto ev = enemy_approach(avatar, e);
            out.insert(out.end(), ev.begin(), ev.end());
        }
    }
    return out;
}

Events despawn_passed(const Aabb& swept_avatar, std::vector<Obstacle>& obstacles, std::vector<Enemy>& enemies) {
    Events out;
    std::erase_if(obstacles, [&](const Obstacle& o) {
        if (!swept_avatar.overlaps(o.box_c)) return false;
        out.push_back(despawn_event(o.id, "passed"));
        return true;
    });
    std::erase_if(enemies, [&](const Enemy& e) {
        if (!swept_avatar.overlaps(e.box_c)) return false;
        out.push_back(despawn_event(e.id, "passed"));
        return true;
    });
    return out;
}

Events check_death_and_respawn(Avatar& avatar, std::vector<Obstacle>& obstacles, std::vector<Enemy>& enemies,
                               double grace_begin, double grace_end) {
    if (avatar.health > 0) {
        return {};
    }
    avatar.deaths += 1;
    avatar.health = avatar.max_health;
    Events out;
    Event death;
    death.kind = EventKind::AvatarDeath;
    death.data.deaths = avatar.deaths;
    out.push_back(death);
    auto in_grace = [&](double z) { return z >= grace_begin && z < grace_end; };
    std::erase_if(obstacles, [&](const Obstacle& o) {
        if (!in_grace(o.z)) return false;
        out.push_back(despawn_event(o.id, "grace"));
        return true;
    });
    std::erase_if(enemies, [&](const Enemy& e) {
        if (!in_grace(e.z)) return false;
        out.push_back(despawn_event(e.id, "grace"));
        return true;
    });
    return out;
}

void step_enemies(std::span<Enemy> enemies, double dt, const BoxLayout& layout) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step_enemies: dt must be positive");
    }
    for (auto& e : enemies) {
        switch (e.anim) {
            case EnemyAnim::Walking:
                e.z -= e.speed * dt;
                place_enemy_boxes(e, layout);
                break;
            case EnemyAnim::Dying:
                e.dying_elapsed += dt;
                if (e.dying_elapsed >= layout.rules.death_animation_seconds) {
                    e.anim = EnemyAnim::Dead;
                }
                break;
            case EnemyAnim::Attacking:
            case EnemyAnim::Dead:
                break;
        }
    }
}

}  // namespace gazerunner
