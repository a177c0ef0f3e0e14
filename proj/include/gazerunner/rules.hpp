#pragma once

#include "gazerunner/attention.hpp"
#include "gazerunner/events.hpp"
#include "gazerunner/geometry.hpp"
#include "gazerunner/rng.hpp"
#include "gazerunner/worldgen.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace gazerunner {

struct RulesConfig {
    int max_health = 3;
    int enemy_hp = 2;
    double avatar_speed = 6.0;
    double walker_speed = 1.5;
    double runner_speed_factor = 2.0;
    double death_animation_seconds = 1.0;
    int death_variants = 3;
    /// Depth of an obstacle's trigger box in front of its body.
    double obstacle_trigger_depth = 1.0;
    /// Depth of an enemy's attack box in front of its body.
    double enemy_attack_range = 2.0;
    /// Depth of the passage box behind every entity.
    double passage_depth = 1.0;

    void validate() const;
};

struct Avatar {
    double z = 0.0;
    double speed = 6.0;
    int health = 3;
    int max_health = 3;
    ScreenPoint crosshair;
    int deaths = 0;

    bool alive() const { return health > 0; }
};

/// Avatar body swept along the corridor from `previous_z` to its current z.
Aabb avatar_box(const Avatar& avatar, double previous_z);

enum class ObstacleKind : std::uint8_t { Rock, Branch };
enum class EnemyKind : std::uint8_t { Walker, Runner };
enum class EnemyAnim : std::uint8_t { Walking, Attacking, Dying, Dead };

std::string_view to_string(ObstacleKind kind);
std::string_view to_string(EnemyKind kind);
std::string_view to_string(EnemyAnim anim);

// Box naming follows the entity type: obstacles gaze through A and trigger
// on B; enemies attack from A and take gaze and bullets on B. C is always
// the passage box behind the body.
struct Obstacle {
    EntityId id = 0;
    ObstacleKind kind = ObstacleKind::Rock;
    Lane lane = Lane::Center;
    double z = 0.0;
    AttentionState attention;
    Aabb box_a;
    Aabb box_b;
    Aabb box_c;
    bool approached = false;

    const Aabb& gaze_box() const { return box_a; }
};

struct Enemy {
    EntityId id = 0;
    EnemyKind kind = EnemyKind::Walker;
    Lane lane = Lane::Center;
    double z = 0.0;
    double speed = 0.0;
    int hp = 0;
    AttentionState attention;
    EnemyAnim anim = EnemyAnim::Walking;
    int death_variant = -1;
    double dying_elapsed = 0.0;
    bool attacked = false;
    Aabb box_a;
    Aabb box_b;
    Aabb box_c;

    const Aabb& gaze_box() const { return box_b; }
    /// Walking enemies are the only ones that can be shot or can attack.
    bool active() const { return anim == EnemyAnim::Walking; }
    bool alive() const { return anim == EnemyAnim::Walking || anim == EnemyAnim::Attacking; }
};

struct BoxLayout {
    WorldgenConfig world;
    RulesConfig rules;
    double gaze_box_scale = 1.5;
};

Obstacle make_obstacle(EntityId id, ObstacleKind kind, Lane lane, double z, const BoxLayout& layout);
Enemy make_enemy(EntityId id, EnemyKind kind, Lane lane, double z, const BoxLayout& layout);
/// Rebuilds the enemy's boxes around its current z.
void place_enemy_boxes(Enemy& enemy, const BoxLayout& layout);

/// Hitscan along `shot`. The nearest active enemy whose B box is hit dies
/// at once if noticed, or loses one hp otherwise.
Events fire(const Ray& shot, std::span<Enemy> enemies, Rng& death_variants, const RulesConfig& config);

/// First entry into the obstacle's B box. Later calls are no-ops.
Events obstacle_approach(Avatar& avatar, Obstacle& obstacle);

/// First entry into the enemy's A box. The enemy attacks once: a noticed
/// enemy costs one health point, an unnoticed one is lethal.
Events enemy_approach(Avatar& avatar, Enemy& enemy);

/// Edge-triggered box checks for one tick.
Events resolve_box_triggers(Avatar& avatar, const Aabb& swept_avatar, std::span<Obstacle> obstacles,
                            std::span<Enemy> enemies);

/// Removes entities whose C box the avatar has reached.
Events despawn_passed(const Aabb& swept_avatar, std::vector<Obstacle>& obstacles, std::vector<Enemy>& enemies);

/// On zero health: count the death, restore health, and clear entities in
/// the grace window [grace_begin, grace_end) so the avatar can recover.
Events check_death_and_respawn(Avatar& avatar, std::vector<Obstacle>& obstacles, std::vector<Enemy>& enemies,
                               double grace_begin, double grace_end);

/// Walking enemies close in on the avatar; dying ones play out.
void step_enemies(std::span<Enemy> enemies, double dt, const BoxLayout& layout);

}  // namespace gazerunner
