#pragma once

#include "gazerunner/attention.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazerunner {

enum class EventKind : std::uint8_t {
    Shot,
    ObstacleAvoided,
    ObstacleCollision,
    EnemyAttack,
    AvatarDeath,
    EntityNoticed,
    EntitySpawned,
    EntityDespawned,
    TileSpawned,
    TileDespawned,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view name);

/// Optional payload fields; only the ones that are set are serialized.
struct EventData {
    std::optional<bool> lethal;
    std::optional<int> health;
    std::optional<int> deaths;
    std::optional<std::string> entity;
    std::optional<std::string> lane;
    std::optional<std::int64_t> tile;
    std::optional<double> z;
    std::optional<std::string> reason;

    friend bool operator==(const EventData&, const EventData&) = default;
};

struct Event {
    std::int64_t tick = 0;
    double time = 0.0;
    EventKind kind = EventKind::Shot;
    std::optional<EntityId> id;
    EventData data;

    friend bool operator==(const Event&, const Event&) = default;
};

using Events = std::vector<Event>;

}  // namespace gazerunner
