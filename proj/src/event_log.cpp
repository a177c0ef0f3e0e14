#include "gazerunner/event_log.hpp"

#include "gazerunner/rng.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace gazerunner {
namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 10> kKindNames{{
    {EventKind::Shot, "Shot"},
    {EventKind::ObstacleAvoided, "ObstacleAvoided"},
    {EventKind::ObstacleCollision, "ObstacleCollision"},
    {EventKind::EnemyAttack, "EnemyAttack"},
    {EventKind::AvatarDeath, "AvatarDeath"},
    {EventKind::EntityNoticed, "EntityNoticed"},
    {EventKind::EntitySpawned, "EntitySpawned"},
    {EventKind::EntityDespawned, "EntityDespawned"},
    {EventKind::TileSpawned, "TileSpawned"},
    {EventKind::TileDespawned, "TileDespawned"},
}};

nlohmann::json data_json(const EventData& d) {
    nlohmann::json j = nlohmann::json::object();
    if (d.lethal) j["lethal"] = *d.lethal;
    if (d.health) j["health"] = *d.health;
    if (d.deaths) j["deaths"] = *d.deaths;
    if (d.entity) j["entity"] = *d.entity;
    if (d.lane) j["lane"] = *d.lane;
    if (d.tile) j["tile"] = *d.tile;
    if (d.z) j["z"] = *d.z;
    if (d.reason) j["reason"] = *d.reason;
    return j;
}

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, std::optional<T>& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string_view to_string(EventKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "Unknown";
}

std::optional<EventKind> event_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

std::string canonical_line(const Event& event) {
    nlohmann::json j;
    j["t"] = event.time;
    j["kind"] = std::string(to_string(event.kind));
    if (event.id) j["id"] = *event.id;
    auto data = data_json(event.data);
    if (!data.empty()) j["data"] = std::move(data);
    return j.dump();
}

Event parse_event_line(const std::string& line, double timestep) {
    try {
        const auto j = nlohmann::json::parse(line);
        Event e;
        e.time = j.at("t").get<double>();
        e.tick = static_cast<std::int64_t>(std::llround(e.time / timestep));
        const auto kind = event_kind_from_string(j.at("kind").get<std::string>());
        if (!kind) throw std::invalid_argument("unknown event kind");
        e.kind = *kind;
        if (j.contains("id")) e.id = j.at("id").get<EntityId>();
        if (j.contains("data")) {
            const auto& d = j.at("data");
            read_opt(d, "lethal", e.data.lethal);
            read_opt(d, "health", e.data.health);
            read_opt(d, "deaths", e.data.deaths);
            read_opt(d, "entity", e.data.entity);
            read_opt(d, "lane", e.data.lane);
            read_opt(d, "tile", e.data.tile);
            read_opt(d, "z", e.data.z);
            read_opt(d, "reason", e.data.reason);
        }
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw std::invalid_argument(std::string("bad event line: ") + ex.what());
    }
}

void EventLog::append(Event event) {
    if (!events_.empty() && event.time < events_.back().time) {
        throw std::logic_error("event log: timestamps must be non-decreasing");
    }
    digest_ = fnv1a64(canonical_line(event), digest_);
    digest_ = fnv1a64("\n", digest_);
    events_.push_back(std::move(event));
}

std::string EventLog::digest_hex() const { return to_hex64(digest_); }

void EventLog::write_ndjson(std::ostream& out) const {
    for (const auto& e : events_) {
        out << canonical_line(e) << '\n';
    }
}

std::string to_hex64(std::uint64_t value) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kDigits[value & 0xF];
        value >>= 4;
    }
    return out;
}

}  // namespace gazerunner
