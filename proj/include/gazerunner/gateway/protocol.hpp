#pragma once

#include "gazerunner/engine.hpp"
#include "gazerunner/geometry.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace gazerunner::gateway {

// Every message is one JSON object whose "type" names the message, e.g.
//   {"type":"Gaze","u":0.4,"v":0.5,"valid":true}
// Fields are exactly those of the struct; unknown fields are rejected.

inline constexpr int kProtocolVersion = 1;

struct Hello {
    int protocol_version = kProtocolVersion;
};
struct StartSession {
    AttentionMode mode = AttentionMode::Tracked;
};
struct Gaze {
    double u = 0.5;
    double v = 0.5;
    bool valid = true;
};
struct Aim {
    double du = 0.0;
    double dv = 0.0;
};
struct Fire {};
struct CalibrationSample {
    int target_index = 0;
    double u = 0.5;
    double v = 0.5;
};
/// Asks the gateway to score the calibration samples collected so far.
struct CalibrationEnd {};
struct EndSession {};

using ClientMessage =
    std::variant<Hello, StartSession, Gaze, Aim, Fire, CalibrationSample, CalibrationEnd, EndSession>;

class ProtocolError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parses one client message. Gaze coordinates are clamped to [0,1].
/// Throws ProtocolError on anything malformed.
ClientMessage parse_client_message(std::string_view text);
std::string serialize(const ClientMessage& message);

struct EntityView {
    EntityId id = 0;
    std::string kind;
    std::string lane;
    double z = 0.0;
    AttentionStage attention = AttentionStage::Unseen;
    /// Enemies only.
    std::optional<EnemyAnim> anim;
};

struct AvatarView {
    double z = 0.0;
    int health = 0;
    ScreenPoint crosshair;
    int deaths = 0;
};

/// Immutable copy of one tick's state for the client.
struct Snapshot {
    std::int64_t tick = 0;
    AvatarView avatar;
    std::vector<EntityView> entities;
    double remaining = 0.0;
    SessionMetrics metrics;
};

Snapshot make_snapshot(const SimState& state);
nlohmann::json to_json(const Snapshot& snapshot);

nlohmann::json hello_message();
nlohmann::json error_message(std::string_view reason);

}  // namespace gazerunner::gateway
