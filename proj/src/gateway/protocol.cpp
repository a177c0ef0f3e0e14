#include "gazerunner/gateway/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace gazerunner::gateway {
namespace {

using nlohmann::json;

class Fields {
public:
    Fields(const json& doc, std::string_view type, std::initializer_list<std::string_view> allowed)
        : doc_(doc), type_(type) {
        for (const auto& [key, value] : doc.items()) {
            if (key == "type") continue;
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                fail("unknown field '" + key + "'");
            }
        }
    }

    double number(const char* key) const {
        const json& v = require(key);
        if (!v.is_number()) fail(std::string("'") + key + "' must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(std::string("'") + key + "' must be finite");
        return d;
    }

    int integer(const char* key) const {
        const json& v = require(key);
        if (!v.is_number_integer()) fail(std::string("'") + key + "' must be an integer");
        const auto i = v.get<std::int64_t>();
        if (i < -1'000'000 || i > 1'000'000) fail(std::string("'") + key + "' out of range");
        return static_cast<int>(i);
    }

    bool boolean(const char* key, bool fallback) const {
        if (!doc_.contains(key)) return fallback;
        const json& v = doc_.at(key);
        if (!v.is_boolean()) fail(std::string("'") + key + "' must be a boolean");
        return v.get<bool>();
    }

    std::string string(const char* key) const {
        const json& v = require(key);
        if (!v.is_string()) fail(std::string("'") + key + "' must be a string");
        return v.get<std::string>();
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ProtocolError(std::string(type_) + ": " + what);
    }

private:
    const json& require(const char* key) const {
        if (!doc_.contains(key)) fail(std::string("missing field '") + key + "'");
        return doc_.at(key);
    }

    const json& doc_;
    std::string_view type_;
};

std::string entity_lane(Lane lane) { return std::string(to_string(lane)); }

}  // namespace

ClientMessage parse_client_message(std::string_view text) {
    const json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ProtocolError("message is not valid JSON");
    if (!doc.is_object()) throw ProtocolError("message must be a JSON object");
    const auto type_it = doc.find("type");
    if (type_it == doc.end() || !type_it->is_string()) throw ProtocolError("message needs a string 'type'");
    const std::string type = type_it->get<std::string>();

    if (type == "Hello") {
        Fields f(doc, type, {"protocol_version"});
        return Hello{f.integer("protocol_version")};
    }
    if (type == "StartSession") {
        Fields f(doc, type, {"mode"});
        const auto mode = attention_mode_from_string(f.string("mode"));
        if (!mode) f.fail("mode must be 'tracked' or 'auto'");
        return StartSession{*mode};
    }
    if (type == "Gaze") {
        Fields f(doc, type, {"u", "v", "valid"});
        const ScreenPoint p = ScreenPoint::clamped(f.number("u"), f.number("v"));
        return Gaze{p.u, p.v, f.boolean("valid", true)};
    }
    if (type == "Aim") {
        Fields f(doc, type, {"du", "dv"});
        return Aim{f.number("du"), f.number("dv")};
    }
    if (type == "CalibrationSample") {
        Fields f(doc, type, {"target_index", "u", "v"});
        const int index = f.integer("target_index");
        const double u = f.number("u");
        const double v = f.number("v");
        return CalibrationSample{index, u, v};
    }
    if (type == "Fire") {
        Fields f(doc, type, {});
        return Fire{};
    }
    if (type == "CalibrationEnd") {
        Fields f(doc, type, {});
        return CalibrationEnd{};
    }
    if (type == "EndSession") {
        Fields f(doc, type, {});
        return EndSession{};
    }
    throw ProtocolError("unknown message type '" + type + "'");
}

std::string serialize(const ClientMessage& message) {
    json out = std::visit(
        [](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Hello>) {
                return {{"type", "Hello"}, {"protocol_version", m.protocol_version}};
            } else if constexpr (std::is_same_v<T, StartSession>) {
                return {{"type", "StartSession"}, {"mode", std::string(to_string(m.mode))}};
            } else if constexpr (std::is_same_v<T, Gaze>) {
                return {{"type", "Gaze"}, {"u", m.u}, {"v", m.v}, {"valid", m.valid}};
            } else if constexpr (std::is_same_v<T, Aim>) {
                return {{"type", "Aim"}, {"du", m.du}, {"dv", m.dv}};
            } else if constexpr (std::is_same_v<T, Fire>) {
                return {{"type", "Fire"}};
            } else if constexpr (std::is_same_v<T, CalibrationSample>) {
                return {{"type", "CalibrationSample"}, {"target_index", m.target_index}, {"u", m.u}, {"v", m.v}};
            } else if constexpr (std::is_same_v<T, CalibrationEnd>) {
                return {{"type", "CalibrationEnd"}};
            } else {
                return {{"type", "EndSession"}};
            }
        },
        message);
    return out.dump();
}

Snapshot make_snapshot(const SimState& state) {
    Snapshot s;
    s.tick = state.tick;
    s.avatar = {state.avatar.z, state.avatar.health, state.avatar.crosshair, state.avatar.deaths};
    for (const auto& o : state.obstacles) {
        s.entities.push_back({o.id, std::string(to_string(o.kind)), entity_lane(o.lane), o.z, o.attention.stage, {}});
    }
    for (const auto& e : state.enemies) {
        s.entities.push_back({e.id, std::string(to_string(e.kind)), entity_lane(e.lane), e.z, e.attention.stage, e.anim});
    }
    std::sort(s.entities.begin(), s.entities.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    const auto remaining_ticks = std::max<std::int64_t>(0, session_ticks(state.config) - state.tick);
    s.remaining = static_cast<double>(remaining_ticks) * state.config.timestep;
    s.metrics = state.metrics;
    return s;
}

json to_json(const Snapshot& s) {
    json entities = json::array();
    for (const auto& e : s.entities) {
        json item{{"id", e.id}, {"kind", e.kind}, {"lane", e.lane}, {"z", e.z},
                  {"attention", std::string(to_string(e.attention))}};
        if (e.anim) item["anim"] = std::string(to_string(*e.anim));
        entities.push_back(std::move(item));
    }
    return {
        {"type", "Snapshot"},
        {"tick", s.tick},
        {"avatar",
         {{"z", s.avatar.z},
          {"health", s.avatar.health},
          {"crosshair", {{"u", s.avatar.crosshair.u}, {"v", s.avatar.crosshair.v}}},
          {"deaths", s.avatar.deaths}}},
        {"entities", std::move(entities)},
        {"remaining", s.remaining},
        {"metrics",
         {{"enemies_spawned", s.metrics.enemies_spawned},
          {"enemies_killed", s.metrics.enemies_killed},
          {"elements_spawned", s.metrics.elements_spawned},
          {"elements_noticed", s.metrics.elements_noticed},
          {"deaths", s.metrics.deaths}}},
    };
}

json hello_message() { return {{"type", "Hello"}, {"protocol_version", kProtocolVersion}}; }

json error_message(std::string_view reason) { return {{"type", "Error"}, {"reason", std::string(reason)}}; }

}  // namespace gazerunner::gateway
