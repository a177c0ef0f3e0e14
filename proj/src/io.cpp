#include "gazerunner/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gazerunner {
namespace {

using nlohmann::json;

// Reads known keys from a JSON object and rejects whatever is left over.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            throw std::invalid_argument("config: " + label() + " must be an object");
        }
    }

    void number(const char* key, double& out) {
        if (const json* v = take(key)) {
            if (!v->is_number()) fail(key, "a number");
            out = v->get<double>();
        }
    }

    void integer(const char* key, int& out) {
        if (const json* v = take(key)) {
            if (!v->is_number_integer()) fail(key, "an integer");
            out = v->get<int>();
        }
    }

    void unsigned_integer(const char* key, std::uint64_t& out) {
        if (const json* v = take(key)) {
            if (!v->is_number_unsigned()) fail(key, "a non-negative integer");
            out = v->get<std::uint64_t>();
        }
    }

    void string(const char* key, std::string& out) {
        if (const json* v = take(key)) {
            if (!v->is_string()) fail(key, "a string");
            out = v->get<std::string>();
        }
    }

    const json* child(const char* key) { return take(key); }

    std::string child_path(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (const auto& item : obj_.items()) {
            if (!seen_.contains(item.key())) {
                throw std::invalid_argument("config: unknown key '" + child_path(item.key().c_str()) + "'");
            }
        }
    }

private:
    const json* take(const char* key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    [[noreturn]] void fail(const char* key, const char* what) const {
        throw std::invalid_argument("config: '" + child_path(key) + "' must be " + what);
    }

    std::string label() const { return path_.empty() ? "document" : "'" + path_ + "'"; }

    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

template <typename T>
T parse_field(const std::string& field, std::size_t line_no, const char* name) {
    T value{};
    const auto* begin = field.data();
    const auto* end = field.data() + field.size();
    const auto res = std::from_chars(begin, end, value);
    if (field.empty() || res.ec != std::errc{} || res.ptr != end) {
        throw std::invalid_argument("trace line " + std::to_string(line_no) + ": bad " + name + " '" + field + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) {
            throw std::invalid_argument("trace line " + std::to_string(line_no) + ": non-finite " + name);
        }
    }
    return value;
}

bool parse_flag(const std::string& field, std::size_t line_no, const char* name) {
    if (field == "0") return false;
    if (field == "1") return true;
    throw std::invalid_argument("trace line " + std::to_string(line_no) + ": " + name + " must be 0 or 1");
}

}  // namespace

SimConfig config_from_json(const json& doc) {
    SimConfig cfg;
    ObjectReader root(doc, "");
    root.unsigned_integer("seed", cfg.seed);
    root.number("timestep", cfg.timestep);
    root.number("session_duration", cfg.session_duration);
    std::string mode = std::string(to_string(cfg.attention_mode));
    root.string("attention_mode", mode);
    const auto parsed_mode = attention_mode_from_string(mode);
    if (!parsed_mode) {
        throw std::invalid_argument("config: attention_mode must be 'tracked' or 'auto'");
    }
    cfg.attention_mode = *parsed_mode;

    if (const json* a = root.child("attention")) {
        ObjectReader r(*a, root.child_path("attention"));
        r.number("notice_threshold", cfg.attention.notice_threshold);
        r.number("gaze_box_scale", cfg.attention.gaze_box_scale);
        r.finish();
    }
    if (const json* w = root.child("world")) {
        auto& c = cfg.world;
        ObjectReader r(*w, root.child_path("world"));
        r.number("tile_length", c.tile_length);
        r.number("corridor_half_width", c.corridor_half_width);
        r.number("center_half_width", c.center_half_width);
        r.integer("markers_per_tile", c.markers_per_tile);
        r.number("tree_probability", c.tree_probability);
        r.number("tree_offset_radius", c.tree_offset_radius);
        r.number("tree_height_min", c.tree_height_min);
        r.number("tree_height_max", c.tree_height_max);
        r.number("spawn_probability", c.spawn_probability);
        r.number("obstacle_probability", c.obstacle_probability);
        r.number("runner_probability", c.runner_probability);
        r.integer("initial_tiles", c.initial_tiles);
        r.integer("spawn_warmup_tiles", c.spawn_warmup_tiles);
        r.finish();
    }
    if (const json* rr = root.child("rules")) {
        auto& c = cfg.rules;
        ObjectReader r(*rr, root.child_path("rules"));
        r.integer("max_health", c.max_health);
        r.integer("enemy_hp", c.enemy_hp);
        r.number("avatar_speed", c.avatar_speed);
        r.number("walker_speed", c.walker_speed);
        r.number("runner_speed_factor", c.runner_speed_factor);
        r.number("death_animation_seconds", c.death_animation_seconds);
        r.integer("death_variants", c.death_variants);
        r.number("obstacle_trigger_depth", c.obstacle_trigger_depth);
        r.number("enemy_attack_range", c.enemy_attack_range);
        r.number("passage_depth", c.passage_depth);
        r.finish();
    }
    if (const json* cam = root.child("camera")) {
        ObjectReader r(*cam, root.child_path("camera"));
        r.number("horizontal_fov", cfg.camera.horizontal_fov);
        r.number("aspect", cfg.camera.aspect);
        r.number("eye_height", cfg.camera.eye_height);
        r.finish();
    }
    root.finish();
    cfg.validate();
    return cfg;
}

json config_to_json(const SimConfig& cfg) {
    const auto& w = cfg.world;
    const auto& r = cfg.rules;
    return {
        {"seed", cfg.seed},
        {"timestep", cfg.timestep},
        {"session_duration", cfg.session_duration},
        {"attention_mode", std::string(to_string(cfg.attention_mode))},
        {"attention",
         {{"notice_threshold", cfg.attention.notice_threshold}, {"gaze_box_scale", cfg.attention.gaze_box_scale}}},
        {"world",
         {{"tile_length", w.tile_length},
          {"corridor_half_width", w.corridor_half_width},
          {"center_half_width", w.center_half_width},
          {"markers_per_tile", w.markers_per_tile},
          {"tree_probability", w.tree_probability},
          {"tree_offset_radius", w.tree_offset_radius},
          {"tree_height_min", w.tree_height_min},
          {"tree_height_max", w.tree_height_max},
          {"spawn_probability", w.spawn_probability},
          {"obstacle_probability", w.obstacle_probability},
          {"runner_probability", w.runner_probability},
          {"initial_tiles", w.initial_tiles},
          {"spawn_warmup_tiles", w.spawn_warmup_tiles}}},
        {"rules",
         {{"max_health", r.max_health},
          {"enemy_hp", r.enemy_hp},
          {"avatar_speed", r.avatar_speed},
          {"walker_speed", r.walker_speed},
          {"runner_speed_factor", r.runner_speed_factor},
          {"death_animation_seconds", r.death_animation_seconds},
          {"death_variants", r.death_variants},
          {"obstacle_trigger_depth", r.obstacle_trigger_depth},
          {"enemy_attack_range", r.enemy_attack_range},
          {"passage_depth", r.passage_depth}}},
        {"camera",
         {{"horizontal_fov", cfg.camera.horizontal_fov},
          {"aspect", cfg.camera.aspect},
          {"eye_height", cfg.camera.eye_height}}},
    };
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: " + path.string() + ": " + e.what());
    }
    return config_from_json(doc);
}

std::vector<InputFrame> read_trace(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };
    if (!next_line() || line != kTraceHeader) {
        throw std::invalid_argument(std::string("trace: missing header '") + kTraceHeader + "'");
    }
    std::vector<InputFrame> frames;
    while (next_line()) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 7) {
            throw std::invalid_argument("trace line " + std::to_string(line_no) + ": expected 7 fields");
        }
        InputFrame frame;
        frame.tick = parse_field<std::int64_t>(f[0], line_no, "tick");
        const bool valid = parse_flag(f[3], line_no, "valid");
        if (valid) {
            const double u = parse_field<double>(f[1], line_no, "u");
            const double v = parse_field<double>(f[2], line_no, "v");
            frame.gaze = GazeSample{0.0, ScreenPoint::clamped(u, v), true};
        } else if (!f[1].empty() || !f[2].empty()) {
            // Points on invalid samples are ignored, but must still parse.
            if (!f[1].empty()) parse_field<double>(f[1], line_no, "u");
            if (!f[2].empty()) parse_field<double>(f[2], line_no, "v");
        }
        frame.aim_du = parse_field<double>(f[4], line_no, "aim_du");
        frame.aim_dv = parse_field<double>(f[5], line_no, "aim_dv");
        frame.fire = parse_flag(f[6], line_no, "fire");
        if (!frames.empty() && frame.tick <= frames.back().tick) {
            throw std::invalid_argument("trace line " + std::to_string(line_no) + ": ticks must strictly increase");
        }
        frames.push_back(frame);
    }
    return frames;
}

std::vector<InputFrame> load_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("trace: cannot open " + path.string());
    }
    return read_trace(in);
}

void write_trace(std::ostream& out, std::span<const InputFrame> frames) {
    out << kTraceHeader << '\n';
    for (const auto& f : frames) {
        const bool valid = f.gaze && f.gaze->valid;
        out << f.tick << ',';
        if (valid) {
            out << format_double(f.gaze->point.u) << ',' << format_double(f.gaze->point.v);
        } else {
            out << ',';
        }
        out << ',' << (valid ? 1 : 0) << ',' << format_double(f.aim_du) << ',' << format_double(f.aim_dv) << ','
            << (f.fire ? 1 : 0) << '\n';
    }
}

json metrics_to_json(const SessionMetrics& m) {
    return {
        {"enemies_spawned", m.enemies_spawned},
        {"enemies_killed", m.enemies_killed},
        {"elements_spawned", m.elements_spawned},
        {"elements_noticed", m.elements_noticed},
        {"deaths", m.deaths},
        {"kill_ratio", m.kill_ratio()},
        {"noticed_ratio", m.noticed_ratio()},
    };
}

json aggregate_to_json(const AggregateReport& r) {
    auto ms = [](const MeanSte& v) { return json{{"mean", v.mean}, {"ste", v.ste}}; };
    return {
        {"sessions", r.sessions},
        {"kill_ratio", ms(r.kill_ratio)},
        {"noticed_ratio", ms(r.noticed_ratio)},
        {"deaths", ms(r.deaths)},
        {"enemies_spawned", ms(r.enemies_spawned)},
        {"enemies_killed", ms(r.enemies_killed)},
        {"elements_spawned", ms(r.elements_spawned)},
        {"elements_noticed", ms(r.elements_noticed)},
    };
}

std::string format_session_table(std::span<const SessionMetrics> sessions, const AggregateReport& report) {
    std::ostringstream out;
    char row[160];
    std::snprintf(row, sizeof(row), "%-14s | %-27s | %-29s | %-16s\n", "Play Session", "Ratio [%] of Killed Enemies",
                  "Ratio [%] of Noticed Elements", "Number of Deaths");
    out << row;
    for (std::size_t i = 0; i < sessions.size(); ++i) {
        const auto& m = sessions[i];
        std::snprintf(row, sizeof(row), "%-14zu | %-27.1f | %-29.1f | %-16lld\n", i + 1, m.kill_ratio(),
                      m.noticed_ratio(), static_cast<long long>(m.deaths));
        out << row;
    }
    char kill[40], noticed[40], deaths[40];
    std::snprintf(kill, sizeof(kill), "%.1f ± %.1f", report.kill_ratio.mean, report.kill_ratio.ste);
    std::snprintf(noticed, sizeof(noticed), "%.1f ± %.1f", report.noticed_ratio.mean, report.noticed_ratio.ste);
    std::snprintf(deaths, sizeof(deaths), "%.1f ± %.1f", report.deaths.mean, report.deaths.ste);
    // The ± sign is two bytes in UTF-8; pad by hand so the columns line up.
    auto pad = [](const char* s, std::size_t width) {
        std::string text(s);
        const std::size_t visible = text.size() - 1;
        return text + std::string(visible < width ? width - visible : 0, ' ');
    };
    out << "mean ± STE     | " << pad(kill, 27) << " | " << pad(noticed, 29) << " | " << deaths << '\n';
    return out.str();
}

}  // namespace gazerunner
