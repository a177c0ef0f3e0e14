#include "gazerunner/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gazerunner {
namespace {

void emit(SimState& state, Event event) {
    event.tick = state.tick;
    event.time = state.time();
    state.metrics.observe(event);
    state.log.append(std::move(event));
}

void emit_all(SimState& state, Events events) {
    for (auto& e : events) {
        emit(state, std::move(e));
    }
}

void spawn_from_tile(SimState& state, const Tile& tile) {
    Event tile_event;
    tile_event.kind = EventKind::TileSpawned;
    tile_event.data.tile = tile.index;
    emit(state, tile_event);
    if (!tile.spawn) {
        return;
    }
    const auto layout = state.config.box_layout();
    const double z = 0.5 * (tile.z_start + tile.z_end);
    const EntityId id = state.next_id++;
    AttentionState* attention = nullptr;
    switch (tile.spawn->kind) {
        case SpawnKind::Rock:
        case SpawnKind::Branch: {
            const auto kind = tile.spawn->kind == SpawnKind::Rock ? ObstacleKind::Rock : ObstacleKind::Branch;
            state.obstacles.push_back(make_obstacle(id, kind, tile.spawn->lane, z, layout));
            attention = &state.obstacles.back().attention;
            break;
        }
        case SpawnKind::Walker:
        case SpawnKind::Runner: {
            const auto kind = tile.spawn->kind == SpawnKind::Walker ? EnemyKind::Walker : EnemyKind::Runner;
            state.enemies.push_back(make_enemy(id, kind, tile.spawn->lane, z, layout));
            attention = &state.enemies.back().attention;
            break;
        }
    }
    Event spawned;
    spawned.kind = EventKind::EntitySpawned;
    spawned.id = id;
    spawned.data.entity = std::string(to_string(tile.spawn->kind));
    spawned.data.lane = std::string(to_string(tile.spawn->lane));
    spawned.data.tile = tile.index;
    spawned.data.z = z;
    if (state.config.attention_mode == AttentionMode::AutoNoticed) {
        attention->stage = AttentionStage::Noticed;
        attention->accumulated_dwell = state.config.attention.notice_threshold;
        emit(state, spawned);
        Event noticed;
        noticed.kind = EventKind::EntityNoticed;
        noticed.id = id;
        emit(state, noticed);
        return;
    }
    emit(state, spawned);
}

AttentionState* find_attention(SimState& state, EntityId id) {
    for (auto& o : state.obstacles) {
        if (o.id == id) return &o.attention;
    }
    for (auto& e : state.enemies) {
        if (e.id == id) return &e.attention;
    }
    return nullptr;
}

void resolve_gaze(SimState& state, const GazeSample& sample) {
    const auto targets = gaze_targets(state);
    const auto hit = resolve_attended(gaze_ray(state.camera(), sample.point), targets);
    if (!hit) {
        return;
    }
    AttentionState* attention = find_attention(state, *hit);
    const bool was_noticed = attention->noticed();
    *attention = accumulate_dwell(*attention, true, state.config.timestep, state.config.attention.notice_threshold);
    if (!was_noticed && attention->noticed()) {
        Event e;
        e.kind = EventKind::EntityNoticed;
        e.id = *hit;
        emit(state, e);
    }
}

}  // namespace

std::string_view to_string(AttentionMode mode) {
    return mode == AttentionMode::Tracked ? "tracked" : "auto";
}

std::optional<AttentionMode> attention_mode_from_string(std::string_view name) {
    if (name == "tracked") return AttentionMode::Tracked;
    if (name == "auto") return AttentionMode::AutoNoticed;
    return std::nullopt;
}

void SimConfig::validate() const {
    if (!(timestep > 0.0) || !std::isfinite(timestep)) {
        throw std::invalid_argument("config: timestep must be positive");
    }
    if (!(session_duration > 0.0) || !std::isfinite(session_duration)) {
        throw std::invalid_argument("config: session_duration must be positive");
    }
    attention.validate();
    world.validate();
    rules.validate();
    Camera probe;
    probe.horizontal_fov = camera.horizontal_fov;
    probe.aspect = camera.aspect;
    probe.validate();
    if (!(camera.eye_height > 0.0)) {
        throw std::invalid_argument("config: camera eye_height must be positive");
    }
}

std::int64_t session_ticks(const SimConfig& config) {
    return static_cast<std::int64_t>(std::ceil(config.session_duration / config.timestep - 1e-9));
}

double SessionMetrics::kill_ratio() const {
    return enemies_spawned == 0 ? 0.0 : 100.0 * static_cast<double>(enemies_killed) / static_cast<double>(enemies_spawned);
}

double SessionMetrics::noticed_ratio() const {
    return elements_spawned == 0 ? 0.0
                                 : 100.0 * static_cast<double>(elements_noticed) / static_cast<double>(elements_spawned);
}

void SessionMetrics::observe(const Event& event) {
    switch (event.kind) {
        case EventKind::EntitySpawned:
            ++elements_spawned;
            if (event.data.entity == "walker" || event.data.entity == "runner") {
                ++enemies_spawned;
            }
            break;
        case EventKind::EntityNoticed: ++elements_noticed; break;
        case EventKind::Shot:
            if (event.data.lethal.value_or(false)) ++enemies_killed;
            break;
        case EventKind::AvatarDeath: ++deaths; break;
        default: break;
    }
}

Camera SimState::camera() const {
    Camera cam;
    cam.position = {0.0, config.camera.eye_height, avatar.z};
    cam.horizontal_fov = config.camera.horizontal_fov;
    cam.aspect = config.camera.aspect;
    return cam;
}

SimState init_state(const SimConfig& config) {
    config.validate();
    SimState state;
    state.config = config;
    state.world = init_world(config.world, config.seed);
    state.avatar.speed = config.rules.avatar_speed;
    state.avatar.max_health = config.rules.max_health;
    state.avatar.health = config.rules.max_health;
    state.death_variants = Rng::stream(config.seed, "death_variant");
    const auto tiles = state.world.tiles;
    for (const auto& tile : tiles) {
        spawn_from_tile(state, tile);
    }
    return state;
}

std::vector<GazeTarget> gaze_targets(const SimState& state) {
    std::vector<GazeTarget> targets;
    targets.reserve(state.obstacles.size() + state.enemies.size());
    for (const auto& o : state.obstacles) {
        targets.push_back({o.id, o.gaze_box()});
    }
    for (const auto& e : state.enemies) {
        if (e.alive()) {
            targets.push_back({e.id, e.gaze_box()});
        }
    }
    return targets;
}

std::optional<AttentionState> attention_of(const SimState& state, EntityId id) {
    for (const auto& o : state.obstacles) {
        if (o.id == id) return o.attention;
    }
    for (const auto& e : state.enemies) {
        if (e.id == id) return e.attention;
    }
    return std::nullopt;
}

void tick(SimState& state, const InputFrame& input) {
    if (input.tick != state.tick) {
        throw std::invalid_argument("tick: input frame for tick " + std::to_string(input.tick) +
                                    " does not match state tick " + std::to_string(state.tick));
    }
    const auto& cfg = state.config;
    const double dt = cfg.timestep;
    const auto layout = cfg.box_layout();

    // (1) input
    auto& avatar = state.avatar;
    avatar.crosshair = ScreenPoint::clamped(avatar.crosshair.u + input.aim_du, avatar.crosshair.v + input.aim_dv);
    std::optional<GazeSample> sample;
    if (input.gaze && input.gaze->valid) {
        sample = GazeSample{state.time(), ScreenPoint::clamped(input.gaze->point.u, input.gaze->point.v), true};
    }

    // (2) motion
    const double previous_z = avatar.z;
    avatar.z = avatar.speed * dt * static_cast<double>(state.tick + 1);
    step_enemies(state.enemies, dt, layout);

    // (3) attention; AutoNoticed ignores the gaze channel entirely
    if (cfg.attention_mode == AttentionMode::Tracked && sample) {
        resolve_gaze(state, *sample);
        state.world.gaze.record(*sample, dt);
    }

    // (4) fire
    if (input.fire) {
        emit_all(state, fire(gaze_ray(state.camera(), avatar.crosshair), state.enemies, state.death_variants, cfg.rules));
    }

    // (5) box triggers
    const Aabb swept = avatar_box(avatar, previous_z);
    emit_all(state, resolve_box_triggers(avatar, swept, state.obstacles, state.enemies));
    emit_all(state, despawn_passed(swept, state.obstacles, state.enemies));

    // (6) death: grace window is the avatar's current tile and the next one
    const double tile_len = cfg.world.tile_length;
    const double tile_begin = std::floor(avatar.z / tile_len) * tile_len;
    emit_all(state, check_death_and_respawn(avatar, state.obstacles, state.enemies, tile_begin,
                                            tile_begin + 2.0 * tile_len));

    // (7) tiles
    const auto advance = advance_tiles(state.world, avatar.z);
    for (const auto index : advance.despawned) {
        Event e;
        e.kind = EventKind::TileDespawned;
        e.data.tile = index;
        emit(state, e);
    }
    for (const auto& tile : advance.spawned) {
        spawn_from_tile(state, tile);
    }

    ++state.tick;
}

TraceInput::TraceInput(std::vector<InputFrame> frames) : frames_(std::move(frames)) {
    for (std::size_t i = 0; i < frames_.size(); ++i) {
        if (frames_[i].tick < 0 || (i > 0 && frames_[i].tick <= frames_[i - 1].tick)) {
            throw std::invalid_argument("trace: ticks must be non-negative and strictly increasing");
        }
    }
}

InputFrame TraceInput::next(const SimState& state) {
    if (cursor_ < frames_.size() && frames_[cursor_].tick == state.tick) {
        return frames_[cursor_++];
    }
    if (cursor_ < frames_.size() && frames_[cursor_].tick < state.tick) {
        throw std::invalid_argument("trace: frame for tick " + std::to_string(frames_[cursor_].tick) +
                                    " arrived after tick " + std::to_string(state.tick));
    }
    InputFrame empty;
    empty.tick = state.tick;
    return empty;
}

SessionResult run_session(const SimConfig& config, InputSource& input) {
    SimState state = init_state(config);
    const std::int64_t ticks = session_ticks(config);
    SessionResult result;
    result.trace.reserve(static_cast<std::size_t>(ticks));
    for (std::int64_t k = 0; k < ticks; ++k) {
        InputFrame frame = input.next(state);
        tick(state, frame);
        result.trace.push_back(std::move(frame));
    }
    result.metrics = state.metrics;
    result.log = std::move(state.log);
    result.ticks = ticks;
    return result;
}

SessionResult run_session(const SimConfig& config, std::span<const InputFrame> trace) {
    const std::int64_t ticks = session_ticks(config);
    for (const auto& f : trace) {
        if (f.tick >= ticks) {
            throw std::invalid_argument("trace: tick " + std::to_string(f.tick) + " beyond session of " +
                                        std::to_string(ticks) + " ticks");
        }
    }
    TraceInput input({trace.begin(), trace.end()});
    return run_session(config, input);
}

MeanSte mean_ste(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean_ste: no values");
    }
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() == 1) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    return {mean, sd / std::sqrt(n)};
}

AggregateReport aggregate_sessions(std::span<const SessionMetrics> sessions) {
    if (sessions.empty()) {
        throw std::invalid_argument("aggregate_sessions: need at least one session");
    }
    auto column = [&](auto getter) {
        std::vector<double> values;
        values.reserve(sessions.size());
        for (const auto& m : sessions) {
            values.push_back(static_cast<double>(getter(m)));
        }
        return mean_ste(values);
    };
    AggregateReport report;
    report.sessions = sessions.size();
    report.kill_ratio = column([](const SessionMetrics& m) { return m.kill_ratio(); });
    report.noticed_ratio = column([](const SessionMetrics& m) { return m.noticed_ratio(); });
    report.deaths = column([](const SessionMetrics& m) { return m.deaths; });
    report.enemies_spawned = column([](const SessionMetrics& m) { return m.enemies_spawned; });
    report.enemies_killed = column([](const SessionMetrics& m) { return m.enemies_killed; });
    report.elements_spawned = column([](const SessionMetrics& m) { return m.elements_spawned; });
    report.elements_noticed = column([](const SessionMetrics& m) { return m.elements_noticed; });
    return report;
}

}  // namespace gazerunner
