#pragma once

#include "gazerunner/attention.hpp"
#include "gazerunner/event_log.hpp"
#include "gazerunner/geometry.hpp"
#include "gazerunner/rng.hpp"
#include "gazerunner/rules.hpp"
#include "gazerunner/worldgen.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace gazerunner {

enum class AttentionMode : std::uint8_t {
    Tracked,
    /// Eye tracking off: every entity is labelled noticed when it spawns.
    AutoNoticed,
};

std::string_view to_string(AttentionMode mode);
std::optional<AttentionMode> attention_mode_from_string(std::string_view name);

struct CameraConfig {
    double horizontal_fov = 1.5707963267948966;
    double aspect = 16.0 / 9.0;
    double eye_height = 1.7;
};

struct SimConfig {
    std::uint64_t seed = 1;
    double timestep = 1.0 / 60.0;
    double session_duration = 120.0;
    AttentionMode attention_mode = AttentionMode::Tracked;
    AttentionConfig attention;
    WorldgenConfig world;
    RulesConfig rules;
    CameraConfig camera;

    /// Throws std::invalid_argument on the first violated constraint.
    void validate() const;
    BoxLayout box_layout() const { return {world, rules, attention.gaze_box_scale}; }
};

/// Number of ticks in a session: ceil(duration / timestep), robust to the
/// rounding of duration / timestep landing just above an integer.
std::int64_t session_ticks(const SimConfig& config);

struct InputFrame {
    std::int64_t tick = 0;
    std::optional<GazeSample> gaze;
    double aim_du = 0.0;
    double aim_dv = 0.0;
    bool fire = false;

    friend bool operator==(const InputFrame&, const InputFrame&) = default;
};

struct SessionMetrics {
    std::int64_t enemies_spawned = 0;
    std::int64_t enemies_killed = 0;
    std::int64_t elements_spawned = 0;
    std::int64_t elements_noticed = 0;
    std::int64_t deaths = 0;

    /// 100 * killed / spawned, 0 when nothing spawned.
    double kill_ratio() const;
    /// 100 * noticed / spawned, 0 when nothing spawned.
    double noticed_ratio() const;

    void observe(const Event& event);

    friend bool operator==(const SessionMetrics&, const SessionMetrics&) = default;
};

struct SimState {
    SimConfig config;
    std::int64_t tick = 0;
    Avatar avatar;
    World world;
    std::vector<Obstacle> obstacles;
    std::vector<Enemy> enemies;
    EntityId next_id = 1;
    Rng death_variants;
    EventLog log;
    SessionMetrics metrics;

    double time() const { return static_cast<double>(tick) * config.timestep; }
    Camera camera() const;
};

/// Builds the initial world and spawns its entities.
SimState init_state(const SimConfig& config);

/// Advances one fixed step. Order: input, motion, attention, fire, box
/// triggers, death check, tile advance and spawning. Throws
/// std::invalid_argument if `input.tick` is not the state's current tick.
void tick(SimState& state, const InputFrame& input);

/// Targets for gaze resolution: every live entity's gaze box.
std::vector<GazeTarget> gaze_targets(const SimState& state);

/// Looks up the attention of an entity that is still live.
std::optional<AttentionState> attention_of(const SimState& state, EntityId id);

/// Produces the input frame for the state's current tick.
class InputSource {
public:
    virtual ~InputSource() = default;
    virtual InputFrame next(const SimState& state) = 0;
};

/// Replays recorded frames; ticks without a frame get an empty one.
class TraceInput : public InputSource {
public:
    /// Frames must have strictly increasing ticks.
    explicit TraceInput(std::vector<InputFrame> frames);
    InputFrame next(const SimState& state) override;

private:
    std::vector<InputFrame> frames_;
    std::size_t cursor_ = 0;
};

struct SessionResult {
    SessionMetrics metrics;
    EventLog log;
    std::int64_t ticks = 0;
    /// Every frame consumed, one per tick.
    std::vector<InputFrame> trace;
};

SessionResult run_session(const SimConfig& config, InputSource& input);
SessionResult run_session(const SimConfig& config, std::span<const InputFrame> trace);

struct MeanSte {
    double mean = 0.0;
    double ste = 0.0;
};

/// Mean and standard error of the mean; a single value has ste 0.
MeanSte mean_ste(std::span<const double> values);

struct AggregateReport {
    std::size_t sessions = 0;
    MeanSte kill_ratio;
    MeanSte noticed_ratio;
    MeanSte deaths;
    MeanSte enemies_spawned;
    MeanSte enemies_killed;
    MeanSte elements_spawned;
    MeanSte elements_noticed;
};

/// Throws std::invalid_argument on an empty list.
AggregateReport aggregate_sessions(std::span<const SessionMetrics> sessions);

}  // namespace gazerunner
