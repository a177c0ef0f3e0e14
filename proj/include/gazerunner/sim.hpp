#pragma once

#include "gazerunner/engine.hpp"
#include "gazerunner/geometry.hpp"
#include "gazerunner/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazerunner::sim {

/// Screen point that, cast back through the camera, lands on `target`'s
/// gaze box before any other entity's. Falls back to the screen center when
/// the target is gone or off-screen.
ScreenPoint project_gaze(const SimState& state, const Camera& camera, EntityId target);

/// Synthetic gaze source. Every call returns a clamped, valid point.
class GazePolicy {
public:
    virtual ~GazePolicy() = default;
    virtual ScreenPoint gaze(const SimState& state) = 0;
};

/// Looks at the nearest entity not yet noticed and stays on it until it is
/// noticed. With nothing left to notice it watches the nearest walking
/// enemy, then the screen center.
class PerfectPolicy : public GazePolicy {
public:
    ScreenPoint gaze(const SimState& state) override;
    std::optional<EntityId> target() const { return target_; }

private:
    std::optional<EntityId> target_;
};

/// Adds isotropic Gaussian noise (normalized screen units) to another policy.
class JitterPolicy : public GazePolicy {
public:
    JitterPolicy(std::unique_ptr<GazePolicy> inner, double sigma, Rng rng);
    ScreenPoint gaze(const SimState& state) override;

private:
    std::unique_ptr<GazePolicy> inner_;
    double sigma_;
    Rng rng_;
};

/// Fixed gaze point; the default top-left corner never meets an entity.
class BlindPolicy : public GazePolicy {
public:
    explicit BlindPolicy(ScreenPoint point = {0.0, 0.0}) : point_(point) {}
    ScreenPoint gaze(const SimState&) override { return point_; }

private:
    ScreenPoint point_;
};

/// Scripted aiming: the crosshair follows the gaze point at a bounded
/// slew rate and fires at a walking enemy under it, with a cooldown.
struct ShooterConfig {
    double slew_rate = 2.0;      // screen units per second
    double fire_interval = 0.5;  // seconds
    /// Hold fire until the enemy under the crosshair is noticed.
    bool hold_until_noticed = true;
};

class PolicyInput : public InputSource {
public:
    PolicyInput(std::unique_ptr<GazePolicy> policy, ShooterConfig shooter = {});
    InputFrame next(const SimState& state) override;

private:
    std::unique_ptr<GazePolicy> policy_;
    ShooterConfig shooter_;
    double next_fire_time_ = 0.0;
};

enum class PolicyKind { Perfect, Jitter, Blind, Trace };

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> policy_from_string(std::string_view name);

/// Visual angle to normalized screen units, assuming the display spans
/// `display_span_rad` of the player's vertical field of view.
double visual_angle_to_screen(double angle_rad, double display_span_rad = 0.52);

inline constexpr double kDefaultSigma = 0.015;

struct RunSpec {
    SimConfig config;
    PolicyKind policy = PolicyKind::Perfect;
    double sigma = kDefaultSigma;
    std::vector<InputFrame> trace;  // used by PolicyKind::Trace
    int sessions = 1;
    unsigned jobs = 0;  // 0: one worker per hardware thread
};

/// Seed of session `index` (0-based) under master seed `seed`.
std::uint64_t session_seed(std::uint64_t seed, int index);

/// Runs one session of `policy` with `config.seed` as the session seed.
SessionResult run_policy_session(const SimConfig& config, PolicyKind policy, double sigma,
                                 const std::vector<InputFrame>& trace = {});

struct RunResult {
    std::vector<SessionResult> sessions;
    AggregateReport aggregate;
};

/// Runs every session, in parallel when jobs allow. Throws
/// std::invalid_argument on a bad spec or a trace that does not fit.
RunResult run(const RunSpec& spec);

/// Writes session_<n>/{metrics.json,events.ndjson,trace.csv},
/// aggregate.json and digest.txt under `out`.
void write_artifacts(const RunResult& result, const RunSpec& spec, const std::filesystem::path& out);

/// `session_<n> <16 hex digits>` per line.
std::string format_digests(const RunResult& result);
std::map<std::string, std::string> parse_digests(const std::string& text);

}  // namespace gazerunner::sim
