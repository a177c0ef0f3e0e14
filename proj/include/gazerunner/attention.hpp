#pragma once

#include "gazerunner/geometry.hpp"
#include "gazerunner/rng.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace gazerunner {

using EntityId = std::uint32_t;

struct GazeSample {
    double time = 0.0;
    ScreenPoint point;
    bool valid = false;

    friend bool operator==(const GazeSample&, const GazeSample&) = default;
};

enum class AttentionStage { Unseen, Gazed, Noticed };

std::string_view to_string(AttentionStage stage);

/// Dwell accumulates and never decays; Noticed is absorbing.
struct AttentionState {
    AttentionStage stage = AttentionStage::Unseen;
    double accumulated_dwell = 0.0;

    bool noticed() const { return stage == AttentionStage::Noticed; }
    friend bool operator==(const AttentionState&, const AttentionState&) = default;
};

inline constexpr double kDefaultNoticeThreshold = 0.5;

struct AttentionConfig {
    double notice_threshold = kDefaultNoticeThreshold;
    /// Gaze boxes are the entity's body box scaled by this factor about its
    /// center, to absorb tracker inaccuracy.
    double gaze_box_scale = 1.5;

    void validate() const;
};

/// Slack on the threshold comparison so that n * dt summed in floating point
/// still crosses a threshold that n * dt reaches in exact arithmetic.
inline constexpr double kDwellEpsilon = 1e-9;

AttentionState accumulate_dwell(AttentionState state, bool attended, double dt,
                                double notice_threshold = kDefaultNoticeThreshold);

struct GazeTarget {
    EntityId id = 0;
    Aabb box;
};

/// Closest target hit by the ray; equal distances go to the lower id.
std::optional<EntityId> resolve_attended(const Ray& ray, std::span<const GazeTarget> targets);

enum class ScreenRegion : std::uint8_t { Left = 0, Center = 1, Right = 2 };

std::string_view to_string(ScreenRegion region);

ScreenRegion classify_region(ScreenPoint s);

struct RegionHistogram {
    std::array<double, 3> seconds{};

    double& operator[](ScreenRegion r) { return seconds[static_cast<std::size_t>(r)]; }
    double operator[](ScreenRegion r) const { return seconds[static_cast<std::size_t>(r)]; }
    double total() const { return seconds[0] + seconds[1] + seconds[2]; }

    friend RegionHistogram operator+(const RegionHistogram& a, const RegionHistogram& b);
    friend bool operator==(const RegionHistogram&, const RegionHistogram&) = default;
};

/// Adds dt to the sample's region; invalid samples change nothing.
RegionHistogram update_histogram(RegionHistogram hist, const GazeSample& sample, double dt);

/// Left or Right, whichever holds less gaze time. Exact ties draw one coin
/// from `tiebreak`; otherwise the generator is left untouched.
ScreenRegion least_gazed_side(const RegionHistogram& hist, Rng& tiebreak);

/// Gaze histogram over the avatar's traversal of recent tiles. `current`
/// fills while the avatar runs over its present tile; each boundary
/// crossing shifts it into the two-tile window.
class GazeWindow {
public:
    void record(const GazeSample& sample, double dt) { current_ = update_histogram(current_, sample, dt); }
    void roll() {
        older_ = previous_;
        previous_ = current_;
        current_ = {};
    }
    /// Gaze accumulated over the two most recently completed tiles.
    RegionHistogram two_tile() const { return previous_ + older_; }
    const RegionHistogram& current() const { return current_; }

private:
    RegionHistogram current_;
    RegionHistogram previous_;
    RegionHistogram older_;
};

}  // namespace gazerunner
