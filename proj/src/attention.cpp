#include "gazerunner/attention.hpp"

#include <cmath>
#include <stdexcept>

namespace gazerunner {

std::string_view to_string(AttentionStage stage) {
    switch (stage) {
        case AttentionStage::Unseen: return "unseen";
        case AttentionStage::Gazed: return "gazed";
        case AttentionStage::Noticed: return "noticed";
    }
    return "unknown";
}

std::string_view to_string(ScreenRegion region) {
    switch (region) {
        case ScreenRegion::Left: return "left";
        case ScreenRegion::Center: return "center";
        case ScreenRegion::Right: return "right";
    }
    return "unknown";
}

void AttentionConfig::validate() const {
    if (!(notice_threshold > 0.0) || !std::isfinite(notice_threshold)) {
        throw std::invalid_argument("attention: notice_threshold must be positive");
    }
    if (!(gaze_box_scale > 0.0) || !std::isfinite(gaze_box_scale)) {
        throw std::invalid_argument("attention: gaze_box_scale must be positive");
    }
}

AttentionState accumulate_dwell(AttentionState state, bool attended, double dt, double notice_threshold) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("accumulate_dwell: dt must be positive");
    }
    if (!attended) {
        return state;
    }
    state.accumulated_dwell += dt;
    if (state.stage == AttentionStage::Unseen) {
        state.stage = AttentionStage::Gazed;
    }
    if (state.accumulated_dwell + kDwellEpsilon >= notice_threshold) {
        state.stage = AttentionStage::Noticed;
    }
    return state;
}

std::optional<EntityId> resolve_attended(const Ray& ray, std::span<const GazeTarget> targets) {
    std::optional<EntityId> best;
    double best_t = 0.0;
    for (const auto& target : targets) {
        const auto t = ray_aabb(ray, target.box);
        if (!t) {
            continue;
        }
        if (!best || *t < best_t || (*t == best_t && target.id < *best)) {
            best = target.id;
            best_t = *t;
        }
    }
    return best;
}

ScreenRegion classify_region(ScreenPoint s) {
    if (s.u < 1.0 / 3.0) {
        return ScreenRegion::Left;
    }
    if (s.u > 2.0 / 3.0) {
        return ScreenRegion::Right;
    }
    return ScreenRegion::Center;
}

RegionHistogram operator+(const RegionHistogram& a, const RegionHistogram& b) {
    RegionHistogram out;
    for (std::size_t i = 0; i < out.seconds.size(); ++i) {
        out.seconds[i] = a.seconds[i] + b.seconds[i];
    }
    return out;
}

RegionHistogram update_histogram(RegionHistogram hist, const GazeSample& sample, double dt) {
    if (!sample.valid) {
        return hist;
    }
    hist[classify_region(sample.point)] += dt;
    return hist;
}

ScreenRegion least_gazed_side(const RegionHistogram& hist, Rng& tiebreak) {
    const double left = hist[ScreenRegion::Left];
    const double right = hist[ScreenRegion::Right];
    if (left < right) {
        return ScreenRegion::Left;
    }
    if (right < left) {
        return ScreenRegion::Right;
    }
    return tiebreak.bernoulli(0.5) ? ScreenRegion::Left : ScreenRegion::Right;
}

}  // namespace gazerunner
