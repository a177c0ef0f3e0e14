#pragma once

#include "gazerunner/geometry.hpp"

#include <json.hpp>

#include <array>
#include <span>
#include <vector>

namespace gazerunner::gateway {

inline constexpr std::size_t kCalibrationTargets = 9;

/// Nine-point layout, row by row from the top left: u, v in {0.1, 0.5, 0.9}.
std::array<ScreenPoint, kCalibrationTargets> calibration_targets();

struct CalibrationConfig {
    double radius = 0.05;
    double pass_fraction = 0.9;
    std::size_t min_samples = 30;

    void validate() const;
};

struct CalibrationResult {
    std::vector<double> fractions;
    std::vector<std::size_t> samples;
    /// False when some target has fewer than min_samples; never passes then.
    bool complete = false;
    bool pass = false;
};

/// `samples[i]` holds the gaze points recorded while target i was shown.
/// A sample on the circle boundary counts as inside.
CalibrationResult score_calibration(std::span<const std::vector<ScreenPoint>> samples,
                                    const CalibrationConfig& config = {});

nlohmann::json to_json(const CalibrationResult& result);

}  // namespace gazerunner::gateway
