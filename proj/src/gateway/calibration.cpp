#include "gazerunner/gateway/calibration.hpp"

#include <cmath>
#include <stdexcept>

namespace gazerunner::gateway {

std::array<ScreenPoint, kCalibrationTargets> calibration_targets() {
    std::array<ScreenPoint, kCalibrationTargets> out;
    constexpr double kCoords[] = {0.1, 0.5, 0.9};
    for (std::size_t row = 0; row < 3; ++row) {
        for (std::size_t col = 0; col < 3; ++col) {
            out[row * 3 + col] = {kCoords[col], kCoords[row]};
        }
    }
    return out;
}

void CalibrationConfig::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("calibration radius must be > 0");
    if (!(pass_fraction >= 0.0 && pass_fraction <= 1.0)) {
        throw std::invalid_argument("calibration pass_fraction must be in [0,1]");
    }
    if (min_samples < 1) throw std::invalid_argument("calibration min_samples must be >= 1");
}

CalibrationResult score_calibration(std::span<const std::vector<ScreenPoint>> samples,
                                    const CalibrationConfig& config) {
    config.validate();
    if (samples.size() != kCalibrationTargets) {
        throw std::invalid_argument("calibration needs samples for exactly 9 targets");
    }
    const auto targets = calibration_targets();
    CalibrationResult result;
    result.complete = true;
    bool all_above = true;
    for (std::size_t i = 0; i < kCalibrationTargets; ++i) {
        std::size_t inside = 0;
        for (const auto& p : samples[i]) {
            if (std::hypot(p.u - targets[i].u, p.v - targets[i].v) <= config.radius + 1e-12) ++inside;
        }
        const std::size_t n = samples[i].size();
        const double fraction = n == 0 ? 0.0 : static_cast<double>(inside) / static_cast<double>(n);
        result.fractions.push_back(fraction);
        result.samples.push_back(n);
        if (n < config.min_samples) result.complete = false;
        if (fraction < config.pass_fraction) all_above = false;
    }
    result.pass = result.complete && all_above;
    return result;
}

nlohmann::json to_json(const CalibrationResult& r) {
    return {{"type", "CalibrationResult"},
            {"fractions", r.fractions},
            {"samples", r.samples},
            {"complete", r.complete},
            {"pass", r.pass}};
}

}  // namespace gazerunner::gateway
