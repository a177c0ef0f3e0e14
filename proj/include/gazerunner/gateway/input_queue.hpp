#pragma once

#include "gazerunner/engine.hpp"

#include <cstdint>
#include <mutex>
#include <optional>

namespace gazerunner::gateway {

/// Collects input from the network thread between ticks. Storage is
/// constant-size however fast messages arrive: gaze keeps only the latest
/// sample, aim deltas are summed, fire is a flag.
class InputQueue {
public:
    void push_gaze(ScreenPoint point, bool valid);
    void push_aim(double du, double dv);
    void push_fire();

    /// Builds the frame for `tick` and clears aim and fire. The latest gaze
    /// sample is kept and reused until a newer one arrives.
    InputFrame drain(std::int64_t tick, double time);

    /// Forget all pending input, including the held gaze sample.
    void reset();

    std::uint64_t gaze_received() const;

private:
    mutable std::mutex mutex_;
    std::optional<GazeSample> gaze_;
    double aim_du_ = 0.0;
    double aim_dv_ = 0.0;
    bool fire_ = false;
    std::uint64_t gaze_received_ = 0;
};

}  // namespace gazerunner::gateway
