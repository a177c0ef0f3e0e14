#include "gazerunner/gateway/input_queue.hpp"

#include <algorithm>

namespace gazerunner::gateway {
namespace {

// The crosshair lives in [0,1]; a larger move in one tick is meaningless.
double clamp_delta(double d) { return std::clamp(d, -1.0, 1.0); }

}  // namespace

void InputQueue::push_gaze(ScreenPoint point, bool valid) {
    std::lock_guard lock(mutex_);
    gaze_ = GazeSample{0.0, ScreenPoint::clamped(point.u, point.v), valid};
    ++gaze_received_;
}

void InputQueue::push_aim(double du, double dv) {
    std::lock_guard lock(mutex_);
    aim_du_ = clamp_delta(aim_du_ + clamp_delta(du));
    aim_dv_ = clamp_delta(aim_dv_ + clamp_delta(dv));
}

void InputQueue::push_fire() {
    std::lock_guard lock(mutex_);
    fire_ = true;
}

InputFrame InputQueue::drain(std::int64_t tick, double time) {
    std::lock_guard lock(mutex_);
    InputFrame frame;
    frame.tick = tick;
    if (gaze_) {
        frame.gaze = *gaze_;
        frame.gaze->time = time;
    }
    frame.aim_du = aim_du_;
    frame.aim_dv = aim_dv_;
    frame.fire = fire_;
    aim_du_ = aim_dv_ = 0.0;
    fire_ = false;
    return frame;
}

void InputQueue::reset() {
    std::lock_guard lock(mutex_);
    gaze_.reset();
    aim_du_ = aim_dv_ = 0.0;
    fire_ = false;
}

std::uint64_t InputQueue::gaze_received() const {
    std::lock_guard lock(mutex_);
    return gaze_received_;
}

}  // namespace gazerunner::gateway
