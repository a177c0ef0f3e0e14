#pragma once

#include "gazerunner/engine.hpp"
#include "gazerunner/gateway/calibration.hpp"
#include "gazerunner/gateway/input_queue.hpp"

#include <array>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazerunner::gateway {

struct GatewayConfig {
    SimConfig sim;
    double snapshot_hz = 30.0;
    CalibrationConfig calibration;
    /// Session artifacts go here when set.
    std::optional<std::filesystem::path> record_dir;

    void validate() const;
    /// Ticks between snapshots.
    std::int64_t snapshot_interval() const;
};

enum class SessionStatus { Completed, Aborted };

std::string_view to_string(SessionStatus status);

struct SessionRecord {
    SessionStatus status = SessionStatus::Aborted;
    SimConfig config;
    std::int64_t ticks = 0;
    SessionMetrics metrics;
    EventLog log;
    std::vector<InputFrame> trace;
};

/// Messages to send, in order, and whether to close the connection after.
struct Outgoing {
    std::vector<std::string> messages;
    bool close = false;
};

/// One client's conversation with the engine, independent of transport.
/// handle() and disconnect() may be called from the network thread while
/// step() runs on the tick thread; only step() touches the engine.
class GatewaySession {
public:
    explicit GatewaySession(GatewayConfig config);

    /// Reacts to one client message. Protocol violations produce an Error
    /// message and close; they never reach the engine.
    Outgoing handle(std::string_view text);
    /// The client went away. A running session is aborted on the next step.
    void disconnect();

    /// Advances the running session by one tick, if any.
    Outgoing step();

    bool finished() const;
    /// Set once a started session has finished.
    std::optional<SessionRecord> record() const;
    const InputQueue& queue() const { return queue_; }

private:
    enum class Phase { AwaitHello, Idle, Running, Ended };

    Outgoing violation(std::string_view reason);
    Outgoing finish(SessionStatus status);
    void write_record(const SessionRecord& record) const;

    GatewayConfig config_;
    InputQueue queue_;

    mutable std::mutex mutex_;
    Phase phase_ = Phase::AwaitHello;
    AttentionMode mode_ = AttentionMode::Tracked;
    bool start_pending_ = false;
    bool end_pending_ = false;
    bool abort_pending_ = false;
    std::array<std::vector<ScreenPoint>, kCalibrationTargets> calibration_;
    std::optional<SessionRecord> record_;

    // Tick thread only.
    std::optional<SimState> state_;
    std::vector<InputFrame> trace_;
};

}  // namespace gazerunner::gateway
