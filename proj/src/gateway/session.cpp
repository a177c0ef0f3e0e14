#include "gazerunner/gateway/session.hpp"

#include "gazerunner/gateway/protocol.hpp"
#include "gazerunner/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace gazerunner::gateway {

using nlohmann::json;

void GatewayConfig::validate() const {
    sim.validate();
    calibration.validate();
    if (!(snapshot_hz > 0.0) || !std::isfinite(snapshot_hz)) {
        throw std::invalid_argument("snapshot_hz must be > 0");
    }
    if (snapshot_hz * sim.timestep > 1.0 + 1e-9) {
        throw std::invalid_argument("snapshot_hz cannot exceed the tick rate");
    }
}

std::int64_t GatewayConfig::snapshot_interval() const {
    return std::max<std::int64_t>(1, std::llround(1.0 / (snapshot_hz * sim.timestep)));
}

std::string_view to_string(SessionStatus status) {
    return status == SessionStatus::Completed ? "completed" : "aborted";
}

GatewaySession::GatewaySession(GatewayConfig config) : config_(std::move(config)) { config_.validate(); }

Outgoing GatewaySession::violation(std::string_view reason) {
    if (phase_ == Phase::Running) {
        abort_pending_ = true;
    } else {
        phase_ = Phase::Ended;
    }
    return {{error_message(reason).dump()}, true};
}

Outgoing GatewaySession::handle(std::string_view text) {
    std::lock_guard lock(mutex_);
    if (phase_ == Phase::Ended || abort_pending_ || end_pending_) return {};

    ClientMessage message;
    try {
        message = parse_client_message(text);
    } catch (const ProtocolError& e) {
        return violation(e.what());
    }

    if (phase_ == Phase::AwaitHello) {
        const auto* hello = std::get_if<Hello>(&message);
        if (!hello) return violation("expected Hello first");
        if (hello->protocol_version != kProtocolVersion) {
            return violation("unsupported protocol version " + std::to_string(hello->protocol_version));
        }
        phase_ = Phase::Idle;
        return {{hello_message().dump()}, false};
    }

    return std::visit(
        [&](const auto& m) -> Outgoing {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Hello>) {
                return violation("duplicate Hello");
            } else if constexpr (std::is_same_v<T, StartSession>) {
                if (phase_ != Phase::Idle) return violation("session already started");
                phase_ = Phase::Running;
                mode_ = m.mode;
                start_pending_ = true;
                return {};
            } else if constexpr (std::is_same_v<T, Gaze>) {
                if (phase_ == Phase::Running) queue_.push_gaze({m.u, m.v}, m.valid);
                return {};
            } else if constexpr (std::is_same_v<T, Aim>) {
                if (phase_ == Phase::Running) queue_.push_aim(m.du, m.dv);
                return {};
            } else if constexpr (std::is_same_v<T, Fire>) {
                if (phase_ == Phase::Running) queue_.push_fire();
                return {};
            } else if constexpr (std::is_same_v<T, CalibrationSample>) {
                if (phase_ != Phase::Idle) return violation("calibration is only possible before the session");
                if (m.target_index < 0 || m.target_index >= static_cast<int>(kCalibrationTargets)) {
                    return violation("calibration target_index out of range");
                }
                calibration_[static_cast<std::size_t>(m.target_index)].push_back({m.u, m.v});
                return {};
            } else if constexpr (std::is_same_v<T, CalibrationEnd>) {
                if (phase_ != Phase::Idle) return violation("calibration is only possible before the session");
                const auto result = score_calibration(calibration_, config_.calibration);
                for (auto& samples : calibration_) samples.clear();
                return {{to_json(result).dump()}, false};
            } else {
                if (phase_ != Phase::Running) return violation("no session running");
                end_pending_ = true;
                return {};
            }
        },
        message);
}

void GatewaySession::disconnect() {
    std::lock_guard lock(mutex_);
    if (phase_ == Phase::Running) {
        abort_pending_ = true;
    } else {
        phase_ = Phase::Ended;
    }
}

Outgoing GatewaySession::step() {
    bool start = false;
    bool end = false;
    bool abort = false;
    AttentionMode mode = AttentionMode::Tracked;
    {
        std::lock_guard lock(mutex_);
        if (phase_ != Phase::Running) return {};
        start = std::exchange(start_pending_, false);
        end = end_pending_;
        abort = abort_pending_;
        mode = mode_;
    }

    Outgoing out;
    if (start) {
        SimConfig cfg = config_.sim;
        cfg.attention_mode = mode;
        state_.emplace(init_state(cfg));
        trace_.clear();
        out.messages.push_back(to_json(make_snapshot(*state_)).dump());
    }
    if (abort || end) {
        // An aborted connection has nobody left to read the summary.
        auto tail = finish(SessionStatus::Aborted);
        if (!abort) out.messages.insert(out.messages.end(), tail.messages.begin(), tail.messages.end());
        out.close = true;
        return out;
    }

    const InputFrame frame = queue_.drain(state_->tick, state_->time());
    tick(*state_, frame);
    trace_.push_back(frame);

    const bool last = state_->tick >= session_ticks(state_->config);
    if (state_->tick % config_.snapshot_interval() == 0 || last) {
        out.messages.push_back(to_json(make_snapshot(*state_)).dump());
    }
    if (last) {
        auto tail = finish(SessionStatus::Completed);
        out.messages.insert(out.messages.end(), tail.messages.begin(), tail.messages.end());
        out.close = true;
    }
    return out;
}

Outgoing GatewaySession::finish(SessionStatus status) {
    SessionRecord record;
    record.status = status;
    record.config = state_->config;
    record.ticks = state_->tick;
    record.metrics = state_->metrics;
    record.log = state_->log;
    record.trace = std::move(trace_);
    trace_.clear();
    queue_.reset();

    json ended{{"type", "SessionEnded"},
               {"status", std::string(to_string(status))},
               {"ticks", record.ticks},
               {"digest", record.log.digest_hex()},
               {"metrics", metrics_to_json(record.metrics)}};
    if (config_.record_dir) write_record(record);

    std::lock_guard lock(mutex_);
    record_ = std::move(record);
    phase_ = Phase::Ended;
    return {{ended.dump()}, true};
}

void GatewaySession::write_record(const SessionRecord& record) const {
    namespace fs = std::filesystem;
    const fs::path dir = *config_.record_dir;
    fs::create_directories(dir);
    std::ofstream(dir / "config.json") << config_to_json(record.config).dump(2) << '\n';
    {
        std::ofstream trace(dir / "trace.csv");
        write_trace(trace, record.trace);
    }
    {
        std::ofstream events(dir / "events.ndjson");
        record.log.write_ndjson(events);
    }
    json metrics = metrics_to_json(record.metrics);
    metrics["status"] = std::string(to_string(record.status));
    metrics["ticks"] = record.ticks;
    metrics["seed"] = record.config.seed;
    metrics["digest"] = record.log.digest_hex();
    std::ofstream(dir / "metrics.json") << metrics.dump(2) << '\n';
    std::ofstream(dir / "digest.txt") << "session_1 " << record.log.digest_hex() << '\n';
}

bool GatewaySession::finished() const {
    std::lock_guard lock(mutex_);
    return phase_ == Phase::Ended;
}

std::optional<SessionRecord> GatewaySession::record() const {
    std::lock_guard lock(mutex_);
    return record_;
}

}  // namespace gazerunner::gateway
