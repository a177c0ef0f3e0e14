#include "gazerunner/sim.hpp"

#include "gazerunner/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gazerunner::sim {
namespace {

std::optional<Aabb> gaze_box_of(const std::vector<GazeTarget>& targets, EntityId id) {
    for (const auto& t : targets) {
        if (t.id == id) return t.box;
    }
    return std::nullopt;
}

// Distance along the camera ray through the box center at which the ray
// enters the box.
std::optional<double> approach_distance(const Camera& camera, const Aabb& box) {
    const Vec3 to_center = box.center() - camera.position;
    if (length(to_center) == 0.0) return 0.0;
    return ray_aabb(Ray::make(camera.position, to_center), box);
}

std::vector<Vec3> probe_points(const Aabb& box) {
    const Vec3 c = box.center();
    const Vec3 h = box.half_extents() * 0.8;
    std::vector<Vec3> points{c};
    for (double fx : {-1.0, 0.0, 1.0}) {
        for (double fy : {-1.0, 0.0, 1.0}) {
            for (double fz : {-1.0, 0.0, 1.0}) {
                if (fx == 0.0 && fy == 0.0 && fz == 0.0) continue;
                points.push_back({c.x + fx * h.x, c.y + fy * h.y, c.z + fz * h.z});
            }
        }
    }
    return points;
}

// Screen rectangle covered by the box's projected corners, clipped to the
// screen. Absent when no corner is in view.
std::optional<std::pair<ScreenPoint, ScreenPoint>> screen_bounds(const Camera& camera, const Aabb& box) {
    std::optional<std::pair<ScreenPoint, ScreenPoint>> out;
    for (double x : {box.min.x, box.max.x}) {
        for (double y : {box.min.y, box.max.y}) {
            for (double z : {box.min.z, box.max.z}) {
                const auto s = project_to_screen(camera, {x, y, z});
                if (!s) continue;
                if (!out) {
                    out.emplace(*s, *s);
                    continue;
                }
                out->first = {std::min(out->first.u, s->u), std::min(out->first.v, s->v)};
                out->second = {std::max(out->second.u, s->u), std::max(out->second.v, s->v)};
            }
        }
    }
    return out;
}

}  // namespace

ScreenPoint project_gaze(const SimState& state, const Camera& camera, EntityId target) {
    const auto targets = gaze_targets(state);
    const auto box = gaze_box_of(targets, target);
    if (!box) {
        return {};
    }
    // The box center normally wins; probe the rest of the box when a nearer
    // entity occludes it.
    for (const Vec3& p : probe_points(*box)) {
        const auto s = project_to_screen(camera, p);
        if (!s) continue;
        if (resolve_attended(gaze_ray(camera, *s), targets) == target) {
            return *s;
        }
    }
    // Heavily occluded: search the target's screen footprint.
    if (const auto bounds = screen_bounds(camera, *box)) {
        constexpr int kGrid = 24;
        const auto [lo, hi] = *bounds;
        for (int i = 0; i <= kGrid; ++i) {
            for (int j = 0; j <= kGrid; ++j) {
                const ScreenPoint s{lo.u + (hi.u - lo.u) * i / kGrid, lo.v + (hi.v - lo.v) * j / kGrid};
                if (resolve_attended(gaze_ray(camera, s), targets) == target) {
                    return s;
                }
            }
        }
    }
    return project_to_screen(camera, box->center()).value_or(ScreenPoint{});
}

ScreenPoint PerfectPolicy::gaze(const SimState& state) {
    const Camera camera = state.camera();
    if (target_) {
        const auto attention = attention_of(state, *target_);
        if (!attention || attention->noticed()) {
            target_.reset();
        }
    }
    if (!target_) {
        std::optional<double> best_t;
        for (const auto& t : gaze_targets(state)) {
            const auto attention = attention_of(state, t.id);
            if (!attention || attention->noticed()) continue;
            if (!project_to_screen(camera, t.box.center())) continue;
            const auto d = approach_distance(camera, t.box);
            if (!d) continue;
            if (!best_t || *d < *best_t || (*d == *best_t && t.id < *target_)) {
                best_t = d;
                target_ = t.id;
            }
        }
    }
    if (target_) {
        return project_gaze(state, camera, *target_);
    }
    // Everything is noticed: keep an eye on the nearest threat.
    const Enemy* nearest = nullptr;
    for (const auto& e : state.enemies) {
        if (e.active() && e.z > state.avatar.z && (!nearest || e.z < nearest->z)) {
            nearest = &e;
        }
    }
    if (nearest) {
        return project_gaze(state, camera, nearest->id);
    }
    return {};
}

JitterPolicy::JitterPolicy(std::unique_ptr<GazePolicy> inner, double sigma, Rng rng)
    : inner_(std::move(inner)), sigma_(sigma), rng_(rng) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("jitter sigma must be >= 0");
    }
}

ScreenPoint JitterPolicy::gaze(const SimState& state) {
    const ScreenPoint base = inner_->gaze(state);
    // Always draw both normals so paired runs at different sigma share noise.
    const double nu = rng_.normal();
    const double nv = rng_.normal();
    return ScreenPoint::clamped(base.u + sigma_ * nu, base.v + sigma_ * nv);
}

PolicyInput::PolicyInput(std::unique_ptr<GazePolicy> policy, ShooterConfig shooter)
    : policy_(std::move(policy)), shooter_(shooter) {}

InputFrame PolicyInput::next(const SimState& state) {
    InputFrame frame;
    frame.tick = state.tick;
    const ScreenPoint point = policy_->gaze(state);
    frame.gaze = GazeSample{state.time(), point, true};

    const double max_step = shooter_.slew_rate * state.config.timestep;
    double du = point.u - state.avatar.crosshair.u;
    double dv = point.v - state.avatar.crosshair.v;
    const double dist = std::hypot(du, dv);
    if (dist > max_step) {
        du *= max_step / dist;
        dv *= max_step / dist;
    }
    frame.aim_du = du;
    frame.aim_dv = dv;

    if (state.time() + 1e-12 >= next_fire_time_) {
        const ScreenPoint aim =
            ScreenPoint::clamped(state.avatar.crosshair.u + du, state.avatar.crosshair.v + dv);
        std::vector<GazeTarget> enemies;
        for (const auto& e : state.enemies) {
            if (e.active()) enemies.push_back({e.id, e.box_b});
        }
        const auto hit = resolve_attended(gaze_ray(state.camera(), aim), enemies);
        if (hit && (!shooter_.hold_until_noticed || attention_of(state, *hit)->noticed())) {
            frame.fire = true;
            next_fire_time_ = state.time() + shooter_.fire_interval;
        }
    }
    return frame;
}

std::string_view to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Perfect: return "perfect";
        case PolicyKind::Jitter: return "jitter";
        case PolicyKind::Blind: return "blind";
        case PolicyKind::Trace: return "trace";
    }
    return "unknown";
}

std::optional<PolicyKind> policy_from_string(std::string_view name) {
    for (auto k : {PolicyKind::Perfect, PolicyKind::Jitter, PolicyKind::Blind, PolicyKind::Trace}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

double visual_angle_to_screen(double angle_rad, double display_span_rad) { return angle_rad / display_span_rad; }

std::uint64_t session_seed(std::uint64_t seed, int index) { return seed + static_cast<std::uint64_t>(index); }

SessionResult run_policy_session(const SimConfig& config, PolicyKind policy, double sigma,
                                 const std::vector<InputFrame>& trace) {
    switch (policy) {
        case PolicyKind::Trace:
            return run_session(config, trace);
        case PolicyKind::Perfect: {
            PolicyInput input(std::make_unique<PerfectPolicy>());
            return run_session(config, input);
        }
        case PolicyKind::Jitter: {
            PolicyInput input(std::make_unique<JitterPolicy>(std::make_unique<PerfectPolicy>(), sigma,
                                                             Rng::stream(config.seed, "policy_jitter")));
            return run_session(config, input);
        }
        case PolicyKind::Blind: {
            PolicyInput input(std::make_unique<BlindPolicy>());
            return run_session(config, input);
        }
    }
    throw std::invalid_argument("unknown policy");
}

RunResult run(const RunSpec& spec) {
    if (spec.sessions < 1) {
        throw std::invalid_argument("run: sessions must be >= 1");
    }
    spec.config.validate();
    if (spec.policy == PolicyKind::Trace) {
        const auto ticks = session_ticks(spec.config);
        for (const auto& f : spec.trace) {
            if (f.tick >= ticks) {
                throw std::invalid_argument("trace/tick mismatch: trace tick " + std::to_string(f.tick) +
                                            " beyond the session's " + std::to_string(ticks) + " ticks");
            }
        }
    }

    RunResult result;
    result.sessions.resize(static_cast<std::size_t>(spec.sessions));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (int i = next++; i < spec.sessions; i = next++) {
            try {
                SimConfig cfg = spec.config;
                cfg.seed = session_seed(spec.config.seed, i);
                result.sessions[static_cast<std::size_t>(i)] = run_policy_session(cfg, spec.policy, spec.sigma, spec.trace);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned jobs = spec.jobs != 0 ? spec.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(spec.sessions));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<SessionMetrics> metrics;
    for (const auto& s : result.sessions) metrics.push_back(s.metrics);
    result.aggregate = aggregate_sessions(metrics);
    return result;
}

std::string format_digests(const RunResult& result) {
    std::ostringstream out;
    for (std::size_t i = 0; i < result.sessions.size(); ++i) {
        out << "session_" << (i + 1) << ' ' << result.sessions[i].log.digest_hex() << '\n';
    }
    return out.str();
}

std::map<std::string, std::string> parse_digests(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string name, hex;
    while (in >> name >> hex) {
        if (hex.size() != 16 || hex.find_first_not_of("0123456789abcdef") != std::string::npos) {
            throw std::invalid_argument("digest file: bad digest '" + hex + "' for " + name);
        }
        out[name] = hex;
    }
    return out;
}

void write_artifacts(const RunResult& result, const RunSpec& spec, const std::filesystem::path& out) {
    namespace fs = std::filesystem;
    fs::create_directories(out);
    nlohmann::json per_session = nlohmann::json::array();
    std::vector<SessionMetrics> metrics;
    for (std::size_t i = 0; i < result.sessions.size(); ++i) {
        const auto& s = result.sessions[i];
        const fs::path dir = out / ("session_" + std::to_string(i + 1));
        fs::create_directories(dir);
        auto m = metrics_to_json(s.metrics);
        m["session"] = i + 1;
        m["seed"] = session_seed(spec.config.seed, static_cast<int>(i));
        m["ticks"] = s.ticks;
        m["digest"] = s.log.digest_hex();
        std::ofstream(dir / "metrics.json") << m.dump(2) << '\n';
        std::ofstream events(dir / "events.ndjson");
        s.log.write_ndjson(events);
        std::ofstream trace(dir / "trace.csv");
        write_trace(trace, s.trace);
        per_session.push_back(m);
        metrics.push_back(s.metrics);
    }
    nlohmann::json aggregate = aggregate_to_json(result.aggregate);
    aggregate["policy"] = std::string(to_string(spec.policy));
    if (spec.policy == PolicyKind::Jitter) aggregate["sigma"] = spec.sigma;
    aggregate["per_session"] = per_session;
    aggregate["table"] = format_session_table(metrics, result.aggregate);
    std::ofstream(out / "aggregate.json") << aggregate.dump(2) << '\n';
    std::ofstream(out / "digest.txt") << format_digests(result);
    std::ofstream(out / "config.json") << config_to_json(spec.config).dump(2) << '\n';
}

}  // namespace gazerunner::sim
