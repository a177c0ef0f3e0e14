#include "gazerunner/io.hpp"
#include "gazerunner/sim.hpp"
#include "trace_gen.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace gazerunner;
using namespace gazerunner::sim;

namespace {

// A state with the given entities only and the avatar at z = 0.
SimState scene(std::vector<Obstacle> obstacles, std::vector<Enemy> enemies) {
    SimConfig c;
    c.world.spawn_probability = 0.0;
    SimState s = init_state(c);
    s.obstacles = std::move(obstacles);
    s.enemies = std::move(enemies);
    return s;
}

SimConfig session_config(std::uint64_t seed) {
    SimConfig c;
    c.seed = seed;
    return c;
}

double mean_noticed(PolicyKind policy, double sigma, int seeds) {
    double total = 0.0;
    for (int i = 0; i < seeds; ++i) {
        total += run_policy_session(session_config(1000 + static_cast<std::uint64_t>(i)), policy, sigma)
                     .metrics.noticed_ratio();
    }
    return total / seeds;
}

int exit_code(const std::string& command) {
    const int status = std::system((command + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("project_gaze: dead ahead is the screen center; left lane is left of it") {
    const BoxLayout layout{};
    SimState s = scene({}, {make_enemy(1, EnemyKind::Walker, Lane::Center, 40, layout)});
    const ScreenPoint p = project_gaze(s, s.camera(), 1);
    CHECK(p.u == doctest::Approx(0.5).epsilon(1e-9));

    s = scene({make_obstacle(2, ObstacleKind::Branch, Lane::Left, 30, layout)}, {});
    CHECK(project_gaze(s, s.camera(), 2).u < 0.5);
    s = scene({make_obstacle(3, ObstacleKind::Branch, Lane::Right, 30, layout)}, {});
    CHECK(project_gaze(s, s.camera(), 3).u > 0.5);
    // Unknown target: screen center.
    CHECK(project_gaze(s, s.camera(), 99) == ScreenPoint{});
}

TEST_CASE("project_gaze re-selects its target for 1000 random placements") {
    const BoxLayout layout{};
    Rng rng(1000);
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const Lane lane = static_cast<Lane>(rng.below(3));
        const double z = rng.uniform(8, 150);
        const auto kind = rng.below(4);
        SimState s = kind < 2 ? scene({make_obstacle(7, kind == 0 ? ObstacleKind::Rock : ObstacleKind::Branch, lane, z, layout)}, {})
                              : scene({}, {make_enemy(7, kind == 2 ? EnemyKind::Walker : EnemyKind::Runner, lane, z, layout)});
        const Camera cam = s.camera();
        const ScreenPoint p = project_gaze(s, cam, 7);
        failures += resolve_attended(gaze_ray(cam, p), gaze_targets(s)) != 7u;
    }
    CHECK(failures == 0);
}

TEST_CASE("project_gaze finds a visible part of a partly occluded target") {
    const BoxLayout layout{};
    Rng rng(2000);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        std::vector<Obstacle> obstacles;
        std::vector<Enemy> enemies;
        const auto n = 2 + rng.below(3);
        for (std::uint64_t k = 0; k < n; ++k) {
            const Lane lane = static_cast<Lane>(rng.below(3));
            const double z = rng.uniform(8, 80);
            if (rng.bernoulli(0.5)) {
                obstacles.push_back(make_obstacle(static_cast<EntityId>(k + 1), ObstacleKind::Rock, lane, z, layout));
            } else {
                enemies.push_back(make_enemy(static_cast<EntityId>(k + 1), EnemyKind::Walker, lane, z, layout));
            }
        }
        const SimState s = scene(obstacles, enemies);
        const Camera cam = s.camera();
        const auto targets = gaze_targets(s);
        for (const auto& t : targets) {
            // Visible at all? Scan a fine screen grid.
            bool visible = false;
            for (int a = 0; a <= 160 && !visible; ++a) {
                for (int b = 0; b <= 90 && !visible; ++b) {
                    visible = resolve_attended(gaze_ray(cam, {a / 160.0, b / 90.0}), targets) == t.id;
                }
            }
            if (!visible) continue;
            ++checked;
            const ScreenPoint p = project_gaze(s, cam, t.id);
            CHECK(resolve_attended(gaze_ray(cam, p), targets) == t.id);
        }
    }
    CHECK(checked > 400);
}

TEST_CASE("policies emit valid, clamped gaze every tick") {
    class Checking : public InputSource {
    public:
        explicit Checking(InputSource& inner) : inner_(inner) {}
        InputFrame next(const SimState& s) override {
            InputFrame f = inner_.next(s);
            REQUIRE(f.gaze);
            CHECK(f.gaze->valid);
            CHECK(f.gaze->point.u >= 0.0);
            CHECK(f.gaze->point.u <= 1.0);
            CHECK(f.gaze->point.v >= 0.0);
            CHECK(f.gaze->point.v <= 1.0);
            return f;
        }

    private:
        InputSource& inner_;
    };
    SimConfig c = session_config(3);
    c.session_duration = 30;
    PolicyInput jitter(std::make_unique<JitterPolicy>(std::make_unique<PerfectPolicy>(), 0.3, Rng(1)));
    Checking checking(jitter);
    run_session(c, checking);
}

TEST_CASE("policy runs are deterministic") {
    for (PolicyKind p : {PolicyKind::Perfect, PolicyKind::Jitter, PolicyKind::Blind}) {
        const auto a = run_policy_session(session_config(5), p, 0.02);
        const auto b = run_policy_session(session_config(5), p, 0.02);
        CHECK(a.log.digest() == b.log.digest());
        CHECK(a.trace == b.trace);
    }
    // A policy run replays from its own recorded trace.
    const auto live = run_policy_session(session_config(6), PolicyKind::Jitter, 0.015);
    CHECK(run_session(session_config(6), live.trace).log.digest() == live.log.digest());
    // Zero noise is the perfect policy.
    CHECK(run_policy_session(session_config(7), PolicyKind::Jitter, 0.0).log.digest() ==
          run_policy_session(session_config(7), PolicyKind::Perfect, 0.0).log.digest());
}

TEST_CASE("perfect beats blind on every seed; blind notices nothing") {
    RunSpec spec;
    spec.sessions = 10;
    spec.policy = PolicyKind::Perfect;
    const auto perfect = run(spec);
    spec.policy = PolicyKind::Blind;
    const auto blind = run(spec);
    for (std::size_t i = 0; i < 10; ++i) {
        const auto& p = perfect.sessions[i].metrics;
        const auto& b = blind.sessions[i].metrics;
        CHECK(b.noticed_ratio() == 0.0);
        CHECK(p.noticed_ratio() > b.noticed_ratio());
        CHECK(p.kill_ratio() > b.kill_ratio());
    }
    CHECK(perfect.aggregate.noticed_ratio.mean >= 95.0);
}

TEST_CASE("more gaze noise never notices more (50 paired seeds)") {
    double previous = 101.0;
    for (double sigma : {0.0, 0.015, 0.03, 0.06, 0.12}) {
        const double m = mean_noticed(PolicyKind::Jitter, sigma, 50);
        CAPTURE(sigma);
        CHECK(m <= previous);
        previous = m;
    }
}

TEST_CASE("sessions use seed + index and run the same in parallel") {
    RunSpec spec;
    spec.config.seed = 40;
    spec.sessions = 4;
    spec.jobs = 1;
    const auto serial = run(spec);
    spec.jobs = 4;
    const auto parallel = run(spec);
    CHECK(format_digests(serial) == format_digests(parallel));
    CHECK(serial.sessions[2].log.digest() == run_policy_session(session_config(42), PolicyKind::Perfect, 0).log.digest());
    CHECK(session_seed(40, 2) == 42);
}

TEST_CASE("run rejects bad specs") {
    RunSpec spec;
    spec.sessions = 0;
    CHECK_THROWS_AS(run(spec), std::invalid_argument);
    spec.sessions = 1;
    spec.policy = PolicyKind::Trace;
    spec.trace = {tracegen::empty_frame(7200)};
    CHECK_THROWS_AS(run(spec), std::invalid_argument);
}

TEST_CASE("digest files") {
    const auto parsed = parse_digests("session_1 0123456789abcdef\nsession_2 fedcba9876543210\n");
    CHECK(parsed.size() == 2);
    CHECK(parsed.at("session_2") == "fedcba9876543210");
    CHECK_THROWS_AS(parse_digests("session_1 xyz\n"), std::invalid_argument);
}

TEST_CASE("visual angle conversion") {
    CHECK(visual_angle_to_screen(0.52) == doctest::Approx(1.0));
    // One degree is about 0.033 of the screen.
    CHECK(visual_angle_to_screen(std::numbers::pi / 180) == doctest::Approx(0.0336).epsilon(0.01));
}

TEST_CASE("sim CLI: artifacts, replay, and exit codes") {
    namespace fs = std::filesystem;
    const std::string exe = GAZERUNNER_SIM_PATH;
    const fs::path dir = fs::temp_directory_path() / "gazerunner_sim_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const std::string out = (dir / "run").string();
    REQUIRE(exit_code(exe + " --policy blind --sessions 3 --out " + out) == 0);
    for (int i = 1; i <= 3; ++i) {
        const fs::path session = fs::path(out) / ("session_" + std::to_string(i));
        CHECK(fs::exists(session / "metrics.json"));
        CHECK(fs::exists(session / "events.ndjson"));
        std::ifstream in(session / "metrics.json");
        const auto m = nlohmann::json::parse(in);
        CHECK(m.at("noticed_ratio").get<double>() == 0.0);
    }
    CHECK(fs::exists(fs::path(out) / "aggregate.json"));
    const std::string digests = (fs::path(out) / "digest.txt").string();
    CHECK(exit_code(exe + " --policy blind --sessions 3 --replay " + digests) == 0);
    CHECK(exit_code(exe + " --policy blind --sessions 3 --seed 2 --replay " + digests) == 1);

    // Replay a recorded trace through the trace policy.
    const std::string trace = (fs::path(out) / "session_1" / "trace.csv").string();
    CHECK(exit_code(exe + " --policy trace --trace " + trace + " --replay " + digests) == 1);
    {
        std::ofstream(dir / "one.txt") << "session_1 " << parse_digests([&] {
            std::ifstream in(digests);
            std::stringstream ss;
            ss << in.rdbuf();
            return ss.str();
        }()).at("session_1") << '\n';
    }
    CHECK(exit_code(exe + " --policy trace --trace " + trace + " --replay " + (dir / "one.txt").string()) == 0);

    std::ofstream(dir / "bad.json") << R"({"seed": 1, "colour": "red"})";
    CHECK(exit_code(exe + " --config " + (dir / "bad.json").string()) == 2);
    std::ofstream(dir / "broken.json") << "{";
    CHECK(exit_code(exe + " --config " + (dir / "broken.json").string()) == 2);
    std::ofstream(dir / "long.csv") << "tick,u,v,valid,aim_du,aim_dv,fire\n9000,0.5,0.5,1,0,0,0\n";
    CHECK(exit_code(exe + " --policy trace --trace " + (dir / "long.csv").string()) == 2);
    CHECK(exit_code(exe + " --policy trace") == 2);
    fs::remove_all(dir);
}
