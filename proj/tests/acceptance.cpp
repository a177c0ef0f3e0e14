// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "gazerunner/engine.hpp"
#include "gazerunner/io.hpp"
#include "gazerunner/sim.hpp"
#include "interaction_cases.hpp"
#include "oracles.hpp"
#include "region_oracle.hpp"
#include "trace_gen.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace gazerunner;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Verdict spawn_statistics() {
    const auto start = std::chrono::steady_clock::now();
    World w = init_world({}, 2024);
    long tiles = 0, spawns = 0, obstacles = 0, enemies = 0, runners = 0, markers = 0, trees = 0;
    while (tiles < 100000) {
        for (const auto& t : advance_tiles(w, w.tiles.front().z_end).spawned) {
            ++tiles;
            markers += static_cast<long>(t.markers.size());
            trees += static_cast<long>(t.decorations.size());
            if (!t.spawn) continue;
            ++spawns;
            if (is_obstacle(t.spawn->kind)) {
                ++obstacles;
            } else {
                ++enemies;
                runners += t.spawn->kind == SpawnKind::Runner;
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double occ = 100.0 * static_cast<double>(spawns) / static_cast<double>(tiles);
    const double obs = 100.0 * static_cast<double>(obstacles) / static_cast<double>(spawns);
    const double run = 100.0 * static_cast<double>(runners) / static_cast<double>(enemies);
    const double tree = 100.0 * static_cast<double>(trees) / static_cast<double>(markers);
    const bool ok = std::abs(occ - 33.0) <= 0.5 && std::abs(obs - 55.0) <= 1.0 && std::abs(run - 20.0) <= 1.0 &&
                    std::abs(tree - 66.0) <= 0.5 && secs < 10.0;
    return {ok, fmt("%ld tiles: spawn %.2f%%, obstacle %.2f%%, runner %.2f%%, tree %.2f%% in %.2f s", tiles, occ,
                    obs, run, tree, secs)};
}

Verdict notice_threshold() {
    const double dt = 1.0 / 60.0;
    auto run = [&](AttentionState s, int n, bool on) {
        for (int i = 0; i < n; ++i) s = accumulate_dwell(s, on, dt);
        return s;
    };
    const bool at30 = run({}, 30, true).noticed();
    const bool at29 = run({}, 29, true).noticed();
    AttentionState gap = run({}, 15, true);
    const bool before = gap.noticed();
    gap = run(gap, 100, false);
    const bool during = gap.noticed();
    gap = run(gap, 15, true);
    const bool ok = at30 && !at29 && !before && !during && gap.noticed();
    return {ok, fmt("30 ticks noticed=%d, 29 ticks noticed=%d, 15+gap(100)+15 noticed=%d", at30, at29,
                    gap.noticed())};
}

Verdict rule_cases() {
    int matched = 0;
    std::string failures;
    const auto all = cases::all();
    for (const auto& c : all) {
        std::string why = cases::mismatch(c, cases::play(c));
        if (why.empty() && !c.noticed) why = cases::mismatch(c, cases::play(c, AttentionStage::Gazed));
        if (why.empty()) {
            ++matched;
        } else {
            failures += " [" + c.name + ": " + why + "]";
        }
    }
    return {matched == 12 && all.size() == 12, fmt("%d/%zu cases match", matched, all.size()) + failures};
}

Verdict region_alternation() {
    const auto r = oracle::check_region_rule(31337, 34000);
    const bool ok = r.spawns >= 10000 && r.side_side_pairs == 0 && r.wrong_lane == 0 && r.histogram_mismatches == 0 &&
                    r.window_errors == 0 && r.ties > 0;
    return {ok, fmt("%ld spawns, %ld side choices (%ld ties): side-side %ld, wrong lane %ld, histogram %ld, window %ld",
                    r.spawns, r.side_choices, r.ties, r.side_side_pairs, r.wrong_lane, r.histogram_mismatches,
                    r.window_errors)};
}

Verdict ray_aabb_oracle() {
    Rng rng(20240601);
    int hits = 0, disagreements = 0;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto c = oracle::random_ray_case(rng);
        const auto got = ray_aabb(Ray{c.origin, c.dir}, c.box);
        const auto want = oracle::march(c.origin, c.dir, c.box);
        if (got.has_value() != want.has_value()) {
            ++disagreements;
        } else if (got) {
            ++hits;
            worst = std::max(worst, std::abs(*got - *want));
        }
    }
    return {disagreements == 0 && worst <= 2e-3,
            fmt("1000 cases, %d hits, %d disagreements, max |dt| %.2e", hits, disagreements, worst)};
}

Verdict determinism() {
    int same = 0, invariant = 0;
    Rng seeds(8);
    for (int i = 0; i < 10; ++i) {
        SimConfig c;
        c.seed = seeds.next_u64();
        const auto trace = tracegen::random_trace(c.seed, session_ticks(c));
        same += run_session(c, trace).log.digest() == run_session(c, trace).log.digest();
        c.attention_mode = AttentionMode::AutoNoticed;
        invariant += run_session(c, trace).log.digest() == run_session(c, tracegen::strip_gaze(trace)).log.digest();
    }
    return {same == 10 && invariant == 10,
            fmt("10 seeds: repeat digests equal %d/10, AutoNoticed gaze-stripped digests equal %d/10", same, invariant)};
}

Verdict policy_ordering() {
    sim::RunSpec spec;
    spec.config.seed = 1000;
    spec.sessions = 50;
    spec.policy = sim::PolicyKind::Perfect;
    const auto perfect = sim::run(spec);
    spec.policy = sim::PolicyKind::Jitter;
    spec.sigma = 0.015;
    const auto jitter = sim::run(spec);
    spec.policy = sim::PolicyKind::Blind;
    const auto blind = sim::run(spec);

    bool blind_zero = true;
    for (const auto& s : blind.sessions) blind_zero = blind_zero && s.metrics.noticed_ratio() == 0.0;
    const double p = perfect.aggregate.noticed_ratio.mean;
    const double j = jitter.aggregate.noticed_ratio.mean;
    const double b = blind.aggregate.noticed_ratio.mean;

    std::vector<SessionMetrics> metrics;
    for (const auto& s : jitter.sessions) metrics.push_back(s.metrics);
    const std::string table = format_session_table(metrics, jitter.aggregate);
    const bool table_ok = table.find("Ratio [%] of Killed Enemies") != std::string::npos &&
                          table.find("Number of Deaths") != std::string::npos &&
                          table.find("±") != std::string::npos;
    std::istringstream lines(table);
    std::string line, last;
    while (std::getline(lines, line)) {
        if (!line.empty()) last = line;
    }
    return {p >= j && j >= b && blind_zero && table_ok,
            fmt("noticed %% perfect %.2f >= jitter %.2f >= blind %.2f, blind all zero=%d; jitter table: ", p, j, b,
                blind_zero) + last};
}

Verdict session_timing() {
    SimConfig c;
    const auto ticks = session_ticks(c);
    const auto result = run_session(c, std::vector<InputFrame>{});

    std::vector<SessionMetrics> fixture(3);
    const int kills[] = {6, 7, 8};
    for (std::size_t i = 0; i < 3; ++i) {
        fixture[i].enemies_spawned = 10;
        fixture[i].enemies_killed = kills[i];
    }
    const auto report = aggregate_sessions(fixture);
    // Hand computation: mean 70, sample sd 10, STE 10 / sqrt(3).
    const double want_ste = 10.0 / std::sqrt(3.0);
    const bool ok = ticks == 7200 && result.ticks == 7200 && std::abs(report.kill_ratio.mean - 70.0) <= 1e-9 &&
                    std::abs(report.kill_ratio.ste - want_ste) <= 1e-9;
    return {ok, fmt("session_ticks %lld, ran %lld; fixture {60,70,80}: %.4f ± %.4f (want 70 ± %.4f)",
                    static_cast<long long>(ticks), static_cast<long long>(result.ticks), report.kill_ratio.mean,
                    report.kill_ratio.ste, want_ste)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"spawn statistics", spawn_statistics},
        {"notice threshold boundary", notice_threshold},
        {"interaction rule cases", rule_cases},
        {"region alternation", region_alternation},
        {"ray-aabb oracle equivalence", ray_aabb_oracle},
        {"determinism", determinism},
        {"policy ordering", policy_ordering},
        {"session timing and aggregate", session_timing},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
