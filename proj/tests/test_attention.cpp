#include "gazerunner/attention.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace gazerunner;

namespace {

constexpr double kDt = 1.0 / 60.0;

AttentionState run(AttentionState s, int ticks, bool attended, double dt = kDt, double threshold = 0.5) {
    for (int i = 0; i < ticks; ++i) s = accumulate_dwell(s, attended, dt, threshold);
    return s;
}

}  // namespace

TEST_CASE("30 attended ticks notice, 29 do not") {
    const AttentionState at30 = run({}, 30, true);
    CHECK(at30.stage == AttentionStage::Noticed);
    const AttentionState at29 = run({}, 29, true);
    CHECK(at29.stage == AttentionStage::Gazed);
    CHECK(at29.accumulated_dwell == doctest::Approx(29.0 / 60.0));
}

TEST_CASE("dwell survives gaps: 15 on, 100 off, 15 on") {
    AttentionState s = run({}, 15, true);
    CHECK(s.stage == AttentionStage::Gazed);
    const double before_gap = s.accumulated_dwell;
    s = run(s, 100, false);
    CHECK(s.accumulated_dwell == before_gap);
    CHECK(s.stage == AttentionStage::Gazed);
    s = run(s, 15, true);
    CHECK(s.noticed());
}

TEST_CASE("no attention, no change") {
    CHECK(run({}, 500, false) == AttentionState{});
}

TEST_CASE("threshold exactness: ceil(threshold/dt) ticks notice, one fewer does not") {
    Rng rng(3);
    for (int i = 0; i < 300; ++i) {
        const double dt = 1.0 / static_cast<double>(rng.below(200) + 10);
        const double threshold = rng.uniform(0.05, 2.0);
        // Keep clear of the comparison slack: n*dt must not sit within
        // 1e-7 of the threshold on either side unless it is exact.
        const auto n = static_cast<int>(std::ceil(threshold / dt - 1e-9));
        if (std::abs(n * dt - threshold) > 1e-12 && std::abs(n * dt - threshold) < 1e-7) continue;
        if (std::abs((n - 1) * dt - threshold) < 1e-7) continue;
        CHECK(run({}, n, true, dt, threshold).noticed());
        CHECK_FALSE(run({}, n - 1, true, dt, threshold).noticed());
    }
}

TEST_CASE("on/off order does not matter, only the attended count") {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const int on = static_cast<int>(rng.below(40));
        const int off = static_cast<int>(rng.below(40));
        std::vector<bool> pattern(static_cast<std::size_t>(on), true);
        pattern.resize(static_cast<std::size_t>(on + off), false);
        for (std::size_t i = pattern.size(); i > 1; --i) {
            std::swap(pattern[i - 1], pattern[rng.below(i)]);
        }
        AttentionState s;
        double last = 0.0;
        bool was_noticed = false;
        for (bool a : pattern) {
            s = accumulate_dwell(s, a, kDt);
            CHECK(s.accumulated_dwell >= last);
            if (was_noticed) CHECK(s.noticed());
            last = s.accumulated_dwell;
            was_noticed = s.noticed();
        }
        CHECK(s.noticed() == (on >= 30));
        CHECK(s.stage == (on == 0 ? AttentionStage::Unseen : on >= 30 ? AttentionStage::Noticed : AttentionStage::Gazed));
    }
}

TEST_CASE("dt must be positive") {
    CHECK_THROWS_AS(accumulate_dwell({}, true, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(accumulate_dwell({}, true, -kDt), std::invalid_argument);
}

TEST_CASE("resolve_attended picks the nearest box") {
    const Ray r = Ray::make({0, 0, 0}, {0, 0, 1});
    const std::vector<GazeTarget> targets{
        {7, Aabb::centered({0, 0, 5}, {0.5, 0.5, 0.5})},
        {9, Aabb::centered({0, 0, 2}, {0.5, 0.5, 0.5})},
        {4, Aabb::centered({3, 0, 1}, {0.5, 0.5, 0.5})},
    };
    CHECK(resolve_attended(r, targets) == 9u);
    CHECK_FALSE(resolve_attended(r, {}));
    // Equal distance: lower id wins regardless of order.
    const std::vector<GazeTarget> tie{{5, targets[1].box}, {2, targets[1].box}};
    CHECK(resolve_attended(r, tie) == 2u);
}

TEST_CASE("resolve_attended equals the minimum over per-box hits in 500 scenes") {
    Rng rng(500);
    for (int scene = 0; scene < 500; ++scene) {
        const Vec3 origin{rng.uniform(-2, 2), rng.uniform(0, 2), rng.uniform(-2, 2)};
        const Ray ray{origin, oracle::unit({rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3), 1.0})};
        std::vector<GazeTarget> targets;
        const auto n = rng.below(11);
        for (std::uint64_t i = 0; i < n; ++i) {
            const Vec3 c{rng.uniform(-4, 4), rng.uniform(0, 3), rng.uniform(1, 40)};
            targets.push_back({static_cast<EntityId>(rng.below(1000)),
                               Aabb::centered(c, {rng.uniform(0.2, 1.5), rng.uniform(0.2, 1.5), rng.uniform(0.2, 1.5)})});
        }
        std::optional<EntityId> want;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& t : targets) {
            const auto hit = ray_aabb(ray, t.box);
            if (!hit) continue;
            if (*hit < best || (*hit == best && t.id < *want)) {
                best = *hit;
                want = t.id;
            }
        }
        CHECK(resolve_attended(ray, targets) == want);
    }
}

TEST_CASE("classify_region splits the screen in thirds") {
    CHECK(classify_region({0.1, 0.5}) == ScreenRegion::Left);
    CHECK(classify_region({0.5, 0.9}) == ScreenRegion::Center);
    CHECK(classify_region({0.7, 0.2}) == ScreenRegion::Right);
    CHECK(classify_region({1.0 / 3.0, 0.5}) == ScreenRegion::Center);
    CHECK(classify_region({2.0 / 3.0, 0.5}) == ScreenRegion::Center);
    CHECK(classify_region({std::nextafter(1.0 / 3.0, 0.0), 0.5}) == ScreenRegion::Left);
}

TEST_CASE("histogram accumulation") {
    RegionHistogram h;
    for (int i = 0; i < 60; ++i) h = update_histogram(h, {0, {0.5, 0.5}, true}, kDt);
    CHECK(h[ScreenRegion::Left] == 0.0);
    CHECK(h[ScreenRegion::Center] == doctest::Approx(1.0));
    CHECK(h[ScreenRegion::Right] == 0.0);
    CHECK(update_histogram(h, {0, {0.1, 0.5}, false}, kDt) == h);
}

TEST_CASE("histogram totals equal per-region sample counts times dt") {
    Rng rng(12);
    RegionHistogram h;
    std::array<int, 3> counts{};
    int total_valid = 0;
    for (int i = 0; i < 20000; ++i) {
        const GazeSample s{0, {rng.uniform(), rng.uniform()}, rng.bernoulli(0.9)};
        h = update_histogram(h, s, kDt);
        if (!s.valid) continue;
        ++total_valid;
        // Recount straight from the thresholds.
        const int bucket = s.point.u < 1.0 / 3.0 ? 0 : s.point.u > 2.0 / 3.0 ? 2 : 1;
        ++counts[static_cast<std::size_t>(bucket)];
    }
    for (std::size_t b = 0; b < 3; ++b) {
        CHECK(h.seconds[b] == doctest::Approx(counts[b] * kDt).epsilon(1e-9));
    }
    CHECK(h.total() == doctest::Approx(total_valid * kDt).epsilon(1e-9));
}

TEST_CASE("least_gazed_side") {
    Rng coin(1);
    RegionHistogram h;
    h.seconds = {1.2, 3.0, 0.4};
    CHECK(least_gazed_side(h, coin) == ScreenRegion::Right);
    h.seconds = {0.5, 0.0, 0.5000001};
    CHECK(least_gazed_side(h, coin) == ScreenRegion::Left);
    // A decisive comparison leaves the coin untouched.
    CHECK(coin == Rng(1));

    h.seconds = {0, 0, 0};
    Rng a(42);
    Rng b(42);
    const ScreenRegion first = least_gazed_side(h, a);
    CHECK(first == least_gazed_side(h, b));
    CHECK(first != ScreenRegion::Center);
    CHECK_FALSE(a == Rng(42));

    // Over many seeds both outcomes show up.
    int lefts = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng r(seed);
        lefts += least_gazed_side(h, r) == ScreenRegion::Left;
    }
    CHECK(lefts > 60);
    CHECK(lefts < 140);
}

TEST_CASE("gaze window keeps two completed tiles") {
    GazeWindow w;
    const GazeSample left{0, {0.1, 0.5}, true};
    const GazeSample right{0, {0.9, 0.5}, true};
    w.record(left, 1.0);
    w.roll();
    w.record(right, 2.0);
    w.roll();
    CHECK(w.two_tile()[ScreenRegion::Left] == 1.0);
    CHECK(w.two_tile()[ScreenRegion::Right] == 2.0);
    w.record(left, 5.0);
    // The tile in progress does not count yet.
    CHECK(w.two_tile()[ScreenRegion::Left] == 1.0);
    w.roll();
    CHECK(w.two_tile()[ScreenRegion::Left] == 5.0);
    CHECK(w.two_tile()[ScreenRegion::Right] == 2.0);
    w.roll();
    CHECK(w.two_tile()[ScreenRegion::Right] == 0.0);
}

TEST_CASE("gaze window conserves time: window + current + dropped = recorded") {
    Rng rng(31);
    GazeWindow w;
    double recorded = 0.0;
    double dropped = 0.0;
    std::vector<double> per_tile{0.0};
    for (int i = 0; i < 5000; ++i) {
        if (rng.bernoulli(0.02)) {
            w.roll();
            per_tile.push_back(0.0);
            if (per_tile.size() > 3) {
                dropped += per_tile[per_tile.size() - 4];
            }
        }
        w.record({0, {rng.uniform(), 0.5}, true}, kDt);
        recorded += kDt;
        per_tile.back() += kDt;
    }
    CHECK(w.two_tile().total() + w.current().total() + dropped == doctest::Approx(recorded).epsilon(1e-9));
}
