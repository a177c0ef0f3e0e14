#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gazerunner {

/// Seeded generator with platform-independent conversions. std::mt19937_64
/// output is fixed by the standard; the distributions in <random> are not,
/// so uniform/normal draws are derived here by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Independent named sub-stream of a master seed.
    static Rng stream(std::uint64_t master_seed, std::string_view name);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    bool bernoulli(double p) { return uniform() < p; }
    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);
    /// Standard normal via Box-Muller (one draw pair per call).
    double normal();

    friend bool operator==(const Rng&, const Rng&) = default;

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used to derive sub-stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ULL);

}  // namespace gazerunner
