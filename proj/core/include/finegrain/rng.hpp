#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace fg {

/// SplitMix64 stream, used to expand one master seed into independent
/// per-trajectory seeds.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

/// xoshiro256** — the named, seedable generator behind every Born sample.
/// The full 256-bit state can be captured and restored, which is what makes
/// trajectory replay bit-exact.
class Xoshiro256ss {
  public:
    using state_type = std::array<std::uint64_t, 4>;

    explicit Xoshiro256ss(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    explicit Xoshiro256ss(const state_type& state) : s_(state) {}

    static constexpr const char* name() { return "xoshiro256ss"; }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Deterministic child generator; children of distinct indices are
    /// decorrelated via SplitMix64 re-keying.
    Xoshiro256ss split(std::uint64_t index) const {
        SplitMix64 sm(s_[0] ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        return Xoshiro256ss(sm.next());
    }

    const state_type& state() const { return s_; }
    void set_state(const state_type& st) { s_ = st; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    state_type s_{};
};

/// Seed list for a trajectory ensemble: master seed -> one seed per index.
inline std::vector<std::uint64_t> derive_trajectory_seeds(std::uint64_t master, std::size_t n) {
    SplitMix64 sm(master);
    std::vector<std::uint64_t> seeds(n);
    for (auto& s : seeds) s = sm.next();
    return seeds;
}

/// Draw an index from a discrete distribution given by weights (need not be
/// normalized exactly; the final bin absorbs rounding slack).
inline std::size_t sample_discrete(Xoshiro256ss& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double u = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
}

} // namespace fg
