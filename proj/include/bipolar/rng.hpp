#pragma once

#include <cstdint>
#include <cmath>

namespace bipolar {

// splitmix64, used for seeding and for deriving independent per-trial seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic seed for trial `index` under `master`. Independent of thread
// scheduling, so parallel runs reproduce serial ones.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    splitmix64(s);
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

// xoshiro256++ core. Self-contained so results do not depend on the standard
// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        have_normal_ = false;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1).
    double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), n >= 1. Rejection keeps it exactly uniform.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x, r;
        do {
            x = next_u64();
            r = x % n;
        } while (x - r > std::uint64_t(0) - n);
        return r;
    }

    // One of the three walk steps, uniformly.
    int step3() {
        // Buffered base-3 digits out of a single draw: 40 digits per u64.
        if (digits_left_ == 0) {
            // 3^40 < 2^64; rejection to the largest multiple keeps uniformity.
            const std::uint64_t limit = 12157665459056928801ULL; // 3^40
            do { digit_word_ = next_u64(); } while (digit_word_ >= limit);
            digits_left_ = 40;
        }
        int d = static_cast<int>(digit_word_ % 3);
        digit_word_ /= 3;
        --digits_left_;
        return d;
    }

    // Standard normal, Box-Muller (cached pair).
    double normal() {
        if (have_normal_) {
            have_normal_ = false;
            return cached_normal_;
        }
        double u1, u2;
        do { u1 = uniform01(); } while (u1 <= 0.0);
        u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(a);
        have_normal_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    std::uint64_t digit_word_ = 0;
    int digits_left_ = 0;
    double cached_normal_ = 0.0;
    bool have_normal_ = false;
};

} // namespace bipolar
