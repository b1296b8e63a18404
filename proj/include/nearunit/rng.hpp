#pragma once

#include <cmath>
#include <cstdint>

namespace nearunit {

/// SplitMix64 finalizer; used to derive independent stream seeds.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a child key from a parent key and a counter. Keys form a tree
/// (seed -> study -> replication -> attempt) so every unit of work owns a
/// stream that depends only on its coordinates, never on scheduling.
[[nodiscard]] constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t index) noexcept {
    return splitmix64(parent ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// A counter-derived random stream (xoshiro256++ engine).
///
/// Construct with `(seed, stream)`; identical coordinates give bit-identical
/// sequences. Not thread-safe: each worker owns its own Stream.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0) noexcept {
        std::uint64_t key = derive_key(derive_key(seed, stream), substream);
        for (auto& s : state_) {
            key = splitmix64(key);
            s = key;
        }
    }

    /// Raw 64 random bits.
    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal (Marsaglia polar method, pairs cached).
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    /// Exponential with unit mean.
    double exponential() noexcept { return -std::log(uniform()); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace nearunit
