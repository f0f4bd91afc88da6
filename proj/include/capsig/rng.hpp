#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "capsig/normal.hpp"

namespace capsig {

/// splitmix64 finalizer; decorrelates stream seeds.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stage sub-seed so independent pipeline stages never share draws.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
    return splitmix64(seed ^ splitmix64(tag));
}

/// Deterministic per-stream generator. Stream k of a given seed yields the
/// same draws no matter how many other streams are consumed or in which
/// order, so path i is identical under any parallel schedule. Draws avoid
/// std::normal_distribution (implementation-defined) in favour of the
/// inverse-CDF transform, making output bit-identical across standard
/// libraries.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream)
        : engine_(splitmix64(splitmix64(seed) + stream * 0x9e3779b97f4a7c15ULL)) {}

    /// Uniform on (0,1), both endpoints excluded.
    double uniform() {
        const std::uint64_t bits = engine_() >> 11;  // top 53 bits
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw.
    double normal() { return normal_quantile(uniform()); }

private:
    std::mt19937_64 engine_;
};

/// n standard-normal draws in blocked substreams of `seed`: draw j comes
/// from stream j/4096 regardless of n, so prefixes of longer runs match.
[[nodiscard]] inline std::vector<double> normal_draws(std::uint64_t seed, std::size_t n) {
    constexpr std::size_t kBlock = 4096;
    std::vector<double> out(n);
    for (std::size_t start = 0; start < n; start += kBlock) {
        StreamRng rng(seed, start / kBlock);
        const std::size_t stop = std::min(n, start + kBlock);
        for (std::size_t j = start; j < stop; ++j) out[j] = rng.normal();
    }
    return out;
}

}  // namespace capsig
