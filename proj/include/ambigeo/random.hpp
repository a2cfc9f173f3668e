#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace ambigeo {

/// One step of the splitmix64 sequence; advances `state` and returns the output.
constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Folds a list of integers into a single seed. Used to derive independent
/// per-word / per-condition streams from one experiment seed.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) noexcept;

/// xoshiro256** seeded from a 64-bit value through splitmix64.
///
/// All sampling helpers (bounded integers, uniforms, normals) are defined
/// here rather than through <random> distributions, whose output is
/// implementation-defined; this keeps shuffles and synthetic data identical
/// across standard libraries.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept;

    std::uint64_t next() noexcept;
    std::uint64_t operator()() noexcept { return next(); }
    static constexpr std::uint64_t min() noexcept { return 0; }
    static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

    /// Uniform integer in [0, bound), unbiased (rejection on the low product).
    std::uint64_t below(std::uint64_t bound) noexcept;
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Standard normal via the Box-Muller transform; pairs are cached.
    double normal() noexcept;

private:
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ambigeo
