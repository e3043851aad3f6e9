#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace sbm {

/// Philox4x64-10 block function (Salmon et al., Random123).
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key);

/// Counter-based generator. Output number i is a pure function of
/// (seed, stream, i), so any trial can be regenerated in isolation.
///
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : key_{seed, stream} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal via Box-Muller; pairs are consumed in order.
    double normal();

    std::uint64_t blocks_consumed() const { return block_; }

private:
    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> buffer_{};
    std::uint64_t block_ = 0;
    int used_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// Seed of trial `index` in an ensemble rooted at `seed`.
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) { return seed ^ index; }

/// Well-known stream ids so that independent draws never share a counter range.
namespace streams {
inline constexpr std::uint64_t adjacency = 0x5342'4d41;  // "SBMA"
inline constexpr std::uint64_t gaussian = 0x5342'4d47;   // "SBMG"
inline constexpr std::uint64_t layout = 0x5342'4d4c;     // "SBML"
inline constexpr std::uint64_t kmeans = 0x5342'4d4b;     // "SBMK"
}  // namespace streams

}  // namespace sbm
