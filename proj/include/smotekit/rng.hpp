#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace smotekit {

/// Source of uniform draws used by every randomized operation.
///
/// Resampling code only ever asks for a real in [0,1) or an index in [0,n),
/// so tests can substitute a scripted source to pin the interpolation gap.
class RandomSource {
public:
    virtual ~RandomSource() = default;

    /// Uniform real in [0, 1).
    virtual double unit() = 0;

    /// Uniform integer in [0, n). n must be positive.
    virtual std::size_t below(std::size_t n) = 0;
};

/// Portable seeded generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The mapping to reals and bounded integers is done here rather than
/// through <random> distributions, whose algorithms are implementation-defined.
/// unit() takes the top 53 bits; below() uses rejection sampling on the raw
/// 64-bit output.
///
/// Substreams: stream(seed, label) seeds an independent engine with
/// splitmix64(seed ^ fnv1a64(label)). Every operation that consumes randomness
/// takes its own labelled substream, so adding a consumer never shifts the
/// draws seen by another.
class Rng final : public RandomSource {
public:
    explicit Rng(std::uint64_t seed);

    static Rng stream(std::uint64_t seed, std::string_view label);
    static std::uint64_t stream_seed(std::uint64_t seed, std::string_view label);

    double unit() override;
    std::size_t below(std::size_t n) override;

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Returns 0..n-1 in a uniformly random order (Fisher-Yates driven by `rng`).
std::vector<std::size_t> random_permutation(std::size_t n, RandomSource& rng);

}  // namespace smotekit
