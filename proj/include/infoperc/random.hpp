#pragma once

#include <cstdint>
#include <limits>

namespace infoperc {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Key for an independent stream derived from (seed, index).
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index)
{
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Maps 64 random bits to a double in [0, 1).
constexpr double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

/// Stateless uniform draw number `counter` of stream `key`.
constexpr double counter_uniform(std::uint64_t key, std::uint64_t counter)
{
    return to_unit(mix64(key ^ mix64(counter)));
}

/// Counter-based generator: output i of stream (seed, index) is a pure function of
/// (seed, index, i), so any trial can be replayed independently of scheduling.
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t index) : key_(stream_key(seed, index)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        counter_ += 0x9e3779b97f4a7c15ULL;
        return mix64(key_ + counter_);
    }

    double uniform() { return to_unit((*this)()); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n)
    {
        // Lemire's multiply-shift; bias is < n / 2^64, negligible here.
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace infoperc
