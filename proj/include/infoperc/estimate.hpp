#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace infoperc {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Monte Carlo estimate of a mean.
struct PercEstimate {
    double mean = 0.0;
    double std_error = 0.0; ///< +inf when fewer than two trials
    std::uint64_t trials = 0;
    Interval ci95;
};

/// Streaming mean/variance (Welford) with order-fixed merging (Chan et al.).
class MomentAccumulator {
public:
    void add(double x);
    void merge(const MomentAccumulator& other);

    std::uint64_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const; ///< unbiased; 0 for n < 2

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Normal-approximation estimate.
PercEstimate make_estimate(const MomentAccumulator& acc);

/// Estimate of a probability from 0/1 outcomes, with a Wilson score interval.
PercEstimate make_proportion_estimate(std::uint64_t successes, std::uint64_t trials);

/// Worker count used by all parallel operations. Defaults to the hardware concurrency.
int thread_count();
void set_thread_count(int n);

/// Runs fn(block) for block in [0, n_blocks) on the worker pool. Each block index is
/// executed exactly once; callers store per-block results by index so that reduction
/// order does not depend on the worker count.
void run_blocks(std::size_t n_blocks, const std::function<void(std::size_t)>& fn);

inline constexpr std::size_t kTrialBlock = 1024;

/// Calls trial(i, acc) for every i in [0, n) and merges per-block accumulators in
/// block order. The result is bit-identical for any worker count.
template <class TrialFn>
MomentAccumulator accumulate_trials(std::uint64_t n, TrialFn&& trial)
{
    const std::size_t blocks = (n + kTrialBlock - 1) / kTrialBlock;
    std::vector<MomentAccumulator> partial(blocks);
    run_blocks(blocks, [&](std::size_t b) {
        const std::uint64_t begin = b * kTrialBlock;
        const std::uint64_t end = std::min<std::uint64_t>(n, begin + kTrialBlock);
        for (std::uint64_t i = begin; i < end; ++i)
            partial[b].add(trial(i));
    });
    MomentAccumulator total;
    for (const auto& p : partial)
        total.merge(p);
    return total;
}

} // namespace infoperc
