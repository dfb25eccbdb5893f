#include "infoperc/estimate.hpp"
#include "infoperc/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace infoperc {

namespace {
std::atomic<int> g_threads{0};
constexpr double kZ95 = 1.959963984540054;
} // namespace

void MomentAccumulator::add(double x)
{
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void MomentAccumulator::merge(const MomentAccumulator& other)
{
    if (other.n_ == 0)
        return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double delta = other.mean_ - mean_;
    const double n = na + nb;
    mean_ += delta * nb / n;
    m2_ += other.m2_ + delta * delta * na * nb / n;
    n_ += other.n_;
}

double MomentAccumulator::variance() const
{
    if (n_ < 2)
        return 0.0;
    return std::max(0.0, m2_ / static_cast<double>(n_ - 1));
}

PercEstimate make_estimate(const MomentAccumulator& acc)
{
    PercEstimate e;
    e.mean = acc.mean();
    e.trials = acc.count();
    e.std_error = acc.count() < 2 ? kInf : std::sqrt(acc.variance() / static_cast<double>(acc.count()));
    e.ci95 = {e.mean - kZ95 * e.std_error, e.mean + kZ95 * e.std_error};
    return e;
}

PercEstimate make_proportion_estimate(std::uint64_t successes, std::uint64_t trials)
{
    PercEstimate e;
    e.trials = trials;
    if (trials == 0) {
        e.std_error = kInf;
        e.ci95 = {0.0, 1.0};
        return e;
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    e.mean = p;
    e.std_error = trials < 2 ? kInf : std::sqrt(p * (1.0 - p) / (n - 1.0));
    const double z2 = kZ95 * kZ95;
    const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
    e.ci95 = {std::min(p, std::max(0.0, centre - half)), std::max(p, std::min(1.0, centre + half))};
    return e;
}

int thread_count()
{
    const int t = g_threads.load();
    if (t > 0)
        return t;
    return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_count(int n) { g_threads.store(std::max(0, n)); }

void run_blocks(std::size_t n_blocks, const std::function<void(std::size_t)>& fn)
{
    const std::size_t workers = std::min<std::size_t>(n_blocks, static_cast<std::size_t>(thread_count()));
    if (workers <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t b = next++; b < n_blocks; b = next++) {
            if (failed.load())
                return;
            try {
                fn(b);
            } catch (...) {
                if (!failed.exchange(true))
                    failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i)
        pool.emplace_back(worker);
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace infoperc
