#include "infoperc/simulators.hpp"
#include "infoperc/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace infoperc {

// --- broadcasting on trees ---------------------------------------------------

double broadcast_delta(int d, double product)
{
    if (d < 1 || !(product >= 0.0) || product > d)
        throw InvalidArgument("need d >= 1 and 0 <= product <= d");
    return 0.5 * (1.0 - std::sqrt(product / d));
}

std::vector<PercEstimate> broadcast_mi(const BroadcastSpec& spec, std::uint64_t seed)
{
    if (spec.d < 1 || !(spec.delta >= 0.0 && spec.delta <= 0.5) || spec.depth < 1 || spec.population < 1000)
        throw InvalidArgument("broadcast needs d >= 1, delta in [0, 1/2], depth >= 1, population >= 1000");
    const std::uint64_t pop = spec.population;
    const double shrink = 1.0 - 2.0 * spec.delta;
    const double bits = 1.0 / std::log(2.0);

    // Magnetizations P[x = 0 | data] - P[x = 1 | data] of subtree roots whose value is 0.
    std::vector<double> current(pop, 1.0), next(pop);
    const std::size_t blocks = (pop + kTrialBlock - 1) / kTrialBlock;
    std::vector<MomentAccumulator> partial(blocks);
    std::vector<PercEstimate> out;
    for (int t = 1; t <= spec.depth; ++t) {
        const std::uint64_t level_key = stream_key(seed, static_cast<std::uint64_t>(t));
        run_blocks(blocks, [&](std::size_t blk) {
            partial[blk] = MomentAccumulator{};
            const std::uint64_t end = std::min<std::uint64_t>(pop, (blk + 1) * kTrialBlock);
            for (std::uint64_t j = blk * kTrialBlock; j < end; ++j) {
                CounterRng rng(level_key, j);
                double plus = 1.0, minus = 1.0;
                for (int c = 0; c < spec.d; ++c) {
                    double m = current[rng.below(pop)];
                    if (rng.bernoulli(spec.delta))
                        m = -m;
                    const double msg = shrink * m;
                    plus *= 1.0 + msg;
                    minus *= 1.0 - msg;
                }
                const double m = (plus - minus) / (plus + minus);
                next[j] = m;
                partial[blk].add(1.0 - binary_entropy(0.5 * (1.0 + m)) * bits);
            }
        });
        MomentAccumulator acc;
        for (const auto& p : partial)
            acc.merge(p);
        out.push_back(make_estimate(acc));
        current.swap(next);
    }
    return out;
}

// --- spiked Wigner -----------------------------------------------------------

WignerInstance sample_wigner(int n, double lambda, std::uint64_t seed)
{
    if (n < 2)
        throw InvalidArgument("Wigner dimension must be at least 2");
    if (!(lambda >= 0.0))
        throw InvalidArgument("signal strength must be nonnegative");
    WignerInstance w;
    w.n = n;
    w.lambda = lambda;
    CounterRng signs(seed, 0), noise(seed, 1);
    std::normal_distribution<double> gauss;
    w.x.resize(n);
    for (int i = 0; i < n; ++i)
        w.x[i] = signs.below(2) ? 1.0 : -1.0;
    w.y.resize(n, n);
    const double scale = std::sqrt(lambda / n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = scale * w.x[i] * w.x[j] + gauss(noise);
            w.y(i, j) = v;
            w.y(j, i) = v;
        }
    return w;
}

WignerBayes wigner_bayes_overlap(const WignerInstance& inst)
{
    const int n = inst.n;
    if (n < 2)
        throw InvalidArgument("Wigner dimension must be at least 2");
    if (n > kMaxWignerBayesDim)
        throw BudgetExceeded("exhaustive Bayes needs n <= " + std::to_string(kMaxWignerBayesDim));
    const double scale = std::sqrt(inst.lambda / n);
    const std::uint64_t classes = std::uint64_t{1} << (n - 1);

    // Sign vector of class c: s_0 = +1, s_i = -1 iff bit i - 1 of c is set.
    auto signs_of = [&](std::uint64_t c, Eigen::VectorXd& s) {
        s[0] = 1.0;
        for (int i = 1; i < n; ++i)
            s[i] = (c >> (i - 1) & 1U) ? -1.0 : 1.0;
    };
    std::vector<double> log_w(classes);
    Eigen::VectorXd s(n);
    const Eigen::MatrixXd upper = inst.y.triangularView<Eigen::StrictlyUpper>();
    for (std::uint64_t c = 0; c < classes; ++c) {
        signs_of(c, s);
        log_w[c] = scale * s.dot(upper * s);
    }
    const double top = *std::max_element(log_w.begin(), log_w.end());
    CompensatedSum z;
    for (auto& lw : log_w) {
        lw = std::exp(lw - top);
        z.add(lw);
    }
    const auto norm = static_cast<double>(z.value());

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::uint64_t c = 0; c < classes; ++c) {
        signs_of(c, s);
        m.noalias() += (log_w[c] / norm) * (s * s.transpose());
    }

    WignerBayes out;
    out.posterior_xx = m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const Eigen::VectorXd lead = eig.eigenvectors().col(n - 1);
    out.x_hat = lead.unaryExpr([](double v) { return v < 0.0 ? -1.0 : 1.0; });
    out.overlap = std::abs(inst.x.dot(out.x_hat)) / n;
    const double n2 = static_cast<double>(n) * n;
    out.mmse_xx = std::max(0.0, (2.0 * n2 - 2.0 * out.x_hat.dot(m * out.x_hat)) / n2);
    return out;
}

WignerSummary wigner_average(int n, double lambda, std::uint64_t seeds, std::uint64_t seed)
{
    if (seeds < 1)
        throw InvalidArgument("need at least one instance");
    std::vector<double> overlap(seeds), mmse(seeds);
    run_blocks(seeds, [&](std::size_t i) {
        const auto r = wigner_bayes_overlap(sample_wigner(n, lambda, stream_key(seed, i)));
        overlap[i] = r.overlap;
        mmse[i] = r.mmse_xx;
    });
    MomentAccumulator a, b;
    for (std::uint64_t i = 0; i < seeds; ++i) {
        a.add(overlap[i]);
        b.add(mmse[i]);
    }
    return {make_estimate(a), make_estimate(b)};
}

// --- stochastic block model --------------------------------------------------

SbmInstance sample_sbm(int n, int k, double a, double b, std::uint64_t seed)
{
    if (n < 1 || k < 1)
        throw InvalidArgument("SBM needs n >= 1 and k >= 1");
    if (!(a >= 0.0 && b >= 0.0) || a > n || b > n)
        throw InvalidArgument("SBM needs 0 <= a, b <= n");
    SbmInstance s;
    s.n = n;
    s.k = k;
    s.a = a;
    s.b = b;
    CounterRng labels(seed, 0), thin(seed, 2);
    s.labels.resize(static_cast<std::size_t>(n));
    for (auto& l : s.labels)
        l = static_cast<int>(labels.below(static_cast<std::uint64_t>(k)));
    const double p_max = std::max(a, b) / n;
    if (p_max == 0.0)
        return s;
    const double keep_same = a / n / p_max, keep_diff = b / n / p_max;
    // Candidate pairs from ER(n, p_max), thinned to the label-dependent probability.
    for_each_er_edge(n, p_max, stream_key(seed, 1), [&](int u, int v) {
        const double keep = s.labels[static_cast<std::size_t>(u)] == s.labels[static_cast<std::size_t>(v)] ? keep_same : keep_diff;
        if (keep >= 1.0 || thin.uniform() < keep)
            s.edges.emplace_back(u, v);
    });
    return s;
}

// --- coupling on the Galton-Watson tree ---------------------------------------

namespace {

struct CouplingBlock {
    std::uint64_t survived = 0, children = 0, uncoupled_children = 0, saturated = 0;
    std::vector<double> uncoupled_sum;
};

} // namespace

CouplingStats gw_coupling(int k, double d, int depth, std::uint64_t trials, std::uint64_t seed, std::uint64_t cap)
{
    if (k < 2 || !(d > 0.0) || !std::isfinite(d) || depth < 0 || trials < 1 || cap < 1)
        throw InvalidArgument("coupling needs k >= 2, d > 0, depth >= 0, trials >= 1");
    if (static_cast<double>(cap) * (depth + 1) * static_cast<double>(trials) * std::max(1.0, d) > 0x1.0p42)
        throw BudgetExceeded("coupling simulation exceeds the node budget");

    const std::size_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<CouplingBlock> partial(blocks);
    run_blocks(blocks, [&](std::size_t blk) {
        CouplingBlock& out = partial[blk];
        out.uncoupled_sum.assign(static_cast<std::size_t>(depth) + 1, 0.0);
        std::poisson_distribution<long> offspring(d);
        // Uncoupled pairs (x+, x-) of the current generation.
        std::vector<std::pair<int, int>> level, next;
        const std::uint64_t end = std::min<std::uint64_t>(trials, (blk + 1) * kTrialBlock);
        for (std::uint64_t trial = blk * kTrialBlock; trial < end; ++trial) {
            CounterRng rng(seed, trial);
            level.assign(1, {0, 1});
            bool saturated = false;
            out.uncoupled_sum[0] += 1.0;
            for (int t = 1; t <= depth; ++t) {
                if (saturated) {
                    out.uncoupled_sum[static_cast<std::size_t>(t)] += static_cast<double>(cap);
                    continue;
                }
                next.clear();
                for (auto [xp, xm] : level) {
                    const long kids = offspring(rng);
                    for (long c = 0; c < kids; ++c) {
                        ++out.children;
                        if (rng.bernoulli(1.0 / k)) {
                            // Y_e = 1: each copy keeps its parent's label.
                            next.emplace_back(xp, xm);
                        } else if (rng.bernoulli(1.0 / (k - 1))) {
                            // Y_e = 0, swap branch: labels cross.
                            next.emplace_back(xm, xp);
                        } else {
                            continue; // both copies take a common fresh label
                        }
                        ++out.uncoupled_children;
                    }
                }
                level.swap(next);
                out.uncoupled_sum[static_cast<std::size_t>(t)] += static_cast<double>(level.size());
                if (level.empty())
                    break;
                if (level.size() >= cap)
                    saturated = true;
            }
            if (!level.empty()) {
                ++out.survived;
                out.saturated += saturated;
            }
        }
    });

    CouplingStats stats;
    std::uint64_t survived = 0, children = 0, uncoupled = 0;
    stats.mean_uncoupled.assign(static_cast<std::size_t>(depth) + 1, 0.0);
    for (const auto& p : partial) {
        survived += p.survived;
        children += p.children;
        uncoupled += p.uncoupled_children;
        stats.saturated_trials += p.saturated;
        for (std::size_t t = 0; t < p.uncoupled_sum.size(); ++t)
            stats.mean_uncoupled[t] += p.uncoupled_sum[t];
    }
    for (auto& m : stats.mean_uncoupled)
        m /= static_cast<double>(trials);
    stats.survival = make_proportion_estimate(survived, trials);
    stats.child_uncoupled = make_proportion_estimate(uncoupled, children);
    return stats;
}

// --- community recovery metrics -----------------------------------------------

double overlap_metric(const std::vector<int>& x, const std::vector<int>& x_hat, int k)
{
    if (k < 1 || k > kMaxPermutationLabels)
        throw InvalidArgument("overlap metric supports 1 <= k <= " + std::to_string(kMaxPermutationLabels));
    if (x.size() != x_hat.size())
        throw InvalidArgument("label vectors differ in length");
    if (x.empty())
        return 0.0;
    std::vector<std::uint64_t> confusion(static_cast<std::size_t>(k * k), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0 || x[i] >= k || x_hat[i] < 0 || x_hat[i] >= k)
            throw InvalidArgument("label out of range");
        ++confusion[static_cast<std::size_t>(x[i] * k + x_hat[i])];
    }
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t best = 0;
    do {
        std::uint64_t agree = 0;
        for (int j = 0; j < k; ++j)
            agree += confusion[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)] * k + j)];
        best = std::max(best, agree);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return 1.0 - static_cast<double>(best) / static_cast<double>(x.size());
}

RandomGuessReport random_guess_check(int k, int m, std::uint64_t trials, std::uint64_t seed)
{
    if (k < 1 || k > kMaxPermutationLabels || m < 1 || trials < 1)
        throw InvalidArgument("random guess check needs 1 <= k <= 8, m >= 1, trials >= 1");
    const double cut = static_cast<double>(k - 1) / k - 1.0 / std::cbrt(static_cast<double>(m));
    double factorial = 1.0;
    for (int i = 2; i <= k; ++i)
        factorial *= i;

    const std::size_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<std::uint64_t> violations(blocks, 0);
    std::vector<MomentAccumulator> hamming(blocks);
    run_blocks(blocks, [&](std::size_t blk) {
        std::vector<int> x(static_cast<std::size_t>(m)), z(static_cast<std::size_t>(m));
        const std::uint64_t end = std::min<std::uint64_t>(trials, (blk + 1) * kTrialBlock);
        for (std::uint64_t trial = blk * kTrialBlock; trial < end; ++trial) {
            CounterRng rng(seed, trial);
            std::uint64_t differ = 0;
            for (int i = 0; i < m; ++i) {
                x[static_cast<std::size_t>(i)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
                z[static_cast<std::size_t>(i)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
                differ += x[static_cast<std::size_t>(i)] != z[static_cast<std::size_t>(i)];
            }
            hamming[blk].add(static_cast<double>(differ) / m);
            if (overlap_metric(x, z, k) < cut)
                ++violations[blk];
        }
    });
    std::uint64_t total = 0;
    MomentAccumulator h;
    for (std::size_t b = 0; b < blocks; ++b) {
        total += violations[b];
        h.merge(hamming[b]);
    }
    RandomGuessReport r;
    r.violation_rate = make_proportion_estimate(total, trials);
    r.bound = factorial * std::exp(-2.0 * std::cbrt(static_cast<double>(m)));
    r.hamming_mean = make_estimate(h);
    return r;
}

} // namespace infoperc
