#include "infoperc/percolation.hpp"
#include "infoperc/random.hpp"
#include "infoperc/union_find.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace infoperc {

namespace {

// Number of S1 members whose component contains a member of S2.
int count_connected(UnionFind& uf, const VertexSet& s1, const VertexSet& s2, std::vector<char>& marked)
{
    for (int v : s2)
        marked[static_cast<std::size_t>(uf.find(v))] = 1;
    int count = 0;
    for (int v : s1)
        count += marked[static_cast<std::size_t>(uf.find(v))];
    for (int v : s2)
        marked[static_cast<std::size_t>(uf.find(v))] = 0;
    return count;
}

void check_factor_cap(const FactorGraph& fg, int cap)
{
    if (cap < 0 || cap > 62)
        throw InvalidArgument("factor cap must lie in [0, 62]");
    if (fg.n_factors() > static_cast<std::size_t>(cap))
        throw BudgetExceeded("exact percolation over " + std::to_string(fg.n_factors()) + " factors exceeds cap " +
                             std::to_string(cap));
}

} // namespace

PercEstimate perc_mc(const FactorGraph& fg, const VertexSet& s1_in, const VertexSet& s2_in, std::uint64_t trials,
                     std::uint64_t seed)
{
    if (trials < 1)
        throw InvalidArgument("perc_mc needs at least one trial");
    const VertexSet s1 = normalize_set(s1_in, fg.n_vars());
    const VertexSet s2 = normalize_set(s2_in, fg.n_vars());
    if (s1.empty() || s2.empty())
        throw InvalidArgument("perc_mc needs nonempty S1 and S2");

    const int n = fg.n_vars();
    const auto& factors = fg.factors();
    const auto acc = accumulate_trials(trials, [&](std::uint64_t i) {
        thread_local UnionFind uf;
        thread_local std::vector<char> marked;
        uf.reset(n);
        marked.assign(static_cast<std::size_t>(n), 0);
        CounterRng rng(seed, i);
        for (const auto& f : factors) {
            if (!rng.bernoulli(f.eta))
                continue;
            for (std::size_t k = 1; k < f.vars.size(); ++k)
                uf.unite(f.vars[0], f.vars[k]);
        }
        return static_cast<double>(count_connected(uf, s1, s2, marked));
    });
    if (s1.size() == 1)
        return make_proportion_estimate(static_cast<std::uint64_t>(std::llround(acc.mean() * static_cast<double>(trials))),
                                        trials);
    return make_estimate(acc);
}

double perc_exact(const FactorGraph& fg, const VertexSet& s1_in, const VertexSet& s2_in, int factor_cap)
{
    check_factor_cap(fg, factor_cap);
    const VertexSet s1 = normalize_set(s1_in, fg.n_vars());
    const VertexSet s2 = normalize_set(s2_in, fg.n_vars());
    if (s1.empty() || s2.empty())
        return 0.0;

    const int n = fg.n_vars();
    const auto& factors = fg.factors();
    const std::size_t m = factors.size();
    UnionFind uf;
    std::vector<char> marked(static_cast<std::size_t>(n), 0);
    CompensatedSum total;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        long double weight = 1.0L;
        for (std::size_t w = 0; w < m; ++w)
            weight *= (mask >> w & 1U) ? factors[w].eta : 1.0 - factors[w].eta;
        if (weight == 0.0L)
            continue;
        uf.reset(n);
        for (std::size_t w = 0; w < m; ++w)
            if (mask >> w & 1U)
                for (std::size_t k = 1; k < factors[w].vars.size(); ++k)
                    uf.unite(factors[w].vars[0], factors[w].vars[k]);
        total.add(weight * count_connected(uf, s1, s2, marked));
    }
    return static_cast<double>(total.value());
}

RecursionCheck recursion_check(const FactorGraph& fg, const VertexSet& s1, const VertexSet& s2, std::size_t w,
                               int factor_cap)
{
    if (w >= fg.n_factors())
        throw InvalidArgument("factor index out of range");
    const VertexSet target = normalize_set(s2, fg.n_vars());
    const auto& nbhd = fg.factors()[w].vars;
    const bool touches =
        std::any_of(nbhd.begin(), nbhd.end(), [&](int v) { return std::binary_search(target.begin(), target.end(), v); });
    if (!touches)
        throw InvalidArgument("recursion needs the factor neighbourhood to meet S2");

    const double eta = fg.factors()[w].eta;
    const FactorGraph rest = fg.without(w);
    VertexSet grown = target;
    grown.insert(grown.end(), nbhd.begin(), nbhd.end());

    RecursionCheck r;
    r.lhs = perc_exact(fg, s1, target, factor_cap);
    r.rhs = eta * perc_exact(rest, s1, grown, factor_cap) + (1.0 - eta) * perc_exact(rest, s1, target, factor_cap);
    return r;
}

// --- square lattice two-point function ---------------------------------------

namespace {

// Bond weights are hashed from (trial, bond id); the bond from v towards +x has id
// 2v and towards +y has id 2v + 1. A bond is open at density t iff weight < t.
class LatticeBox {
public:
    LatticeBox(int n, int margin) : radius_(n + margin), side_(2 * radius_ + 1), n_(n) {}

    int vertex(int x, int y) const { return (y + radius_) * side_ + (x + radius_); }
    int size() const { return side_ * side_; }

    // Smallest threshold index at which source and target connect, or
    // thresholds.size() when they never do.
    std::size_t first_connection(std::uint64_t key, std::span<const double> thresholds,
                                 std::vector<std::uint32_t>& seen, std::uint32_t stamp,
                                 std::vector<std::vector<int>>& pending, std::vector<int>& stack) const
    {
        const std::size_t levels = thresholds.size();
        const int source = vertex(0, 0), target = vertex(n_, n_);
        if (source == target)
            return 0;
        for (auto& p : pending)
            p.clear();
        stack.clear();
        seen[static_cast<std::size_t>(source)] = stamp;
        stack.push_back(source);

        std::size_t level = 0;
        for (;;) {
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                const int x = v % side_, y = v / side_;
                auto relax = [&](int u, std::uint64_t bond) {
                    if (seen[static_cast<std::size_t>(u)] == stamp)
                        return false;
                    const double wt = counter_uniform(key, bond);
                    const auto b = static_cast<std::size_t>(
                        std::upper_bound(thresholds.begin(), thresholds.end(), wt) - thresholds.begin());
                    if (b >= levels)
                        return false;
                    if (b > level) {
                        pending[b].push_back(u);
                        return false;
                    }
                    seen[static_cast<std::size_t>(u)] = stamp;
                    if (u == target)
                        return true;
                    stack.push_back(u);
                    return false;
                };
                const auto id = static_cast<std::uint64_t>(v);
                if (x + 1 < side_ && relax(v + 1, 2 * id))
                    return level;
                if (x > 0 && relax(v - 1, 2 * (id - 1)))
                    return level;
                if (y + 1 < side_ && relax(v + side_, 2 * id + 1))
                    return level;
                if (y > 0 && relax(v - side_, 2 * (id - static_cast<std::uint64_t>(side_)) + 1))
                    return level;
            }
            if (++level >= levels)
                return levels;
            for (int u : pending[level]) {
                if (seen[static_cast<std::size_t>(u)] == stamp)
                    continue;
                seen[static_cast<std::size_t>(u)] = stamp;
                if (u == target)
                    return level;
                stack.push_back(u);
            }
        }
    }

private:
    int radius_;
    int side_;
    int n_;
};

} // namespace

std::vector<PercEstimate> grid_two_point_curve(int n, std::span<const double> etas, std::uint64_t trials,
                                               std::uint64_t seed, int margin)
{
    if (n < 0)
        throw InvalidArgument("grid distance must be nonnegative");
    if (trials < 1)
        throw InvalidArgument("grid_two_point needs at least one trial");
    for (double e : etas)
        if (!(e >= 0.0 && e <= 1.0))
            throw InvalidArgument("bond density must lie in [0, 1]");
    if (margin < 0)
        margin = n;
    if (static_cast<std::int64_t>(2 * (n + margin) + 1) * (2 * (n + margin) + 1) > (std::int64_t{1} << 28))
        throw BudgetExceeded("lattice box too large");

    std::vector<std::size_t> order(etas.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return etas[a] < etas[b]; });
    std::vector<double> thresholds(etas.size());
    for (std::size_t j = 0; j < order.size(); ++j)
        thresholds[j] = etas[order[j]];

    const LatticeBox box(n, margin);
    const std::size_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    // first[i]: smallest sorted threshold index connecting trial i.
    std::vector<std::uint32_t> first(trials);
    run_blocks(blocks, [&](std::size_t blk) {
        std::vector<std::uint32_t> seen(static_cast<std::size_t>(box.size()), 0);
        std::vector<std::vector<int>> pending(thresholds.size());
        std::vector<int> stack;
        const std::uint64_t begin = blk * kTrialBlock;
        const std::uint64_t end = std::min<std::uint64_t>(trials, begin + kTrialBlock);
        std::uint32_t stamp = 0;
        for (std::uint64_t i = begin; i < end; ++i)
            first[i] = static_cast<std::uint32_t>(
                box.first_connection(stream_key(seed, i), thresholds, seen, ++stamp, pending, stack));
    });

    std::vector<std::uint64_t> at_level(thresholds.size() + 1, 0);
    for (auto f : first)
        ++at_level[f];
    std::vector<PercEstimate> out(etas.size());
    std::uint64_t connected = 0;
    for (std::size_t j = 0; j < thresholds.size(); ++j) {
        connected += at_level[j];
        out[order[j]] = make_proportion_estimate(connected, trials);
    }
    return out;
}

PercEstimate grid_two_point(int n, double eta, std::uint64_t trials, std::uint64_t seed, int margin)
{
    const double etas[] = {eta};
    return grid_two_point_curve(n, etas, trials, seed, margin).front();
}

// --- Erdős–Rényi giant component --------------------------------------------

PercEstimate er_giant(int n, double c, std::uint64_t samples, std::uint64_t seed)
{
    if (n < 1)
        throw InvalidArgument("er_giant needs n >= 1");
    if (!(c >= 0.0) || c > n)
        throw InvalidArgument("er_giant needs 0 <= c <= n");
    if (samples < 1)
        throw InvalidArgument("er_giant needs at least one sample");
    const double p = c / n;
    const auto acc = accumulate_trials(samples, [&](std::uint64_t i) {
        thread_local UnionFind uf;
        uf.reset(n);
        int largest = 1;
        for_each_er_edge(n, p, stream_key(seed, i), [&](int u, int v) { largest = std::max(largest, uf.unite(u, v)); });
        return static_cast<double>(largest) / n;
    });
    return make_estimate(acc);
}

// --- Galton–Watson extinction ------------------------------------------------

namespace {

struct Generating {
    double value;
    double slope;
};

Generating generating(const Offspring& o, double q)
{
    if (const auto* p = std::get_if<PoissonOffspring>(&o)) {
        const double v = std::exp(p->lambda * (q - 1.0));
        return {v, p->lambda * v};
    }
    const auto& b = std::get<BinomialOffspring>(o);
    const double base = 1.0 - b.eta + b.eta * q;
    return {std::pow(base, b.d), b.d == 0 ? 0.0 : b.d * b.eta * std::pow(base, b.d - 1)};
}

} // namespace

double mean_offspring(const Offspring& o)
{
    if (const auto* p = std::get_if<PoissonOffspring>(&o)) {
        if (!(p->lambda >= 0.0) || !std::isfinite(p->lambda))
            throw InvalidArgument("Poisson mean must be finite and nonnegative");
        return p->lambda;
    }
    const auto& b = std::get<BinomialOffspring>(o);
    if (b.d < 0 || !(b.eta >= 0.0 && b.eta <= 1.0))
        throw InvalidArgument("binomial offspring needs d >= 0 and eta in [0, 1]");
    return b.d * b.eta;
}

double gw_extinction(const Offspring& o)
{
    if (mean_offspring(o) <= 1.0)
        return 1.0;
    double q = 0.0;
    for (int it = 0; it < 100000000; ++it) {
        const auto g = generating(o, q);
        const double step = g.value - q;
        q = g.value;
        // Near the fixed point the error is about step / (1 - slope).
        if (step <= 1e-12 * std::max(1e-300, 1.0 - g.slope))
            break;
    }
    return q;
}

} // namespace infoperc
