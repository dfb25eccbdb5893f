#include "doctest.h"

#include "infoperc/exact_mi.hpp"
#include "infoperc/percolation.hpp"
#include "infoperc/random.hpp"
#include "infoperc/simulators.hpp"

#include <cmath>
#include <numeric>

using namespace infoperc;
using doctest::Approx;

namespace {

VertexSet tree_leaves(int d, int depth)
{
    const Graph t = dary_tree(d, depth);
    VertexSet leaves;
    for (int v = 0; v < t.n(); ++v)
        if (tree_coord(v, d).depth == depth)
            leaves.push_back(v);
    return leaves;
}

} // namespace

TEST_CASE("broadcast extremes")
{
    const auto noise = broadcast_mi({2, 0.5, 6, 2000}, 1);
    for (const auto& e : noise)
        CHECK(e.mean == Approx(0.0));
    const auto clean = broadcast_mi({2, 0.0, 6, 2000}, 1);
    for (const auto& e : clean)
        CHECK(e.mean == Approx(1.0));
    CHECK_THROWS_AS(broadcast_mi({2, 0.1, 5, 10}, 1), InvalidArgument);
}

TEST_CASE("broadcast delta")
{
    CHECK(broadcast_delta(2, 0.9) == Approx(0.16458980337503154).epsilon(1e-14));
    CHECK(broadcast_delta(2, 1.5) == Approx(0.0669872981077807).epsilon(1e-13));
    const double d = broadcast_delta(3, 1.2);
    CHECK(std::pow(1 - 2 * d, 2) * 3 == Approx(1.2).epsilon(1e-14));
}

TEST_CASE("broadcast agrees with the exact oracle at small depth")
{
    for (double product : {0.9, 1.5}) {
        const double delta = broadcast_delta(2, product);
        const auto pop = broadcast_mi({2, delta, 3, 100000}, 17);
        for (int depth = 1; depth <= 3; ++depth) {
            const auto model = edge_model(dary_tree(2, depth), Bsc{delta});
            const auto leaves = tree_leaves(2, depth);
            const auto& est = pop[static_cast<std::size_t>(depth - 1)];
            if (depth <= 2) {
                const double exact = exact_mi(model, {0}, leaves, MiMode::Joint) / std::log(2.0);
                CHECK(std::abs(est.mean - exact) <= 4 * est.std_error);
            } else {
                const auto mc = mc_mi(model, {0}, leaves, MiMode::Joint, 3000, 18);
                const double se = std::hypot(est.std_error, mc.std_error / std::log(2.0));
                CHECK(std::abs(est.mean - mc.mean / std::log(2.0)) <= 4 * se);
            }
        }
    }
    // Depth one in closed form: H(leaves) - 2 h(delta), in bits.
    const auto one = broadcast_mi({2, broadcast_delta(2, 0.9), 1, 100000}, 3);
    CHECK(std::abs(one[0].mean - 0.5581929439422602) <= 4 * one[0].std_error);
}

TEST_CASE("broadcast information is nonincreasing in depth")
{
    for (double product : {0.9, 1.5, 2.0}) {
        const auto mi = broadcast_mi({2, broadcast_delta(2, product), 20, 20000}, 4);
        for (std::size_t t = 1; t < mi.size(); ++t)
            CHECK(mi[t].mean <= mi[t - 1].mean + 3 * std::hypot(mi[t].std_error, mi[t - 1].std_error));
    }
    const auto below = broadcast_mi({2, broadcast_delta(2, 0.9), 20, 20000}, 5);
    const auto above = broadcast_mi({2, broadcast_delta(2, 1.5), 20, 20000}, 5);
    CHECK(above.back().mean > 1e-2);
    CHECK(below.back().mean < above.back().mean);
}

TEST_CASE("Wigner sampling")
{
    const auto a = sample_wigner(6, 2.0, 9), b = sample_wigner(6, 2.0, 9);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.y == a.y.transpose());
    for (int i = 0; i < 6; ++i)
        CHECK(std::abs(a.x[i]) == 1.0);
    CHECK_THROWS_AS(sample_wigner(1, 1.0, 1), InvalidArgument);

    // E[y_01 x_0 x_1] = sqrt(lambda / n).
    const int n = 5;
    const double lambda = 3.0;
    MomentAccumulator acc, pure;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        const auto w = sample_wigner(n, lambda, s);
        acc.add(w.y(0, 1) * w.x[0] * w.x[1]);
        const auto z = sample_wigner(n, 0.0, s);
        pure.add(z.y(0, 1) * z.x[0] * z.x[1]);
    }
    const auto e = make_estimate(acc);
    CHECK(std::abs(e.mean - std::sqrt(lambda / n)) <= 3 * e.std_error);
    const auto z = make_estimate(pure);
    CHECK(std::abs(z.mean) <= 3 * z.std_error);
}

TEST_CASE("Wigner Bayes estimator extremes")
{
    const int n = 10;
    const auto flat = wigner_bayes_overlap(sample_wigner(n, 0.0, 3));
    CHECK(flat.mmse_xx == Approx(2.0 * (1.0 - 1.0 / n)).epsilon(1e-9));
    CHECK(flat.posterior_xx.isApprox(Eigen::MatrixXd::Identity(n, n), 1e-9));
    const auto strong = wigner_bayes_overlap(sample_wigner(n, 400.0, 3));
    CHECK(strong.overlap == Approx(1.0));
    CHECK(strong.mmse_xx < 1e-6);
    CHECK_THROWS_AS(wigner_bayes_overlap(sample_wigner(19, 1.0, 1)), BudgetExceeded);
}

TEST_CASE("Wigner overlap and mmse move in opposite directions")
{
    const auto weak = wigner_average(14, 0.25, 200, 1);
    const auto strong = wigner_average(14, 4.0, 200, 2);
    CHECK(strong.overlap.mean - weak.overlap.mean >
          3 * std::hypot(strong.overlap.std_error, weak.overlap.std_error));
    CHECK(weak.mmse_xx.mean - strong.mmse_xx.mean > 3 * std::hypot(strong.mmse_xx.std_error, weak.mmse_xx.std_error));

    const double grid[] = {0.0, 1.0, 4.0, 16.0};
    WignerSummary prev = wigner_average(10, grid[0], 200, 10);
    for (std::size_t i = 1; i < 4; ++i) {
        const auto cur = wigner_average(10, grid[i], 200, 10 + i);
        CHECK(cur.overlap.mean >= prev.overlap.mean - 3 * std::hypot(cur.overlap.std_error, prev.overlap.std_error));
        CHECK(cur.mmse_xx.mean <= prev.mmse_xx.mean + 3 * std::hypot(cur.mmse_xx.std_error, prev.mmse_xx.std_error));
        prev = cur;
    }
}

TEST_CASE("SBM sampling")
{
    const auto one = sample_sbm(2000, 1, 3.0, 0.5, 4);
    const Graph er = sample_er(2000, 3.0 / 2000, stream_key(4, 1));
    CHECK(one.edges == er.edges());

    const int n = 10000;
    const auto s = sample_sbm(n, 2, 5.0, 1.0, 8);
    const double mean_degree = 2.0 * static_cast<double>(s.edges.size()) / n;
    const double sd = 2.0 * std::sqrt(3.0 * n / 2.0) / n;
    CHECK(std::abs(mean_degree - 3.0) <= 3 * sd);
    std::uint64_t same = 0;
    for (auto [u, v] : s.edges)
        same += s.labels[static_cast<std::size_t>(u)] == s.labels[static_cast<std::size_t>(v)];
    CHECK(static_cast<double>(same) / static_cast<double>(s.edges.size()) == Approx(5.0 / 6.0).epsilon(0.03));

    const auto a = sample_sbm(500, 3, 4.0, 2.0, 77), b = sample_sbm(500, 3, 4.0, 2.0, 77);
    CHECK(a.labels == b.labels);
    CHECK(a.edges == b.edges);
    CHECK_THROWS_AS(sample_sbm(10, 2, 11.0, 1.0, 1), InvalidArgument);
}

TEST_CASE("SBM with a = b ignores the labels")
{
    // Pooled chi-square over 100 samples: within/across edge counts against the
    // label-only expectation; 100 degrees of freedom, 1% critical value 135.807.
    double stat = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const int n = 2000, k = 3;
        const auto g = sample_sbm(n, k, 4.0, 4.0, 1000 + s);
        std::vector<double> sizes(k, 0.0);
        for (int l : g.labels)
            sizes[static_cast<std::size_t>(l)] += 1;
        double within_pairs = 0.0;
        for (double c : sizes)
            within_pairs += c * (c - 1) / 2;
        const double frac = within_pairs / (n * (n - 1.0) / 2);
        double observed = 0.0;
        for (auto [u, v] : g.edges)
            observed += g.labels[static_cast<std::size_t>(u)] == g.labels[static_cast<std::size_t>(v)];
        const double total = static_cast<double>(g.edges.size());
        const double e_in = total * frac, e_out = total * (1 - frac);
        stat += std::pow(observed - e_in, 2) / e_in + std::pow(total - observed - e_out, 2) / e_out;
    }
    CHECK(stat < 135.807);
}

TEST_CASE("GW coupling")
{
    for (int k : {2, 3, 5}) {
        const auto c = gw_coupling(k, 1.5, 10, 4000, 3);
        const double rate = 2.0 / k;
        CHECK(std::abs(c.child_uncoupled.mean - rate) <= 3 * c.child_uncoupled.std_error);
    }
    const auto sub = gw_coupling(3, 1.2, 30, 20000, 5);
    CHECK(sub.survival.mean < 0.05);
    CHECK(gw_extinction(PoissonOffspring{0.8}) == 1.0);

    const auto sup = gw_coupling(3, 2.1, 30, 20000, 6, 1000);
    CHECK(std::abs(sup.survival.mean - (1 - gw_extinction(PoissonOffspring{1.4}))) <= 0.02);
    CHECK(sup.mean_uncoupled.size() == 31);
    CHECK(sup.mean_uncoupled[0] == 1.0);
    for (double m : sup.mean_uncoupled)
        CHECK(m >= 0.0);
    CHECK_THROWS_AS(gw_coupling(1, 1.0, 5, 10, 1), InvalidArgument);

    set_thread_count(1);
    const auto p = gw_coupling(3, 2.1, 20, 3000, 7);
    set_thread_count(4);
    const auto q = gw_coupling(3, 2.1, 20, 3000, 7);
    set_thread_count(0);
    CHECK(p.survival.mean == q.survival.mean);
    CHECK(p.mean_uncoupled == q.mean_uncoupled);
}

TEST_CASE("overlap metric")
{
    const std::vector<int> x{0, 1, 2, 2, 1, 0, 0};
    CHECK(overlap_metric(x, x, 3) == 0.0);
    std::vector<int> relabeled;
    for (int v : x)
        relabeled.push_back((v + 1) % 3);
    CHECK(overlap_metric(x, relabeled, 3) == 0.0);
    CHECK(overlap_metric({0, 0, 1, 1}, {1, 1, 0, 0}, 2) == 0.0);
    CHECK(overlap_metric({0, 0, 1, 1}, {0, 1, 0, 1}, 2) == 0.5);
    CHECK_THROWS_AS(overlap_metric({0}, {0}, 9), InvalidArgument);
    CHECK_THROWS_AS(overlap_metric({0, 3}, {0, 1}, 3), InvalidArgument);
}

TEST_CASE("overlap metric is a relabeling-invariant pseudometric")
{
    for (std::uint64_t s = 0; s < 200; ++s) {
        CounterRng r(s, 0);
        const int k = 2 + static_cast<int>(r.below(4));
        const int m = 1 + static_cast<int>(r.below(12));
        std::vector<int> x(m), y(m), z(m);
        for (int i = 0; i < m; ++i) {
            x[static_cast<std::size_t>(i)] = static_cast<int>(r.below(static_cast<std::uint64_t>(k)));
            y[static_cast<std::size_t>(i)] = static_cast<int>(r.below(static_cast<std::uint64_t>(k)));
            z[static_cast<std::size_t>(i)] = static_cast<int>(r.below(static_cast<std::uint64_t>(k)));
        }
        const double xy = overlap_metric(x, y, k), yx = overlap_metric(y, x, k);
        CHECK(xy == Approx(yx));
        CHECK(overlap_metric(x, z, k) <= xy + overlap_metric(y, z, k) + 1e-12);
        std::vector<int> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        std::rotate(perm.begin(), perm.begin() + 1, perm.end());
        std::vector<int> px, py;
        for (int i = 0; i < m; ++i) {
            px.push_back(perm[static_cast<std::size_t>(x[static_cast<std::size_t>(i)])]);
            py.push_back(perm[static_cast<std::size_t>(y[static_cast<std::size_t>(i)])]);
        }
        CHECK(overlap_metric(px, py, k) == Approx(xy));
    }
}

TEST_CASE("random guessing")
{
    const auto r = random_guess_check(3, 1000, 10000, 1);
    CHECK(r.violation_rate.mean == 0.0);
    CHECK(r.bound == Approx(6 * std::exp(-20.0)).epsilon(1e-12));
    CHECK(std::abs(r.hamming_mean.mean - 2.0 / 3.0) <= 3 * r.hamming_mean.std_error);

    // m = 1: the threshold (k-1)/k - 1 is negative, and k! e^-2 is no guarantee.
    const auto tiny = random_guess_check(4, 1, 2000, 2);
    CHECK(tiny.bound > 1.0);
    CHECK(tiny.violation_rate.mean <= tiny.bound);
    for (int m : {2, 8, 27, 64}) {
        const auto c = random_guess_check(3, m, 5000, 3 + m);
        CHECK(c.violation_rate.mean <= std::min(1.0, c.bound) + 3 * c.violation_rate.std_error);
    }
}
