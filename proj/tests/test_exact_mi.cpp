#include "doctest.h"

#include "infoperc/exact_mi.hpp"
#include "infoperc/percolation.hpp"
#include "infoperc/random.hpp"

#include <cmath>

using namespace infoperc;
using doctest::Approx;

namespace {

const double kLog2 = std::log(2.0);

IndependentPrior biased_bits(int n, double p_one)
{
    IndependentPrior p;
    for (int i = 0; i < n; ++i)
        p.marginals.push_back(Eigen::Vector2d(1 - p_one, p_one));
    return p;
}

// Uniform over binary configurations with x0 == x1.
JointPrior first_two_equal(int n)
{
    Eigen::VectorXd t = Eigen::VectorXd::Zero(1 << n);
    for (int x = 0; x < (1 << n); ++x) {
        const int x0 = x >> (n - 1) & 1, x1 = x >> (n - 2) & 1;
        if (x0 == x1)
            t[x] = 1.0;
    }
    return {t / t.sum()};
}

JointPrior random_joint(std::uint64_t seed, int configs)
{
    CounterRng r(seed, 3);
    Eigen::VectorXd t(configs);
    for (int i = 0; i < configs; ++i)
        t[i] = r.uniform() < 0.2 ? 0.0 : r.uniform();
    t[0] += 0.1;
    return {t / t.sum()};
}

// Random discrete model: mixed alphabets, factors of degree 1-3 with random labels.
SmallModel random_model(std::uint64_t seed, bool dependent)
{
    CounterRng r(seed, 1);
    const int n = 2 + static_cast<int>(r.below(3));
    std::vector<int> alphabet;
    for (int i = 0; i < n; ++i)
        alphabet.push_back(2 + static_cast<int>(r.below(2)));
    std::vector<Factor> fs;
    const int m = 1 + static_cast<int>(r.below(3));
    for (int w = 0; w < m; ++w) {
        const int degree = 1 + static_cast<int>(r.below(static_cast<std::uint64_t>(std::min(n, 3))));
        std::vector<int> vars;
        while (static_cast<int>(vars.size()) < degree) {
            const int v = static_cast<int>(r.below(static_cast<std::uint64_t>(n)));
            if (std::find(vars.begin(), vars.end(), v) == vars.end())
                vars.push_back(v);
        }
        std::size_t tuples = 1;
        for (int v : vars)
            tuples *= static_cast<std::size_t>(alphabet[static_cast<std::size_t>(v)]);
        std::vector<std::uint8_t> label(tuples);
        for (auto& l : label)
            l = static_cast<std::uint8_t>(r.below(2));
        BinaryInputChannel ch = Bsc{0.5 * r.uniform()};
        if (w % 2 == 1) {
            const double p = r.uniform(), q = r.uniform();
            ch = DiscretePair{{p * 0.5, p * 0.5, 1 - p}, {q * 0.3, 0.7 * q, 1 - q}};
        }
        fs.push_back(Factor{vars, label, ch, 0.0});
    }
    FactorGraph fg(alphabet, std::move(fs));
    if (dependent) {
        std::size_t configs = 1;
        for (int a : alphabet)
            configs *= static_cast<std::size_t>(a);
        return {fg, random_joint(seed, static_cast<int>(configs))};
    }
    IndependentPrior p;
    for (int a : alphabet) {
        Eigen::VectorXd v(a);
        for (int i = 0; i < a; ++i)
            v[i] = 0.1 + r.uniform();
        p.marginals.push_back(v / v.sum());
    }
    return {fg, p};
}

VertexSet random_subset(CounterRng& r, int n)
{
    VertexSet s;
    for (int v = 0; v < n; ++v)
        if (r.bernoulli(0.4))
            s.push_back(v);
    return s;
}

std::vector<Graph> edge_catalog()
{
    return {path_graph(3), cycle_graph(3), star_graph(4), cycle_graph(4), complete_graph(4), grid_graph(2, 3)};
}

} // namespace

TEST_CASE("exact_mi examples")
{
    const auto edge = edge_model(path_graph(2), Bsc{0.25});
    const double mi = exact_mi(edge, {0}, {1}, MiMode::Joint);
    CHECK(mi == Approx(kLog2 - binary_entropy(0.25)).epsilon(1e-12));
    CHECK(mi == Approx(0.13081203594113666).epsilon(1e-12));
    CHECK(mi / kLog2 == Approx(0.18872).epsilon(1e-4));
    CHECK(exact_mi(edge, {}, {1}, MiMode::Joint) == 0.0);
    CHECK(std::abs(exact_mi(edge, {0}, {}, MiMode::Joint)) <= 1e-12);
}

TEST_CASE("exact_mi matches a brute-force oracle")
{
    auto tri = edge_model(cycle_graph(3), Bsc{0.1});
    for (auto mode : {MiMode::Joint, MiMode::CondGivenY, MiMode::CondGivenX})
        CHECK(exact_mi(tri, {0}, {2}, mode) == Approx(0.45231767197727146).epsilon(1e-11));

    tri.prior = biased_bits(3, 0.3);
    CHECK(exact_mi(tri, {0}, {2}, MiMode::Joint) == Approx(0.3990610229808347).epsilon(1e-11));
    CHECK(exact_mi(tri, {0}, {2}, MiMode::CondGivenY) == Approx(0.30694850551108965).epsilon(1e-11));
    CHECK(exact_mi(tri, {0}, {2}, MiMode::CondGivenX) == Approx(0.39906102298083457).epsilon(1e-11));
    CHECK(exact_mi(tri, {0, 1}, {1, 2}, MiMode::Joint) == Approx(1.0611099384568257).epsilon(1e-11));
    CHECK(exact_mi(tri, {0, 1}, {1, 2}, MiMode::CondGivenY) == Approx(0.5699363980062451).epsilon(1e-11));
    CHECK(exact_mi(tri, {0, 1}, {1, 2}, MiMode::CondGivenX) == Approx(0.45024563640193205).epsilon(1e-11));

    auto dep = edge_model(cycle_graph(3), Bsc{0.25});
    dep.prior = first_two_equal(3);
    CHECK(exact_mi(dep, {0}, {2}, MiMode::CondGivenX) == Approx(0.23004012948031127).epsilon(1e-11));
}

TEST_CASE("exact_mi errors")
{
    const auto big = edge_model(grid_graph(4, 4), Bsc{0.1});
    CHECK_THROWS_AS(exact_mi(big, {0}, {1}, MiMode::Joint), BudgetExceeded);
    const auto gauss = edge_model(path_graph(2), GaussianPair{-1, 1, 1});
    CHECK_THROWS_AS(exact_mi(gauss, {0}, {1}, MiMode::Joint), InvalidArgument);
    auto bad = edge_model(path_graph(2), Bsc{0.1});
    bad.prior = JointPrior{Eigen::VectorXd::Constant(3, 1.0 / 3)};
    CHECK_THROWS_AS(exact_mi(bad, {0}, {1}, MiMode::Joint), InvalidArgument);
}

TEST_CASE("mc_mi examples")
{
    const auto edge = edge_model(path_graph(3), Bsc{0.2});
    const double exact = exact_mi(edge, {0}, {2}, MiMode::Joint);
    const auto est = mc_mi(edge, {0}, {2}, MiMode::Joint, 20000, 5);
    CHECK(std::abs(est.mean - exact) <= 4 * est.std_error + 1e-12);

    const auto noise = edge_model(path_graph(3), Bsc{0.5});
    const auto zero = mc_mi(noise, {0}, {2}, MiMode::Joint, 2000, 6);
    CHECK(std::abs(zero.mean) <= std::max(zero.std_error, 1e-12));

    CHECK(std::isinf(mc_mi(edge, {0}, {2}, MiMode::Joint, 1, 1).std_error));
    CHECK_THROWS_AS(mc_mi(edge_model(path_graph(23), Bsc{0.1}), {0}, {1}, MiMode::Joint, 10, 1), BudgetExceeded);
}

TEST_CASE("mc_mi is consistent with exact_mi")
{
    for (std::uint64_t s = 0; s < 12; ++s) {
        const auto m = random_model(s, s % 3 == 0);
        CounterRng r(s, 11);
        auto a = random_subset(r, m.fg.n_vars());
        if (a.empty())
            a.push_back(0);
        const auto b = random_subset(r, m.fg.n_vars());
        for (auto mode : {MiMode::Joint, MiMode::CondGivenY, MiMode::CondGivenX}) {
            const double exact = exact_mi(m, a, b, mode);
            const auto est = mc_mi(m, a, b, mode, 4000, 100 + s);
            CHECK(std::abs(est.mean - exact) <= 4 * est.std_error + 1e-12);
        }
    }
}

TEST_CASE("theorem 1 examples")
{
    const auto edge = edge_model(path_graph(2), Bsc{0.25});
    const auto r = verify_thm1(edge, 0, {1});
    CHECK(r.lhs == Approx(0.13081203594113666).epsilon(1e-12));
    CHECK(r.rhs == Approx(0.25 * kLog2).epsilon(1e-12));
    CHECK(r.slack > 0);

    const auto noise = verify_thm1(edge_model(path_graph(2), Bsc{0.5}), 0, {1});
    CHECK(std::abs(noise.lhs) <= 1e-12);
    CHECK(noise.rhs == 0.0);

    const Graph two_pieces(4, {{0, 1}, {2, 3}});
    const auto clean = edge_model(two_pieces, Bsc{0.0});
    CHECK(verify_thm1(clean, 0, {1}).lhs == Approx(kLog2).epsilon(1e-12));
    CHECK(verify_thm1(clean, 0, {1}).rhs == Approx(kLog2).epsilon(1e-12));
    CHECK(std::abs(verify_thm1(clean, 0, {2}).lhs) <= 1e-12);
    CHECK(verify_thm1(clean, 0, {2}).rhs == 0.0);

    auto biased = edge;
    biased.prior = biased_bits(2, 0.3);
    CHECK_THROWS_AS(verify_thm1(biased, 0, {1}), InvalidArgument);
    const auto erasure = edge_model(path_graph(2), Erasure{0.5});
    CHECK_THROWS_AS(verify_thm1(erasure, 0, {1}), InvalidArgument);
}

TEST_CASE("theorem 2 examples")
{
    const SmallModel bare{FactorGraph({2, 2}, {}), uniform_prior({2, 2})};
    const auto base = verify_thm2(bare, {0}, {0});
    CHECK(base.lhs == Approx(kLog2).epsilon(1e-13));
    CHECK(base.rhs == Approx(kLog2).epsilon(1e-13));

    // a - b - c: X_a xor X_c leaks into Y even though perc(S1, {}) = 0.
    const double delta = 0.1;
    const auto abc = edge_model(path_graph(3), Bsc{delta});
    const double leak = exact_mi(abc, {0, 2}, {}, MiMode::Joint);
    CHECK(leak >= (1 - binary_entropy(2 * delta * (1 - delta)) / kLog2) * kLog2 - 1e-12);
    CHECK(leak == Approx(0.22175369374985143).epsilon(1e-11));
    CHECK(leak > 0);

    Factor parity3{{0, 1, 2}, parity_label(3), Bsc{0.15}, 0.0};
    const SmallModel three{FactorGraph({2, 2, 2}, {parity3}), uniform_prior({2, 2, 2})};
    CHECK(verify_thm2(three, {0}, {1, 2}).slack >= 0.0);
    CHECK(verify_thm2(three, {0, 1}, {2}).slack >= 0.0);

    SmallModel dep = abc;
    dep.prior = first_two_equal(3);
    CHECK_THROWS_AS(verify_thm2(dep, {0}, {2}), InvalidArgument);
}

TEST_CASE("comparison with the erasure counterpart: examples")
{
    // Degree-1 erasure factors already reveal the full tuple.
    std::vector<Factor> fs;
    for (int v = 0; v < 3; ++v)
        fs.push_back(Factor{{v}, {0, 1}, Erasure{0.3 + 0.2 * v}, 0.0});
    SmallModel erased{FactorGraph({2, 2, 2}, fs), first_two_equal(3)};
    const auto same = verify_compare(erased, {0}, {2});
    CHECK(same.lhs == Approx(same.rhs).epsilon(1e-12));

    auto tri = edge_model(cycle_graph(3), Bsc{0.25});
    tri.prior = first_two_equal(3);
    CHECK(verify_compare(tri, {0}, {2}).slack >= 0.0);

    // eta = 1: the counterpart reveals every X_{N(w)}; rhs = I(X_0; X_{0,1,2} | X_2).
    auto clean = edge_model(path_graph(3), Bsc{0.0});
    clean.prior = biased_bits(3, 0.2);
    const auto full = verify_compare(clean, {0}, {2});
    CHECK(full.rhs == Approx(binary_entropy(0.2)).epsilon(1e-12));
}

// --- properties -------------------------------------------------------------

TEST_CASE("theorem 1 holds over the catalog")
{
    int violations = 0, checked = 0;
    for (const auto& g : edge_catalog())
        for (double delta : {0.05, 0.15, 0.25, 0.35, 0.45}) {
            const auto m = edge_model(g, Bsc{delta});
            const int n = g.n();
            for (int v = 0; v < n; ++v) {
                std::vector<VertexSet> sets{{}};
                for (int a = 0; a < n; ++a) {
                    sets.push_back({a});
                    for (int b = a + 1; b < n; ++b)
                        sets.push_back({a, b});
                }
                for (const auto& s : sets) {
                    const auto r = verify_thm1(m, v, s);
                    ++checked;
                    if (r.slack < -1e-10)
                        ++violations;
                }
            }
        }
    CHECK(checked > 1000);
    CHECK(violations == 0);
}

TEST_CASE("single vertices are independent of the observations")
{
    for (const auto& g : edge_catalog())
        for (double delta : {0.05, 0.25, 0.45}) {
            const auto m = edge_model(g, Bsc{delta});
            for (int v = 0; v < g.n(); ++v)
                CHECK(std::abs(exact_mi(m, {v}, {}, MiMode::Joint)) <= 1e-12);
        }
}

TEST_CASE("chain rule")
{
    for (std::uint64_t s = 0; s < 25; ++s) {
        const auto m = random_model(200 + s, s % 2 == 0);
        CounterRng r(s, 4);
        const auto a = random_subset(r, m.fg.n_vars());
        const auto b = random_subset(r, m.fg.n_vars());
        const double joint = exact_mi(m, a, b, MiMode::Joint);
        const double with_y = exact_mi(m, a, {}, MiMode::Joint);
        const double cond = exact_mi(m, a, b, MiMode::CondGivenY);
        CHECK(std::abs(joint - with_y - cond) <= 1e-10);
    }
}

TEST_CASE("theorem 2 holds on random independent models")
{
    for (std::uint64_t s = 0; s < 25; ++s) {
        const auto m = random_model(300 + s, false);
        CounterRng r(s, 6);
        const auto a = random_subset(r, m.fg.n_vars());
        const auto b = random_subset(r, m.fg.n_vars());
        CHECK(verify_thm2(m, a, b).slack >= -1e-10);
    }
}

TEST_CASE("theorem 3 holds, including dependent priors")
{
    int dependent = 0;
    for (std::uint64_t s = 0; s < 25; ++s) {
        const bool dep = s % 2 == 0;
        dependent += dep;
        const auto m = random_model(400 + s, dep);
        CounterRng r(s, 7);
        const auto a = random_subset(r, m.fg.n_vars());
        const auto b = random_subset(r, m.fg.n_vars());
        CHECK(verify_compare(m, a, b).slack >= -1e-10);
    }
    for (const auto& g : edge_catalog()) {
        if (g.n() > 4)
            continue;
        auto m = edge_model(g, Bsc{0.2});
        m.prior = first_two_equal(g.n());
        ++dependent;
        CHECK(verify_compare(m, {0}, {g.n() - 1}).slack >= -1e-10);
    }
    CHECK(dependent >= 3);
}

TEST_CASE("exact_mi is independent of the worker count")
{
    const auto m = edge_model(grid_graph(2, 3), Bsc{0.2});
    set_thread_count(1);
    const double a = exact_mi(m, {0}, {5}, MiMode::CondGivenY);
    set_thread_count(3);
    const double b = exact_mi(m, {0}, {5}, MiMode::CondGivenY);
    set_thread_count(0);
    CHECK(a == b);
}
