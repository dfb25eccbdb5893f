#include "doctest.h"

#include "infoperc/bounds.hpp"
#include "infoperc/core.hpp"

#include <algorithm>
#include <cmath>

using namespace infoperc;
using doctest::Approx;

namespace {

bool has(const std::vector<std::string>& v, const char* name) { return std::find(v.begin(), v.end(), name) != v.end(); }

} // namespace

TEST_CASE("Fano-type bound")
{
    CHECK(fano_bound(0.0, 0.5) == 0.5);
    CHECK(fano_bound_perc(1.0, 0.5, std::log(2.0)) == 0.0);
    CHECK(fano_bound(0.02, 0.5) == Approx(0.4).epsilon(1e-14));
    CHECK(fano_bound(0.0, 1.0 / 3) == Approx(2.0 / 3));
    CHECK_THROWS_AS(fano_bound(-1.0, 0.5), InvalidArgument);
    CHECK_THROWS_AS(fano_bound(0.1, 0.0), InvalidArgument);
    double prev = 1.0;
    for (int i = 0; i <= 100; ++i) {
        const double f = fano_bound(0.01 * i, 0.3);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        CHECK(f <= prev);
        prev = f;
    }
}

TEST_CASE("curve anchors")
{
    CHECK(curve_mns(0) == 2.0);
    CHECK(curve_mns(4) == Approx(5 + std::sqrt(17.0)).epsilon(1e-15));
    CHECK(curve_perc_2sbm(0) == 1.0);
    CHECK(curve_perc_2sbm(1) == 4.0);
    CHECK(curve_banks(3, 0) == Approx(3 * std::log(2.0)).epsilon(1e-15));
    CHECK(curve_ksbm(2, 0) == Approx(1.0));
    CHECK(curve_ksbm(3, 0) == Approx(1.5).epsilon(1e-15));
    CHECK(curve_ksbm(3, 0) < curve_banks(3, 0));
    CHECK_THROWS_AS(curve_banks(2, 1.0), InvalidArgument);
    CHECK_THROWS_AS(curve_mns(-1.0), InvalidArgument);
}

TEST_CASE("f(k)")
{
    // Direct evaluation of the defining expression: log(k-1) = 0 at k = 2.
    CHECK(f_gupo(2) == Approx(1.0).epsilon(1e-15));
    CHECK(f_gupo(3) == Approx(1.725982457878719).epsilon(1e-13));
    CHECK(f_gupo(3) > 1.5);
    const double k = 1000;
    CHECK(std::abs(f_gupo(k) / (k - k / std::log(k)) - 1.0) < 0.05);
}

TEST_CASE("region classification")
{
    const auto low = region_classify(0.5, 0, 2);
    for (const char* name : {"perc2", "mns", "ksbm", "gupo"})
        CHECK(has(low, name));
    CHECK(region_classify(3, 0, 2).empty());
    const auto mid = region_classify(1.8, 0, 3);
    CHECK(has(mid, "banks"));
    CHECK(!has(mid, "ksbm"));
}

TEST_CASE("percolation curve stays inside the MNS region")
{
    // b + 1 + 2 sqrt(b) < b + 1 + sqrt(4b + 1); the gap closes as b grows.
    CHECK(curve_perc_2sbm(0) < curve_mns(0));
    for (int i = 0; i <= 100; ++i) {
        const double b = 0.5 * i;
        CHECK(curve_perc_2sbm(b) < curve_mns(b));
    }
    CHECK(curve_mns(1e6) - curve_perc_2sbm(1e6) < 1e-3);
}

TEST_CASE("banks and ksbm curves cross for k = 3 only")
{
    CHECK(ksbm_banks_cross(3, 20));
    CHECK(!ksbm_banks_cross(4, 20));
}

// --- properties -------------------------------------------------------------

TEST_CASE("curves satisfy their defining equations")
{
    for (int i = 0; i <= 200; ++i) {
        const double b = 0.1 * i * i;
        const double m = curve_mns(b);
        CHECK(std::abs((m - b) * (m - b) / (2 * (m + b)) - 1.0) <= 1e-12);
        const double p = curve_perc_2sbm(b);
        CHECK(std::abs(std::pow(std::sqrt(p) - std::sqrt(b), 2) - 1.0) <= 1e-12 * std::max(1.0, b));
        CHECK(curve_ksbm(2, b) == Approx(p).epsilon(1e-15));
        for (int k = 3; k <= 20; ++k) {
            const double a = curve_banks(k, b);
            const double c = 2.0 * k * std::log(k - 1.0) / (k - 1.0);
            CHECK(std::abs((a - b) * (a - b) / (a + (k - 1) * b) - c) <= 1e-12 * c);
            const double q = curve_ksbm(k, b);
            CHECK(std::abs(std::pow(std::sqrt(q) - std::sqrt(b), 2) - k / 2.0) <= 1e-12 * std::max(1.0, b));
            CHECK(curve_gupo(k, b) >= curve_ksbm(k, b));
        }
    }
}

TEST_CASE("f(k) >= k / 2 for k >= 3")
{
    for (int k = 3; k <= 20; ++k)
        CHECK(f_gupo(k) >= k / 2.0);
}
