#include "infoperc/bounds.hpp"
#include "infoperc/core.hpp"

#include <algorithm>
#include <cmath>

namespace infoperc {

namespace {

void check_b(double b)
{
    if (!(b >= 0.0) || !std::isfinite(b))
        throw InvalidArgument("b must be finite and nonnegative");
}

void check_k(int k, int least)
{
    if (k < least)
        throw InvalidArgument("k must be at least " + std::to_string(least));
}

// (sqrt x + sqrt b)^2, expanded so that b = 0 returns x exactly.
double sqrt_sum_sq(double x, double b) { return x + b + 2.0 * std::sqrt(x * b); }

double banks_constant(int k) { return 2.0 * k * std::log(k - 1.0) / (k - 1.0); }

} // namespace

double fano_bound(double info_nats, double p_max)
{
    if (!(info_nats >= 0.0))
        throw InvalidArgument("information must be nonnegative");
    if (!(p_max > 0.0 && p_max <= 1.0))
        throw InvalidArgument("p_max must lie in (0, 1]");
    return std::clamp((1.0 - p_max) - std::sqrt(info_nats / 2.0), 0.0, 1.0);
}

double fano_bound_perc(double perc, double p_max, double h_max_nats)
{
    if (!(perc >= 0.0) || !(h_max_nats >= 0.0))
        throw InvalidArgument("perc and entropy must be nonnegative");
    return fano_bound(perc * h_max_nats, p_max);
}

double curve_mns(double b)
{
    check_b(b);
    return b + 1.0 + std::sqrt(4.0 * b + 1.0);
}

double curve_perc_2sbm(double b)
{
    check_b(b);
    return sqrt_sum_sq(1.0, b);
}

double curve_banks(int k, double b)
{
    check_k(k, 3);
    check_b(b);
    // u = a - b solves u^2 = C (u + k b).
    const double c = banks_constant(k);
    return b + 0.5 * (c + std::sqrt(c * c + 4.0 * c * k * b));
}

double curve_ksbm(int k, double b)
{
    check_k(k, 2);
    check_b(b);
    return sqrt_sum_sq(k / 2.0, b);
}

double f_gupo(double k)
{
    if (!(k >= 2.0))
        throw InvalidArgument("k must be at least 2");
    const double lk = std::log(k);
    return 1.0 / ((lk - std::log(k - 1.0)) / lk * (k - 1.0) / k + 1.0 / k);
}

double curve_gupo(int k, double b)
{
    check_k(k, 2);
    check_b(b);
    return sqrt_sum_sq(f_gupo(k), b);
}

std::vector<std::string> region_classify(double a, double b, int k)
{
    if (!(a >= 0.0) || !(b >= 0.0))
        throw InvalidArgument("a and b must be nonnegative");
    check_k(k, 2);
    const double gap = std::pow(std::sqrt(a) - std::sqrt(b), 2);
    std::vector<std::string> out;
    if (k == 2 && gap < 1.0)
        out.push_back("perc2");
    if (k == 2 && (a + b == 0.0 || (a - b) * (a - b) <= 2.0 * (a + b)))
        out.push_back("mns");
    if (gap <= k / 2.0)
        out.push_back("ksbm");
    if (k >= 3 && (a - b) * (a - b) < banks_constant(k) * (a + (k - 1) * b))
        out.push_back("banks");
    if (gap < f_gupo(k))
        out.push_back("gupo");
    return out;
}

bool ksbm_banks_cross(int k, double b_max, int steps)
{
    check_k(k, 3);
    check_b(b_max);
    if (steps < 1)
        throw InvalidArgument("steps must be positive");
    bool above = false, below = false;
    for (int i = 0; i <= steps; ++i) {
        const double b = b_max * i / steps;
        const double diff = curve_ksbm(k, b) - curve_banks(k, b);
        above = above || diff > 0.0;
        below = below || diff < 0.0;
    }
    return above && below;
}

} // namespace infoperc
