#pragma once

#include "infoperc/core.hpp"
#include "infoperc/estimate.hpp"
#include "infoperc/graphs.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace infoperc {

inline constexpr int kDefaultExactFactorCap = 20;

/// Monte Carlo perc_G(S1, S2): expected number of S1 vertices connected to S2 when
/// each factor is retained independently with probability eta_w. Members of
/// S1 ∩ S2 always count. Trial i uses stream (seed, i).
PercEstimate perc_mc(const FactorGraph& fg, const VertexSet& s1, const VertexSet& s2, std::uint64_t trials,
                     std::uint64_t seed);

/// Exact perc_G(S1, S2) by enumerating all 2^|W| retention patterns.
double perc_exact(const FactorGraph& fg, const VertexSet& s1, const VertexSet& s2,
                  int factor_cap = kDefaultExactFactorCap);

struct RecursionCheck {
    double lhs = 0.0; ///< perc_G(S1, S2)
    double rhs = 0.0; ///< eta_w perc_{G-w}(S1, S2 ∪ N(w)) + (1 - eta_w) perc_{G-w}(S1, S2)
};

/// Both sides of the single-factor deletion identity. Requires N(w) ∩ S2 ≠ ∅.
RecursionCheck recursion_check(const FactorGraph& fg, const VertexSet& s1, const VertexSet& s2, std::size_t w,
                               int factor_cap = kDefaultExactFactorCap);

/// Probability that (0,0) and (n,n) are joined by open bonds of the square lattice,
/// restricted to the box [-(n+margin), n+margin]^2 (margin < 0 selects margin = n).
PercEstimate grid_two_point(int n, double eta, std::uint64_t trials, std::uint64_t seed, int margin = -1);

/// The same probability for several bond densities from one set of trials. Each
/// trial draws one uniform weight per bond (a bond is open at density eta when its
/// weight is below eta), so the estimates are coupled and nondecreasing in eta.
std::vector<PercEstimate> grid_two_point_curve(int n, std::span<const double> etas, std::uint64_t trials,
                                               std::uint64_t seed, int margin = -1);

/// Mean largest-component fraction C_max / n over samples of ER(n, c/n).
PercEstimate er_giant(int n, double c, std::uint64_t samples, std::uint64_t seed);

struct PoissonOffspring {
    double lambda = 1.0;
};
struct BinomialOffspring {
    int d = 1;
    double eta = 1.0;
};
using Offspring = std::variant<PoissonOffspring, BinomialOffspring>;

double mean_offspring(const Offspring& o);

/// Extinction probability of a Galton-Watson process: the smallest fixed point of
/// the generating function. Exactly 1 when the mean offspring is at most 1;
/// otherwise monotone iteration from 0 to 1e-12 accuracy.
double gw_extinction(const Offspring& o);

} // namespace infoperc
