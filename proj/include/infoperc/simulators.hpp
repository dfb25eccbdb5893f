#pragma once

#include "infoperc/core.hpp"
#include "infoperc/estimate.hpp"
#include "infoperc/graphs.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace infoperc {

// --- broadcasting on trees ---------------------------------------------------

struct BroadcastSpec {
    int d = 2;
    double delta = 0.1;
    int depth = 10;
    std::uint64_t population = 100000;
};

/// I(X_root; leaves at distance t) in bits for t = 1..depth (element t - 1), by
/// population dynamics on root magnetizations. The population at depth t is built by
/// combining d members of the depth t - 1 population through BSC(delta).
std::vector<PercEstimate> broadcast_mi(const BroadcastSpec& spec, std::uint64_t seed);

/// delta at which (1 - 2 delta)^2 d equals `product`.
double broadcast_delta(int d, double product);

// --- spiked Wigner -----------------------------------------------------------

struct WignerInstance {
    int n = 0;
    double lambda = 0.0;
    Eigen::VectorXd x; ///< entries +-1
    Eigen::MatrixXd y; ///< symmetric
};

inline constexpr int kMaxWignerBayesDim = 18;

/// Y = sqrt(lambda / n) x x^T + W with W symmetric, standard normal entries (the
/// diagonal is filled too but carries no information about x up to sign).
WignerInstance sample_wigner(int n, double lambda, std::uint64_t seed);

struct WignerBayes {
    double overlap = 0.0; ///< |<x, x_hat>| / n
    double mmse_xx = 0.0; ///< E[ ||x x^T - x_hat x_hat^T||_F^2 | y ] / n^2
    Eigen::MatrixXd posterior_xx; ///< E[x x^T | y]
    Eigen::VectorXd x_hat;
};

/// Exact posterior over the 2^(n-1) sign classes; x_hat is the sign-rounded leading
/// eigenvector of E[x x^T | y]. Throws BudgetExceeded for n > 18.
WignerBayes wigner_bayes_overlap(const WignerInstance& inst);

struct WignerSummary {
    PercEstimate overlap;
    PercEstimate mmse_xx;
};

/// Averages over `seeds` instances; instance i uses stream_key(seed, i).
WignerSummary wigner_average(int n, double lambda, std::uint64_t seeds, std::uint64_t seed);

// --- stochastic block model --------------------------------------------------

struct SbmInstance {
    int n = 0;
    int k = 1;
    double a = 0.0;
    double b = 0.0;
    std::vector<int> labels; ///< in [0, k)
    std::vector<Edge> edges; ///< u < v, ascending by (v, u)
};

/// Labels iid uniform on [0, k); edge uv present with probability a/n when the labels
/// agree and b/n otherwise.
SbmInstance sample_sbm(int n, int k, double a, double b, std::uint64_t seed);

// --- coupling on the Galton-Watson tree ---------------------------------------

struct CouplingStats {
    PercEstimate survival;                  ///< P[an uncoupled pair exists at `depth`]
    PercEstimate child_uncoupled;           ///< P[child uncoupled | parent uncoupled]
    std::vector<double> mean_uncoupled;     ///< per depth 0..depth
    std::uint64_t saturated_trials = 0;     ///< trials stopped at the population cap
};

inline constexpr std::uint64_t kCouplingCap = 5000;

/// Coupled label pairs (X+, X-) on a Poisson(d) tree with k communities, started
/// uncoupled at the root. Only uncoupled pairs are simulated; coupled subtrees stay
/// coupled. A trial whose uncoupled generation reaches `cap` counts as surviving.
CouplingStats gw_coupling(int k, double d, int depth, std::uint64_t trials, std::uint64_t seed,
                          std::uint64_t cap = kCouplingCap);

// --- community recovery metrics -----------------------------------------------

inline constexpr int kMaxPermutationLabels = 8;

/// min over relabelings pi of (1/m) sum 1{x_i != pi(x_hat_i)}; labels in [0, k).
double overlap_metric(const std::vector<int>& x, const std::vector<int>& x_hat, int k);

struct RandomGuessReport {
    PercEstimate violation_rate; ///< P[d(X, Z) < (k-1)/k - m^(-1/3)]
    double bound = 0.0;          ///< k! exp(-2 m^(1/3))
    PercEstimate hamming_mean;   ///< (1/m) d_H(X, Z) with the identity relabeling
};

/// X and Z independent and uniform on [0, k)^m.
RandomGuessReport random_guess_check(int k, int m, std::uint64_t trials, std::uint64_t seed);

} // namespace infoperc
