#pragma once

#include "infoperc/core.hpp"

#include <Eigen/Core>

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace infoperc {

/// Probability vector over a finite output alphabet. Weights are nonnegative and sum
/// to one within 1e-12; the constructor checks both.
class FiniteDistribution {
public:
    FiniteDistribution() = default;
    explicit FiniteDistribution(Eigen::VectorXd probs);
    FiniteDistribution(std::initializer_list<double> probs);

    const Eigen::VectorXd& probs() const { return probs_; }
    Eigen::Index size() const { return probs_.size(); }
    double operator[](Eigen::Index i) const { return probs_[i]; }

    static FiniteDistribution bernoulli(double p); ///< (1 - p, p)

private:
    Eigen::VectorXd probs_;
};

// Channel variants. Input 0 maps to the first output law, input 1 to the second.

struct DiscretePair {
    FiniteDistribution p0;
    FiniteDistribution p1;
};

struct Bsc {
    double delta = 0.0;
};

/// Reveals the input with probability `pass`, otherwise emits an erasure symbol.
struct Erasure {
    double pass = 0.0;
};

/// N(mu0, sigma^2) versus N(mu1, sigma^2); discretized on a fixed grid for numerics.
struct GaussianPair {
    double mu0 = -1.0;
    double mu1 = 1.0;
    double sigma = 1.0;
};

/// Mixture of BSCs: with probability weight_i the channel is BSC(delta_i), and the
/// component index is part of the output.
struct BmsMixture {
    std::vector<std::pair<double, double>> components; ///< (weight, delta)
};

using BinaryInputChannel = std::variant<DiscretePair, Bsc, Erasure, GaussianPair, BmsMixture>;

/// Throws InvalidArgument if the channel's parameters are out of range.
void validate(const BinaryInputChannel& ch);

/// Output laws (P, Q) for inputs 0 and 1 on a common finite alphabet. Gaussian pairs
/// are discretized: 4001 points on [min mu - 8 sigma, max mu + 8 sigma], trapezoidal
/// weights, each law renormalized.
std::pair<FiniteDistribution, FiniteDistribution> output_pair(const BinaryInputChannel& ch);

bool is_continuous(const BinaryInputChannel& ch);

/// Short tag ("bsc", "erasure", ...).
std::string kind_name(const BinaryInputChannel& ch);

// Divergences, in nats. Divergences that are infinite return kInf.

double kl_divergence(const FiniteDistribution& p, const FiniteDistribution& q);
double chi2_divergence(const FiniteDistribution& p, const FiniteDistribution& q);
double hellinger_sq(const FiniteDistribution& p, const FiniteDistribution& q);

/// Le Cam divergence  b(1-b) sum (P-Q)^2 / (bP + (1-b)Q); points with zero
/// denominator contribute nothing.
double lecam_beta(const FiniteDistribution& p, const FiniteDistribution& q, double beta);

/// KL contraction coefficient as sup over beta of lecam_beta: grid with step 1e-3,
/// then golden-section refinement to `tol` in beta around the best grid point.
double eta_kl_numeric(const BinaryInputChannel& ch, double tol = 1e-10);
double eta_kl_numeric(const FiniteDistribution& p, const FiniteDistribution& q, double tol = 1e-10);

/// Closed form for BSC, Erasure, BMS mixtures and binary-output pairs.
/// Throws InvalidArgument for Gaussian pairs and non-binary DiscretePair.
double eta_kl_closed(const BinaryInputChannel& ch);

/// Closed form where available, numeric otherwise.
double eta_kl(const BinaryInputChannel& ch);

/// chi^2 mutual information chi^2(P_XY || P_X x P_Y) for X ~ Bern(prior_one).
double chi2_mutual_info(const BinaryInputChannel& ch, double prior_one);

struct HellingerBounds {
    double lower = 0.0; ///< H^2 / 2
    double upper = 0.0; ///< H^2
};

HellingerBounds hellinger_bounds(const BinaryInputChannel& ch);

/// eta_KL of the Gaussian location pair N(-eps, 1), N(eps, 1).
double eta_small_signal(double epsilon);

/// Post-composes the channel outputs with a row-stochastic kernel (|Y| x |Z|).
DiscretePair compose(const BinaryInputChannel& ch, const Eigen::MatrixXd& kernel);

/// Parses a channel from key/value pairs. Recognized keys: kind, delta, p, q, pass,
/// mu0, mu1, sigma, components. Kinds: bsc, bern, erasure, gaussian, bms.
/// `components` is "w1:d1,w2:d2,...".
BinaryInputChannel parse_channel(const std::map<std::string, std::string>& kv);

} // namespace infoperc
