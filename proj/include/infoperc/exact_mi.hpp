#pragma once

#include "infoperc/core.hpp"
#include "infoperc/estimate.hpp"
#include "infoperc/graphs.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <variant>
#include <vector>

namespace infoperc {

/// Independent prior: one probability vector per variable.
struct IndependentPrior {
    std::vector<Eigen::VectorXd> marginals;
};

/// Arbitrary joint prior over all configurations; index is mixed radix with
/// variable 0 most significant.
struct JointPrior {
    Eigen::VectorXd table;
};

using Prior = std::variant<IndependentPrior, JointPrior>;

struct SmallModel {
    FactorGraph fg;
    Prior prior;
};

IndependentPrior uniform_prior(const std::vector<int>& alphabet);

/// Model on an incidence graph: iid uniform bits, Y_e = X_u xor X_v through `ch`.
SmallModel edge_model(const Graph& g, const BinaryInputChannel& ch);

/// Checks prior shape and normalization against the factor graph.
void validate(const SmallModel& m);

enum class MiMode {
    Joint,      ///< I(X_A; X_B, Y)
    CondGivenY, ///< I(X_A; X_B | Y)
    CondGivenX, ///< I(X_A; Y | X_B)
};

/// How each factor is observed.
enum class Observation {
    Channels, ///< through its own channel applied to the label
    Erasure,  ///< reveals the whole tuple X_{N(w)} with probability factor_channel_eta, else erased
};

inline constexpr std::uint64_t kDefaultStateBudget = std::uint64_t{1} << 26;
inline constexpr std::uint64_t kDefaultSampledStateBudget = std::uint64_t{1} << 22;

/// eta_KL of the factor's channel from X_{N(w)}: the channel's coefficient, or 0 when
/// the label is constant.
double factor_channel_eta(const Factor& f);

/// Exact mutual information in nats by summation over every (x, y). Throws
/// BudgetExceeded when |X| |Y| exceeds `budget`, InvalidArgument for continuous channels.
double exact_mi(const SmallModel& m, const VertexSet& a, const VertexSet& b, MiMode mode,
                Observation obs = Observation::Channels, std::uint64_t budget = kDefaultStateBudget);

/// Monte Carlo version: y (and x) sampled, posterior over x computed exactly per sample.
/// Sample i uses stream (seed, i).
PercEstimate mc_mi(const SmallModel& m, const VertexSet& a, const VertexSet& b, MiMode mode, std::uint64_t samples,
                   std::uint64_t seed, Observation obs = Observation::Channels,
                   std::uint64_t budget = kDefaultSampledStateBudget);

struct VerifyReport {
    double lhs = 0.0; ///< nats
    double rhs = 0.0; ///< nats
    double slack = 0.0;
};

/// I(X_v; X_S, Y) against perc(v, S) log 2 with eta = (1 - 2 delta)^2 per edge.
/// Requires uniform independent bits and BSC parity factors of degree two.
VerifyReport verify_thm1(const SmallModel& m, int v, const VertexSet& s);

/// I(X_S1; X_S2 | Y) against perc(S1, S2) max_v H(X_v), with eta_w = factor_channel_eta.
/// Requires an independent prior.
VerifyReport verify_thm2(const SmallModel& m, const VertexSet& s1, const VertexSet& s2);

/// I(X_S1; Y | X_S2) under the model's channels against the erasure counterpart.
VerifyReport verify_compare(const SmallModel& m, const VertexSet& s1, const VertexSet& s2);

} // namespace infoperc
