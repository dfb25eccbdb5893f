#include "infoperc/channels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace infoperc {

namespace {

constexpr int kGaussianGridPoints = 4001;
constexpr double kGaussianSpan = 8.0;

void check_alphabet(const FiniteDistribution& p, const FiniteDistribution& q)
{
    if (p.size() != q.size())
        throw InvalidArgument("distributions have different alphabet sizes");
}

void check_probability(double x, const char* what)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw InvalidArgument(std::string(what) + " must lie in [0, 1]");
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::pair<FiniteDistribution, FiniteDistribution> discretize(const GaussianPair& g)
{
    const double lo = std::min(g.mu0, g.mu1) - kGaussianSpan * g.sigma;
    const double hi = std::max(g.mu0, g.mu1) + kGaussianSpan * g.sigma;
    const double h = (hi - lo) / (kGaussianGridPoints - 1);
    Eigen::VectorXd p(kGaussianGridPoints), q(kGaussianGridPoints);
    for (int i = 0; i < kGaussianGridPoints; ++i) {
        const double x = lo + h * i;
        const double w = (i == 0 || i == kGaussianGridPoints - 1) ? 0.5 * h : h;
        const double z0 = (x - g.mu0) / g.sigma;
        const double z1 = (x - g.mu1) / g.sigma;
        p[i] = w * std::exp(-0.5 * z0 * z0);
        q[i] = w * std::exp(-0.5 * z1 * z1);
    }
    p /= p.sum();
    q /= q.sum();
    return {FiniteDistribution(std::move(p)), FiniteDistribution(std::move(q))};
}

double golden_max(const auto& f, double a, double b, double tol)
{
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return std::max(fc, fd);
}

double parse_double(const std::map<std::string, std::string>& kv, const std::string& key)
{
    const auto it = kv.find(key);
    if (it == kv.end())
        throw InvalidArgument("channel key '" + key + "' is required");
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(it->second, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != it->second.size())
        throw InvalidArgument("channel key '" + key + "' is not a number: " + it->second);
    return v;
}

} // namespace

FiniteDistribution::FiniteDistribution(Eigen::VectorXd probs) : probs_(std::move(probs))
{
    if (probs_.size() == 0)
        throw InvalidArgument("empty distribution");
    if ((probs_.array() < 0.0).any() || !probs_.allFinite())
        throw InvalidArgument("distribution has a negative or non-finite weight");
    if (std::abs(probs_.sum() - 1.0) > 1e-12)
        throw InvalidArgument("distribution weights do not sum to 1");
}

FiniteDistribution::FiniteDistribution(std::initializer_list<double> probs)
    : FiniteDistribution(Eigen::Map<const Eigen::VectorXd>(probs.begin(), static_cast<Eigen::Index>(probs.size())))
{
}

FiniteDistribution FiniteDistribution::bernoulli(double p)
{
    check_probability(p, "Bernoulli parameter");
    return FiniteDistribution{1.0 - p, p};
}

void validate(const BinaryInputChannel& ch)
{
    std::visit(Overloaded{
                   [](const DiscretePair& d) { check_alphabet(d.p0, d.p1); },
                   [](const Bsc& b) {
                       if (!(b.delta >= 0.0 && b.delta <= 0.5))
                           throw InvalidArgument("BSC crossover must lie in [0, 1/2]");
                   },
                   [](const Erasure& e) { check_probability(e.pass, "erasure pass probability"); },
                   [](const GaussianPair& g) {
                       if (!(g.sigma > 0.0) || !std::isfinite(g.mu0) || !std::isfinite(g.mu1))
                           throw InvalidArgument("Gaussian pair needs finite means and sigma > 0");
                   },
                   [](const BmsMixture& m) {
                       if (m.components.empty())
                           throw InvalidArgument("BMS mixture has no components");
                       double total = 0.0;
                       for (auto [w, d] : m.components) {
                           if (w < 0.0)
                               throw InvalidArgument("BMS mixture weight is negative");
                           if (!(d >= 0.0 && d <= 0.5))
                               throw InvalidArgument("BMS component crossover must lie in [0, 1/2]");
                           total += w;
                       }
                       if (std::abs(total - 1.0) > 1e-12)
                           throw InvalidArgument("BMS mixture weights do not sum to 1");
                   },
               },
               ch);
}

std::pair<FiniteDistribution, FiniteDistribution> output_pair(const BinaryInputChannel& ch)
{
    validate(ch);
    return std::visit(
        Overloaded{
            [](const DiscretePair& d) { return std::pair{d.p0, d.p1}; },
            [](const Bsc& b) {
                return std::pair{FiniteDistribution{1.0 - b.delta, b.delta}, FiniteDistribution{b.delta, 1.0 - b.delta}};
            },
            [](const Erasure& e) {
                // outputs: 0, 1, erasure
                return std::pair{FiniteDistribution{e.pass, 0.0, 1.0 - e.pass},
                                 FiniteDistribution{0.0, e.pass, 1.0 - e.pass}};
            },
            [](const GaussianPair& g) { return discretize(g); },
            [](const BmsMixture& m) {
                // output (i, y) at index 2i + y
                const auto n = static_cast<Eigen::Index>(m.components.size());
                Eigen::VectorXd p(2 * n), q(2 * n);
                for (Eigen::Index i = 0; i < n; ++i) {
                    const auto [w, d] = m.components[static_cast<std::size_t>(i)];
                    p[2 * i] = w * (1.0 - d);
                    p[2 * i + 1] = w * d;
                    q[2 * i] = w * d;
                    q[2 * i + 1] = w * (1.0 - d);
                }
                return std::pair{FiniteDistribution(p), FiniteDistribution(q)};
            },
        },
        ch);
}

bool is_continuous(const BinaryInputChannel& ch) { return std::holds_alternative<GaussianPair>(ch); }

std::string kind_name(const BinaryInputChannel& ch)
{
    static const char* names[] = {"discrete", "bsc", "erasure", "gaussian", "bms"};
    return names[ch.index()];
}

double kl_divergence(const FiniteDistribution& p, const FiniteDistribution& q)
{
    check_alphabet(p, q);
    CompensatedSum s;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0)
            continue;
        if (q[i] == 0.0)
            return kInf;
        s.add(p[i] * std::log(p[i] / q[i]));
    }
    return std::max(0.0, static_cast<double>(s.value()));
}

double chi2_divergence(const FiniteDistribution& p, const FiniteDistribution& q)
{
    check_alphabet(p, q);
    CompensatedSum s;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (q[i] == 0.0) {
            if (p[i] > 0.0)
                return kInf;
            continue;
        }
        const double d = p[i] - q[i];
        s.add(d * d / q[i]);
    }
    return static_cast<double>(s.value());
}

double hellinger_sq(const FiniteDistribution& p, const FiniteDistribution& q)
{
    check_alphabet(p, q);
    const double h = (p.probs().array().sqrt() - q.probs().array().sqrt()).square().sum();
    return std::clamp(h, 0.0, 2.0);
}

double lecam_beta(const FiniteDistribution& p, const FiniteDistribution& q, double beta)
{
    check_alphabet(p, q);
    if (!(beta >= 0.0 && beta <= 1.0))
        throw InvalidArgument("beta must lie in [0, 1]");
    const double bb = beta * (1.0 - beta);
    if (bb == 0.0)
        return 0.0;
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double den = beta * p[i] + (1.0 - beta) * q[i];
        if (den > 0.0) {
            const double d = p[i] - q[i];
            s += d * d / den;
        }
    }
    return bb * s;
}

double eta_kl_numeric(const FiniteDistribution& p, const FiniteDistribution& q, double tol)
{
    check_alphabet(p, q);
    constexpr int kSteps = 1000;
    int best = 0;
    double best_val = 0.0;
    for (int i = 0; i <= kSteps; ++i) {
        const double v = lecam_beta(p, q, static_cast<double>(i) / kSteps);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    if (best_val == 0.0)
        return 0.0;
    const double a = std::max(0.0, (best - 1.0) / kSteps);
    const double b = std::min(1.0, (best + 1.0) / kSteps);
    const double refined = golden_max([&](double beta) { return lecam_beta(p, q, beta); }, a, b, tol);
    return std::clamp(std::max(best_val, refined), 0.0, 1.0);
}

double eta_kl_numeric(const BinaryInputChannel& ch, double tol)
{
    const auto [p, q] = output_pair(ch);
    return eta_kl_numeric(p, q, tol);
}

double eta_kl_closed(const BinaryInputChannel& ch)
{
    validate(ch);
    return std::visit(
        Overloaded{
            [](const DiscretePair& d) -> double {
                if (d.p0.size() != 2)
                    throw InvalidArgument("closed-form eta needs a binary output alphabet");
                const double p = d.p0[1], q = d.p1[1];
                const double r = std::sqrt(p * (1.0 - p) * q * (1.0 - q));
                return std::clamp(p + q - 2.0 * p * q - 2.0 * r, 0.0, 1.0);
            },
            [](const Bsc& b) -> double { return (1.0 - 2.0 * b.delta) * (1.0 - 2.0 * b.delta); },
            [](const Erasure& e) -> double { return e.pass; },
            [](const GaussianPair&) -> double {
                throw InvalidArgument("no closed-form eta for Gaussian pairs; use eta_kl_numeric");
            },
            [](const BmsMixture& m) -> double {
                double s = 0.0;
                for (auto [w, d] : m.components)
                    s += w * (1.0 - 2.0 * d) * (1.0 - 2.0 * d);
                return s;
            },
        },
        ch);
}

double eta_kl(const BinaryInputChannel& ch)
{
    if (is_continuous(ch))
        return eta_kl_numeric(ch);
    if (const auto* d = std::get_if<DiscretePair>(&ch); d && d->p0.size() != 2)
        return eta_kl_numeric(ch);
    return eta_kl_closed(ch);
}

double chi2_mutual_info(const BinaryInputChannel& ch, double prior_one)
{
    if (!(prior_one > 0.0 && prior_one < 1.0))
        throw InvalidArgument("prior must lie strictly inside (0, 1)");
    const auto [p, q] = output_pair(ch);
    const double pi0 = 1.0 - prior_one;
    CompensatedSum s;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double py = pi0 * p[i] + prior_one * q[i];
        if (py <= 0.0)
            continue;
        s.add((pi0 * p[i] * p[i] + prior_one * q[i] * q[i]) / py);
    }
    return std::max(0.0, static_cast<double>(s.value()) - 1.0);
}

HellingerBounds hellinger_bounds(const BinaryInputChannel& ch)
{
    const auto [p, q] = output_pair(ch);
    const double h2 = hellinger_sq(p, q);
    return {h2 / 2.0, h2};
}

double eta_small_signal(double epsilon)
{
    if (epsilon == 0.0)
        return 0.0;
    if (!(epsilon > 0.0))
        throw InvalidArgument("epsilon must be positive");
    return eta_kl_numeric(GaussianPair{-epsilon, epsilon, 1.0});
}

DiscretePair compose(const BinaryInputChannel& ch, const Eigen::MatrixXd& kernel)
{
    const auto [p, q] = output_pair(ch);
    if (kernel.rows() != p.size())
        throw InvalidArgument("kernel rows must match the channel output alphabet");
    if ((kernel.array() < 0.0).any() || ((kernel.rowwise().sum().array() - 1.0).abs() > 1e-12).any())
        throw InvalidArgument("kernel must be row-stochastic");
    Eigen::VectorXd zp = kernel.transpose() * p.probs();
    Eigen::VectorXd zq = kernel.transpose() * q.probs();
    zp /= zp.sum();
    zq /= zq.sum();
    return {FiniteDistribution(std::move(zp)), FiniteDistribution(std::move(zq))};
}

BinaryInputChannel parse_channel(const std::map<std::string, std::string>& kv)
{
    static const char* known[] = {"kind", "delta", "p", "q", "pass", "mu0", "mu1", "sigma", "components"};
    for (const auto& [k, v] : kv)
        if (std::find(std::begin(known), std::end(known), k) == std::end(known))
            throw InvalidArgument("unknown channel key '" + k + "'");
    const auto it = kv.find("kind");
    if (it == kv.end())
        throw InvalidArgument("channel key 'kind' is required");
    const std::string& kind = it->second;
    BinaryInputChannel ch;
    if (kind == "bsc") {
        ch = Bsc{parse_double(kv, "delta")};
    } else if (kind == "bern") {
        ch = DiscretePair{FiniteDistribution::bernoulli(parse_double(kv, "p")),
                          FiniteDistribution::bernoulli(parse_double(kv, "q"))};
    } else if (kind == "erasure") {
        ch = Erasure{parse_double(kv, "pass")};
    } else if (kind == "gaussian") {
        GaussianPair g;
        g.mu0 = parse_double(kv, "mu0");
        g.mu1 = parse_double(kv, "mu1");
        g.sigma = kv.count("sigma") ? parse_double(kv, "sigma") : 1.0;
        ch = g;
    } else if (kind == "bms") {
        const auto c = kv.find("components");
        if (c == kv.end())
            throw InvalidArgument("channel key 'components' is required");
        BmsMixture m;
        std::stringstream ss(c->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw InvalidArgument("BMS component must be weight:delta, got '" + item + "'");
            m.components.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
        }
        ch = m;
    } else {
        throw InvalidArgument("unknown channel kind '" + kind + "'");
    }
    validate(ch);
    return ch;
}

} // namespace infoperc
