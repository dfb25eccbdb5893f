#include "infoperc/exact_mi.hpp"
#include "infoperc/percolation.hpp"
#include "infoperc/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace infoperc {

IndependentPrior uniform_prior(const std::vector<int>& alphabet)
{
    IndependentPrior p;
    for (int a : alphabet)
        p.marginals.push_back(Eigen::VectorXd::Constant(a, 1.0 / a));
    return p;
}

SmallModel edge_model(const Graph& g, const BinaryInputChannel& ch)
{
    auto fg = incidence_factor_graph(g, ch);
    auto prior = uniform_prior(fg.alphabet());
    return {std::move(fg), std::move(prior)};
}

namespace {

std::uint64_t config_count(const std::vector<int>& alphabet, std::uint64_t cap)
{
    std::uint64_t n = 1;
    for (int a : alphabet) {
        n *= static_cast<std::uint64_t>(a);
        if (n > cap)
            return cap + 1;
    }
    return n;
}

bool close_to_one(double s) { return std::abs(s - 1.0) <= 1e-12; }

} // namespace

void validate(const SmallModel& m)
{
    const auto& alphabet = m.fg.alphabet();
    if (const auto* ind = std::get_if<IndependentPrior>(&m.prior)) {
        if (ind->marginals.size() != alphabet.size())
            throw InvalidArgument("prior needs one marginal per variable");
        for (std::size_t i = 0; i < alphabet.size(); ++i) {
            const auto& p = ind->marginals[i];
            if (p.size() != alphabet[i])
                throw InvalidArgument("prior marginal has the wrong alphabet size");
            if ((p.array() < 0.0).any() || !close_to_one(p.sum()))
                throw InvalidArgument("prior marginal is not a probability vector");
        }
        return;
    }
    const auto& table = std::get<JointPrior>(m.prior).table;
    const std::uint64_t n = config_count(alphabet, std::uint64_t{1} << 40);
    if (static_cast<std::uint64_t>(table.size()) != n)
        throw InvalidArgument("joint prior table has the wrong size");
    if ((table.array() < 0.0).any() || !close_to_one(table.sum()))
        throw InvalidArgument("joint prior is not a probability vector");
}

double factor_channel_eta(const Factor& f)
{
    const bool constant = std::all_of(f.label.begin(), f.label.end(), [&](auto l) { return l == f.label.front(); });
    return constant ? 0.0 : eta_kl(f.channel);
}

namespace {

// Observation kernel of one factor: prob(t, y) = P(Y_w = y | tuple t).
struct Kernel {
    std::vector<int> vars;
    std::vector<std::size_t> tuple_stride;
    Eigen::MatrixXd prob;
};

Kernel make_kernel(const FactorGraph& fg, const Factor& f, Observation obs)
{
    Kernel k;
    k.vars = f.vars;
    k.tuple_stride.assign(f.vars.size(), 1);
    for (std::size_t i = f.vars.size() - 1; i-- > 0;)
        k.tuple_stride[i] = k.tuple_stride[i + 1] * static_cast<std::size_t>(fg.alphabet()[static_cast<std::size_t>(f.vars[i + 1])]);
    const auto tuples = static_cast<Eigen::Index>(fg.tuple_count(f));
    if (obs == Observation::Erasure) {
        const double eta = factor_channel_eta(f);
        k.prob = Eigen::MatrixXd::Zero(tuples, tuples + 1);
        for (Eigen::Index t = 0; t < tuples; ++t) {
            k.prob(t, t) = eta;
            k.prob(t, tuples) = 1.0 - eta;
        }
        return k;
    }
    if (is_continuous(f.channel))
        throw InvalidArgument("exact mutual information needs discrete channels");
    const auto [p, q] = output_pair(f.channel);
    k.prob.resize(tuples, p.size());
    for (Eigen::Index t = 0; t < tuples; ++t)
        k.prob.row(t) = (f.label[static_cast<std::size_t>(t)] ? q.probs() : p.probs()).transpose();
    return k;
}

// Index of a sub-tuple of variables (first listed most significant).
struct SubIndex {
    std::vector<int> vars;
    std::size_t size = 1;

    SubIndex(const VertexSet& vs, const std::vector<int>& alphabet) : vars(vs)
    {
        for (int v : vs)
            size *= static_cast<std::size_t>(alphabet[static_cast<std::size_t>(v)]);
    }
};

// Enumerates x for a fixed observation y and accumulates p(x_U, y) over U = A ∪ B.
class Enumerator {
public:
    Enumerator(const SmallModel& m, const VertexSet& a, const VertexSet& b, Observation obs)
        : alphabet_(m.fg.alphabet()), n_(m.fg.n_vars()), prior_(&m.prior)
    {
        for (const auto& f : m.fg.factors())
            kernels_.push_back(make_kernel(m.fg, f, obs));
        completing_.resize(static_cast<std::size_t>(n_));
        for (std::size_t k = 0; k < kernels_.size(); ++k) {
            const int last = *std::max_element(kernels_[k].vars.begin(), kernels_[k].vars.end());
            completing_[static_cast<std::size_t>(last)].push_back(k);
        }
        VertexSet u = a;
        u.insert(u.end(), b.begin(), b.end());
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        union_vars_ = u;
        u_stride_.assign(static_cast<std::size_t>(n_), 0);
        u_size_ = 1;
        for (std::size_t i = u.size(); i-- > 0;) {
            u_stride_[static_cast<std::size_t>(u[i])] = u_size_;
            u_size_ *= static_cast<std::size_t>(alphabet_[static_cast<std::size_t>(u[i])]);
        }
        x_stride_.assign(static_cast<std::size_t>(n_), 1);
        for (int i = n_ - 1; i-- > 0;)
            x_stride_[static_cast<std::size_t>(i)] =
                x_stride_[static_cast<std::size_t>(i + 1)] * static_cast<std::size_t>(alphabet_[static_cast<std::size_t>(i + 1)]);
        a_of_u_ = project(a);
        b_of_u_ = project(b);
        a_size_ = SubIndex(a, alphabet_).size;
        b_size_ = SubIndex(b, alphabet_).size;
    }

    std::size_t union_size() const { return u_size_; }
    std::size_t a_size() const { return a_size_; }
    std::size_t b_size() const { return b_size_; }
    std::size_t a_of_u(std::size_t u) const { return a_of_u_[u]; }
    std::size_t b_of_u(std::size_t u) const { return b_of_u_[u]; }
    const std::vector<Kernel>& kernels() const { return kernels_; }

    std::uint64_t y_count(std::uint64_t cap) const
    {
        std::uint64_t n = 1;
        for (const auto& k : kernels_) {
            n *= static_cast<std::uint64_t>(k.prob.cols());
            if (n > cap)
                return cap + 1;
        }
        return n;
    }

    std::size_t u_index_of(const std::vector<int>& x) const
    {
        std::size_t u = 0;
        for (int v : union_vars_)
            u += u_stride_[static_cast<std::size_t>(v)] * static_cast<std::size_t>(x[static_cast<std::size_t>(v)]);
        return u;
    }

    /// out[u] = p(x_U = u, Y = y); with y == nullptr, the prior marginal p(x_U = u).
    void accumulate(const std::vector<int>* y, std::vector<long double>& out, std::vector<int>& x) const
    {
        out.assign(u_size_, 0.0L);
        x.assign(static_cast<std::size_t>(n_), 0);
        visit(0, 1.0, 0, 0, y, out, x);
    }

private:
    std::vector<std::size_t> project(const VertexSet& s) const
    {
        // Map each U configuration to its index over s.
        std::vector<std::size_t> stride(static_cast<std::size_t>(n_), 0);
        std::size_t size = 1;
        for (std::size_t i = s.size(); i-- > 0;) {
            stride[static_cast<std::size_t>(s[i])] = size;
            size *= static_cast<std::size_t>(alphabet_[static_cast<std::size_t>(s[i])]);
        }
        std::vector<std::size_t> map(u_size_);
        for (std::size_t u = 0; u < u_size_; ++u) {
            std::size_t r = u, idx = 0;
            for (std::size_t i = union_vars_.size(); i-- > 0;) {
                const int v = union_vars_[i];
                const auto av = static_cast<std::size_t>(alphabet_[static_cast<std::size_t>(v)]);
                idx += stride[static_cast<std::size_t>(v)] * (r % av);
                r /= av;
            }
            map[u] = idx;
        }
        return map;
    }

    void visit(int i, double weight, std::size_t xi, std::size_t ui, const std::vector<int>* y,
               std::vector<long double>& out, std::vector<int>& x) const
    {
        if (i == n_) {
            if (const auto* joint = std::get_if<JointPrior>(prior_))
                weight *= joint->table[static_cast<Eigen::Index>(xi)];
            out[ui] += weight;
            return;
        }
        const auto vi = static_cast<std::size_t>(i);
        const auto* ind = std::get_if<IndependentPrior>(prior_);
        for (int val = 0; val < alphabet_[vi]; ++val) {
            double w = weight;
            if (ind)
                w *= ind->marginals[vi][val];
            x[vi] = val;
            if (y) {
                for (std::size_t k : completing_[vi]) {
                    const Kernel& ker = kernels_[k];
                    std::size_t t = 0;
                    for (std::size_t j = 0; j < ker.vars.size(); ++j)
                        t += ker.tuple_stride[j] * static_cast<std::size_t>(x[static_cast<std::size_t>(ker.vars[j])]);
                    w *= ker.prob(static_cast<Eigen::Index>(t), (*y)[k]);
                }
            }
            if (w == 0.0)
                continue;
            visit(i + 1, w, xi + x_stride_[vi] * static_cast<std::size_t>(val),
                  ui + u_stride_[vi] * static_cast<std::size_t>(val), y, out, x);
        }
    }

    std::vector<int> alphabet_;
    int n_;
    const Prior* prior_;
    std::vector<Kernel> kernels_;
    std::vector<std::vector<std::size_t>> completing_;
    VertexSet union_vars_;
    std::vector<std::size_t> u_stride_;
    std::vector<std::size_t> x_stride_;
    std::size_t u_size_ = 1;
    std::vector<std::size_t> a_of_u_, b_of_u_;
    std::size_t a_size_ = 1, b_size_ = 1;
};

constexpr long double kTiny = 1e-300L;

void add_entropy_term(CompensatedSum& s, long double p)
{
    if (p > kTiny)
        s.add(-p * std::log(p));
}

struct EntropySums {
    CompensatedSum uy, ay, by, y;

    void add_block(const Enumerator& e, const std::vector<long double>& pu)
    {
        std::vector<long double> pa(e.a_size(), 0.0L), pb(e.b_size(), 0.0L);
        long double py = 0.0L;
        for (std::size_t u = 0; u < pu.size(); ++u) {
            add_entropy_term(uy, pu[u]);
            pa[e.a_of_u(u)] += pu[u];
            pb[e.b_of_u(u)] += pu[u];
            py += pu[u];
        }
        for (auto p : pa)
            add_entropy_term(ay, p);
        for (auto p : pb)
            add_entropy_term(by, p);
        add_entropy_term(y, py);
    }

    void merge(const EntropySums& o)
    {
        uy.add(o.uy.value());
        ay.add(o.ay.value());
        by.add(o.by.value());
        y.add(o.y.value());
    }
};

struct PriorEntropies {
    double u = 0.0, a = 0.0, b = 0.0;
};

PriorEntropies prior_entropies(const Enumerator& e)
{
    std::vector<long double> pu;
    std::vector<int> x;
    e.accumulate(nullptr, pu, x);
    EntropySums s;
    s.add_block(e, pu);
    return {static_cast<double>(s.uy.value()), static_cast<double>(s.ay.value()), static_cast<double>(s.by.value())};
}

void check_model(const SmallModel& m, const VertexSet& a, const VertexSet& b)
{
    validate(m);
    normalize_set(a, m.fg.n_vars());
    normalize_set(b, m.fg.n_vars());
}

// Decodes y index (first factor most significant) into per-factor outputs.
void decode_y(std::uint64_t index, const std::vector<Kernel>& ks, std::vector<int>& y)
{
    y.resize(ks.size());
    for (std::size_t k = ks.size(); k-- > 0;) {
        const auto c = static_cast<std::uint64_t>(ks[k].prob.cols());
        y[k] = static_cast<int>(index % c);
        index /= c;
    }
}

} // namespace

double exact_mi(const SmallModel& m, const VertexSet& a_in, const VertexSet& b_in, MiMode mode, Observation obs,
                std::uint64_t budget)
{
    check_model(m, a_in, b_in);
    const VertexSet a = normalize_set(a_in, m.fg.n_vars());
    const VertexSet b = normalize_set(b_in, m.fg.n_vars());
    if (a.empty())
        return 0.0;
    const Enumerator e(m, a, b, obs);
    const std::uint64_t nx = config_count(m.fg.alphabet(), budget);
    const std::uint64_t ny = e.y_count(budget);
    if (nx > budget || ny > budget || nx * ny > budget)
        throw BudgetExceeded("exact enumeration of " + std::to_string(nx) + " x " + std::to_string(ny) +
                             " states exceeds the budget of " + std::to_string(budget));

    constexpr std::uint64_t kYBlock = 64;
    const std::size_t blocks = (ny + kYBlock - 1) / kYBlock;
    std::vector<EntropySums> partial(blocks);
    run_blocks(blocks, [&](std::size_t blk) {
        std::vector<long double> pu;
        std::vector<int> x, y;
        const std::uint64_t end = std::min<std::uint64_t>(ny, (blk + 1) * kYBlock);
        for (std::uint64_t yi = blk * kYBlock; yi < end; ++yi) {
            decode_y(yi, e.kernels(), y);
            e.accumulate(&y, pu, x);
            partial[blk].add_block(e, pu);
        }
    });
    EntropySums total;
    for (const auto& p : partial)
        total.merge(p);

    const auto h_uy = static_cast<double>(total.uy.value());
    const auto h_ay = static_cast<double>(total.ay.value());
    const auto h_by = static_cast<double>(total.by.value());
    const auto h_y = static_cast<double>(total.y.value());
    double mi = 0.0;
    switch (mode) {
    case MiMode::Joint:
        mi = prior_entropies(e).a + h_by - h_uy;
        break;
    case MiMode::CondGivenY:
        mi = h_ay + h_by - h_uy - h_y;
        break;
    case MiMode::CondGivenX: {
        const auto pe = prior_entropies(e);
        mi = pe.u + h_by - h_uy - pe.b;
        break;
    }
    }
    return mi;
}

PercEstimate mc_mi(const SmallModel& m, const VertexSet& a_in, const VertexSet& b_in, MiMode mode,
                   std::uint64_t samples, std::uint64_t seed, Observation obs, std::uint64_t budget)
{
    check_model(m, a_in, b_in);
    if (samples < 1)
        throw InvalidArgument("mc_mi needs at least one sample");
    const VertexSet a = normalize_set(a_in, m.fg.n_vars());
    const VertexSet b = normalize_set(b_in, m.fg.n_vars());
    const std::uint64_t nx = config_count(m.fg.alphabet(), budget);
    if (nx > budget)
        throw BudgetExceeded("sampled mutual information needs at most " + std::to_string(budget) + " configurations");
    if (a.empty()) {
        MomentAccumulator zeros;
        for (std::uint64_t i = 0; i < samples; ++i)
            zeros.add(0.0);
        return make_estimate(zeros);
    }

    const Enumerator e(m, a, b, obs);
    const int n = m.fg.n_vars();
    const auto& alphabet = m.fg.alphabet();

    // H(A) and H(A | X_B) from the prior.
    const auto pe = prior_entropies(e);
    const double h_a = pe.a;
    const double h_a_given_b = pe.u - pe.b;

    std::vector<double> joint_cdf;
    if (const auto* joint = std::get_if<JointPrior>(&m.prior)) {
        joint_cdf.resize(static_cast<std::size_t>(joint->table.size()));
        std::partial_sum(joint->table.begin(), joint->table.end(), joint_cdf.begin());
    }

    auto draw = [](CounterRng& rng, auto&& weights, Eigen::Index count) {
        double u = rng.uniform(), c = 0.0;
        for (Eigen::Index i = 0; i + 1 < count; ++i) {
            c += weights(i);
            if (u < c)
                return static_cast<int>(i);
        }
        return static_cast<int>(count - 1);
    };

    const auto acc = accumulate_trials(samples, [&](std::uint64_t i) {
        thread_local std::vector<long double> pu;
        thread_local std::vector<int> scratch;
        CounterRng rng(seed, i);
        std::vector<int> x(static_cast<std::size_t>(n));
        if (const auto* ind = std::get_if<IndependentPrior>(&m.prior)) {
            for (int v = 0; v < n; ++v) {
                const auto& p = ind->marginals[static_cast<std::size_t>(v)];
                x[static_cast<std::size_t>(v)] = draw(rng, [&](Eigen::Index k) { return p[k]; }, p.size());
            }
        } else {
            const double u = rng.uniform() * joint_cdf.back();
            auto idx = static_cast<std::size_t>(std::upper_bound(joint_cdf.begin(), joint_cdf.end(), u) - joint_cdf.begin());
            idx = std::min(idx, joint_cdf.size() - 1);
            for (int v = n; v-- > 0;) {
                const auto av = static_cast<std::size_t>(alphabet[static_cast<std::size_t>(v)]);
                x[static_cast<std::size_t>(v)] = static_cast<int>(idx % av);
                idx /= av;
            }
        }
        std::vector<int> y(e.kernels().size());
        for (std::size_t k = 0; k < y.size(); ++k) {
            const Kernel& ker = e.kernels()[k];
            std::size_t t = 0;
            for (std::size_t j = 0; j < ker.vars.size(); ++j)
                t += ker.tuple_stride[j] * static_cast<std::size_t>(x[static_cast<std::size_t>(ker.vars[j])]);
            const auto row = static_cast<Eigen::Index>(t);
            y[k] = draw(rng, [&](Eigen::Index c) { return ker.prob(row, c); }, ker.prob.cols());
        }

        e.accumulate(&y, pu, scratch);
        const std::size_t b_obs = e.b_of_u(e.u_index_of(x));
        long double pb = 0.0L, py = 0.0L;
        std::vector<long double> pa(e.a_size(), 0.0L);
        for (std::size_t u = 0; u < pu.size(); ++u) {
            py += pu[u];
            pa[e.a_of_u(u)] += pu[u];
            if (e.b_of_u(u) == b_obs)
                pb += pu[u];
        }
        // H(A | X_B = b, Y = y) from the exact posterior.
        CompensatedSum h_post;
        for (std::size_t u = 0; u < pu.size(); ++u)
            if (e.b_of_u(u) == b_obs)
                add_entropy_term(h_post, pu[u] / pb);
        const auto h_a_given_by = static_cast<double>(h_post.value());
        switch (mode) {
        case MiMode::Joint:
            return h_a - h_a_given_by;
        case MiMode::CondGivenX:
            return h_a_given_b - h_a_given_by;
        case MiMode::CondGivenY: {
            CompensatedSum h_ay;
            for (auto p : pa)
                add_entropy_term(h_ay, p / py);
            return static_cast<double>(h_ay.value()) - h_a_given_by;
        }
        }
        return 0.0;
    });
    return make_estimate(acc);
}

// --- theorem checks ----------------------------------------------------------

namespace {

VerifyReport report(double lhs, double rhs) { return {lhs, rhs, rhs - lhs}; }

bool is_uniform_binary(const SmallModel& m)
{
    const auto* ind = std::get_if<IndependentPrior>(&m.prior);
    if (!ind)
        return false;
    for (std::size_t i = 0; i < ind->marginals.size(); ++i)
        if (m.fg.alphabet()[i] != 2 || std::abs(ind->marginals[i][0] - 0.5) > 1e-12)
            return false;
    return true;
}

} // namespace

VerifyReport verify_thm1(const SmallModel& m, int v, const VertexSet& s)
{
    validate(m);
    if (!is_uniform_binary(m))
        throw InvalidArgument("theorem 1 needs iid uniform bits");
    std::vector<Factor> fs = m.fg.factors();
    for (auto& f : fs) {
        const auto* bsc = std::get_if<Bsc>(&f.channel);
        if (f.vars.size() != 2 || f.label != parity_label(2) || !bsc)
            throw InvalidArgument("theorem 1 needs BSC observations of X_u xor X_v");
        f.eta = (1.0 - 2.0 * bsc->delta) * (1.0 - 2.0 * bsc->delta);
    }
    const FactorGraph fg(m.fg.alphabet(), std::move(fs));
    const double lhs = exact_mi(m, {v}, s, MiMode::Joint);
    const double rhs = perc_exact(fg, {v}, s) * std::log(2.0);
    return report(lhs, rhs);
}

VerifyReport verify_thm2(const SmallModel& m, const VertexSet& s1, const VertexSet& s2)
{
    validate(m);
    const auto* ind = std::get_if<IndependentPrior>(&m.prior);
    if (!ind)
        throw InvalidArgument("theorem 2 needs an independent prior");
    std::vector<Factor> fs = m.fg.factors();
    for (auto& f : fs)
        f.eta = factor_channel_eta(f);
    const FactorGraph fg(m.fg.alphabet(), std::move(fs));
    double h_max = 0.0;
    for (const auto& p : ind->marginals) {
        CompensatedSum h;
        for (Eigen::Index i = 0; i < p.size(); ++i)
            add_entropy_term(h, p[i]);
        h_max = std::max(h_max, static_cast<double>(h.value()));
    }
    const double lhs = exact_mi(m, s1, s2, MiMode::CondGivenY);
    const double rhs = perc_exact(fg, s1, s2) * h_max;
    return report(lhs, rhs);
}

VerifyReport verify_compare(const SmallModel& m, const VertexSet& s1, const VertexSet& s2)
{
    const double lhs = exact_mi(m, s1, s2, MiMode::CondGivenX, Observation::Channels);
    const double rhs = exact_mi(m, s1, s2, MiMode::CondGivenX, Observation::Erasure);
    return report(lhs, rhs);
}

} // namespace infoperc
