#include "infoperc/cli.hpp"

#include "infoperc/bounds.hpp"
#include "infoperc/channels.hpp"
#include "infoperc/core.hpp"
#include "infoperc/exact_mi.hpp"
#include "infoperc/graphs.hpp"
#include "infoperc/percolation.hpp"
#include "infoperc/random.hpp"
#include "infoperc/simulators.hpp"

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace infoperc::cli {
namespace {

using Params = std::map<std::string, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    bool violation = false;
};

struct Context {
    std::uint64_t seed = kDefaultSeed;
    std::optional<std::uint64_t> trials;

    std::uint64_t trials_or(std::uint64_t fallback) const { return trials ? *trials : fallback; }
};

struct KeyDef {
    std::string name;
    std::string fallback; ///< empty: no default
    std::string help;
};

struct Command {
    std::string path; ///< "perc grid"
    std::string help;
    std::vector<KeyDef> keys;
    std::uint64_t default_trials = 0; ///< 0: trials unused
    std::function<Table(const Params&, const Context&)> run;
    bool scalar = false; ///< printed as a bare value when run directly
};

// --- value parsing -------------------------------------------------------------

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0')
        throw InvalidArgument("'" + key + "' expects a number, got '" + text + "'");
    return v;
}

long long to_integer(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    char* end = nullptr;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || *end != '\0')
        throw InvalidArgument("'" + key + "' expects an integer, got '" + text + "'");
    return v;
}

// Rounds lo + i * step to 12 significant digits so that 0.1 steps print as 0.3, not
// 0.30000000000000004.
double snap(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

/// "v1,v2,..." or "lo:hi:step".
std::vector<double> to_grid(const std::string& key, const std::string& text)
{
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':'))
            parts.push_back(item);
        if (parts.size() != 3)
            throw InvalidArgument("'" + key + "' grid must be lo:hi:step");
        const double lo = to_real(key, parts[0]), hi = to_real(key, parts[1]), step = to_real(key, parts[2]);
        if (!(step > 0.0) || !(hi >= lo))
            throw InvalidArgument("'" + key + "' grid needs step > 0 and hi >= lo");
        const long long count = std::llround(std::floor((hi - lo) / step + 1e-9)) + 1;
        if (count > 1000000)
            throw InvalidArgument("'" + key + "' grid has too many points");
        for (long long i = 0; i < count; ++i)
            out.push_back(snap(lo + static_cast<double>(i) * step));
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(to_real(key, item));
    if (out.empty())
        throw InvalidArgument("'" + key + "' needs at least one value");
    return out;
}

VertexSet to_set(const std::string& text)
{
    VertexSet s;
    std::string t = text;
    for (char& c : t)
        if (c == ',')
            c = ' ';
    std::stringstream ss(t);
    std::string item;
    while (ss >> item)
        s.push_back(static_cast<int>(to_integer("set", item)));
    return s;
}

std::string set_text(const VertexSet& s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i)
        out += (i ? " " : "") + std::to_string(s[i]);
    return out + "}";
}

/// Typed view of a parameter map.
class Args {
public:
    explicit Args(const Params& p) : p_(p) {}

    bool has(const std::string& key) const { return p_.count(key) > 0; }

    const std::string& text(const std::string& key) const
    {
        const auto it = p_.find(key);
        if (it == p_.end())
            throw InvalidArgument("missing required parameter '" + key + "'");
        return it->second;
    }
    double real(const std::string& key) const { return to_real(key, text(key)); }
    int integer(const std::string& key) const
    {
        const long long v = to_integer(key, text(key));
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
            throw InvalidArgument("'" + key + "' is out of range");
        return static_cast<int>(v);
    }
    std::uint64_t count(const std::string& key) const
    {
        const long long v = to_integer(key, text(key));
        if (v < 0)
            throw InvalidArgument("'" + key + "' must be nonnegative");
        return static_cast<std::uint64_t>(v);
    }
    std::vector<double> grid(const std::string& key) const { return to_grid(key, text(key)); }

private:
    const Params& p_;
};

std::string fmt(double x) { return format_real(x); }
std::string fmt(std::uint64_t x) { return std::to_string(x); }
std::string fmt(int x) { return std::to_string(x); }

// --- commands ------------------------------------------------------------------

Table run_eta(const Params& p, const Context&)
{
    Args a(p);
    std::map<std::string, std::string> kv;
    for (const auto& [k, v] : p)
        if (k != "method")
            kv[k] = v;
    const BinaryInputChannel ch = parse_channel(kv);
    const std::string method = a.text("method");
    double eta = 0.0;
    if (method == "auto")
        eta = eta_kl(ch);
    else if (method == "closed")
        eta = eta_kl_closed(ch);
    else if (method == "numeric")
        eta = eta_kl_numeric(ch);
    else
        throw InvalidArgument("method must be auto, closed or numeric");
    return {{"eta"}, {{fmt(eta)}}};
}

SmallModel graph_model(const Args& a)
{
    const Graph g = make_graph(parse_graph_spec(a.text("graph")));
    SmallModel m = edge_model(g, Bsc{a.real("delta")});
    if (a.has("prior")) {
        const double p1 = a.real("prior");
        if (!(p1 > 0.0 && p1 < 1.0))
            throw InvalidArgument("prior must lie in (0, 1)");
        IndependentPrior prior;
        Eigen::VectorXd pv(2);
        pv << 1.0 - p1, p1;
        prior.marginals.assign(static_cast<std::size_t>(g.n()), pv);
        m.prior = prior;
    }
    return m;
}

/// Subsets of [0, n) \ {skip} with at most max_size members, in lexicographic order.
std::vector<VertexSet> small_subsets(int n, int skip, int max_size, bool include_empty)
{
    std::vector<VertexSet> out;
    if (include_empty)
        out.push_back({});
    std::function<void(int, VertexSet&)> grow = [&](int from, VertexSet& cur) {
        for (int u = from; u < n; ++u) {
            if (u == skip)
                continue;
            cur.push_back(u);
            out.push_back(cur);
            if (static_cast<int>(cur.size()) < max_size)
                grow(u + 1, cur);
            cur.pop_back();
        }
    };
    VertexSet cur;
    if (max_size > 0)
        grow(0, cur);
    return out;
}

Table verify_table(const Params& p, const std::string& which)
{
    Args a(p);
    const SmallModel m = graph_model(a);
    const std::string graph = a.text("graph");
    const double delta = a.real("delta");
    const int max_set = a.integer("max_set");
    Table t{{"instance", "delta_or_eta", "lhs_nats", "rhs_nats", "slack"}, {}};

    auto emit = [&](const std::string& name, const VerifyReport& r) {
        t.rows.push_back({name, fmt(delta), fmt(r.lhs), fmt(r.rhs), fmt(r.slack)});
        if (r.slack < -kSlackTolerance)
            t.violation = true;
    };

    const int n = m.fg.n_vars();
    std::vector<std::pair<VertexSet, VertexSet>> pairs;
    if (a.has("s1") || a.has("s2")) {
        pairs.emplace_back(normalize_set(to_set(a.text("s1")), n), normalize_set(to_set(a.text("s2")), n));
    } else {
        for (int u = 0; u < n; ++u)
            for (auto& s : small_subsets(n, u, max_set, which == "thm1"))
                pairs.emplace_back(VertexSet{u}, s);
    }

    for (const auto& [s1, s2] : pairs) {
        if (which == "thm1") {
            if (s1.size() != 1)
                throw InvalidArgument("thm1 takes a single vertex as s1");
            emit(graph + " v=" + std::to_string(s1[0]) + " S=" + set_text(s2), verify_thm1(m, s1[0], s2));
        } else {
            const std::string name = graph + " S1=" + set_text(s1) + " S2=" + set_text(s2);
            emit(name, which == "thm2" ? verify_thm2(m, s1, s2) : verify_compare(m, s1, s2));
        }
    }
    return t;
}

Table run_perc_graph(const Params& p, const Context& ctx)
{
    Args a(p);
    const Graph g = make_graph(parse_graph_spec(a.text("graph")));
    double eta = 0.0;
    if (a.has("eta"))
        eta = a.real("eta");
    else if (a.has("delta"))
        eta = eta_kl(Bsc{a.real("delta")});
    else
        throw InvalidArgument("perc graph needs --eta or --delta");
    const FactorGraph fg = incidence_factor_graph(g, Bsc{0.0}, eta);
    const VertexSet s1 = normalize_set(to_set(a.text("s1")), g.n());
    const VertexSet s2 = normalize_set(to_set(a.text("s2")), g.n());
    std::string method = a.text("method");
    if (method == "auto")
        method = static_cast<int>(fg.n_factors()) <= kDefaultExactFactorCap ? "exact" : "mc";

    std::vector<std::string> row{a.text("graph"), set_text(s1), set_text(s2), fmt(eta), method};
    if (method == "exact") {
        row.insert(row.end(), {fmt(perc_exact(fg, s1, s2)), "0", "0"});
    } else if (method == "mc") {
        const PercEstimate e = perc_mc(fg, s1, s2, ctx.trials_or(100000), ctx.seed);
        row.insert(row.end(), {fmt(e.mean), fmt(e.std_error), fmt(e.trials)});
    } else {
        throw InvalidArgument("method must be auto, exact or mc");
    }
    return {{"graph", "s1", "s2", "eta", "method", "perc", "std_error", "trials"}, {row}};
}

Table run_perc_grid(const Params& p, const Context& ctx)
{
    Args a(p);
    const int n = a.integer("n");
    const std::vector<double> etas = a.grid("eta");
    const auto curve = grid_two_point_curve(n, etas, ctx.trials_or(10000), ctx.seed, a.integer("margin"));
    Table t{{"eta", "n", "mean", "stderr", "trials", "ci_lo", "ci_hi"}, {}};
    for (std::size_t i = 0; i < etas.size(); ++i) {
        const auto& e = curve[i];
        t.rows.push_back({fmt(etas[i]), fmt(n), fmt(e.mean), fmt(e.std_error), fmt(e.trials), fmt(e.ci95.lo),
                          fmt(e.ci95.hi)});
    }
    return t;
}

Table run_perc_giant(const Params& p, const Context& ctx)
{
    Args a(p);
    const int n = a.integer("n");
    Table t{{"n", "c", "giant_fraction", "std_error", "samples"}, {}};
    std::uint64_t i = 0;
    for (double c : a.grid("c")) {
        const PercEstimate e = er_giant(n, c, ctx.trials_or(20), stream_key(ctx.seed, i++));
        t.rows.push_back({fmt(n), fmt(c), fmt(e.mean), fmt(e.std_error), fmt(e.trials)});
    }
    return t;
}

Table run_broadcast(const Params& p, const Context& ctx)
{
    Args a(p);
    BroadcastSpec spec;
    spec.d = a.integer("d");
    if (a.has("delta") == a.has("product"))
        throw InvalidArgument("broadcast needs exactly one of --delta and --product");
    spec.delta = a.has("delta") ? a.real("delta") : broadcast_delta(spec.d, a.real("product"));
    spec.depth = a.integer("depth");
    spec.population = a.count("population");
    const auto mi = broadcast_mi(spec, ctx.seed);
    Table t{{"depth", "d", "delta", "mi_bits", "std_error"}, {}};
    for (std::size_t i = 0; i < mi.size(); ++i)
        t.rows.push_back({fmt(static_cast<int>(i) + 1), fmt(spec.d), fmt(spec.delta), fmt(mi[i].mean),
                          fmt(mi[i].std_error)});
    return t;
}

Table run_wigner(const Params& p, const Context& ctx)
{
    Args a(p);
    const int n = a.integer("n");
    Table t{{"n", "lambda", "overlap", "overlap_se", "mmse_xx", "mmse_se", "seeds"}, {}};
    std::uint64_t i = 0;
    for (double lambda : a.grid("lambda")) {
        const WignerSummary s = wigner_average(n, lambda, ctx.trials_or(200), stream_key(ctx.seed, i++));
        t.rows.push_back({fmt(n), fmt(lambda), fmt(s.overlap.mean), fmt(s.overlap.std_error), fmt(s.mmse_xx.mean),
                          fmt(s.mmse_xx.std_error), fmt(s.overlap.trials)});
    }
    return t;
}

Table run_sbm_sample(const Params& p, const Context& ctx)
{
    Args a(p);
    const SbmInstance s = sample_sbm(a.integer("n"), a.integer("k"), a.real("a"), a.real("b"), ctx.seed);
    Table t{{"record", "x", "y"}, {}};
    for (int v = 0; v < s.n; ++v)
        t.rows.push_back({"vertex", fmt(v), fmt(s.labels[static_cast<std::size_t>(v)])});
    for (const auto& [u, v] : s.edges)
        t.rows.push_back({"edge", fmt(u), fmt(v)});
    return t;
}

Table run_sbm_guess(const Params& p, const Context& ctx)
{
    Args a(p);
    const int k = a.integer("k"), m = a.integer("m");
    const RandomGuessReport r = random_guess_check(k, m, ctx.trials_or(10000), ctx.seed);
    return {{"k", "m", "trials", "violation_rate", "violation_ci_hi", "bound", "hamming_mean", "hamming_se"},
            {{fmt(k), fmt(m), fmt(r.violation_rate.trials), fmt(r.violation_rate.mean), fmt(r.violation_rate.ci95.hi),
              fmt(r.bound), fmt(r.hamming_mean.mean), fmt(r.hamming_mean.std_error)}}};
}

Table run_coupling(const Params& p, const Context& ctx)
{
    Args a(p);
    const int k = a.integer("k"), depth = a.integer("depth");
    const std::uint64_t cap = a.count("cap");
    Table t{{"k", "d", "offspring_mean", "depth", "survival", "survival_se", "gw_survival", "child_uncoupled",
             "child_se", "saturated"},
            {}};
    std::uint64_t i = 0;
    for (double d : a.grid("d")) {
        const CouplingStats s = gw_coupling(k, d, depth, ctx.trials_or(10000), stream_key(ctx.seed, i++), cap);
        const double mean = 2.0 * d / k;
        t.rows.push_back({fmt(k), fmt(d), fmt(mean), fmt(depth), fmt(s.survival.mean), fmt(s.survival.std_error),
                          fmt(1.0 - gw_extinction(PoissonOffspring{mean})), fmt(s.child_uncoupled.mean),
                          fmt(s.child_uncoupled.std_error), fmt(s.saturated_trials)});
    }
    return t;
}

Table run_curves(const Params& p, const Context&)
{
    Args a(p);
    const int k = a.integer("k");
    const std::string which = a.text("curve");
    std::vector<std::string> names;
    if (which == "all") {
        if (k == 2)
            names = {"perc2", "mns"};
        else
            names = {"banks"};
        names.insert(names.end(), {"ksbm", "gupo"});
    } else {
        names = {which};
    }
    Table t{{"curve", "k", "b", "a"}, {}};
    for (const auto& name : names) {
        for (double b : a.grid("b")) {
            double v = 0.0;
            if (name == "mns" || name == "perc2") {
                if (k != 2)
                    throw InvalidArgument(name + " is a two-community curve; use --k 2");
                v = name == "mns" ? curve_mns(b) : curve_perc_2sbm(b);
            } else if (name == "banks") {
                v = curve_banks(k, b);
            } else if (name == "ksbm") {
                v = curve_ksbm(k, b);
            } else if (name == "gupo") {
                v = curve_gupo(k, b);
            } else {
                throw InvalidArgument("unknown curve '" + name + "'");
            }
            t.rows.push_back({name, fmt(k), fmt(b), fmt(v)});
        }
    }
    return t;
}

std::vector<Command> make_commands()
{
    const std::vector<KeyDef> channel_keys{
        {"kind", "bsc", "channel kind: bsc, bern, erasure, gaussian, bms"},
        {"delta", "", "BSC crossover"},
        {"p", "", "bern: P(Y=1 | X=0)"},
        {"q", "", "bern: P(Y=1 | X=1)"},
        {"pass", "", "erasure: reveal probability"},
        {"mu0", "", "gaussian: mean for input 0"},
        {"mu1", "", "gaussian: mean for input 1"},
        {"sigma", "", "gaussian: standard deviation"},
        {"components", "", "bms: w1:d1,w2:d2,..."},
        {"method", "auto", "auto, closed or numeric"},
    };
    auto verify_keys = [](bool with_prior) {
        std::vector<KeyDef> k{{"graph", "", "graph, e.g. triangle, path:4, grid2d:2x3"},
                              {"delta", "", "BSC crossover on every edge"},
                              {"max_set", "2", "largest conditioning set enumerated"},
                              {"s1", "", "first set, e.g. 0"},
                              {"s2", "", "second set, e.g. 1,2"}};
        if (with_prior)
            k.push_back({"prior", "", "P(X_v = 1) for every vertex (default uniform)"});
        return k;
    };

    std::vector<Command> c;
    c.push_back({"eta", "contraction coefficient of a channel", channel_keys, 0, run_eta, true});
    c.push_back({"perc graph",
                 "perc(S1, S2) on a named graph",
                 {{"graph", "", "graph spec"},
                  {"s1", "", "first set"},
                  {"s2", "", "second set"},
                  {"eta", "", "retention probability per edge"},
                  {"delta", "", "BSC crossover; sets eta = (1 - 2 delta)^2"},
                  {"method", "auto", "auto, exact or mc"}},
                 100000,
                 run_perc_graph});
    c.push_back({"perc grid",
                 "two-point connection (0,0)-(n,n) on the square lattice",
                 {{"n", "", "target offset"},
                  {"eta", "", "bond densities: list or lo:hi:step"},
                  {"margin", "-1", "box margin beyond n (negative: n)"}},
                 10000,
                 run_perc_grid});
    c.push_back({"perc giant",
                 "largest component fraction of ER(n, c/n)",
                 {{"n", "", "vertices"}, {"c", "", "mean degrees: list or lo:hi:step"}},
                 20,
                 run_perc_giant});
    c.push_back({"verify thm1", "I(X_v; X_S, Y) against perc(v, S) log 2", verify_keys(false), 0,
                 [](const Params& p, const Context&) { return verify_table(p, "thm1"); }});
    c.push_back({"verify thm2", "I(X_S1; X_S2 | Y) against perc(S1, S2) max H", verify_keys(true), 0,
                 [](const Params& p, const Context&) { return verify_table(p, "thm2"); }});
    c.push_back({"verify compare", "I(X_S1; Y | X_S2) against its erasure counterpart", verify_keys(true), 0,
                 [](const Params& p, const Context&) { return verify_table(p, "compare"); }});
    c.push_back({"broadcast",
                 "root-to-leaves mutual information on the d-ary tree",
                 {{"d", "2", "arity"},
                  {"delta", "", "BSC crossover"},
                  {"product", "", "(1 - 2 delta)^2 d, instead of delta"},
                  {"depth", "10", "deepest level"},
                  {"population", "100000", "population size"}},
                 0,
                 run_broadcast});
    c.push_back({"wigner",
                 "exact Bayes overlap for the spiked Wigner model",
                 {{"n", "14", "dimension (at most 18)"}, {"lambda", "", "signal strengths: list or lo:hi:step"}},
                 200,
                 run_wigner});
    c.push_back({"sbm sample",
                 "one SBM draw as vertex and edge records",
                 {{"n", "", "vertices"}, {"k", "2", "communities"}, {"a", "", "in-community degree scale"},
                  {"b", "", "cross-community degree scale"}},
                 0,
                 run_sbm_sample});
    c.push_back({"sbm guess",
                 "random-guess overlap tail against k! exp(-2 m^(1/3))",
                 {{"k", "3", "communities"}, {"m", "1000", "labels per trial"}},
                 10000,
                 run_sbm_guess});
    c.push_back({"coupling",
                 "uncoupled pairs on the Poisson(d) tree",
                 {{"k", "3", "communities"},
                  {"d", "", "offspring means: list or lo:hi:step"},
                  {"depth", "30", "depth"},
                  {"cap", std::to_string(kCouplingCap), "generation size treated as survival"}},
                 10000,
                 run_coupling});
    c.push_back({"curves",
                 "leading-order phase boundaries a(b)",
                 {{"curve", "all", "all, mns, perc2, banks, ksbm, gupo"},
                  {"k", "2", "communities"},
                  {"b", "0", "b values: list or lo:hi:step"}},
                 0,
                 run_curves});
    return c;
}

const Command* find_command(const std::vector<Command>& cmds, const std::string& path)
{
    for (const auto& c : cmds)
        if (c.path == path)
            return &c;
    return nullptr;
}

/// Fills defaults and rejects unknown keys.
Params complete(const Command& cmd, const Params& given)
{
    Params p;
    for (const auto& [k, v] : given) {
        bool known = false;
        for (const auto& d : cmd.keys)
            known = known || d.name == k;
        if (!known)
            throw InvalidArgument("unknown parameter '" + k + "' for " + cmd.path);
        p[k] = v;
    }
    for (const auto& d : cmd.keys)
        if (!p.count(d.name) && !d.fallback.empty())
            p[d.name] = d.fallback;
    return p;
}

std::string header_line(const std::string& what, const Context& ctx, std::uint64_t trials, const Params& p)
{
    std::string s = std::string("# infoperc ") + kVersion + " " + what + " seed=" + std::to_string(ctx.seed);
    if (trials)
        s += " trials=" + std::to_string(trials);
    for (const auto& [k, v] : p)
        s += " " + k + "=" + v;
    return s;
}

void write_csv(std::ostream& os, const std::string& comment, const Table& t)
{
    os << comment << '\n';
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            os << (i ? "," : "") << cells[i];
        os << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows)
        line(r);
}

std::string option_name(const std::string& key)
{
    std::string s = "--" + key;
    for (char& c : s)
        if (c == '_')
            c = '-';
    return s;
}

// --- sweep -----------------------------------------------------------------------

struct SweepResult {
    std::string comment;
    Table table;
};

SweepResult run_sweep(const std::vector<Command>& cmds, const std::string& path, Context ctx, bool seed_given,
                      bool trials_given)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(path, tree);
    } catch (const pt::ini_parser_error& e) {
        throw InvalidArgument(std::string("cannot read sweep config: ") + e.what());
    }
    const auto sweep = tree.get_child_optional("sweep");
    if (!sweep)
        throw InvalidArgument("sweep config needs a [sweep] section");

    Params head;
    for (const auto& [k, v] : *sweep) {
        static const char* known[] = {"command", "param", "values", "seed", "trials"};
        if (std::find(std::begin(known), std::end(known), k) == std::end(known))
            throw InvalidArgument("unknown key '" + k + "' in [sweep]");
        head[k] = trim(v.data());
    }
    for (const char* k : {"command", "param", "values"})
        if (!head.count(k))
            throw InvalidArgument(std::string("[sweep] needs '") + k + "'");
    const Command* cmd = find_command(cmds, head["command"]);
    if (!cmd)
        throw InvalidArgument("unknown sweep command '" + head["command"] + "'");
    if (head.count("seed") && !seed_given)
        ctx.seed = static_cast<std::uint64_t>(std::stoull(head["seed"]));
    if (head.count("trials") && !trials_given)
        ctx.trials = static_cast<std::uint64_t>(to_integer("trials", head["trials"]));

    Params fixed;
    for (const auto& [section, body] : tree) {
        if (section == "sweep")
            continue;
        if (section != cmd->path)
            throw InvalidArgument("unexpected section [" + section + "] for sweep over " + cmd->path);
        for (const auto& [k, v] : body)
            fixed[k] = trim(v.data());
    }
    const std::string param = head["param"];
    if (fixed.count(param))
        throw InvalidArgument("swept parameter '" + param + "' is also fixed");
    const std::vector<double> values = to_grid(param, head["values"]);

    Params shown = complete(*cmd, fixed);
    SweepResult res;
    {
        std::string what = "sweep command=" + cmd->path + " param=" + param + " values=" + head["values"];
        res.comment = header_line(what, ctx, cmd->default_trials ? ctx.trials_or(cmd->default_trials) : 0, shown);
    }
    // The swept value gets its own column unless the command already reports it.
    bool own_column = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
        Params p = fixed;
        p[param] = format_real(values[i]);
        Context point = ctx;
        point.seed = stream_key(ctx.seed, i);
        const Table t = cmd->run(complete(*cmd, p), point);
        if (i == 0) {
            own_column = std::find(t.header.begin(), t.header.end(), param) == t.header.end();
            res.table.header = {"point"};
            if (own_column)
                res.table.header.push_back(param);
            res.table.header.insert(res.table.header.end(), t.header.begin(), t.header.end());
        }
        for (const auto& r : t.rows) {
            std::vector<std::string> row{std::to_string(i)};
            if (own_column)
                row.push_back(format_real(values[i]));
            row.insert(row.end(), r.begin(), r.end());
            res.table.rows.push_back(std::move(row));
        }
        res.table.violation = res.table.violation || t.violation;
    }
    return res;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    const std::vector<Command> cmds = make_commands();

    CLI::App app{"Information percolation toolkit", "infoperc"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = kDefaultSeed;
    std::uint64_t trials = 0;
    int threads = 0;
    std::string out_path;
    auto* seed_opt = app.add_option("--seed", seed, "master seed")->capture_default_str();
    auto* trials_opt = app.add_option("--trials", trials, "Monte Carlo trials / samples / seeds (command default)");
    app.add_option("--threads", threads, "worker threads (default: available cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--out", out_path, "write CSV to this file instead of standard output");

    std::map<std::string, CLI::App*> groups;
    std::vector<std::pair<CLI::App*, const Command*>> leaves;
    std::map<const Command*, std::map<std::string, std::string>> storage;
    for (const auto& cmd : cmds) {
        CLI::App* parent = &app;
        std::string leaf = cmd.path;
        const auto space = cmd.path.find(' ');
        if (space != std::string::npos) {
            const std::string group = cmd.path.substr(0, space);
            leaf = cmd.path.substr(space + 1);
            if (!groups.count(group)) {
                groups[group] = app.add_subcommand(group, group + " subcommands");
                groups[group]->require_subcommand(1);
                groups[group]->fallthrough();
            }
            parent = groups[group];
        }
        CLI::App* sub = parent->add_subcommand(leaf, cmd.help);
        sub->fallthrough();
        auto& store = storage[&cmd];
        for (const auto& key : cmd.keys) {
            std::string help = key.help;
            if (!key.fallback.empty())
                help += " [" + key.fallback + "]";
            sub->add_option(option_name(key.name), store[key.name], help);
        }
        leaves.emplace_back(sub, &cmd);
    }

    std::string config_path;
    CLI::App* sweep = app.add_subcommand("sweep", "run one command over a parameter grid from an INI file");
    sweep->fallthrough();
    sweep->add_option("config", config_path, "INI file")->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    set_thread_count(threads);

    Context ctx;
    ctx.seed = seed;
    if (trials_opt->count()) {
        if (trials < 1) {
            err << "error: --trials must be at least 1\n";
            return kExitUsage;
        }
        ctx.trials = trials;
    }

    try {
        std::string comment;
        Table table;
        bool scalar = false;
        if (sweep->parsed()) {
            SweepResult r = run_sweep(cmds, config_path, ctx, seed_opt->count() > 0, trials_opt->count() > 0);
            comment = std::move(r.comment);
            table = std::move(r.table);
        } else {
            for (const auto& [sub, cmd] : leaves) {
                if (!sub->parsed())
                    continue;
                Params given;
                for (const auto& key : cmd->keys)
                    if (sub->count(option_name(key.name)))
                        given[key.name] = storage[cmd][key.name];
                const Params p = complete(*cmd, given);
                table = cmd->run(p, ctx);
                comment = header_line(cmd->path, ctx, cmd->default_trials ? ctx.trials_or(cmd->default_trials) : 0, p);
                scalar = cmd->scalar;
            }
        }

        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file) {
                err << "error: cannot open '" << out_path << "' for writing\n";
                return kExitUsage;
            }
        }
        std::ostream& os = out_path.empty() ? out : file;
        if (scalar)
            os << table.rows.at(0).at(0) << '\n';
        else
            write_csv(os, comment, table);
        os.flush();

        if (table.violation) {
            err << "error: a verify row has slack below -" << format_real(kSlackTolerance) << '\n';
            return kExitViolation;
        }
        return kExitOk;
    } catch (const BudgetExceeded& e) {
        err << "error: budget exceeded: " << e.what() << '\n';
        return kExitBudget;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

} // namespace infoperc::cli
