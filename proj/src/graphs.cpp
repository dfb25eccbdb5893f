#include "infoperc/graphs.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace infoperc {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges))
{
    if (n < 0)
        throw InvalidArgument("negative vertex count");
    std::set<Edge> seen;
    for (auto& [u, v] : edges_) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw InvalidArgument("edge endpoint out of range");
        if (u == v)
            throw InvalidArgument("self-loop at vertex " + std::to_string(u));
        if (!seen.insert(std::minmax(u, v)).second)
            throw InvalidArgument("duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
    }
}

std::vector<std::vector<int>> Graph::adjacency() const
{
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_));
    for (auto [u, v] : edges_) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    return adj;
}

namespace {

std::int64_t vertex_count(const GraphSpec& s)
{
    switch (s.kind) {
    case GraphKind::Grid2d:
        return static_cast<std::int64_t>(s.a) * s.b;
    case GraphKind::DaryTree: {
        std::int64_t total = 0, level = 1;
        for (int i = 0; i <= s.b; ++i) {
            total += level;
            if (total > (std::int64_t{1} << 40))
                return total;
            level *= s.a;
        }
        return total;
    }
    default:
        return s.a;
    }
}

} // namespace

Graph make_graph(const GraphSpec& spec, int vertex_limit)
{
    if (spec.a < 1 || (spec.kind == GraphKind::Grid2d && spec.b < 1) || (spec.kind == GraphKind::DaryTree && spec.b < 0))
        throw InvalidArgument("graph sizes must be positive");
    const std::int64_t n = vertex_count(spec);
    if (n > vertex_limit)
        throw BudgetExceeded("graph has " + std::to_string(n) + " vertices, limit is " + std::to_string(vertex_limit));
    if (spec.kind == GraphKind::Complete && n * (n - 1) / 2 > vertex_limit)
        throw BudgetExceeded("complete graph edge count exceeds the limit");

    const int nv = static_cast<int>(n);
    std::vector<Edge> edges;
    switch (spec.kind) {
    case GraphKind::Path:
        for (int i = 0; i + 1 < nv; ++i)
            edges.emplace_back(i, i + 1);
        break;
    case GraphKind::Cycle:
        for (int i = 0; i + 1 < nv; ++i)
            edges.emplace_back(i, i + 1);
        if (nv >= 3)
            edges.emplace_back(nv - 1, 0);
        break;
    case GraphKind::Complete:
        for (int i = 0; i < nv; ++i)
            for (int j = i + 1; j < nv; ++j)
                edges.emplace_back(i, j);
        break;
    case GraphKind::Star:
        for (int i = 1; i < nv; ++i)
            edges.emplace_back(0, i);
        break;
    case GraphKind::Grid2d: {
        const int w = spec.a, h = spec.b;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const int v = y * w + x;
                if (x + 1 < w)
                    edges.emplace_back(v, v + 1);
                if (y + 1 < h)
                    edges.emplace_back(v, v + w);
            }
        break;
    }
    case GraphKind::DaryTree:
        for (int v = 1; v < nv; ++v)
            edges.emplace_back((v - 1) / spec.a, v);
        break;
    }
    return Graph(nv, std::move(edges));
}

Graph path_graph(int n) { return make_graph({GraphKind::Path, n, 0}); }
Graph cycle_graph(int n) { return make_graph({GraphKind::Cycle, n, 0}); }
Graph complete_graph(int n) { return make_graph({GraphKind::Complete, n, 0}); }
Graph star_graph(int n) { return make_graph({GraphKind::Star, n, 0}); }
Graph grid_graph(int w, int h) { return make_graph({GraphKind::Grid2d, w, h}); }
Graph dary_tree(int d, int depth) { return make_graph({GraphKind::DaryTree, d, depth}); }

GraphSpec parse_graph_spec(const std::string& text)
{
    if (text == "triangle")
        return {GraphKind::Cycle, 3, 0};
    if (text == "square")
        return {GraphKind::Cycle, 4, 0};
    std::vector<std::string> parts;
    {
        std::stringstream ss(text);
        std::string p;
        while (std::getline(ss, p, ':'))
            parts.push_back(p);
    }
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size())
            throw InvalidArgument("bad graph size in '" + text + "'");
        return v;
    };
    if (parts.size() == 2) {
        const std::string& k = parts[0];
        if (k == "path")
            return {GraphKind::Path, to_int(parts[1]), 0};
        if (k == "cycle")
            return {GraphKind::Cycle, to_int(parts[1]), 0};
        if (k == "complete")
            return {GraphKind::Complete, to_int(parts[1]), 0};
        if (k == "star")
            return {GraphKind::Star, to_int(parts[1]), 0};
        if (k == "grid2d") {
            const auto x = parts[1].find('x');
            if (x == std::string::npos)
                throw InvalidArgument("grid2d expects WxH");
            return {GraphKind::Grid2d, to_int(parts[1].substr(0, x)), to_int(parts[1].substr(x + 1))};
        }
    }
    if (parts.size() == 3 && parts[0] == "dary_tree")
        return {GraphKind::DaryTree, to_int(parts[1]), to_int(parts[2])};
    throw InvalidArgument("unrecognized graph '" + text + "'");
}

GridCoord grid_coord(int vertex, int w) { return {vertex % w, vertex / w}; }
int grid_vertex(GridCoord c, int w) { return c.y * w + c.x; }

TreeCoord tree_coord(int vertex, int d)
{
    TreeCoord c;
    std::int64_t first = 0, level = 1;
    while (vertex >= first + level) {
        first += level;
        level *= d;
        ++c.depth;
    }
    c.rank = static_cast<int>(vertex - first);
    return c;
}

Graph sample_er(int n, double p, std::uint64_t seed)
{
    std::vector<Edge> edges;
    for_each_er_edge(n, p, seed, [&](int u, int v) { edges.emplace_back(u, v); });
    return Graph(n, std::move(edges));
}

VertexSet boundary_at_distance(const Graph& g, int u, int t)
{
    if (t < 0)
        throw InvalidArgument("distance must be nonnegative");
    if (u < 0 || u >= g.n())
        throw InvalidArgument("vertex out of range");
    const auto adj = g.adjacency();
    std::vector<int> dist(static_cast<std::size_t>(g.n()), -1);
    std::deque<int> queue{u};
    dist[static_cast<std::size_t>(u)] = 0;
    VertexSet sphere;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        const int dv = dist[static_cast<std::size_t>(v)];
        if (dv == t) {
            sphere.push_back(v);
            continue;
        }
        for (int w : adj[static_cast<std::size_t>(v)])
            if (dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] = dv + 1;
                queue.push_back(w);
            }
    }
    std::sort(sphere.begin(), sphere.end());
    return sphere;
}

void write_edge_list(std::ostream& os, const Graph& g)
{
    os << g.n() << ' ' << g.m() << '\n';
    for (auto [u, v] : g.edges())
        os << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& is)
{
    long long n = -1, m = -1;
    if (!(is >> n >> m) || n < 0 || m < 0)
        throw InvalidArgument("edge list: bad header");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        int u = 0, v = 0;
        if (!(is >> u >> v))
            throw InvalidArgument("edge list: expected " + std::to_string(m) + " edges");
        edges.emplace_back(u, v);
    }
    return Graph(static_cast<int>(n), std::move(edges));
}

// --- factor graphs ---------------------------------------------------------

FactorGraph::FactorGraph(std::vector<int> alphabet, std::vector<Factor> factors)
    : alphabet_(std::move(alphabet)), factors_(std::move(factors))
{
    for (int a : alphabet_)
        if (a < 1)
            throw InvalidArgument("alphabet sizes must be positive");
    for (const auto& f : factors_) {
        if (f.vars.empty())
            throw InvalidArgument("factor with empty neighbourhood");
        std::vector<int> sorted = f.vars;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw InvalidArgument("factor neighbourhood has repeated variables");
        for (int v : f.vars)
            if (v < 0 || v >= n_vars())
                throw InvalidArgument("factor variable out of range");
        if (!(f.eta >= 0.0 && f.eta <= 1.0))
            throw InvalidArgument("factor retention probability must lie in [0, 1]");
        if (f.label.size() != tuple_count(f))
            throw InvalidArgument("factor label table has the wrong size");
        for (auto l : f.label)
            if (l > 1)
                throw InvalidArgument("factor labels must be binary");
        validate(f.channel);
    }
}

std::size_t FactorGraph::tuple_count(const Factor& f) const
{
    std::size_t n = 1;
    for (int v : f.vars)
        n *= static_cast<std::size_t>(alphabet_[static_cast<std::size_t>(v)]);
    return n;
}

FactorGraph FactorGraph::without(std::size_t w) const
{
    auto fs = factors_;
    fs.erase(fs.begin() + static_cast<std::ptrdiff_t>(w));
    return FactorGraph(alphabet_, std::move(fs));
}

FactorGraph FactorGraph::with_uniform_eta(double eta) const
{
    auto fs = factors_;
    for (auto& f : fs)
        f.eta = eta;
    return FactorGraph(alphabet_, std::move(fs));
}

FactorGraph FactorGraph::with_eta(std::size_t w, double eta) const
{
    auto fs = factors_;
    fs.at(w).eta = eta;
    return FactorGraph(alphabet_, std::move(fs));
}

std::vector<std::uint8_t> parity_label(int degree)
{
    std::vector<std::uint8_t> l(std::size_t{1} << degree);
    for (std::size_t t = 0; t < l.size(); ++t)
        l[t] = static_cast<std::uint8_t>(__builtin_popcountll(t) & 1);
    return l;
}

std::vector<std::uint8_t> equality_label(const std::vector<int>& alphabets)
{
    std::size_t n = 1;
    for (int a : alphabets)
        n *= static_cast<std::size_t>(a);
    std::vector<std::uint8_t> l(n);
    std::vector<int> digits(alphabets.size());
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t r = t;
        for (std::size_t i = alphabets.size(); i-- > 0;) {
            digits[i] = static_cast<int>(r % static_cast<std::size_t>(alphabets[i]));
            r /= static_cast<std::size_t>(alphabets[i]);
        }
        l[t] = static_cast<std::uint8_t>(std::all_of(digits.begin(), digits.end(), [&](int d) { return d == digits[0]; }));
    }
    return l;
}

FactorGraph incidence_factor_graph(const Graph& g, const BinaryInputChannel& ch, double eta)
{
    std::vector<Factor> fs;
    fs.reserve(g.m());
    for (auto [u, v] : g.edges())
        fs.push_back(Factor{{u, v}, parity_label(2), ch, eta});
    return FactorGraph(std::vector<int>(static_cast<std::size_t>(g.n()), 2), std::move(fs));
}

FactorGraph incidence_factor_graph(const Graph& g, const BinaryInputChannel& ch)
{
    return incidence_factor_graph(g, ch, eta_kl(ch));
}

} // namespace infoperc
