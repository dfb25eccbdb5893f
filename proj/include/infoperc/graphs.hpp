#pragma once

#include "infoperc/channels.hpp"
#include "infoperc/core.hpp"
#include "infoperc/random.hpp"

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace infoperc {

using Edge = std::pair<int, int>;

/// Simple undirected graph on vertices [0, n).
class Graph {
public:
    Graph() = default;
    /// Validates: no self-loops, no duplicate edges, endpoints in range.
    Graph(int n, std::vector<Edge> edges);

    int n() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t m() const { return edges_.size(); }

    /// Adjacency lists, built on demand.
    std::vector<std::vector<int>> adjacency() const;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
};

inline constexpr int kDefaultVertexLimit = 1 << 24;

enum class GraphKind { Path, Cycle, Complete, Star, Grid2d, DaryTree };

struct GraphSpec {
    GraphKind kind = GraphKind::Path;
    int a = 1; ///< n, or grid width, or tree arity
    int b = 0; ///< grid height, or tree depth
};

/// Canonical numbering: row-major for grids (vertex = y * w + x), breadth-first for
/// trees with root 0, centre 0 for stars. Throws BudgetExceeded above vertex_limit.
Graph make_graph(const GraphSpec& spec, int vertex_limit = kDefaultVertexLimit);

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph complete_graph(int n);
Graph star_graph(int n); ///< n vertices: centre 0 and n - 1 leaves
Graph grid_graph(int w, int h);
Graph dary_tree(int d, int depth);

/// Parses "path:5", "cycle:4", "complete:4", "star:4", "grid2d:2x3", "dary_tree:2:3",
/// and the aliases "triangle" (cycle:3) and "square" (cycle:4).
GraphSpec parse_graph_spec(const std::string& text);

struct GridCoord {
    int x = 0;
    int y = 0;
};
GridCoord grid_coord(int vertex, int w);
int grid_vertex(GridCoord c, int w);

struct TreeCoord {
    int depth = 0;
    int rank = 0; ///< position within its generation
};
TreeCoord tree_coord(int vertex, int d);

/// Sample of ER(n, p), deterministic in seed (geometric skipping over vertex pairs).
Graph sample_er(int n, double p, std::uint64_t seed);

/// Visits the edges of an ER(n, p) sample without storing them.
template <class Fn>
void for_each_er_edge(int n, double p, std::uint64_t seed, Fn&& fn);

/// Vertices at graph distance exactly t from u.
VertexSet boundary_at_distance(const Graph& g, int u, int t);

/// Edge-list text format: "n m" then one "u v" line per edge.
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);

// --- factor graphs ---------------------------------------------------------

/// One observation Y_w. The channel input is label[t], a binary function of the
/// configuration t of X_{N(w)}; t is a mixed-radix index with the first listed
/// variable most significant.
struct Factor {
    std::vector<int> vars;
    std::vector<std::uint8_t> label;
    BinaryInputChannel channel = Bsc{0.0};
    double eta = 0.0; ///< retention probability
};

class FactorGraph {
public:
    FactorGraph() = default;
    FactorGraph(std::vector<int> alphabet, std::vector<Factor> factors);

    int n_vars() const { return static_cast<int>(alphabet_.size()); }
    const std::vector<int>& alphabet() const { return alphabet_; }
    const std::vector<Factor>& factors() const { return factors_; }
    std::size_t n_factors() const { return factors_.size(); }

    /// Number of configurations of X_{N(w)}.
    std::size_t tuple_count(const Factor& f) const;

    /// Copy without factor w.
    FactorGraph without(std::size_t w) const;
    /// Copy with every eta replaced.
    FactorGraph with_uniform_eta(double eta) const;
    FactorGraph with_eta(std::size_t w, double eta) const;

private:
    std::vector<int> alphabet_;
    std::vector<Factor> factors_;
};

/// XOR of binary labels.
std::vector<std::uint8_t> parity_label(int degree);
/// 1 when all variables share a value.
std::vector<std::uint8_t> equality_label(const std::vector<int>& alphabets);

/// One parity factor per edge over binary variables, each with retention `eta`.
FactorGraph incidence_factor_graph(const Graph& g, const BinaryInputChannel& ch, double eta);
/// Same, with eta = eta_kl(ch).
FactorGraph incidence_factor_graph(const Graph& g, const BinaryInputChannel& ch);

// --- implementation --------------------------------------------------------

template <class Fn>
void for_each_er_edge(int n, double p, std::uint64_t seed, Fn&& fn)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidArgument("edge probability must lie in [0, 1]");
    if (p == 0.0 || n < 2)
        return;
    if (p == 1.0) {
        for (int v = 1; v < n; ++v)
            for (int w = 0; w < v; ++w)
                fn(w, v);
        return;
    }
    CounterRng rng(seed, 0);
    const double log_q = std::log1p(-p);
    std::int64_t v = 1, w = -1;
    while (v < n) {
        const double r = rng.uniform();
        w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
        while (w >= v && v < n) {
            w -= v;
            ++v;
        }
        if (v < n)
            fn(static_cast<int>(w), static_cast<int>(v));
    }
}

} // namespace infoperc
