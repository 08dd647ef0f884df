#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

/// Vertices are indexed 0..n-1 throughout the library. The text formats
/// read and write 1-based indices.
namespace graphlim {

struct Edge
{
    int u;
    int v;

    friend auto operator<=>(const Edge &, const Edge &) = default;
};

/// Bit position of the pair {i, j} in an edge bitmask. Pairs are ordered
/// colexicographically, (0,1) (0,2) (1,2) (0,3) ..., so the mask of a graph
/// on [n-1] is the low part of the mask of any extension to [n].
constexpr int pair_index(int i, int j) noexcept
{
    if (i > j)
        std::swap(i, j);
    return j * (j - 1) / 2 + i;
}

constexpr int pair_count(int n) noexcept { return n * (n - 1) / 2; }

/// Largest vertex count whose edge set fits in a 64-bit mask.
inline constexpr int max_mask_order = 11;

/// Finite simple graph: no loops, no multiple edges. Immutable.
class SimpleGraph
{
public:
    SimpleGraph() = default;
    explicit SimpleGraph(int n);

    /// Throws ParseError on loops, out-of-range endpoints or duplicates.
    SimpleGraph(int n, std::span<const Edge> edges);
    SimpleGraph(int n, std::initializer_list<Edge> edges) :
        SimpleGraph(n, std::span<const Edge>(edges.begin(), edges.size()))
    {
    }

    static SimpleGraph edgeless(int n) { return SimpleGraph(n); }
    static SimpleGraph complete(int n);
    static SimpleGraph path(int n);
    static SimpleGraph cycle(int n);
    /// Star on m nodes with center 0.
    static SimpleGraph star(int m);
    static SimpleGraph from_adjacency(const Eigen::MatrixXi & adjacency);
    static SimpleGraph from_mask(int n, std::uint64_t mask);

    int order() const noexcept { return n_; }
    std::size_t size() const noexcept { return edges_.size(); }
    const std::vector<Edge> & edges() const noexcept { return edges_; }

    bool adjacent(int u, int v) const noexcept { return adj_[static_cast<std::size_t>(u) * n_ + v] != 0; }
    int degree(int v) const noexcept { return static_cast<int>(neighbours_[v].size()); }
    const std::vector<int> & neighbours(int v) const noexcept { return neighbours_[v]; }

    /// Edge bitmask under pair_index. Requires order() <= max_mask_order.
    std::uint64_t mask() const;

    /// Graph with vertex v renamed to perm[v].
    SimpleGraph relabel(std::span<const int> perm) const;
    SimpleGraph induced(std::span<const int> vertices) const;

    bool connected() const;

    friend bool operator==(const SimpleGraph & a, const SimpleGraph & b)
    {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    void build_adjacency();

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<unsigned char> adj_;
    std::vector<std::vector<int>> neighbours_;
};

/// Weighted target graph: node weights alpha in (0,1], symmetric edge
/// weights beta in [0,1] with loops allowed.
class WeightedGraph
{
public:
    WeightedGraph() = default;

    /// Throws ParseError when any invariant fails, naming the offending entry.
    WeightedGraph(std::vector<double> alpha, Eigen::MatrixXd beta);

    /// Unit node weights, beta = adjacency matrix.
    static WeightedGraph unweighted(const SimpleGraph & g);

    int order() const noexcept { return static_cast<int>(alpha_.size()); }
    double alpha(int i) const noexcept { return alpha_[i]; }
    const std::vector<double> & alphas() const noexcept { return alpha_; }
    double beta(int i, int j) const noexcept { return beta_(i, j); }
    const Eigen::MatrixXd & betas() const noexcept { return beta_; }
    double total_alpha() const noexcept { return total_; }

    /// True when all node weights are 1 and all edge weights are 0 or 1
    /// with no loops.
    bool is_simple() const noexcept;

private:
    std::vector<double> alpha_;
    Eigen::MatrixXd beta_;
    double total_ = 0.0;
};

/// A graph with k distinguished nodes; label i sits on vertex labels()[i].
class KLabeledGraph
{
public:
    KLabeledGraph() = default;
    KLabeledGraph(SimpleGraph base, std::vector<int> labels);

    const SimpleGraph & base() const noexcept { return base_; }
    const std::vector<int> & labels() const noexcept { return labels_; }
    int k() const noexcept { return static_cast<int>(labels_.size()); }

    /// Fully labeled graph on [k] (label i on vertex i).
    static KLabeledGraph fully_labeled(SimpleGraph g);

private:
    SimpleGraph base_;
    std::vector<int> labels_;
};

/// Finite partial order on {0..k-1}, stored as its strict relation.
class Poset
{
public:
    Poset() = default;

    /// Builds the transitive closure of `relations` (pairs u < v). Throws
    /// PreconditionError if the closure is not antisymmetric.
    Poset(int k, std::span<const std::pair<int, int>> relations);

    int size() const noexcept { return k_; }
    bool less(int u, int v) const noexcept { return less_[static_cast<std::size_t>(u) * k_ + v] != 0; }
    std::size_t relation_count() const noexcept;

private:
    int k_ = 0;
    std::vector<unsigned char> less_;
};

SimpleGraph disjoint_union(const SimpleGraph & a, const SimpleGraph & b);
SimpleGraph complement(const SimpleGraph & g);

/// Identifies equally labeled nodes of f1 and f2; edges present in both
/// copies are kept once. Vertices of f1 keep their indices and the
/// unlabeled vertices of f2 follow in order.
SimpleGraph glue(const KLabeledGraph & f1, const KLabeledGraph & f2);

/// Every graph on the vertex set of f whose edge set contains E(f), in
/// increasing order of the added-edge bitmask.
std::vector<SimpleGraph> supergraphs_on_same_nodes(const SimpleGraph & f);

/// Half-graph H_{n,n}: vertices 0..n-1 and n..2n-1, i ~ n+j iff i <= j.
SimpleGraph half_graph(int n);

/// Two-colouring with vertex 0 on side 0, or empty if f is not bipartite.
std::vector<int> bipartition(const SimpleGraph & f);

/// Order on a connected bipartite graph: u < v iff u is on vertex 0's side,
/// v on the other, and uv is an edge.
Poset bipartite_poset(const SimpleGraph & f);

/// Exact count of linear extensions. Ground set limited to 12 elements.
std::uint64_t count_linear_extensions(const Poset & p);

/// Isomorphism-invariant relabelling of g. Minimises the adjacency bitmask
/// over every permutation that lists vertices by nondecreasing degree.
SimpleGraph canonical_form(const SimpleGraph & g);
bool isomorphic(const SimpleGraph & a, const SimpleGraph & b);

/// Canonical form of a k-labeled graph: labels pinned to 0..k-1, unlabeled
/// vertices permuted to minimise the bitmask.
KLabeledGraph canonical_form(const KLabeledGraph & g);

/// Compact key "n:u-v,u-v,..." of the exact labeled edge set.
std::string edge_key(const SimpleGraph & g);

} // namespace graphlim
