#include "graphlim/graphs.hpp"

#include "graphlim/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

namespace graphlim {

namespace
{
    std::string pair_text(int u, int v)
    {
        return "{" + std::to_string(u + 1) + "," + std::to_string(v + 1) + "}";
    }

    // Iterated colour refinement. Colours are ranks of invariant signatures,
    // so isomorphic graphs receive the same colour multiset.
    std::vector<int> refined_colours(const SimpleGraph & g)
    {
        const int n = g.order();
        std::vector<int> colour(n);
        for (int v = 0; v < n; ++v)
            colour[v] = g.degree(v);

        for (int round = 0; round < n; ++round) {
            std::vector<std::pair<int, std::vector<int>>> signature(n);
            for (int v = 0; v < n; ++v) {
                signature[v].first = colour[v];
                for (int w : g.neighbours(v))
                    signature[v].second.push_back(colour[w]);
                std::sort(signature[v].second.begin(), signature[v].second.end());
            }
            auto distinct = signature;
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

            std::vector<int> next(n);
            for (int v = 0; v < n; ++v)
                next[v] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), signature[v]) - distinct.begin());

            auto classes = [](const std::vector<int> & c) {
                auto s = c;
                std::sort(s.begin(), s.end());
                return std::unique(s.begin(), s.end()) - s.begin();
            };
            bool stable = classes(next) == classes(colour);
            colour = std::move(next);
            if (stable)
                break;
        }
        return colour;
    }

    // Relabelled edge list under position -> vertex order `order`.
    std::vector<Edge> edges_under(const SimpleGraph & g, const std::vector<int> & position)
    {
        std::vector<Edge> out;
        out.reserve(g.size());
        for (auto [u, v] : g.edges()) {
            int a = position[u], b = position[v];
            out.push_back(a < b ? Edge{a, b} : Edge{b, a});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // Minimises the relabelled edge set over all orders that keep the
    // blocks in place and permute within each block. Vertices below
    // first_position keep their index.
    SimpleGraph minimise_over_blocks(const SimpleGraph & g, std::vector<std::vector<int>> blocks, int first_position)
    {
        const int n = g.order();
        std::vector<int> position(n, -1);
        for (int v = 0; v < first_position; ++v)
            position[v] = v;
        for (auto & b : blocks)
            std::sort(b.begin(), b.end());

        const bool use_mask = n <= max_mask_order;
        std::uint64_t best_mask = 0;
        std::vector<Edge> best_edges;
        bool have_best = false;

        auto evaluate = [&] {
            int p = first_position;
            for (auto & b : blocks)
                for (int v : b)
                    position[v] = p++;
            if (use_mask) {
                std::uint64_t m = 0;
                for (auto [u, v] : g.edges())
                    m |= std::uint64_t{1} << pair_index(position[u], position[v]);
                if (! have_best || m < best_mask) {
                    best_mask = m;
                    have_best = true;
                }
            }
            else {
                auto e = edges_under(g, position);
                if (! have_best || e < best_edges) {
                    best_edges = std::move(e);
                    have_best = true;
                }
            }
        };

        // Odometer over the blocks' permutations.
        std::size_t current = 0;
        evaluate();
        while (current < blocks.size()) {
            if (std::next_permutation(blocks[current].begin(), blocks[current].end())) {
                current = 0;
                evaluate();
            }
            else
                ++current;
        }

        if (use_mask)
            return SimpleGraph::from_mask(n, best_mask);
        return SimpleGraph(n, best_edges);
    }
}

SimpleGraph::SimpleGraph(int n) : n_(n)
{
    if (n < 0)
        throw ParseError("negative vertex count");
    build_adjacency();
}

SimpleGraph::SimpleGraph(int n, std::span<const Edge> edges) : n_(n)
{
    if (n < 0)
        throw ParseError("negative vertex count");
    edges_.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ParseError("edge " + pair_text(u, v) + " out of range for n=" + std::to_string(n));
        if (u == v)
            throw ParseError("loop at vertex " + std::to_string(u + 1));
        edges_.push_back(u < v ? Edge{u, v} : Edge{v, u});
    }
    std::sort(edges_.begin(), edges_.end());
    if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end())
        throw ParseError("duplicate edge " + pair_text(dup->u, dup->v));
    build_adjacency();
}

void SimpleGraph::build_adjacency()
{
    adj_.assign(static_cast<std::size_t>(n_) * n_, 0);
    neighbours_.assign(n_, {});
    for (auto [u, v] : edges_) {
        adj_[static_cast<std::size_t>(u) * n_ + v] = 1;
        adj_[static_cast<std::size_t>(v) * n_ + u] = 1;
        neighbours_[u].push_back(v);
        neighbours_[v].push_back(u);
    }
    for (auto & nb : neighbours_)
        std::sort(nb.begin(), nb.end());
}

SimpleGraph SimpleGraph::complete(int n)
{
    std::vector<Edge> e;
    for (int v = 1; v < n; ++v)
        for (int u = 0; u < v; ++u)
            e.push_back({u, v});
    return SimpleGraph(n, e);
}

SimpleGraph SimpleGraph::path(int n)
{
    std::vector<Edge> e;
    for (int v = 1; v < n; ++v)
        e.push_back({v - 1, v});
    return SimpleGraph(n, e);
}

SimpleGraph SimpleGraph::cycle(int n)
{
    if (n < 3)
        throw PreconditionError("cycle needs at least 3 nodes");
    std::vector<Edge> e;
    for (int v = 1; v < n; ++v)
        e.push_back({v - 1, v});
    e.push_back({0, n - 1});
    return SimpleGraph(n, e);
}

SimpleGraph SimpleGraph::star(int m)
{
    std::vector<Edge> e;
    for (int v = 1; v < m; ++v)
        e.push_back({0, v});
    return SimpleGraph(m, e);
}

SimpleGraph SimpleGraph::from_adjacency(const Eigen::MatrixXi & adjacency)
{
    if (adjacency.rows() != adjacency.cols())
        throw ParseError("adjacency matrix is not square");
    const int n = static_cast<int>(adjacency.rows());
    std::vector<Edge> e;
    for (int v = 0; v < n; ++v) {
        if (adjacency(v, v) != 0)
            throw ParseError("loop at vertex " + std::to_string(v + 1));
        for (int u = 0; u < v; ++u) {
            if (adjacency(u, v) != adjacency(v, u))
                throw ParseError("asymmetric adjacency at " + pair_text(u, v));
            if (adjacency(u, v) != 0)
                e.push_back({u, v});
        }
    }
    return SimpleGraph(n, e);
}

SimpleGraph SimpleGraph::from_mask(int n, std::uint64_t mask)
{
    if (n > max_mask_order)
        throw PreconditionError("edge mask supports at most " + std::to_string(max_mask_order) + " nodes");
    std::vector<Edge> e;
    for (int v = 1; v < n; ++v)
        for (int u = 0; u < v; ++u)
            if (mask >> pair_index(u, v) & 1)
                e.push_back({u, v});
    return SimpleGraph(n, e);
}

std::uint64_t SimpleGraph::mask() const
{
    if (n_ > max_mask_order)
        throw PreconditionError("edge mask supports at most " + std::to_string(max_mask_order) + " nodes");
    std::uint64_t m = 0;
    for (auto [u, v] : edges_)
        m |= std::uint64_t{1} << pair_index(u, v);
    return m;
}

SimpleGraph SimpleGraph::relabel(std::span<const int> perm) const
{
    if (static_cast<int>(perm.size()) != n_)
        throw PreconditionError("permutation size differs from vertex count");
    std::vector<Edge> e;
    e.reserve(edges_.size());
    for (auto [u, v] : edges_)
        e.push_back({perm[u], perm[v]});
    return SimpleGraph(n_, e);
}

SimpleGraph SimpleGraph::induced(std::span<const int> vertices) const
{
    const int k = static_cast<int>(vertices.size());
    std::vector<Edge> e;
    for (int j = 1; j < k; ++j)
        for (int i = 0; i < j; ++i)
            if (adjacent(vertices[i], vertices[j]))
                e.push_back({i, j});
    return SimpleGraph(k, e);
}

bool SimpleGraph::connected() const
{
    if (n_ <= 1)
        return true;
    std::vector<char> seen(n_, 0);
    std::queue<int> queue;
    queue.push(0);
    seen[0] = 1;
    int count = 1;
    while (! queue.empty()) {
        int v = queue.front();
        queue.pop();
        for (int w : neighbours_[v])
            if (! seen[w]) {
                seen[w] = 1;
                ++count;
                queue.push(w);
            }
    }
    return count == n_;
}

WeightedGraph::WeightedGraph(std::vector<double> alpha, Eigen::MatrixXd beta) :
    alpha_(std::move(alpha)),
    beta_(std::move(beta))
{
    const auto n = static_cast<Eigen::Index>(alpha_.size());
    if (beta_.rows() != n || beta_.cols() != n)
        throw ParseError("beta must be " + std::to_string(n) + "x" + std::to_string(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        if (! (alpha_[i] > 0.0 && alpha_[i] <= 1.0))
            throw ParseError("alpha[" + std::to_string(i + 1) + "] = " + std::to_string(alpha_[i]) + " outside (0,1]");
        for (Eigen::Index j = 0; j < n; ++j) {
            double b = beta_(i, j);
            if (! (b >= 0.0 && b <= 1.0))
                throw ParseError("beta[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "] outside [0,1]");
            if (beta_(i, j) != beta_(j, i))
                throw ParseError("beta asymmetric at [" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]");
        }
    }
    total_ = std::accumulate(alpha_.begin(), alpha_.end(), 0.0);
}

WeightedGraph WeightedGraph::unweighted(const SimpleGraph & g)
{
    const int n = g.order();
    Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(n, n);
    for (auto [u, v] : g.edges())
        beta(u, v) = beta(v, u) = 1.0;
    return WeightedGraph(std::vector<double>(n, 1.0), std::move(beta));
}

bool WeightedGraph::is_simple() const noexcept
{
    for (int i = 0; i < order(); ++i) {
        if (alpha_[i] != 1.0 || beta_(i, i) != 0.0)
            return false;
        for (int j = 0; j < order(); ++j)
            if (beta_(i, j) != 0.0 && beta_(i, j) != 1.0)
                return false;
    }
    return true;
}

KLabeledGraph::KLabeledGraph(SimpleGraph base, std::vector<int> labels) :
    base_(std::move(base)),
    labels_(std::move(labels))
{
    std::vector<char> used(base_.order(), 0);
    for (int v : labels_) {
        if (v < 0 || v >= base_.order())
            throw PreconditionError("label on nonexistent vertex " + std::to_string(v + 1));
        if (used[v]++)
            throw PreconditionError("labels are not injective");
    }
}

KLabeledGraph KLabeledGraph::fully_labeled(SimpleGraph g)
{
    std::vector<int> labels(g.order());
    std::iota(labels.begin(), labels.end(), 0);
    return KLabeledGraph(std::move(g), std::move(labels));
}

Poset::Poset(int k, std::span<const std::pair<int, int>> relations) :
    k_(k),
    less_(static_cast<std::size_t>(k) * k, 0)
{
    for (auto [u, v] : relations) {
        if (u < 0 || v < 0 || u >= k || v >= k)
            throw PreconditionError("poset relation out of range");
        if (u != v)
            less_[static_cast<std::size_t>(u) * k + v] = 1;
    }
    for (int m = 0; m < k; ++m)
        for (int i = 0; i < k; ++i)
            if (less(i, m))
                for (int j = 0; j < k; ++j)
                    if (less(m, j))
                        less_[static_cast<std::size_t>(i) * k + j] = 1;
    for (int i = 0; i < k; ++i)
        if (less(i, i))
            throw PreconditionError("relation is not antisymmetric");
}

std::size_t Poset::relation_count() const noexcept
{
    return static_cast<std::size_t>(std::count(less_.begin(), less_.end(), 1));
}

SimpleGraph disjoint_union(const SimpleGraph & a, const SimpleGraph & b)
{
    std::vector<Edge> e = a.edges();
    for (auto [u, v] : b.edges())
        e.push_back({u + a.order(), v + a.order()});
    return SimpleGraph(a.order() + b.order(), e);
}

SimpleGraph complement(const SimpleGraph & g)
{
    std::vector<Edge> e;
    for (int v = 1; v < g.order(); ++v)
        for (int u = 0; u < v; ++u)
            if (! g.adjacent(u, v))
                e.push_back({u, v});
    return SimpleGraph(g.order(), e);
}

SimpleGraph glue(const KLabeledGraph & f1, const KLabeledGraph & f2)
{
    if (f1.k() != f2.k())
        throw PreconditionError("glue: label counts differ (" + std::to_string(f1.k()) + " vs " + std::to_string(f2.k()) + ")");

    const int n1 = f1.base().order(), n2 = f2.base().order();
    std::vector<int> image(n2, -1);
    for (int i = 0; i < f2.k(); ++i)
        image[f2.labels()[i]] = f1.labels()[i];
    int next = n1;
    for (int v = 0; v < n2; ++v)
        if (image[v] < 0)
            image[v] = next++;

    std::vector<Edge> e = f1.base().edges();
    for (auto [u, v] : f2.base().edges()) {
        int a = std::min(image[u], image[v]), b = std::max(image[u], image[v]);
        e.push_back({a, b});
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return SimpleGraph(next, e);
}

std::vector<SimpleGraph> supergraphs_on_same_nodes(const SimpleGraph & f)
{
    const int n = f.order();
    std::vector<Edge> missing;
    for (int v = 1; v < n; ++v)
        for (int u = 0; u < v; ++u)
            if (! f.adjacent(u, v))
                missing.push_back({u, v});
    if (missing.size() >= 26)
        throw BudgetExceeded("supergraph enumeration over " + std::to_string(missing.size()) + " free pairs");

    std::vector<SimpleGraph> out;
    out.reserve(std::size_t{1} << missing.size());
    for (std::uint64_t added = 0; added < (std::uint64_t{1} << missing.size()); ++added) {
        std::vector<Edge> e = f.edges();
        for (std::size_t b = 0; b < missing.size(); ++b)
            if (added >> b & 1)
                e.push_back(missing[b]);
        out.emplace_back(n, e);
    }
    return out;
}

SimpleGraph half_graph(int n)
{
    if (n < 1)
        throw PreconditionError("half_graph needs n >= 1");
    std::vector<Edge> e;
    e.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            e.push_back({i, n + j});
    return SimpleGraph(2 * n, e);
}

std::vector<int> bipartition(const SimpleGraph & f)
{
    const int n = f.order();
    std::vector<int> side(n, -1);
    for (int root = 0; root < n; ++root) {
        if (side[root] >= 0)
            continue;
        side[root] = 0;
        std::queue<int> queue;
        queue.push(root);
        while (! queue.empty()) {
            int v = queue.front();
            queue.pop();
            for (int w : f.neighbours(v)) {
                if (side[w] < 0) {
                    side[w] = 1 - side[v];
                    queue.push(w);
                }
                else if (side[w] == side[v])
                    return {};
            }
        }
    }
    return side;
}

Poset bipartite_poset(const SimpleGraph & f)
{
    if (f.order() == 0 || ! f.connected())
        throw PreconditionError("bipartite_poset needs a connected graph");
    auto side = bipartition(f);
    if (side.empty())
        throw PreconditionError("bipartite_poset: graph is not bipartite");
    std::vector<std::pair<int, int>> relations;
    for (auto [u, v] : f.edges())
        relations.push_back(side[u] == 0 ? std::pair{u, v} : std::pair{v, u});
    return Poset(f.order(), relations);
}

std::uint64_t count_linear_extensions(const Poset & p)
{
    const int k = p.size();
    if (k > 12)
        throw BudgetExceeded("count_linear_extensions limited to 12 elements, got " + std::to_string(k));

    std::vector<std::uint32_t> below(k, 0);
    for (int u = 0; u < k; ++u)
        for (int v = 0; v < k; ++v)
            if (p.less(u, v))
                below[v] |= 1u << u;

    // ways[S]: linear orders of the down-set S placed first.
    std::vector<std::uint64_t> ways(std::size_t{1} << k, 0);
    ways[0] = 1;
    for (std::uint32_t s = 0; s < (1u << k); ++s) {
        if (ways[s] == 0)
            continue;
        for (int v = 0; v < k; ++v)
            if (! (s >> v & 1) && (below[v] & ~s) == 0)
                ways[s | 1u << v] += ways[s];
    }
    return ways.back();
}

SimpleGraph canonical_form(const SimpleGraph & g)
{
    auto colour = refined_colours(g);
    std::map<int, std::vector<int>> by_colour;
    for (int v = 0; v < g.order(); ++v)
        by_colour[colour[v]].push_back(v);
    std::vector<std::vector<int>> blocks;
    for (auto & [c, vs] : by_colour)
        blocks.push_back(std::move(vs));
    return minimise_over_blocks(g, std::move(blocks), 0);
}

bool isomorphic(const SimpleGraph & a, const SimpleGraph & b)
{
    return a.order() == b.order() && a.size() == b.size() && canonical_form(a) == canonical_form(b);
}

KLabeledGraph canonical_form(const KLabeledGraph & g)
{
    const int n = g.base().order(), k = g.k();
    // Move labels to positions 0..k-1 first.
    std::vector<int> perm(n, -1);
    for (int i = 0; i < k; ++i)
        perm[g.labels()[i]] = i;
    int next = k;
    for (int v = 0; v < n; ++v)
        if (perm[v] < 0)
            perm[v] = next++;
    SimpleGraph moved = g.base().relabel(perm);

    std::vector<int> rest(n - k);
    std::iota(rest.begin(), rest.end(), k);
    std::vector<std::vector<int>> blocks;
    if (! rest.empty())
        blocks.push_back(std::move(rest));
    std::vector<int> labels(k);
    std::iota(labels.begin(), labels.end(), 0);
    return KLabeledGraph(minimise_over_blocks(moved, std::move(blocks), k), std::move(labels));
}

std::string edge_key(const SimpleGraph & g)
{
    std::string key = std::to_string(g.order()) + ":";
    for (auto [u, v] : g.edges()) {
        key += std::to_string(u);
        key += '-';
        key += std::to_string(v);
        key += ',';
    }
    return key;
}

} // namespace graphlim
