#include "graphlim/regularity.hpp"

#include "graphlim/cutnorm.hpp"
#include "graphlim/errors.hpp"
#include "graphlim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace graphlim {

namespace
{
    Eigen::MatrixXd adjacency(const SimpleGraph & g)
    {
        const int n = g.order();
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (auto [u, v] : g.edges())
            a(u, v) = a(v, u) = 1.0;
        return a;
    }

    std::vector<double> block_weights(const std::vector<double> & weights, const Partition & p)
    {
        std::vector<double> out(p.size(), 0.0);
        for (int i = 0; i < p.vertex_count(); ++i)
            out[p.block_of()[i]] += weights[i];
        return out;
    }

    double partition_index(const std::vector<double> & block_weight, const Eigen::MatrixXd & q)
    {
        double index = 0.0;
        for (std::size_t a = 0; a < block_weight.size(); ++a)
            for (std::size_t b = 0; b < block_weight.size(); ++b)
                index += block_weight[a] * block_weight[b] * q(a, b) * q(a, b);
        return index;
    }

    // Splits every block by membership in rows and in cols. Block order
    // follows the first vertex of each part.
    Partition split(const Partition & p, const CutWitness & cut)
    {
        const int n = p.vertex_count();
        std::vector<char> in_s(n, 0), in_t(n, 0);
        for (int i : cut.rows)
            in_s[i] = 1;
        for (int j : cut.cols)
            in_t[j] = 1;
        std::vector<std::vector<int>> blocks;
        for (const auto & block : p.blocks()) {
            std::vector<int> parts[4];
            for (int v : block)
                parts[2 * in_s[v] + in_t[v]].push_back(v);
            for (auto & part : parts)
                if (! part.empty())
                    blocks.push_back(std::move(part));
        }
        return Partition(std::move(blocks), n);
    }

    StepGraphon steps_to_graphon(const std::vector<double> & weights, const Partition & p, const Eigen::MatrixXd & q)
    {
        auto bw = block_weights(weights, p);
        double total = std::accumulate(bw.begin(), bw.end(), 0.0);
        for (double & w : bw)
            w /= total;
        Eigen::MatrixXd values = ((q + q.transpose()) / 2.0).cwiseMax(0.0).cwiseMin(1.0);
        return StepGraphon(std::move(bw), std::move(values));
    }
}

Partition::Partition(std::vector<std::vector<int>> blocks, int n) :
    n_(n),
    blocks_(std::move(blocks)),
    block_of_(n, -1)
{
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (blocks_[b].empty())
            throw PreconditionError("partition has an empty block");
        for (int v : blocks_[b]) {
            if (v < 0 || v >= n)
                throw PreconditionError("partition vertex " + std::to_string(v + 1) + " out of range");
            if (block_of_[v] >= 0)
                throw PreconditionError("vertex " + std::to_string(v + 1) + " lies in two blocks");
            block_of_[v] = static_cast<int>(b);
        }
    }
    if (std::find(block_of_.begin(), block_of_.end(), -1) != block_of_.end())
        throw PreconditionError("partition does not cover every vertex");
}

Partition Partition::trivial(int n)
{
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return Partition({std::move(all)}, n);
}

Partition Partition::singletons(int n)
{
    std::vector<std::vector<int>> blocks(n);
    for (int v = 0; v < n; ++v)
        blocks[v] = {v};
    return Partition(std::move(blocks), n);
}

bool Partition::refines(const Partition & coarser) const
{
    if (coarser.n_ != n_)
        return false;
    for (const auto & block : blocks_)
        for (int v : block)
            if (coarser.block_of_[v] != coarser.block_of_[block.front()])
                return false;
    return true;
}

Eigen::MatrixXd density_matrix(const SimpleGraph & g, const Partition & p)
{
    if (p.vertex_count() != g.order())
        throw PreconditionError("partition and graph sizes differ");
    const auto k = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd count = Eigen::MatrixXd::Zero(k, k);
    for (auto [u, v] : g.edges()) {
        int a = p.block_of()[u], b = p.block_of()[v];
        count(a, b) += 1.0;
        count(b, a) += 1.0;
    }
    // Off-diagonal counts are e(V_a,V_b); the diagonal holds 2 e(V_a).
    Eigen::MatrixXd q(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b) {
            double sa = static_cast<double>(p.blocks()[a].size()), sb = static_cast<double>(p.blocks()[b].size());
            q(a, b) = count(a, b) / (sa * sb);
        }
    return q;
}

Eigen::MatrixXd density_matrix(const Eigen::MatrixXd & m, const std::vector<double> & weights, const Partition & p)
{
    const auto k = static_cast<Eigen::Index>(p.size());
    const int n = p.vertex_count();
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            mass(p.block_of()[i], p.block_of()[j]) += weights[i] * weights[j] * m(i, j);
    auto bw = block_weights(weights, p);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b)
            mass(a, b) /= bw[a] * bw[b];
    return mass;
}

WeightedGraph build_kpq(const Partition & p, const Eigen::MatrixXd & q)
{
    if (q.rows() != static_cast<Eigen::Index>(p.size()) || q.cols() != q.rows())
        throw PreconditionError("density matrix size does not match the partition");
    const int n = p.vertex_count();
    Eigen::MatrixXd beta(n, n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            beta(u, v) = q(p.block_of()[u], p.block_of()[v]);
    return WeightedGraph(std::vector<double>(n, 1.0), std::move(beta));
}

Eigen::MatrixXd weighted_residual(const Eigen::MatrixXd & m, const std::vector<double> & weights, const Partition & p,
    const Eigen::MatrixXd & q)
{
    const int n = p.vertex_count();
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            d(i, j) = weights[i] * weights[j] * (m(i, j) - q(p.block_of()[i], p.block_of()[j]));
    return d;
}

std::size_t default_block_cap(double eps)
{
    return static_cast<std::size_t>(std::floor(std::pow(2.0, std::min(1.0 / (eps * eps), 14.0))));
}

RegularPartition weak_regular_partition(const Eigen::MatrixXd & m, const std::vector<double> & weights,
    const RegularityOptions & options)
{
    if (! (options.eps > 0.0 && options.eps < 1.0))
        throw PreconditionError("eps must lie in (0,1)");
    const int n = static_cast<int>(weights.size());
    if (m.rows() != n || m.cols() != n)
        throw PreconditionError("matrix and weight sizes differ");
    const std::size_t cap = options.max_blocks ? options.max_blocks : default_block_cap(options.eps);

    Partition current = options.refine ? *options.refine : Partition::trivial(n);
    if (current.vertex_count() != n)
        throw PreconditionError("starting partition has the wrong vertex count");

    RegularPartition result;
    result.certificate.restarts = options.restarts;
    for (int round = 0;; ++round) {
        Eigen::MatrixXd q = density_matrix(m, weights, current);
        result.certificate.index_history.push_back(partition_index(block_weights(weights, current), q));
        Eigen::MatrixXd d = weighted_residual(m, weights, current, q);

        const bool exact = options.search == CutSearch::exact_when_feasible && n <= cutnorm_exact_limit;
        CutWitness cut = exact ? cutnorm_exact(d)
                               : cutnorm_heuristic(d, options.restarts, derive_seed(options.seed, round), options.threads);

        result.certificate.rounds = round + 1;
        result.certificate.best_deviation = cut.value;
        result.certificate.heuristic = ! exact;
        result.partition = current;
        result.q = q;
        if (cut.value <= options.eps) {
            result.certificate.certified = true;
            return result;
        }

        Partition next = split(current, cut);
        if (next.size() > cap) {
            result.certificate.cap_exceeded = true;
            return result;
        }
        current = std::move(next);
    }
}

RegularPartition weak_regular_partition(const SimpleGraph & g, const RegularityOptions & options)
{
    const int n = g.order();
    if (n == 0)
        throw PreconditionError("regularity needs a nonempty graph");
    return weak_regular_partition(adjacency(g), std::vector<double>(n, 1.0 / n), options);
}

Partition balance(const Partition & p)
{
    std::vector<int> sequence;
    for (const auto & block : p.blocks())
        sequence.insert(sequence.end(), block.begin(), block.end());
    const std::size_t n = sequence.size(), k = p.size();
    std::vector<std::vector<int>> blocks(k);
    std::size_t pos = 0;
    for (std::size_t b = 0; b < k; ++b) {
        std::size_t size = n / k + (b < n % k ? 1 : 0);
        blocks[b].assign(sequence.begin() + pos, sequence.begin() + pos + size);
        pos += size;
    }
    return Partition(std::move(blocks), p.vertex_count());
}

double kpq_distance(const SimpleGraph & g, const Partition & p, const Eigen::MatrixXd & q, int restarts,
    std::uint64_t seed)
{
    return rect_distance(WeightedGraph::unweighted(g), build_kpq(p, q), restarts, seed);
}

double coarsened_cut_norm(const Eigen::MatrixXd & residual, int groups)
{
    const auto n = residual.rows();
    if (groups < 1 || groups > cutnorm_exact_limit)
        throw PreconditionError("coarsening needs between 1 and " + std::to_string(cutnorm_exact_limit) + " groups");
    groups = static_cast<int>(std::min<Eigen::Index>(groups, n));
    auto group_of = [&](Eigen::Index i) { return static_cast<Eigen::Index>(i * groups / n); };
    Eigen::MatrixXd summed = Eigen::MatrixXd::Zero(groups, groups);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < residual.cols(); ++j)
            summed(group_of(i), group_of(j)) += residual(i, j);
    return cutnorm_exact(summed).value;
}

GraphonApproximation approximate_graphon(const StepGraphon & w, double eps, RegularityOptions options)
{
    options.eps = eps;
    options.refine = Partition::singletons(w.classes());
    auto rp = weak_regular_partition(w.values(), w.weights(), options);
    auto residual = weighted_residual(w.values(), w.weights(), rp.partition, rp.q);
    return {steps_to_graphon(w.weights(), rp.partition, rp.q), rp.partition, rp.certificate, std::move(residual)};
}

GraphonApproximation approximate_graphon(const KernelGraphon & w, double eps, int m, RegularityOptions options)
{
    options.eps = eps;
    StepGraphon grid = w.to_step(m);
    auto rp = weak_regular_partition(grid.values(), grid.weights(), options);
    auto residual = weighted_residual(grid.values(), grid.weights(), rp.partition, rp.q);
    return {steps_to_graphon(grid.weights(), rp.partition, rp.q), rp.partition, rp.certificate, std::move(residual)};
}

} // namespace graphlim
