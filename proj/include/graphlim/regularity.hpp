#pragma once

#include "graphlim/graphons.hpp"
#include "graphlim/graphs.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace graphlim {

/// Disjoint nonempty blocks covering {0..n-1}.
class Partition
{
public:
    Partition() = default;
    /// Throws PreconditionError unless the blocks are nonempty, disjoint
    /// and cover [0, n).
    Partition(std::vector<std::vector<int>> blocks, int n);

    static Partition trivial(int n);
    static Partition singletons(int n);

    int vertex_count() const noexcept { return n_; }
    std::size_t size() const noexcept { return blocks_.size(); }
    const std::vector<std::vector<int>> & blocks() const noexcept { return blocks_; }
    const std::vector<int> & block_of() const noexcept { return block_of_; }

    /// True when every block of *this lies inside one block of coarser.
    bool refines(const Partition & coarser) const;

private:
    int n_ = 0;
    std::vector<std::vector<int>> blocks_;
    std::vector<int> block_of_;
};

/// Q_ab = e(V_a, V_b) / (|V_a||V_b|), with Q_aa = 2 e(V_a) / |V_a|^2.
Eigen::MatrixXd density_matrix(const SimpleGraph & g, const Partition & p);

/// Block averages of a weighted symmetric matrix m under vertex weights w.
Eigen::MatrixXd density_matrix(const Eigen::MatrixXd & m, const std::vector<double> & weights, const Partition & p);

/// K(P,Q): unit node weights, weight Q_ab between u in V_a and v in V_b,
/// loops included.
WeightedGraph build_kpq(const Partition & p, const Eigen::MatrixXd & q);

/// w_i w_j (m_ij - Q_{block(i) block(j)}); its cut norm is the normalised
/// distance between m and its block-average approximation.
Eigen::MatrixXd weighted_residual(const Eigen::MatrixXd & m, const std::vector<double> & weights, const Partition & p,
    const Eigen::MatrixXd & q);

enum class CutSearch
{
    heuristic,
    /// Exact search when the matrix is within cutnorm_exact_limit.
    exact_when_feasible,
};

struct RegularityOptions
{
    double eps = 0.1;
    std::uint64_t seed = 0;
    int restarts = 32;
    /// Starting partition; the result refines it.
    std::optional<Partition> refine;
    /// 0 selects 2^min(1/eps^2, 14).
    std::size_t max_blocks = 0;
    CutSearch search = CutSearch::heuristic;
    unsigned threads = 1;
};

struct RegularityCertificate
{
    /// The last cut search found no rectangle deviating by more than eps.
    bool certified = false;
    /// True when that last search was the heuristic one.
    bool heuristic = true;
    bool cap_exceeded = false;
    /// Normalised deviation of the best rectangle found in the last search.
    double best_deviation = 0.0;
    int restarts = 0;
    int rounds = 0;
    /// sum_ab W_a W_b Q_ab^2 before each search.
    std::vector<double> index_history;
};

struct RegularPartition
{
    Partition partition;
    Eigen::MatrixXd q;
    RegularityCertificate certificate;
};

std::size_t default_block_cap(double eps);

/// Iterative refinement: while a cut search finds S, T with normalised
/// deviation above eps, every block is split by membership in S and in T.
/// Each accepted split raises the index by more than eps^2.
RegularPartition weak_regular_partition(const SimpleGraph & g, const RegularityOptions & options);

/// Same refinement for a symmetric matrix with positive vertex weights
/// summing to 1.
RegularPartition weak_regular_partition(const Eigen::MatrixXd & m, const std::vector<double> & weights,
    const RegularityOptions & options);

/// Equal-size blocks (sizes differ by at most 1) cut from the blocks laid
/// end to end; the block count is unchanged.
Partition balance(const Partition & p);

/// d_box(G, K(P,Q)): exact for n <= cutnorm_exact_limit, heuristic beyond.
double kpq_distance(const SimpleGraph & g, const Partition & p, const Eigen::MatrixXd & q, int restarts = 32,
    std::uint64_t seed = 0);

/// Exact cut norm of `residual` after summing it over `groups` contiguous
/// index ranges. A lower bound on the cut norm of the residual.
double coarsened_cut_norm(const Eigen::MatrixXd & residual, int groups);

struct GraphonApproximation
{
    StepGraphon approximant;
    /// Classes of the input grouped into steps of the approximant.
    Partition steps;
    RegularityCertificate certificate;
    /// Residual on the input's classes, for exact verification.
    Eigen::MatrixXd residual;
};

/// Stepfunction U with ||W - U||_box <= eps (certified by the cut search).
/// A stepfunction input starts from its own classes and is returned as is.
GraphonApproximation approximate_graphon(const StepGraphon & w, double eps, RegularityOptions options = {});

/// Runs the refinement on the m x m cell-average grid, starting from one block.
GraphonApproximation approximate_graphon(const KernelGraphon & w, double eps, int m = 256,
    RegularityOptions options = {});

} // namespace graphlim
