#pragma once

#include "graphlim/graphons.hpp"
#include "graphlim/graphs.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace graphlim {

/// Rectangle attaining (or bounding from below) the cut norm of a matrix.
struct CutWitness
{
    std::vector<int> rows;
    std::vector<int> cols;
    /// |sum over rows x cols|.
    double value = 0.0;
    double signed_sum = 0.0;
    /// False when the witness comes from the heuristic search.
    bool exact = false;
};

/// Largest smaller dimension cutnorm_exact accepts.
inline constexpr int cutnorm_exact_limit = 22;

/// max over row sets S and column sets T of |sum_{S x T} a_ij|. For fixed S
/// the best T takes every column whose partial sum has the chosen sign, so
/// only subsets of the smaller dimension are enumerated (Gray-code order).
CutWitness cutnorm_exact(const Eigen::MatrixXd & a);

/// Alternating maximisation from `restarts` starting row sets, both signs.
/// The first start is the full row set; the rest are random. The result is
/// a feasible rectangle, so its value never exceeds the cut norm.
CutWitness cutnorm_heuristic(const Eigen::MatrixXd & a, int restarts = 32, std::uint64_t seed = 0,
    unsigned threads = 1);

/// Exact when the smaller dimension is within the guard, heuristic otherwise.
CutWitness cutnorm(const Eigen::MatrixXd & a, int restarts = 32, std::uint64_t seed = 0);

/// d_box(G1,G2) = cutnorm(beta1 - beta2) / n^2. Node weights do not enter.
double rect_distance(const WeightedGraph & g1, const WeightedGraph & g2, int restarts = 32, std::uint64_t seed = 0);

/// U - W on the common refinement of two stepfunctions' interval layouts.
struct StepDifference
{
    std::vector<double> weights;
    Eigen::MatrixXd values;
};

StepDifference step_difference(const StepGraphon & u, const StepGraphon & w);

/// ||U||_box for a signed stepfunction: the optimum over measurable sets is
/// attained at unions of classes, so this is the exact cut norm of the
/// matrix w_i w_j U_ij. Throws BudgetExceeded past cutnorm_exact_limit classes.
double stepnorm(const StepDifference & u);
double stepnorm(const StepGraphon & u, const StepGraphon & w);

struct CountingLemmaCheck
{
    double lhs;
    double rhs;

    bool holds(double slack = 1e-12) const noexcept { return lhs <= rhs + slack; }
};

/// |t(F,U) - t(F,W)| against |E(F)| * ||U - W||_box.
CountingLemmaCheck counting_lemma_check(const SimpleGraph & f, const StepGraphon & u, const StepGraphon & w);

} // namespace graphlim
