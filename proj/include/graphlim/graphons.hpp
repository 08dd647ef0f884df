#pragma once

#include "graphlim/densities.hpp"
#include "graphlim/graphs.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <variant>
#include <vector>

namespace graphlim {

/// Symmetric stepfunction on [0,1]^2. Class i occupies the interval
/// [sum_{j<i} w_j, sum_{j<=i} w_j), so two stepfunctions can be compared
/// pointwise through their interval layouts.
class StepGraphon
{
public:
    StepGraphon() = default;

    /// Throws ParseError unless weights are positive and sum to 1 within
    /// 1e-12 and values is symmetric with entries in [0,1].
    StepGraphon(std::vector<double> weights, Eigen::MatrixXd values);

    static StepGraphon constant(double p);

    int classes() const noexcept { return static_cast<int>(weights_.size()); }
    double weight(int i) const noexcept { return weights_[i]; }
    const std::vector<double> & weights() const noexcept { return weights_; }
    double value(int i, int j) const noexcept { return values_(i, j); }
    const Eigen::MatrixXd & values() const noexcept { return values_; }

    /// Class containing x in [0,1].
    int class_of(double x) const noexcept;
    double operator()(double x, double y) const noexcept { return values_(class_of(x), class_of(y)); }

    /// Weighted graph with node weights = class weights.
    WeightedGraph as_weighted_graph() const;

private:
    std::vector<double> weights_;
    std::vector<double> cumulative_;
    Eigen::MatrixXd values_;
};

/// Graphons given by a formula or a grid rather than by classes.
class KernelGraphon
{
public:
    enum class Kind
    {
        constant,
        half_graph_limit,
        grid,
    };

    static KernelGraphon constant(double p);
    /// Indicator of |x - y| >= 1/2.
    static KernelGraphon half_graph_limit();
    /// m x m piecewise-constant kernel on equal cells.
    static KernelGraphon grid(Eigen::MatrixXd values);

    Kind kind() const noexcept { return kind_; }
    double operator()(double x, double y) const noexcept;

    /// Equal-weight stepfunction whose value on each of the m x m cells is
    /// the exact cell average of the kernel. A constant kernel gives one
    /// class and a grid kernel its own cells, whatever m is.
    StepGraphon to_step(int m = 256) const;

private:
    KernelGraphon(Kind kind, double p, Eigen::MatrixXd grid) : kind_(kind), p_(p), grid_(std::move(grid)) {}

    Kind kind_;
    double p_ = 0.0;
    Eigen::MatrixXd grid_;
};

using Graphon = std::variant<StepGraphon, KernelGraphon>;

double evaluate(const Graphon & w, double x, double y);

/// W_H: classes = nodes of H with weights alpha_i / alpha_H.
StepGraphon from_weighted_graph(const WeightedGraph & h);

/// Exact t(F,W) for a stepfunction.
double t_step(const SimpleGraph & f, const StepGraphon & w, double budget = default_count_budget);

/// t(F,W) of a kernel through its m x m cell-average stepfunction.
double t_grid(const SimpleGraph & f, const KernelGraphon & w, int m = 256, double budget = default_count_budget);

struct McEstimate
{
    double estimate;
    double std_error;
};

/// Monte-Carlo mean of prod_{ij in E(F)} W(x_i, x_j) over uniform x. Sample s
/// draws from derive_seed(seed, s), so the result is independent of threads.
McEstimate t_mc(const SimpleGraph & f, const Graphon & w, std::size_t samples, std::uint64_t seed, unsigned threads = 1);

/// t_phi(F,W) with vertex v fixed inside class pins[v].
double t_pinned(const SimpleGraph & f, const StepGraphon & w, const PartialMap & pins,
    double budget = default_count_budget);

/// Classes (i,j) with weight a_i b_j and value A_{ii'} B_{jj'}; class (i,j)
/// has index i * b.classes() + j.
StepGraphon product_graphon(const StepGraphon & a, const StepGraphon & b);

/// Replaces each factor x factor block by its mean.
Eigen::MatrixXd coarsen(const Eigen::MatrixXd & values, int factor);

/// GraphParameter F -> t(F,W).
GraphParameter density_parameter(const StepGraphon & w);

} // namespace graphlim
