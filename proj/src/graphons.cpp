#include "graphlim/graphons.hpp"

#include "graphlim/errors.hpp"
#include "graphlim/parallel.hpp"
#include "graphlim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace graphlim {

namespace
{
    // P(U >= s) for U = V1 - V2 with V1, V2 independent uniform on [0,1].
    double triangular_tail(double s)
    {
        if (s >= 1.0)
            return 0.0;
        if (s >= 0.0)
            return (1.0 - s) * (1.0 - s) / 2.0;
        if (s > -1.0)
            return 1.0 - (1.0 + s) * (1.0 + s) / 2.0;
        return 1.0;
    }
}

StepGraphon::StepGraphon(std::vector<double> weights, Eigen::MatrixXd values) :
    weights_(std::move(weights)),
    values_(std::move(values))
{
    const auto q = static_cast<Eigen::Index>(weights_.size());
    if (q == 0)
        throw ParseError("stepfunction needs at least one class");
    if (values_.rows() != q || values_.cols() != q)
        throw ParseError("stepfunction values must be " + std::to_string(q) + "x" + std::to_string(q));
    double total = 0.0;
    for (double w : weights_) {
        if (! (w > 0.0))
            throw ParseError("stepfunction class weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ParseError("stepfunction class weights sum to " + std::to_string(total) + ", not 1");
    for (Eigen::Index i = 0; i < q; ++i)
        for (Eigen::Index j = 0; j < q; ++j) {
            if (! (values_(i, j) >= 0.0 && values_(i, j) <= 1.0))
                throw ParseError("stepfunction value [" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "] outside [0,1]");
            if (values_(i, j) != values_(j, i))
                throw ParseError("stepfunction values asymmetric at [" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]");
        }
    cumulative_.resize(weights_.size());
    std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
}

StepGraphon StepGraphon::constant(double p)
{
    return StepGraphon({1.0}, Eigen::MatrixXd::Constant(1, 1, p));
}

int StepGraphon::class_of(double x) const noexcept
{
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative_.begin(), classes() - 1));
}

WeightedGraph StepGraphon::as_weighted_graph() const
{
    return WeightedGraph(weights_, values_);
}

KernelGraphon KernelGraphon::constant(double p)
{
    if (! (p >= 0.0 && p <= 1.0))
        throw ParseError("constant graphon value outside [0,1]");
    return KernelGraphon(Kind::constant, p, {});
}

KernelGraphon KernelGraphon::half_graph_limit()
{
    return KernelGraphon(Kind::half_graph_limit, 0.0, {});
}

KernelGraphon KernelGraphon::grid(Eigen::MatrixXd values)
{
    std::vector<double> weights(values.rows(), 1.0 / static_cast<double>(values.rows()));
    // Validates shape, symmetry and range.
    StepGraphon check(weights, values);
    return KernelGraphon(Kind::grid, 0.0, std::move(values));
}

double KernelGraphon::operator()(double x, double y) const noexcept
{
    switch (kind_) {
    case Kind::constant:
        return p_;
    case Kind::half_graph_limit:
        return std::abs(x - y) >= 0.5 ? 1.0 : 0.0;
    case Kind::grid: {
        const auto m = grid_.rows();
        auto cell = [m](double z) { return std::min<Eigen::Index>(static_cast<Eigen::Index>(z * m), m - 1); };
        return grid_(cell(x), cell(y));
    }
    }
    return 0.0;
}

StepGraphon KernelGraphon::to_step(int m) const
{
    if (kind_ == Kind::grid)
        return StepGraphon(std::vector<double>(grid_.rows(), 1.0 / static_cast<double>(grid_.rows())), grid_);
    if (m < 1)
        throw PreconditionError("grid resolution must be positive");
    if (kind_ == Kind::constant)
        return StepGraphon::constant(p_);

    Eigen::MatrixXd values(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            values(a, b) = triangular_tail(m / 2.0 - (b - a)) + triangular_tail(m / 2.0 - (a - b));
    values = (values + values.transpose()) / 2.0;
    return StepGraphon(std::vector<double>(m, 1.0 / m), values);
}

double evaluate(const Graphon & w, double x, double y)
{
    return std::visit([x, y](const auto & g) { return g(x, y); }, w);
}

StepGraphon from_weighted_graph(const WeightedGraph & h)
{
    std::vector<double> weights(h.alphas());
    const double total = h.total_alpha();
    for (double & w : weights)
        w /= total;
    return StepGraphon(std::move(weights), h.betas());
}

double t_step(const SimpleGraph & f, const StepGraphon & w, double budget)
{
    return hom(f, w.as_weighted_graph(), budget);
}

double t_grid(const SimpleGraph & f, const KernelGraphon & w, int m, double budget)
{
    return t_step(f, w.to_step(m), budget);
}

McEstimate t_mc(const SimpleGraph & f, const Graphon & w, std::size_t samples, std::uint64_t seed, unsigned threads)
{
    if (samples == 0)
        throw PreconditionError("t_mc needs at least one sample");
    const int k = f.order();
    std::vector<double> values(samples);
    parallel_for(samples, threads, [&](std::size_t s) {
        SplitMix64 rng(derive_seed(seed, s));
        std::vector<double> x(k);
        for (double & xi : x)
            xi = rng.uniform();
        double product = 1.0;
        for (auto [u, v] : f.edges()) {
            product *= evaluate(w, x[u], x[v]);
            if (product == 0.0)
                break;
        }
        values[s] = product;
    });

    const double n = static_cast<double>(samples);
    const double mean = compensated_sum(values) / n;
    std::vector<double> squares(samples);
    std::transform(values.begin(), values.end(), squares.begin(), [mean](double v) { return (v - mean) * (v - mean); });
    const double variance = samples > 1 ? compensated_sum(squares) / (n - 1.0) : 0.0;
    return {mean, std::sqrt(variance / n)};
}

double t_pinned(const SimpleGraph & f, const StepGraphon & w, const PartialMap & pins, double budget)
{
    return hom_partial(f, w.as_weighted_graph(), pins, budget);
}

StepGraphon product_graphon(const StepGraphon & a, const StepGraphon & b)
{
    const int qa = a.classes(), qb = b.classes();
    std::vector<double> weights(static_cast<std::size_t>(qa) * qb);
    Eigen::MatrixXd values(qa * qb, qa * qb);
    for (int i = 0; i < qa; ++i)
        for (int j = 0; j < qb; ++j) {
            weights[i * qb + j] = a.weight(i) * b.weight(j);
            for (int i2 = 0; i2 < qa; ++i2)
                for (int j2 = 0; j2 < qb; ++j2)
                    values(i * qb + j, i2 * qb + j2) = a.value(i, i2) * b.value(j, j2);
        }
    double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double & w : weights)
        w /= sum;
    return StepGraphon(std::move(weights), std::move(values));
}

Eigen::MatrixXd coarsen(const Eigen::MatrixXd & values, int factor)
{
    if (factor < 1 || values.rows() % factor != 0 || values.cols() % factor != 0)
        throw PreconditionError("coarsening factor " + std::to_string(factor) + " does not divide " + std::to_string(values.rows()));
    const auto r = values.rows() / factor, c = values.cols() / factor;
    Eigen::MatrixXd out(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j)
            out(i, j) = values.block(i * factor, j * factor, factor, factor).mean();
    return out;
}

GraphParameter density_parameter(const StepGraphon & w)
{
    return GraphParameter("t_W", [g = w.as_weighted_graph()](const SimpleGraph & f) { return t(f, g); },
        {true, true, true});
}

} // namespace graphlim
