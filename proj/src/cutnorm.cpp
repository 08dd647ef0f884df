#include "graphlim/cutnorm.hpp"

#include "graphlim/errors.hpp"
#include "graphlim/parallel.hpp"
#include "graphlim/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace graphlim {

namespace
{
    double rectangle_sum(const Eigen::MatrixXd & a, const std::vector<int> & rows, const std::vector<int> & cols)
    {
        double s = 0.0;
        for (int i : rows)
            for (int j : cols)
                s += a(i, j);
        return s;
    }

    CutWitness make_witness(const Eigen::MatrixXd & a, std::vector<int> rows, std::vector<int> cols, bool exact)
    {
        CutWitness w;
        w.signed_sum = rectangle_sum(a, rows, cols);
        w.value = std::abs(w.signed_sum);
        w.rows = std::move(rows);
        w.cols = std::move(cols);
        w.exact = exact;
        return w;
    }

    // Best column set for the row set `in_rows` and sign `sign`.
    std::vector<int> best_columns(const Eigen::MatrixXd & a, const std::vector<char> & in_rows, double sign)
    {
        std::vector<int> cols;
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            double c = 0.0;
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                if (in_rows[i])
                    c += a(i, j);
            if (sign * c > 0.0)
                cols.push_back(static_cast<int>(j));
        }
        return cols;
    }

    struct Climb
    {
        std::vector<int> rows, cols;
        double value = 0.0;
    };

    // Alternates T <- best(S), S <- best(T) while sign * sum increases.
    Climb climb(const Eigen::MatrixXd & a, std::vector<char> in_rows, double sign)
    {
        Climb best;
        best.value = -1.0;
        const auto r = a.rows();
        for (int step = 0; step < 1000; ++step) {
            auto cols = best_columns(a, in_rows, sign);
            std::vector<int> rows;
            double value = 0.0;
            for (Eigen::Index i = 0; i < r; ++i) {
                double s = 0.0;
                for (int j : cols)
                    s += a(i, j);
                if (sign * s > 0.0) {
                    rows.push_back(static_cast<int>(i));
                    value += sign * s;
                }
            }
            if (value <= best.value + 1e-15 * std::max(1.0, best.value))
                break;
            best = {rows, cols, value};
            std::fill(in_rows.begin(), in_rows.end(), 0);
            for (int i : rows)
                in_rows[i] = 1;
        }
        if (best.value < 0.0)
            best.value = 0.0;
        return best;
    }
}

CutWitness cutnorm_exact(const Eigen::MatrixXd & input)
{
    if (! input.allFinite())
        throw PreconditionError("cut norm of a matrix with non-finite entries");
    const bool transposed = input.rows() > input.cols();
    const Eigen::MatrixXd a = transposed ? Eigen::MatrixXd(input.transpose()) : input;
    const int r = static_cast<int>(a.rows()), c = static_cast<int>(a.cols());
    if (r > cutnorm_exact_limit)
        throw BudgetExceeded("exact cut norm limited to " + std::to_string(cutnorm_exact_limit) +
            " rows in the smaller dimension, got " + std::to_string(r));

    std::vector<double> colsum(c, 0.0);
    std::uint32_t gray = 0, best_rows = 0;
    double best = 0.0, best_sign = 1.0;
    for (std::uint64_t step = 1; step < (std::uint64_t{1} << r); ++step) {
        const int flip = std::countr_zero(step);
        gray ^= 1u << flip;
        const double dir = (gray >> flip & 1) ? 1.0 : -1.0;
        double pos = 0.0, neg = 0.0;
        for (int j = 0; j < c; ++j) {
            colsum[j] += dir * a(flip, j);
            if (colsum[j] > 0.0)
                pos += colsum[j];
            else
                neg -= colsum[j];
        }
        if (pos > best) {
            best = pos;
            best_rows = gray;
            best_sign = 1.0;
        }
        if (neg > best) {
            best = neg;
            best_rows = gray;
            best_sign = -1.0;
        }
    }

    std::vector<int> rows;
    std::vector<char> in_rows(r, 0);
    for (int i = 0; i < r; ++i)
        if (best_rows >> i & 1) {
            rows.push_back(i);
            in_rows[i] = 1;
        }
    auto cols = best == 0.0 ? std::vector<int>{} : best_columns(a, in_rows, best_sign);
    if (best == 0.0)
        rows.clear();
    if (transposed)
        std::swap(rows, cols);
    return make_witness(input, std::move(rows), std::move(cols), true);
}

CutWitness cutnorm_heuristic(const Eigen::MatrixXd & a, int restarts, std::uint64_t seed, unsigned threads)
{
    if (! a.allFinite())
        throw PreconditionError("cut norm of a matrix with non-finite entries");
    restarts = std::max(restarts, 1);
    const auto r = a.rows();
    std::vector<Climb> results(2 * static_cast<std::size_t>(restarts));
    parallel_for(results.size(), threads, [&](std::size_t idx) {
        const std::size_t start = idx / 2;
        const double sign = idx % 2 ? -1.0 : 1.0;
        std::vector<char> in_rows(r, 1);
        if (start > 0) {
            SplitMix64 rng(derive_seed(seed, start));
            for (auto & b : in_rows)
                b = static_cast<char>(rng() >> 63);
        }
        results[idx] = climb(a, std::move(in_rows), sign);
    });

    // Ties go to the lowest index, keeping the result independent of threads.
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].value > results[best].value)
            best = i;
    if (results[best].value == 0.0)
        return make_witness(a, {}, {}, false);
    return make_witness(a, std::move(results[best].rows), std::move(results[best].cols), false);
}

CutWitness cutnorm(const Eigen::MatrixXd & a, int restarts, std::uint64_t seed)
{
    if (std::min(a.rows(), a.cols()) <= cutnorm_exact_limit)
        return cutnorm_exact(a);
    return cutnorm_heuristic(a, restarts, seed);
}

double rect_distance(const WeightedGraph & g1, const WeightedGraph & g2, int restarts, std::uint64_t seed)
{
    if (g1.order() != g2.order())
        throw PreconditionError("rect_distance needs graphs with the same node count");
    const double n = g1.order();
    if (n == 0)
        return 0.0;
    return cutnorm(g1.betas() - g2.betas(), restarts, seed).value / (n * n);
}

StepDifference step_difference(const StepGraphon & u, const StepGraphon & w)
{
    std::vector<double> cuts{0.0};
    double acc = 0.0;
    for (double x : u.weights())
        cuts.push_back(acc += x);
    acc = 0.0;
    for (double x : w.weights())
        cuts.push_back(acc += x);
    std::sort(cuts.begin(), cuts.end());
    cuts.back() = 1.0;

    std::vector<double> weights;
    std::vector<int> cu, cw;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        double len = std::min(cuts[i], 1.0) - cuts[i - 1];
        if (len <= 1e-15)
            continue;
        double mid = (cuts[i - 1] + std::min(cuts[i], 1.0)) / 2.0;
        weights.push_back(len);
        cu.push_back(u.class_of(mid));
        cw.push_back(w.class_of(mid));
    }
    const auto q = static_cast<Eigen::Index>(weights.size());
    Eigen::MatrixXd values(q, q);
    for (Eigen::Index i = 0; i < q; ++i)
        for (Eigen::Index j = 0; j < q; ++j)
            values(i, j) = u.value(cu[i], cu[j]) - w.value(cw[i], cw[j]);
    return {std::move(weights), std::move(values)};
}

double stepnorm(const StepDifference & u)
{
    const auto q = static_cast<Eigen::Index>(u.weights.size());
    if (q > cutnorm_exact_limit)
        throw BudgetExceeded("stepnorm limited to " + std::to_string(cutnorm_exact_limit) + " classes, got " + std::to_string(q));
    Eigen::MatrixXd scaled(q, q);
    for (Eigen::Index i = 0; i < q; ++i)
        for (Eigen::Index j = 0; j < q; ++j)
            scaled(i, j) = u.weights[i] * u.weights[j] * u.values(i, j);
    return cutnorm_exact(scaled).value;
}

double stepnorm(const StepGraphon & u, const StepGraphon & w)
{
    return stepnorm(step_difference(u, w));
}

CountingLemmaCheck counting_lemma_check(const SimpleGraph & f, const StepGraphon & u, const StepGraphon & w)
{
    return {std::abs(t_step(f, u) - t_step(f, w)), static_cast<double>(f.size()) * stepnorm(u, w)};
}

} // namespace graphlim
