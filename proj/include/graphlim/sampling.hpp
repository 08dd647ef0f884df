#pragma once

#include "graphlim/densities.hpp"
#include "graphlim/errors.hpp"
#include "graphlim/graphons.hpp"
#include "graphlim/graphs.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace graphlim {

/// One draw of a random graph on [n].
struct SampleRecord
{
    SimpleGraph graph;
    /// The uniform latents X_i, present only when requested.
    std::optional<std::vector<double>> latents;
    std::uint64_t seed = 0;
};

/// Distribution of a random graph on [n]: an exact table indexed by the
/// edge bitmask (n <= 5), a seeded sampler, or both.
class RandomGraphModel
{
public:
    using Sampler = std::function<SimpleGraph(std::uint64_t seed)>;

    /// Throws InvariantError if the table has 2^C(n,2) entries that are not
    /// nonnegative or do not sum to 1 within 1e-10.
    static RandomGraphModel from_table(int n, std::vector<double> table);
    static RandomGraphModel from_sampler(int n, Sampler sampler);

    int order() const noexcept { return n_; }
    bool has_table() const noexcept { return ! table_.empty(); }
    const std::vector<double> & table() const noexcept { return table_; }
    double probability(std::uint64_t mask) const { return table_.at(mask); }
    double probability(const SimpleGraph & g) const { return probability(g.mask()); }

    /// Uses the sampler, or inverts the table's CDF with the seeded stream.
    SimpleGraph sample(std::uint64_t seed) const;

private:
    int n_ = 0;
    std::vector<double> table_;
    Sampler sampler_;
};

/// Raised when f†(F) < -tol; the witness F certifies that f is not the
/// density function of any graphon.
class NegativeDagger : public PreconditionError
{
public:
    NegativeDagger(SimpleGraph witness, double value);

    const SimpleGraph & witness() const noexcept { return witness_; }
    double value() const noexcept { return value_; }

private:
    SimpleGraph witness_;
    double value_;
};

/// G(n,W). Latents are drawn first from the seed's stream; the coin of pair
/// {i,j} comes from its own substream, so the output is a pure function of
/// (W, n, seed).
SampleRecord sample_wrandom(const Graphon & w, int n, std::uint64_t seed, bool keep_latents = false);

/// Random graph with model H. Identical draws to sample_wrandom on
/// from_weighted_graph(h).
SampleRecord sample_model_h(const WeightedGraph & h, int n, std::uint64_t seed, bool keep_latents = false);

/// Exact law of G(n,W) for n <= 5.
RandomGraphModel exact_distribution(const StepGraphon & w, int n);

/// Table Pr(F) = f†(F) over labeled graphs on [k]. Values in [-tol, 0) are
/// clamped to 0 and the table renormalised; anything below -tol raises
/// NegativeDagger.
RandomGraphModel model_from_parameter(const GraphParameter & f, int k, double tol = 1e-9);

struct ExpectationCheck
{
    double lhs;
    double rhs;

    double deviation() const noexcept { return std::abs(lhs - rhs); }
};

/// E t0(F, G(n,W)) over the exact law against t(F,W).
ExpectationCheck check_expectation_identity(const StepGraphon & w, const SimpleGraph & f, int n);

/// E t0(F, G) for a model given by an exact table.
double expected_t0(const RandomGraphModel & m, const SimpleGraph & f);

struct ConsistencyReport
{
    double relabeling = 0.0;
    double deletion = 0.0;
    /// Max over 1 < k < n of the split-independence deviation.
    double independence = 0.0;
    /// The same deviation at k = 1, reported but not part of passed().
    double independence_k1 = 0.0;

    bool passed(double tol = 1e-10) const noexcept
    {
        return relabeling <= tol && deletion <= tol && independence <= tol;
    }
};

/// Relabeling invariance of m, deletion of node n giving `smaller`, and
/// independence of the subgraphs induced on [k] and [k+1..n].
ConsistencyReport check_model_consistency(const RandomGraphModel & m, const RandomGraphModel & smaller);

struct ConcentrationReport
{
    double empirical_tail;
    double azuma_bound;
    double variance;
    double var_bound;
};

/// Draws `trials` samples of G(n,W) with per-trial seeds and compares the
/// tail frequency of |t0(F,G) - t(F,W)| > eps with 2 exp(-eps^2 n / 2k^2)
/// and the sample variance of t(F,G) with 3 k^2 / n.
ConcentrationReport concentration_experiment(const StepGraphon & w, const SimpleGraph & f, int n, int trials,
    double eps, std::uint64_t seed, unsigned threads = 1, double budget = default_count_budget);

struct ConvergenceRow
{
    int n;
    int trial;
    double t0;
    double t;
    /// |t(F,G) - t(F,W)|.
    double deviation;
};

std::vector<ConvergenceRow> convergence_experiment(const Graphon & w, const SimpleGraph & f,
    const std::vector<int> & sizes, int trials, std::uint64_t seed, unsigned threads = 1,
    double budget = default_count_budget);

/// Median deviation per size, in the order sizes first appear.
std::vector<std::pair<int, double>> median_deviation(const std::vector<ConvergenceRow> & rows);

} // namespace graphlim
