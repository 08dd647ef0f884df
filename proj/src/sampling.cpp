#include "graphlim/sampling.hpp"

#include "graphlim/parallel.hpp"
#include "graphlim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace graphlim {

namespace
{
    constexpr std::uint64_t latent_stream = 0;
    constexpr std::uint64_t coin_stream = 1;

    std::uint64_t table_size(int n)
    {
        return std::uint64_t{1} << pair_count(n);
    }

    void require_small(int n, const char * what)
    {
        if (n < 1 || n > 5)
            throw BudgetExceeded(std::string(what) + " supports 1 <= n <= 5, got " + std::to_string(n));
    }

    // bit_image[b] = bit of pair b after renaming vertices by perm.
    std::vector<int> pair_permutation(int n, const std::vector<int> & perm)
    {
        std::vector<int> image(pair_count(n));
        for (int v = 1; v < n; ++v)
            for (int u = 0; u < v; ++u)
                image[pair_index(u, v)] = pair_index(perm[u], perm[v]);
        return image;
    }

    std::uint64_t permute_mask(const std::vector<int> & bit_image, std::uint64_t mask)
    {
        std::uint64_t out = 0;
        for (std::size_t b = 0; b < bit_image.size(); ++b)
            if (mask >> b & 1)
                out |= std::uint64_t{1} << bit_image[b];
        return out;
    }

    double density_of(const Graphon & w, const SimpleGraph & f)
    {
        if (auto step = std::get_if<StepGraphon>(&w))
            return t_step(f, *step);
        return t_grid(f, std::get<KernelGraphon>(w));
    }
}

RandomGraphModel RandomGraphModel::from_table(int n, std::vector<double> table)
{
    if (n < 0 || n > 6)
        throw BudgetExceeded("exact tables support at most 6 nodes");
    if (table.size() != table_size(n))
        throw InvariantError("table for n=" + std::to_string(n) + " needs " + std::to_string(table_size(n)) + " entries");
    for (std::size_t i = 0; i < table.size(); ++i)
        if (! (table[i] >= 0.0))
            throw InvariantError("negative probability at graph mask " + std::to_string(i));
    double total = compensated_sum(table);
    if (std::abs(total - 1.0) > 1e-10)
        throw InvariantError("probabilities sum to " + std::to_string(total));
    RandomGraphModel m;
    m.n_ = n;
    m.table_ = std::move(table);
    return m;
}

RandomGraphModel RandomGraphModel::from_sampler(int n, Sampler sampler)
{
    RandomGraphModel m;
    m.n_ = n;
    m.sampler_ = std::move(sampler);
    return m;
}

SimpleGraph RandomGraphModel::sample(std::uint64_t seed) const
{
    if (sampler_)
        return sampler_(seed);
    SplitMix64 rng(seed);
    double u = rng.uniform(), acc = 0.0;
    for (std::uint64_t mask = 0; mask < table_.size(); ++mask) {
        acc += table_[mask];
        if (u < acc)
            return SimpleGraph::from_mask(n_, mask);
    }
    // Rounding left u above the last partial sum; take the last positive entry.
    for (std::uint64_t mask = table_.size(); mask-- > 0;)
        if (table_[mask] > 0.0)
            return SimpleGraph::from_mask(n_, mask);
    throw InvariantError("empty probability table");
}

NegativeDagger::NegativeDagger(SimpleGraph witness, double value) :
    PreconditionError("f-dagger is negative (" + std::to_string(value) + ") on graph " + edge_key(witness) +
        "; the parameter is not a graphon density"),
    witness_(std::move(witness)),
    value_(value)
{
}

SampleRecord sample_wrandom(const Graphon & w, int n, std::uint64_t seed, bool keep_latents)
{
    if (n < 1)
        throw PreconditionError("sample size must be positive");
    std::vector<double> x(n);
    SplitMix64 latents(derive_seed(seed, latent_stream));
    for (double & xi : x)
        xi = latents.uniform();

    // Class lookups are hoisted out of the pair loop for stepfunctions.
    const auto * step = std::get_if<StepGraphon>(&w);
    std::vector<int> cls;
    if (step) {
        cls.resize(n);
        for (int i = 0; i < n; ++i)
            cls[i] = step->class_of(x[i]);
    }

    const std::uint64_t coins = derive_seed(seed, coin_stream);
    std::vector<Edge> edges;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            double p = step ? step->value(cls[i], cls[j]) : evaluate(w, x[i], x[j]);
            if (p <= 0.0)
                continue;
            SplitMix64 coin(derive_seed(coins, static_cast<std::uint64_t>(pair_index(i, j))));
            if (coin.uniform() < p)
                edges.push_back({i, j});
        }

    SampleRecord record{SimpleGraph(n, edges), std::nullopt, seed};
    if (keep_latents)
        record.latents = std::move(x);
    return record;
}

SampleRecord sample_model_h(const WeightedGraph & h, int n, std::uint64_t seed, bool keep_latents)
{
    return sample_wrandom(from_weighted_graph(h), n, seed, keep_latents);
}

RandomGraphModel exact_distribution(const StepGraphon & w, int n)
{
    require_small(n, "exact_distribution");
    const int q = w.classes();
    const int pairs = pair_count(n);
    const double work = std::pow(static_cast<double>(q), n) * static_cast<double>(table_size(n));
    if (work > 1e8)
        throw BudgetExceeded("exact_distribution needs about " + std::to_string(work) + " steps");

    std::vector<double> table(table_size(n), 0.0);
    std::vector<int> assignment(n, 0);
    std::vector<double> edge_prob(pairs);
    std::vector<double> joint;
    for (;;) {
        double weight = 1.0;
        for (int c : assignment)
            weight *= w.weight(c);
        for (int v = 1; v < n; ++v)
            for (int u = 0; u < v; ++u)
                edge_prob[pair_index(u, v)] = w.value(assignment[u], assignment[v]);

        // Law of the mask given the assignment, built one pair at a time.
        joint.assign(1, weight);
        for (int b = 0; b < pairs; ++b) {
            const std::size_t half = joint.size();
            joint.resize(2 * half);
            for (std::size_t m = 0; m < half; ++m) {
                joint[half + m] = joint[m] * edge_prob[b];
                joint[m] *= 1.0 - edge_prob[b];
            }
        }
        for (std::size_t m = 0; m < joint.size(); ++m)
            table[m] += joint[m];

        int pos = 0;
        while (pos < n && ++assignment[pos] == q)
            assignment[pos++] = 0;
        if (pos == n)
            break;
    }
    return RandomGraphModel::from_table(n, std::move(table));
}

RandomGraphModel model_from_parameter(const GraphParameter & f, int k, double tol)
{
    require_small(k, "model_from_parameter");
    if (! f.flags().normalized || ! f.flags().multiplicative)
        throw PreconditionError("model_from_parameter needs a parameter declared normalized and multiplicative");

    std::vector<double> table(table_size(k));
    for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
        SimpleGraph F = SimpleGraph::from_mask(k, mask);
        double value = dagger(f, F);
        if (value < -tol)
            throw NegativeDagger(std::move(F), value);
        table[mask] = std::max(value, 0.0);
    }
    double total = compensated_sum(table);
    for (double & p : table)
        p /= total;
    return RandomGraphModel::from_table(k, std::move(table));
}

double expected_t0(const RandomGraphModel & m, const SimpleGraph & f)
{
    if (! m.has_table())
        throw PreconditionError("expected_t0 needs an exact table");
    std::vector<double> terms;
    terms.reserve(m.table().size());
    for (std::uint64_t mask = 0; mask < m.table().size(); ++mask) {
        double p = m.table()[mask];
        terms.push_back(p == 0.0 ? 0.0 : p * t0(f, WeightedGraph::unweighted(SimpleGraph::from_mask(m.order(), mask))));
    }
    return compensated_sum(terms);
}

ExpectationCheck check_expectation_identity(const StepGraphon & w, const SimpleGraph & f, int n)
{
    if (f.order() > n)
        throw PreconditionError("F has more nodes than the random graph");
    return {expected_t0(exact_distribution(w, n), f), t_step(f, w)};
}

ConsistencyReport check_model_consistency(const RandomGraphModel & m, const RandomGraphModel & smaller)
{
    if (! m.has_table() || ! smaller.has_table())
        throw PreconditionError("consistency checks need exact tables");
    const int n = m.order();
    if (smaller.order() != n - 1)
        throw PreconditionError("second model must live on n-1 nodes");
    const auto & table = m.table();
    ConsistencyReport report;

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        auto bit_image = pair_permutation(n, perm);
        for (std::uint64_t mask = 0; mask < table.size(); ++mask)
            report.relabeling = std::max(report.relabeling, std::abs(table[mask] - table[permute_mask(bit_image, mask)]));
    } while (std::next_permutation(perm.begin(), perm.end()));

    // Colex pair order: the graph on [n-1] is the low part of the mask.
    std::vector<double> marginal(smaller.table().size(), 0.0);
    const std::uint64_t low = marginal.size() - 1;
    for (std::uint64_t mask = 0; mask < table.size(); ++mask)
        marginal[mask & low] += table[mask];
    for (std::size_t i = 0; i < marginal.size(); ++i)
        report.deletion = std::max(report.deletion, std::abs(marginal[i] - smaller.table()[i]));

    for (int k = 1; k < n; ++k) {
        // Pair bits inside [k] and inside [k+1..n].
        std::vector<int> left_bits, right_bits;
        for (int v = 1; v < n; ++v)
            for (int u = 0; u < v; ++u) {
                if (v < k)
                    left_bits.push_back(pair_index(u, v));
                else if (u >= k)
                    right_bits.push_back(pair_index(u, v));
            }
        auto project = [](std::uint64_t mask, const std::vector<int> & bits) {
            std::uint64_t out = 0;
            for (std::size_t i = 0; i < bits.size(); ++i)
                if (mask >> bits[i] & 1)
                    out |= std::uint64_t{1} << i;
            return out;
        };
        const std::size_t L = std::size_t{1} << left_bits.size(), R = std::size_t{1} << right_bits.size();
        std::vector<double> joint(L * R, 0.0), left(L, 0.0), right(R, 0.0);
        for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
            auto a = project(mask, left_bits), b = project(mask, right_bits);
            joint[a * R + b] += table[mask];
            left[a] += table[mask];
            right[b] += table[mask];
        }
        double dev = 0.0;
        for (std::size_t a = 0; a < L; ++a)
            for (std::size_t b = 0; b < R; ++b)
                dev = std::max(dev, std::abs(joint[a * R + b] - left[a] * right[b]));
        if (k == 1)
            report.independence_k1 = dev;
        else
            report.independence = std::max(report.independence, dev);
    }
    return report;
}

ConcentrationReport concentration_experiment(const StepGraphon & w, const SimpleGraph & f, int n, int trials,
    double eps, std::uint64_t seed, unsigned threads, double budget)
{
    if (trials < 1)
        throw PreconditionError("concentration_experiment needs at least one trial");
    const double limit = t_step(f, w);
    std::vector<double> t0_values(trials), t_values(trials);
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
        auto g = WeightedGraph::unweighted(sample_wrandom(w, n, derive_seed(seed, i)).graph);
        t0_values[i] = t0(f, g, budget);
        t_values[i] = t(f, g, budget);
    });

    const double k = f.order();
    const auto tail = std::count_if(t0_values.begin(), t0_values.end(), [&](double v) { return std::abs(v - limit) > eps; });
    const double mean = compensated_sum(t_values) / trials;
    std::vector<double> squares(trials);
    std::transform(t_values.begin(), t_values.end(), squares.begin(), [mean](double v) { return (v - mean) * (v - mean); });

    ConcentrationReport report;
    report.empirical_tail = static_cast<double>(tail) / trials;
    report.azuma_bound = 2.0 * std::exp(-eps * eps * n / (2.0 * k * k));
    report.variance = trials > 1 ? compensated_sum(squares) / (trials - 1) : 0.0;
    report.var_bound = 3.0 * k * k / n;
    return report;
}

std::vector<ConvergenceRow> convergence_experiment(const Graphon & w, const SimpleGraph & f,
    const std::vector<int> & sizes, int trials, std::uint64_t seed, unsigned threads, double budget)
{
    const double limit = density_of(w, f);
    std::vector<ConvergenceRow> rows(sizes.size() * static_cast<std::size_t>(trials));
    parallel_for(rows.size(), threads, [&](std::size_t idx) {
        const int n = sizes[idx / trials];
        const int trial = static_cast<int>(idx % trials);
        auto g = WeightedGraph::unweighted(sample_wrandom(w, n, derive_seed(derive_seed(seed, n), trial)).graph);
        double t0v = t0(f, g, budget), tv = t(f, g, budget);
        rows[idx] = {n, trial, t0v, tv, std::abs(tv - limit)};
    });
    return rows;
}

std::vector<std::pair<int, double>> median_deviation(const std::vector<ConvergenceRow> & rows)
{
    std::vector<int> order;
    std::map<int, std::vector<double>> by_size;
    for (const auto & r : rows) {
        if (! by_size.contains(r.n))
            order.push_back(r.n);
        by_size[r.n].push_back(r.deviation);
    }
    std::vector<std::pair<int, double>> out;
    for (int n : order) {
        auto & d = by_size[n];
        std::sort(d.begin(), d.end());
        const std::size_t m = d.size();
        out.emplace_back(n, m % 2 ? d[m / 2] : (d[m / 2 - 1] + d[m / 2]) / 2.0);
    }
    return out;
}

} // namespace graphlim
