#include "graphlim/errors.hpp"
#include "graphlim/sampling.hpp"

#include "generators.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace graphlim;

namespace
{
    StepGraphon bipartite_limit()
    {
        Eigen::MatrixXd b(2, 2);
        b << 0, 1, 1, 0;
        return StepGraphon({0.5, 0.5}, b);
    }

    // Pr(G) by summing over every class assignment and every pair.
    double law_by_assignments(const StepGraphon & w, const SimpleGraph & g)
    {
        const int n = g.order(), q = w.classes();
        std::vector<int> c(n, 0);
        double total = 0.0;
        for (;;) {
            double p = 1.0;
            for (int v = 0; v < n; ++v)
                p *= w.weight(c[v]);
            for (int j = 1; j < n; ++j)
                for (int i = 0; i < j; ++i) {
                    double b = w.value(c[i], c[j]);
                    p *= g.adjacent(i, j) ? b : 1.0 - b;
                }
            total += p;
            int pos = 0;
            while (pos < n && ++c[pos] == q)
                c[pos++] = 0;
            if (pos == n)
                break;
        }
        return total;
    }
}

TEST(SampleWRandom, ConstantKernels)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EXPECT_EQ(sample_wrandom(StepGraphon::constant(0.0), 12, seed).graph.size(), 0u);
        EXPECT_EQ(sample_wrandom(KernelGraphon::constant(1.0), 12, seed).graph.size(), 66u);
    }
}

TEST(SampleWRandom, EdgeCountOfHalfDensity)
{
    const double mean = 4950 / 2.0, sigma = std::sqrt(4950 / 4.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto g = sample_wrandom(StepGraphon::constant(0.5), 100, seed).graph;
        EXPECT_NEAR(static_cast<double>(g.size()), mean, 4 * sigma);
    }
}

TEST(SampleWRandom, DeterministicAndLatentsOptIn)
{
    SplitMix64 rng(31);
    Graphon w = gen::step(rng, 3);
    auto a = sample_wrandom(w, 30, 77, true);
    auto b = sample_wrandom(w, 30, 77, false);
    EXPECT_EQ(a.graph, b.graph);
    EXPECT_EQ(a.seed, 77u);
    ASSERT_TRUE(a.latents.has_value());
    EXPECT_EQ(a.latents->size(), 30u);
    EXPECT_FALSE(b.latents.has_value());
    for (int j = 1; j < 30; ++j)
        for (int i = 0; i < j; ++i)
            if (evaluate(w, (*a.latents)[i], (*a.latents)[j]) == 0.0)
                EXPECT_FALSE(a.graph.adjacent(i, j));
    EXPECT_NE(sample_wrandom(w, 30, 78).graph, a.graph);
}

TEST(SampleWRandom, SmallerGraphIsAPrefix)
{
    SplitMix64 rng(32);
    Graphon w = gen::step(rng, 4);
    auto big = sample_wrandom(w, 20, 5).graph;
    auto small = sample_wrandom(w, 12, 5).graph;
    std::vector<int> prefix(12);
    std::iota(prefix.begin(), prefix.end(), 0);
    EXPECT_EQ(big.induced(prefix), small);
}

TEST(SampleModelH, MatchesWRandomAndBipartiteModel)
{
    SplitMix64 rng(33);
    auto h = gen::weighted(rng, 4);
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        EXPECT_EQ(sample_model_h(h, 15, seed).graph, sample_wrandom(from_weighted_graph(h), 15, seed).graph);

    auto bip = bipartite_limit().as_weighted_graph();
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto g = sample_model_h(bip, 10, seed).graph;
        EXPECT_TRUE(g.size() == 0 || ! bipartition(g).empty() || ! g.connected());
        for (int a = 0; a < 10; ++a)
            for (int b = a + 1; b < 10; ++b)
                for (int c = b + 1; c < 10; ++c)
                    ASSERT_FALSE(g.adjacent(a, b) && g.adjacent(b, c) && g.adjacent(a, c));
    }
}

TEST(SampleModelH, EmpiricalLawMatchesExactDistribution)
{
    SplitMix64 rng(34);
    auto h = gen::weighted(rng, 3);
    auto exact = exact_distribution(from_weighted_graph(h), 3);
    const int draws = 20000;
    std::vector<int> counts(8, 0);
    for (int s = 0; s < draws; ++s)
        ++counts[sample_model_h(h, 3, 1000 + s).graph.mask()];
    double chi2 = 0.0;
    for (int m = 0; m < 8; ++m) {
        const double p = exact.probability(m);
        const double sigma = std::sqrt(draws * p * (1 - p));
        EXPECT_LE(std::abs(counts[m] - draws * p), 5 * sigma + 1e-9) << m;
        if (p > 0)
            chi2 += (counts[m] - draws * p) * (counts[m] - draws * p) / (draws * p);
    }
    // 7 degrees of freedom; 0.999 quantile is 24.3.
    EXPECT_LT(chi2, 24.3);
}

TEST(ExactDistribution, Examples)
{
    auto two = exact_distribution(StepGraphon::constant(0.3), 2);
    EXPECT_NEAR(two.probability(1), 0.3, 1e-15);
    EXPECT_NEAR(two.probability(0), 0.7, 1e-15);
    auto three = exact_distribution(StepGraphon::constant(0.5), 3);
    for (std::uint64_t m = 0; m < 8; ++m)
        EXPECT_NEAR(three.probability(m), 0.125, 1e-15);
    EXPECT_THROW(exact_distribution(StepGraphon::constant(0.5), 6), BudgetExceeded);
}

TEST(ExactDistribution, MatchesAssignmentSumAndNormalises)
{
    SplitMix64 rng(35);
    for (int trial = 0; trial < 10; ++trial) {
        auto w = gen::step(rng, 1 + static_cast<int>(rng.below(3)));
        for (int n = 1; n <= 4; ++n) {
            auto m = exact_distribution(w, n);
            double total = 0.0;
            for (std::uint64_t mask = 0; mask < m.table().size(); ++mask) {
                ASSERT_NEAR(m.probability(mask), law_by_assignments(w, SimpleGraph::from_mask(n, mask)), 1e-14);
                total += m.probability(mask);
            }
            ASSERT_NEAR(total, 1.0, 1e-12);
        }
    }
}

TEST(RandomGraphModel, TableValidation)
{
    EXPECT_THROW(RandomGraphModel::from_table(2, {0.5, 0.6}), InvariantError);
    EXPECT_THROW(RandomGraphModel::from_table(2, {1.1, -0.1}), InvariantError);
    EXPECT_THROW(RandomGraphModel::from_table(2, {1.0}), InvariantError);
    auto m = RandomGraphModel::from_table(2, {0.0, 1.0});
    EXPECT_EQ(m.sample(3), SimpleGraph::complete(2));
}

TEST(ModelFromParameter, Examples)
{
    auto uniform = model_from_parameter(density_parameter(StepGraphon::constant(0.5)), 3);
    for (std::uint64_t m = 0; m < 8; ++m)
        EXPECT_NEAR(uniform.probability(m), 0.125, 1e-15);

    SplitMix64 rng(36);
    for (int trial = 0; trial < 5; ++trial) {
        auto h = gen::weighted(rng, 3);
        auto w = from_weighted_graph(h);
        for (int k = 1; k <= 4; ++k) {
            auto a = model_from_parameter(GraphParameter::hom_density(h), k);
            auto b = exact_distribution(w, k);
            for (std::uint64_t m = 0; m < a.table().size(); ++m)
                ASSERT_NEAR(a.probability(m), b.probability(m), 1e-10);
        }
    }
}

TEST(ModelFromParameter, MatchingsHaveNegativeDagger)
{
    try {
        (void) model_from_parameter(GraphParameter::matching_count(), 2);
        FAIL() << "expected NegativeDagger";
    } catch (const NegativeDagger & e) {
        EXPECT_EQ(e.witness(), SimpleGraph(2));
        EXPECT_DOUBLE_EQ(e.value(), -1.0);
    }
}

TEST(ModelFromParameter, RequiresDeclaredFlags)
{
    GraphParameter bare("bare", [](const SimpleGraph &) { return 1.0; }, {});
    EXPECT_THROW(model_from_parameter(bare, 2), PreconditionError);
}

TEST(Expectation, IdentityHoldsExactly)
{
    EXPECT_NEAR(check_expectation_identity(StepGraphon::constant(0.3), SimpleGraph::complete(2), 3).deviation(), 0.0, 1e-15);
    EXPECT_LE(check_expectation_identity(bipartite_limit(), SimpleGraph::path(3), 3).deviation(), 1e-10);

    SplitMix64 rng(37);
    auto fs = gen::all_graphs(4);
    for (int trial = 0; trial < 20; ++trial) {
        auto w = gen::step(rng, 2);
        for (int n = 2; n <= 4; ++n)
            for (auto & f : fs)
                if (f.order() <= n) {
                    auto c = check_expectation_identity(w, f, n);
                    ASSERT_LE(c.deviation(), 1e-10);
                    ASSERT_NEAR(c.rhs, t_step(f, w), 1e-15);
                }
    }
}

TEST(Expectation, ExpectedInjectiveDensityOfParameterModel)
{
    SplitMix64 rng(38);
    auto fs = gen::all_graphs(4);
    for (int trial = 0; trial < 5; ++trial) {
        auto w = gen::step(rng, 3);
        auto f = density_parameter(w);
        for (int n = 1; n <= 4; ++n) {
            auto m = model_from_parameter(f, n);
            for (auto & F : fs)
                if (F.order() <= n)
                    ASSERT_NEAR(expected_t0(m, F), f(F), 1e-10);
        }
    }
}

TEST(Consistency, ExactTablesPass)
{
    SplitMix64 rng(39);
    for (int trial = 0; trial < 5; ++trial) {
        auto w = gen::step(rng, 1 + static_cast<int>(rng.below(3)));
        for (int n = 2; n <= 4; ++n) {
            auto r = check_model_consistency(exact_distribution(w, n), exact_distribution(w, n - 1));
            EXPECT_TRUE(r.passed()) << r.relabeling << " " << r.deletion << " " << r.independence;
            EXPECT_LE(r.independence_k1, 1e-10);
        }
    }
    auto r = check_model_consistency(exact_distribution(StepGraphon::constant(0.3), 4),
        exact_distribution(StepGraphon::constant(0.3), 3));
    EXPECT_LE(r.independence, 1e-15);
}

TEST(Consistency, CorruptedTableFailsDeletion)
{
    auto w = StepGraphon::constant(0.5);
    auto table = exact_distribution(w, 3).table();
    // Move mass from the edgeless graph to the graph whose only edge is {0,1}.
    table[0] -= 0.05;
    table[1] += 0.05;
    auto bad = RandomGraphModel::from_table(3, table);
    auto r = check_model_consistency(bad, exact_distribution(w, 2));
    EXPECT_GT(r.deletion, 1e-3);
    EXPECT_FALSE(r.passed());
}

TEST(Concentration, VarianceAndTail)
{
    auto r = concentration_experiment(StepGraphon::constant(0.5), SimpleGraph::complete(2), 200, 200, 0.1, 41);
    EXPECT_LE(r.empirical_tail, r.azuma_bound);
    EXPECT_NEAR(r.var_bound, 0.06, 1e-15);
    EXPECT_LE(r.variance, r.var_bound);

    auto all = concentration_experiment(StepGraphon::constant(0.5), SimpleGraph::complete(2), 40, 20, 1.0, 42);
    EXPECT_EQ(all.empirical_tail, 0.0);

    auto tri = concentration_experiment(StepGraphon::constant(0.5), SimpleGraph::complete(3), 300, 10, 0.1, 43);
    EXPECT_LE(tri.variance, 3.0 * 9 / 300);
}

TEST(Convergence, MedianDeviationDecays)
{
    SplitMix64 rng(44);
    Graphon w = gen::step(rng, 3);
    const std::vector<int> sizes{50, 100, 200, 400};
    auto rows = convergence_experiment(w, SimpleGraph::path(3), sizes, 9, 45, 1, 1e9);
    ASSERT_EQ(rows.size(), 36u);
    auto med = median_deviation(rows);
    ASSERT_EQ(med.size(), 4u);
    for (std::size_t i = 0; i < med.size(); ++i) {
        EXPECT_EQ(med[i].first, sizes[i]);
        if (i > 0)
            EXPECT_LE(med[i].second, med[i - 1].second);
    }
    EXPECT_LE(med.back().second, 3.0 * 9 / std::sqrt(400.0));
}

TEST(Convergence, IndependentOfThreadCount)
{
    Graphon w = KernelGraphon::half_graph_limit();
    auto a = convergence_experiment(w, SimpleGraph::complete(2), {20, 40}, 4, 7, 1);
    auto b = convergence_experiment(w, SimpleGraph::complete(2), {20, 40}, 4, 7, 3);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].t, b[i].t);
        EXPECT_EQ(a[i].t0, b[i].t0);
    }
}
