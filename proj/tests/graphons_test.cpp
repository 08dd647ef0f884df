#include "graphlim/densities.hpp"
#include "graphlim/errors.hpp"
#include "graphlim/graphons.hpp"

#include "generators.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace graphlim;

namespace
{
    StepGraphon bipartite_limit()
    {
        Eigen::MatrixXd b(2, 2);
        b << 0, 1, 1, 0;
        return StepGraphon({0.5, 0.5}, b);
    }

    double law(const SimpleGraph & f)
    {
        const int k = f.order();
        return std::pow(2.0, 1 - k) * static_cast<double>(oracle::linear_extensions(bipartite_poset(f))) / std::tgamma(k + 1);
    }
}

TEST(StepGraphon, Validation)
{
    Eigen::MatrixXd b(2, 2);
    b << 0, 1, 1, 0;
    EXPECT_THROW(StepGraphon({0.5, 0.6}, b), ParseError);
    EXPECT_THROW(StepGraphon({1.0, 0.0}, b), ParseError);
    Eigen::MatrixXd asym = b;
    asym(0, 1) = 0.9;
    EXPECT_THROW(StepGraphon({0.5, 0.5}, asym), ParseError);
    EXPECT_THROW(StepGraphon({1.0}, b), ParseError);
}

TEST(StepGraphon, PointEvaluationFollowsIntervals)
{
    auto w = bipartite_limit();
    EXPECT_EQ(w.class_of(0.0), 0);
    EXPECT_EQ(w.class_of(0.49), 0);
    EXPECT_EQ(w.class_of(0.51), 1);
    EXPECT_EQ(w.class_of(1.0), 1);
    EXPECT_EQ(w(0.1, 0.9), 1.0);
    EXPECT_EQ(w(0.1, 0.2), 0.0);
}

TEST(FromWeightedGraph, Examples)
{
    Eigen::MatrixXd loop(1, 1);
    loop << 0.4;
    auto c = from_weighted_graph(WeightedGraph({0.5}, loop));
    EXPECT_EQ(c.classes(), 1);
    EXPECT_DOUBLE_EQ(c.weight(0), 1.0);
    EXPECT_DOUBLE_EQ(c.value(0, 0), 0.4);

    auto k2 = from_weighted_graph(WeightedGraph::unweighted(SimpleGraph::complete(2)));
    EXPECT_EQ(k2.classes(), 2);
    EXPECT_DOUBLE_EQ(k2.weight(0), 0.5);
    EXPECT_EQ(k2.value(0, 1), 1.0);
    EXPECT_EQ(k2.value(0, 0), 0.0);
}

TEST(FromWeightedGraph, Exactness)
{
    SplitMix64 rng(21);
    auto fs = gen::all_graphs(4);
    for (int trial = 0; trial < 50; ++trial) {
        auto h = gen::weighted(rng, 1 + static_cast<int>(rng.below(5)));
        auto w = from_weighted_graph(h);
        for (auto & f : fs)
            ASSERT_NEAR(oracle::density(f, h), t_step(f, w), 1e-12);
    }
}

TEST(TStep, Examples)
{
    EXPECT_DOUBLE_EQ(t_step(SimpleGraph::complete(2), StepGraphon::constant(0.3)), 0.3);
    EXPECT_EQ(t_step(SimpleGraph::complete(3), bipartite_limit()), 0.0);
    EXPECT_DOUBLE_EQ(t_step(SimpleGraph::cycle(4), bipartite_limit()), 0.125);
}

TEST(TStep, Multiplicative)
{
    SplitMix64 rng(22);
    auto fs = gen::nonisomorphic_graphs(4);
    for (int trial = 0; trial < 20; ++trial) {
        auto w = gen::step(rng, 1 + static_cast<int>(rng.below(4)));
        auto & a = fs[rng.below(fs.size())];
        auto & b = fs[rng.below(fs.size())];
        ASSERT_NEAR(t_step(disjoint_union(a, b), w), t_step(a, w) * t_step(b, w), 1e-12);
    }
}

TEST(TPinned, Examples)
{
    SplitMix64 rng(23);
    auto w = gen::step(rng, 3);
    auto f = SimpleGraph::path(4);
    EXPECT_NEAR(t_pinned(f, w, PartialMap()), t_step(f, w), 1e-15);

    for (int a = 0; a < 3; ++a) {
        double degree = 0.0;
        for (int b = 0; b < 3; ++b)
            degree += w.weight(b) * w.value(a, b);
        EXPECT_NEAR(t_pinned(SimpleGraph::complete(2), w, PartialMap({{0, a}})), degree, 1e-15);
    }

    PartialMap all({{0, 2}, {1, 0}, {2, 1}, {3, 1}});
    EXPECT_NEAR(t_pinned(f, w, all), w.value(2, 0) * w.value(0, 1) * w.value(1, 1), 1e-15);
    EXPECT_THROW(t_pinned(f, w, PartialMap({{0, 3}})), PreconditionError);
}

TEST(TPinned, AveragesBackToTStep)
{
    SplitMix64 rng(24);
    for (int trial = 0; trial < 10; ++trial) {
        auto w = gen::step(rng, 4);
        auto f = gen::graph(rng, 4);
        double total = 0.0;
        for (int a = 0; a < w.classes(); ++a)
            total += w.weight(a) * t_pinned(f, w, PartialMap({{1, a}}));
        ASSERT_NEAR(total, t_step(f, w), 1e-12);
    }
}

TEST(Product, Examples)
{
    auto pc = product_graphon(StepGraphon::constant(0.5), StepGraphon::constant(0.4));
    EXPECT_EQ(pc.classes(), 1);
    EXPECT_DOUBLE_EQ(pc.value(0, 0), 0.2);

    SplitMix64 rng(25);
    auto w = gen::step(rng, 3);
    auto same = product_graphon(w, StepGraphon::constant(1.0));
    EXPECT_EQ(same.classes(), 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            EXPECT_EQ(same.value(i, j), w.value(i, j));
}

TEST(Product, DensityIsMultiplicative)
{
    SplitMix64 rng(26);
    auto fs = gen::all_graphs(4);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = gen::step(rng, 1 + static_cast<int>(rng.below(3)));
        auto b = gen::step(rng, 1 + static_cast<int>(rng.below(3)));
        auto p = product_graphon(a, b);
        EXPECT_EQ(p.classes(), a.classes() * b.classes());
        for (auto & f : fs)
            ASSERT_NEAR(t_step(f, p), t_step(f, a) * t_step(f, b), 1e-12);
    }
}

TEST(Coarsen, Examples)
{
    Eigen::MatrixXd two(2, 2);
    two << 0, 1, 1, 0.5;
    auto one = coarsen(two, 2);
    ASSERT_EQ(one.rows(), 1);
    EXPECT_DOUBLE_EQ(one(0, 0), 0.625);

    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(6, 6, 0.3);
    auto small = coarsen(c, 3);
    EXPECT_EQ(small.rows(), 2);
    EXPECT_TRUE(small.isApproxToConstant(0.3));

    Eigen::MatrixXd d(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            d(i, j) = 0.01 * (i + 1) * (j + 1);
    EXPECT_TRUE(coarsen(coarsen(d, 2), 2).isApprox(coarsen(d, 4), 1e-15));
    EXPECT_THROW(coarsen(d, 3), PreconditionError);
}

TEST(Kernel, HalfGraphGridIsExactOnLowDegreeStars)
{
    auto w = KernelGraphon::half_graph_limit();
    EXPECT_EQ(w(0.1, 0.7), 1.0);
    EXPECT_EQ(w(0.1, 0.5), 0.0);
    EXPECT_NEAR(t_grid(SimpleGraph::complete(2), w, 64), 0.25, 1e-14);
    for (int m = 2; m <= 4; ++m)
        EXPECT_NEAR(t_grid(SimpleGraph::star(m), w, 256), oracle::half_graph_star_density(m), 1e-4);
}

TEST(Kernel, HalfGraphLinearExtensionLaw)
{
    auto w = KernelGraphon::half_graph_limit();
    auto step = w.to_step(128);
    for (auto & f : gen::nonisomorphic_graphs(5, 2)) {
        if (! f.connected())
            continue;
        if (bipartition(f).empty())
            EXPECT_EQ(t_mc(f, w, 2000, 1).estimate, 0.0) << edge_key(f);
        else
            EXPECT_NEAR(t_step(f, step), law(f), 2e-3) << edge_key(f);
    }
}

TEST(Kernel, GridOfStepfunctionConvergesAtFirstOrder)
{
    SplitMix64 rng(27);
    auto w = gen::step(rng, 3);
    Eigen::MatrixXd grid(60, 60);
    for (int a = 0; a < 60; ++a)
        for (int b = 0; b < 60; ++b)
            grid(a, b) = w((a + 0.5) / 60, (b + 0.5) / 60);
    auto kernel = KernelGraphon::grid(grid);
    auto f = SimpleGraph::cycle(4);
    EXPECT_NEAR(t_grid(f, kernel), t_step(f, w), 4.0 * 3 / 60);
    EXPECT_EQ(kernel.to_step().classes(), 60);
}

TEST(MonteCarlo, ConstantAndHalfGraph)
{
    auto c = t_mc(SimpleGraph::complete(2), KernelGraphon::constant(0.3), 1000, 1);
    EXPECT_DOUBLE_EQ(c.estimate, 0.3);
    EXPECT_EQ(c.std_error, 0.0);

    auto h = t_mc(SimpleGraph::complete(2), KernelGraphon::half_graph_limit(), 20000, 2);
    EXPECT_NEAR(h.estimate, 0.25, 4 * h.std_error);

    auto s = t_mc(SimpleGraph::star(3), KernelGraphon::half_graph_limit(), 20000, 3);
    EXPECT_NEAR(s.estimate, oracle::half_graph_star_density(3), 4 * s.std_error);
    EXPECT_THROW(t_mc(SimpleGraph::complete(2), StepGraphon::constant(0.3), 0, 1), PreconditionError);
}

TEST(MonteCarlo, IndependentOfThreadCount)
{
    SplitMix64 rng(28);
    Graphon w = gen::step(rng, 3);
    auto one = t_mc(SimpleGraph::cycle(4), w, 5000, 9, 1);
    auto four = t_mc(SimpleGraph::cycle(4), w, 5000, 9, 4);
    EXPECT_EQ(one.estimate, four.estimate);
    EXPECT_EQ(one.std_error, four.std_error);
    EXPECT_NEAR(one.estimate, t_step(SimpleGraph::cycle(4), std::get<StepGraphon>(w)), 4 * one.std_error + 1e-3);
}

TEST(DensityParameter, FlagsAndValues)
{
    SplitMix64 rng(29);
    auto w = gen::step(rng, 3);
    auto p = density_parameter(w);
    EXPECT_TRUE(p.flags().normalized);
    EXPECT_TRUE(p.flags().multiplicative);
    EXPECT_DOUBLE_EQ(p(SimpleGraph::cycle(5)), t_step(SimpleGraph::cycle(5), w));
}
