#include "graphlim/cutnorm.hpp"
#include "graphlim/densities.hpp"
#include "graphlim/errors.hpp"

#include "generators.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace graphlim;

namespace
{
    Eigen::MatrixXd random_matrix(SplitMix64 & rng, int r, int c, bool signs)
    {
        Eigen::MatrixXd a(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                a(i, j) = signs ? (rng.below(2) ? 1.0 : -1.0) : 2 * rng.uniform() - 1;
        return a;
    }

    double rectangle_sum(const Eigen::MatrixXd & a, const CutWitness & w)
    {
        double s = 0.0;
        for (int i : w.rows)
            for (int j : w.cols)
                s += a(i, j);
        return s;
    }
}

TEST(CutnormExact, Examples)
{
    auto zero = cutnorm_exact(Eigen::MatrixXd::Zero(3, 4));
    EXPECT_EQ(zero.value, 0.0);
    EXPECT_TRUE(zero.rows.empty() || zero.cols.empty() || rectangle_sum(Eigen::MatrixXd::Zero(3, 4), zero) == 0.0);

    Eigen::MatrixXd a(2, 2);
    a << 1, -1, -1, 1;
    EXPECT_EQ(cutnorm_exact(a).value, 1.0);
    EXPECT_EQ(cutnorm_exact(Eigen::MatrixXd::Ones(5, 5)).value, 25.0);
    EXPECT_TRUE(cutnorm_exact(a).exact);
}

TEST(CutnormExact, ExhaustiveSignMatricesUpToThreeByThree)
{
    for (int r = 1; r <= 3; ++r)
        for (int c = 1; c <= 3; ++c)
            for (unsigned bits = 0; bits < (1u << (r * c)); ++bits) {
                Eigen::MatrixXd a(r, c);
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < c; ++j)
                        a(i, j) = (bits >> (i * c + j) & 1) ? 1.0 : -1.0;
                auto w = cutnorm_exact(a);
                ASSERT_EQ(w.value, oracle::cutnorm(a));
                ASSERT_EQ(std::abs(rectangle_sum(a, w)), w.value);
            }
}

TEST(CutnormExact, MatchesOracleOnRealMatrices)
{
    SplitMix64 rng(51);
    for (int trial = 0; trial < 100; ++trial) {
        auto a = random_matrix(rng, 1 + static_cast<int>(rng.below(7)), 1 + static_cast<int>(rng.below(7)), false);
        auto w = cutnorm_exact(a);
        ASSERT_NEAR(w.value, oracle::cutnorm(a), 1e-12);
        ASSERT_NEAR(std::abs(rectangle_sum(a, w)), w.value, 1e-12);
        ASSERT_NEAR(rectangle_sum(a, w), w.signed_sum, 1e-12);
    }
}

TEST(CutnormExact, NormAxioms)
{
    SplitMix64 rng(52);
    for (int trial = 0; trial < 100; ++trial) {
        int r = 1 + static_cast<int>(rng.below(8)), c = 1 + static_cast<int>(rng.below(8));
        auto a = random_matrix(rng, r, c, false);
        auto b = random_matrix(rng, r, c, false);
        const double na = cutnorm_exact(a).value;
        const double scale = 4 * rng.uniform() - 2;
        ASSERT_NEAR(cutnorm_exact(scale * a).value, std::abs(scale) * na, 1e-12);
        ASSERT_LE(cutnorm_exact(a + b).value, na + cutnorm_exact(b).value + 1e-12);
        ASSERT_LE(na, a.cwiseAbs().sum() + 1e-12);
        ASSERT_NEAR(cutnorm_exact(a.transpose()).value, na, 1e-12);
        ASSERT_GT(na, 0.0);
    }
}

TEST(CutnormExact, GuardOnSmallerDimension)
{
    EXPECT_NO_THROW(cutnorm_exact(Eigen::MatrixXd::Ones(3, 200)));
    EXPECT_THROW(cutnorm_exact(Eigen::MatrixXd::Ones(23, 23)), BudgetExceeded);
}

TEST(CutnormHeuristic, NeverExceedsExactAndUsuallyMatches)
{
    SplitMix64 rng(53);
    int equal = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto a = random_matrix(rng, 12, 12, true);
        auto e = cutnorm_exact(a);
        auto h = cutnorm_heuristic(a, 32, trial);
        ASSERT_LE(h.value, e.value + 1e-12);
        ASSERT_FALSE(h.exact);
        ASSERT_NEAR(std::abs(rectangle_sum(a, h)), h.value, 1e-12);
        equal += std::abs(h.value - e.value) <= 1e-12;
    }
    EXPECT_GE(equal, 95);
}

TEST(CutnormHeuristic, ZeroAndRankOne)
{
    EXPECT_EQ(cutnorm_heuristic(Eigen::MatrixXd::Zero(4, 4)).value, 0.0);
    Eigen::VectorXd u(4), v(3);
    u << 1, 2, 0.5, 3;
    v << 0.25, 1, 2;
    auto h = cutnorm_heuristic(u * v.transpose(), 1);
    EXPECT_NEAR(h.value, u.sum() * v.sum(), 1e-12);
}

TEST(CutnormHeuristic, DeterministicAcrossThreads)
{
    SplitMix64 rng(54);
    auto a = random_matrix(rng, 40, 40, false);
    auto one = cutnorm_heuristic(a, 16, 3, 1);
    auto four = cutnorm_heuristic(a, 16, 3, 4);
    EXPECT_EQ(one.value, four.value);
    EXPECT_EQ(one.rows, four.rows);
    EXPECT_EQ(one.cols, four.cols);
}

TEST(RectDistance, Examples)
{
    SplitMix64 rng(55);
    auto g = WeightedGraph::unweighted(gen::graph(rng, 10));
    EXPECT_EQ(rect_distance(g, g), 0.0);

    for (int n : {3, 6, 9}) {
        auto kn = WeightedGraph::unweighted(SimpleGraph::complete(n));
        auto en = WeightedGraph::unweighted(SimpleGraph(n));
        EXPECT_NEAR(rect_distance(kn, en), static_cast<double>(n * (n - 1)) / (n * n), 1e-15);
    }

    auto a = WeightedGraph::unweighted(gen::graph(rng, 16));
    auto b = WeightedGraph::unweighted(gen::graph(rng, 16));
    const double d = rect_distance(a, b);
    EXPECT_GT(d, 0.0);
    EXPECT_LT(d, 1.0);
    EXPECT_EQ(d, rect_distance(b, a));
    EXPECT_THROW(rect_distance(a, g), PreconditionError);
}

TEST(RectDistance, LeftDistanceBound)
{
    SplitMix64 rng(56);
    auto fs = gen::nonisomorphic_graphs(4, 2);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + static_cast<int>(rng.below(15));
        auto a = WeightedGraph::unweighted(gen::graph(rng, n, rng.uniform()));
        auto b = WeightedGraph::unweighted(gen::graph(rng, n, rng.uniform()));
        const double d = rect_distance(a, b);
        for (auto & f : fs)
            ASSERT_LE(std::abs(t(f, a) - t(f, b)), f.size() * d + 1e-12);
    }
}

TEST(Stepnorm, Examples)
{
    SplitMix64 rng(57);
    auto w = gen::step(rng, 3);
    EXPECT_EQ(stepnorm(w, w), 0.0);
    EXPECT_NEAR(stepnorm(StepGraphon::constant(0.7), StepGraphon::constant(0.2)), 0.5, 1e-15);

    auto g1 = gen::graph(rng, 8), g2 = gen::graph(rng, 8);
    auto w1 = from_weighted_graph(WeightedGraph::unweighted(g1));
    auto w2 = from_weighted_graph(WeightedGraph::unweighted(g2));
    EXPECT_NEAR(stepnorm(w1, w2), rect_distance(WeightedGraph::unweighted(g1), WeightedGraph::unweighted(g2)), 1e-15);
}

TEST(Stepnorm, CommonRefinementMergesBreakpoints)
{
    Eigen::MatrixXd b2(2, 2);
    b2 << 1, 0, 0, 1;
    StepGraphon u({0.3, 0.7}, b2);
    StepGraphon w({0.6, 0.4}, b2);
    auto d = step_difference(u, w);
    ASSERT_EQ(d.weights.size(), 3u);
    EXPECT_NEAR(d.weights[0], 0.3, 1e-15);
    EXPECT_NEAR(d.weights[1], 0.3, 1e-15);
    EXPECT_NEAR(d.weights[2], 0.4, 1e-15);
    for (double x : {0.1, 0.4, 0.8})
        for (double y : {0.1, 0.4, 0.8}) {
            int i = x < 0.3 ? 0 : x < 0.6 ? 1 : 2, j = y < 0.3 ? 0 : y < 0.6 ? 1 : 2;
            EXPECT_DOUBLE_EQ(d.values(i, j), u(x, y) - w(x, y));
        }
}

TEST(Stepnorm, FractionalSetsNeverBeatClassUnions)
{
    SplitMix64 rng(58);
    for (int trial = 0; trial < 30; ++trial) {
        auto d = step_difference(gen::step(rng, 3), gen::step(rng, 2));
        const double norm = stepnorm(d);
        const int q = static_cast<int>(d.weights.size());
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> s(q), tt(q);
            for (int i = 0; i < q; ++i) {
                s[i] = rng.uniform() * d.weights[i];
                tt[i] = rng.uniform() * d.weights[i];
            }
            double v = 0.0;
            for (int i = 0; i < q; ++i)
                for (int j = 0; j < q; ++j)
                    v += s[i] * tt[j] * d.values(i, j);
            ASSERT_LE(std::abs(v), norm + 1e-12);
        }
    }
}

TEST(CountingLemma, Holds)
{
    EXPECT_EQ(counting_lemma_check(SimpleGraph::complete(3), StepGraphon::constant(0.4), StepGraphon::constant(0.4)).lhs, 0.0);
    auto tight = counting_lemma_check(SimpleGraph::complete(2), StepGraphon::constant(0.7), StepGraphon::constant(0.2));
    EXPECT_NEAR(tight.lhs, tight.rhs, 1e-15);
    EXPECT_TRUE(tight.holds());

    SplitMix64 rng(59);
    const SimpleGraph fs[] = {SimpleGraph::complete(3), SimpleGraph::cycle(4), SimpleGraph::path(4)};
    for (int trial = 0; trial < 100; ++trial) {
        auto u = gen::step(rng, 3), w = gen::step(rng, 3);
        for (auto & f : fs)
            ASSERT_TRUE(counting_lemma_check(f, u, w).holds()) << trial;
    }
}
