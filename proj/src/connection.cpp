#include "graphlim/connection.hpp"

#include "graphlim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <set>

namespace graphlim {

namespace
{
    void require_label_count(int k)
    {
        if (k < 0 || k > 4)
            throw BudgetExceeded("M0 supports 0 <= k <= 4, got " + std::to_string(k));
    }
}

ConnectionMatrix m0_matrix(const GraphParameter & f, int k)
{
    require_label_count(k);
    const std::uint64_t size = std::uint64_t{1} << pair_count(k);
    ConnectionMatrix m;
    m.k = k;
    m.index.reserve(size);
    for (std::uint64_t mask = 0; mask < size; ++mask)
        m.index.push_back(KLabeledGraph::fully_labeled(SimpleGraph::from_mask(k, mask)));
    m.entries.resize(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
    for (std::uint64_t a = 0; a < size; ++a)
        for (std::uint64_t b = a; b < size; ++b) {
            double value = f(SimpleGraph::from_mask(k, a | b));
            m.entries(a, b) = m.entries(b, a) = value;
        }
    return m;
}

ConnectionMatrix truncated_m(const GraphParameter & f, int k, int max_nodes)
{
    if (k < 0 || max_nodes < k)
        throw PreconditionError("truncated M needs 0 <= k <= max_nodes");
    if (max_nodes > k + 3 || max_nodes > 7)
        throw BudgetExceeded("truncated M allows at most 3 unlabeled nodes and 7 nodes in total");

    struct Entry
    {
        int n;
        std::uint64_t mask;
    };
    std::vector<Entry> found;
    std::set<std::pair<int, std::uint64_t>> seen;
    for (int n = k; n <= max_nodes; ++n) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pair_count(n)); ++mask) {
            SimpleGraph g = SimpleGraph::from_mask(n, mask);
            bool isolated_unlabeled = false;
            for (int v = k; v < n && ! isolated_unlabeled; ++v)
                isolated_unlabeled = g.degree(v) == 0;
            if (isolated_unlabeled)
                continue;
            std::vector<int> labels(k);
            std::iota(labels.begin(), labels.end(), 0);
            auto canon = canonical_form(KLabeledGraph(g, labels)).base().mask();
            if (seen.emplace(n, canon).second)
                found.push_back({n, canon});
        }
    }
    std::sort(found.begin(), found.end(), [](const Entry & a, const Entry & b) {
        return std::pair{a.n, a.mask} < std::pair{b.n, b.mask};
    });

    ConnectionMatrix m;
    m.k = k;
    std::vector<int> labels(k);
    std::iota(labels.begin(), labels.end(), 0);
    for (auto [n, mask] : found)
        m.index.emplace_back(SimpleGraph::from_mask(n, mask), labels);
    const auto size = static_cast<Eigen::Index>(m.index.size());
    m.entries.resize(size, size);
    for (Eigen::Index a = 0; a < size; ++a)
        for (Eigen::Index b = a; b < size; ++b) {
            double value = f(glue(m.index[a], m.index[b]));
            m.entries(a, b) = m.entries(b, a) = value;
        }
    return m;
}

ZetaFactorization lw_factorization(const GraphParameter & f, int k, double tol)
{
    require_label_count(k);
    const auto size = static_cast<Eigen::Index>(std::uint64_t{1} << pair_count(k));
    ZetaFactorization z;
    z.zeta = Eigen::MatrixXd::Zero(size, size);
    z.dagger.resize(size);
    for (Eigen::Index a = 0; a < size; ++a) {
        for (Eigen::Index b = 0; b < size; ++b)
            if ((a & b) == a)
                z.zeta(a, b) = 1.0;
        z.dagger(a) = dagger(f, SimpleGraph::from_mask(k, static_cast<std::uint64_t>(a)));
    }
    const Eigen::MatrixXd m0 = m0_matrix(f, k).entries;
    z.max_reconstruction_error = (z.reconstruct() - m0).cwiseAbs().maxCoeff();
    if (z.max_reconstruction_error > tol)
        throw InvariantError("Lindstrom-Wilf reconstruction off by " + std::to_string(z.max_reconstruction_error));
    return z;
}

PsdVerdict psd_check(const Eigen::MatrixXd & m, double tol)
{
    if (m.size() == 0)
        return {true, 0.0, 0.0};
    if (! m.allFinite())
        throw PreconditionError("matrix has non-finite entries");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    const auto & ev = solver.eigenvalues();
    const double lo = ev.minCoeff();
    const double radius = ev.cwiseAbs().maxCoeff();
    return {lo >= -tol * std::max(1.0, radius), lo, radius};
}

Inertia inertia(const Eigen::MatrixXd & m, double tol)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    return sign_pattern(solver.eigenvalues(), tol * std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff()));
}

Inertia sign_pattern(const Eigen::VectorXd & v, double tol)
{
    Inertia out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) > tol)
            ++out.positive;
        else if (v(i) < -tol)
            ++out.negative;
        else
            ++out.zero;
    }
    return out;
}

} // namespace graphlim
