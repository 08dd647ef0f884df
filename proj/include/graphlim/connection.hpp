#pragma once

#include "graphlim/densities.hpp"
#include "graphlim/graphs.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace graphlim {

struct ConnectionMatrix
{
    int k = 0;
    /// Row/column labels. For M0 the graphs on [k] by edge bitmask; for the
    /// truncated M the canonical k-labeled graphs by node count, then form.
    std::vector<KLabeledGraph> index;
    Eigen::MatrixXd entries;
};

/// M0(k,f): entry (A,B) = f(A u B) over all labeled graphs on [k].
ConnectionMatrix m0_matrix(const GraphParameter & f, int k);

/// Entry (A,B) = f(A B) over k-labeled graphs with at most max_nodes nodes
/// and no isolated unlabeled node, up to label-preserving isomorphism.
ConnectionMatrix truncated_m(const GraphParameter & f, int k, int max_nodes);

/// Lindstrom-Wilf factorisation of M0(k,f) = Z D Z^T with Z[A][B] = 1 iff
/// A is a subgraph of B and D = diag(f†). Expanding the product,
/// entry (A,B) = sum over F containing A u B of f†(F) = f(A u B).
struct ZetaFactorization
{
    Eigen::MatrixXd zeta;
    Eigen::VectorXd dagger;
    double max_reconstruction_error = 0.0;
    std::string orientation = "M0 = Z D Z^T, Z[A][B] = [A subset of B]";

    Eigen::MatrixXd reconstruct() const { return zeta * dagger.asDiagonal() * zeta.transpose(); }
};

/// Throws InvariantError if Z D Z^T differs from M0(k,f) by more than tol.
ZetaFactorization lw_factorization(const GraphParameter & f, int k, double tol = 1e-10);

struct PsdVerdict
{
    bool is_psd;
    double min_eigenvalue;
    double spectral_radius;
};

/// PSD iff the smallest eigenvalue is >= -tol * max(1, spectral radius).
PsdVerdict psd_check(const Eigen::MatrixXd & m, double tol = 1e-8);
inline PsdVerdict psd_check(const ConnectionMatrix & m, double tol = 1e-8) { return psd_check(m.entries, tol); }

struct Inertia
{
    int positive = 0;
    int negative = 0;
    int zero = 0;

    friend bool operator==(const Inertia &, const Inertia &) = default;
};

/// Eigenvalue sign counts, with |lambda| <= tol * max(1, radius) as zero.
Inertia inertia(const Eigen::MatrixXd & m, double tol = 1e-9);
/// Sign counts of a vector, with |x| <= tol as zero.
Inertia sign_pattern(const Eigen::VectorXd & v, double tol = 1e-9);

} // namespace graphlim
