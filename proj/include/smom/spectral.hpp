#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "smom/moments.hpp"

namespace smom {

/// Top-K eigenpairs of the pairwise moment, values sorted descending,
/// columns orthonormal, each column sign-canonicalized (first nonzero
/// component positive).
struct EigPairs {
    Eigen::VectorXd values;   // K, descending
    Eigen::MatrixXd vectors;  // D x K
};

/// W = Omega Sigma^{-1/2} so that W^T M2 W = I; W_pinv = Omega Sigma^{1/2}
/// is the pseudo-inverse transpose used to map whitened directions back.
struct WhiteningBasis {
    Eigen::MatrixXd W;       // D x K
    Eigen::MatrixXd W_pinv;  // D x K
    EigPairs eig;
};

/// Lanczos with full reorthogonalization. Returns the k algebraically
/// largest eigenpairs with per-pair residual |M2 w - nu w| <= tol * nu.
/// Deterministic for a fixed seed. Throws numeric_error on rank deficiency
/// (k-th eigenvalue <= tol) or when max_iter matrix-vector products are
/// exhausted before convergence.
EigPairs truncated_eig(const PairwiseMoment& m2, std::size_t k, double tol,
                       std::size_t max_iter, std::uint64_t seed);

/// Throws numeric_error on a non-positive eigenvalue.
WhiteningBasis whitening_from_eig(const EigPairs& eig);

/// Flip column signs so the first nonzero component of each column is
/// positive. Idempotent; downstream results do not depend on incoming signs.
void canonicalize_columns(Eigen::MatrixXd& m);

}  // namespace smom
