#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "smom/moments.hpp"
#include "smom/tensor.hpp"

namespace smom {

/// Eigenpairs of the whitened third moment. Columns of `vectors` are the
/// recovered u_k, orthonormal up to the per-pair tolerance; values are the
/// positive lambda_k.
struct TensorEigs {
    Eigen::VectorXd values;            // K
    Eigen::MatrixXd vectors;           // K x K, columns u_k
    std::vector<int> iterations_used;  // per eigenpair, winning restart
};

/// Robust tensor power method: k rounds of (restarts x power iterations),
/// keeping the candidate with the largest lambda = T(theta,theta,theta)
/// per round (ties -> lowest restart index), then deflating. A converged
/// theta with negative lambda is flipped (lambda(-theta) = -lambda(theta)).
/// Deterministic in (inputs, seed). Throws numeric_error when the best
/// candidate of a round has lambda <= 0.
TensorEigs tensor_power_method(const WhitenedThirdMoment& t, std::size_t k,
                               std::size_t restarts, std::size_t iters,
                               double tol, std::uint64_t seed);

/// t' = t - lambda * u (x) u (x) u, symmetry preserved exactly.
/// Requires |u| = 1 within 1e-10.
WhitenedThirdMoment deflate(const WhitenedThirdMoment& t, double lambda,
                            const Eigen::VectorXd& u);

}  // namespace smom
