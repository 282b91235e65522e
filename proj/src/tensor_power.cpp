#include "smom/tensor_power.hpp"

#include <cmath>
#include <random>

namespace smom {

namespace {

Eigen::VectorXd random_unit_start(std::uint64_t seed, Eigen::Index n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
    double norm = v.norm();
    while (norm == 0.0) {
        for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
        norm = v.norm();
    }
    return v / norm;
}

// Restart seeds are derived, not drawn from a shared stream, so restarts
// could run in parallel without changing the selected candidate.
std::uint64_t restart_seed(std::uint64_t seed, std::size_t round,
                           std::size_t restart, std::size_t restarts) {
    return seed + 0x9e3779b97f4a7c15ULL * (round * restarts + restart + 1);
}

}  // namespace

TensorEigs tensor_power_method(const WhitenedThirdMoment& t, std::size_t k,
                               std::size_t restarts, std::size_t iters,
                               double tol, std::uint64_t seed) {
    const std::size_t dim = t.dim();
    if (k == 0 || k > dim) {
        throw data_error("requested k must satisfy 1 <= k <= dim(T)");
    }
    if (restarts == 0) {
        throw data_error("tensor power method needs at least one restart");
    }

    SymmetricTensor3 work = t.tensor;
    const Eigen::Index n = static_cast<Eigen::Index>(dim);

    TensorEigs out;
    out.values.resize(static_cast<Eigen::Index>(k));
    out.vectors.resize(n, static_cast<Eigen::Index>(k));
    out.iterations_used.resize(k, 0);

    for (std::size_t round = 0; round < k; ++round) {
        double best_lambda = 0.0;
        Eigen::VectorXd best_theta;
        int best_iters = 0;
        bool have_best = false;

        for (std::size_t rep = 0; rep < restarts; ++rep) {
            Eigen::VectorXd theta =
                random_unit_start(restart_seed(seed, round, rep, restarts), n);
            int used = 0;
            for (std::size_t it = 0; it < iters; ++it) {
                Eigen::VectorXd next = work.contract(theta);
                const double norm = next.norm();
                if (norm == 0.0) break;  // stuck at a zero of the map
                next /= norm;
                ++used;
                const double step = (next - theta).norm();
                theta = next;
                if (step <= tol) break;
            }
            double lambda = work.value(theta);
            if (lambda < 0.0) {  // odd order: lambda(-theta) = -lambda(theta)
                theta = -theta;
                lambda = -lambda;
            }
            // strict > keeps the lowest restart index on ties
            if (!have_best || lambda > best_lambda) {
                best_lambda = lambda;
                best_theta = theta;
                best_iters = used;
                have_best = true;
            }
        }

        if (!have_best || !(best_lambda > 0.0)) {
            throw numeric_error(
                "tensor decomposition failed: no positive eigenvalue found in "
                "round " +
                std::to_string(round + 1) +
                " (K may be too large for the available samples)");
        }

        out.values[static_cast<Eigen::Index>(round)] = best_lambda;
        out.vectors.col(static_cast<Eigen::Index>(round)) = best_theta;
        out.iterations_used[round] = best_iters;
        work.add_symmetric_cube(best_theta, -best_lambda);
    }

    return out;
}

WhitenedThirdMoment deflate(const WhitenedThirdMoment& t, double lambda,
                            const Eigen::VectorXd& u) {
    if (static_cast<std::size_t>(u.size()) != t.dim()) {
        throw data_error("deflation vector dimension does not match tensor");
    }
    if (std::abs(u.norm() - 1.0) > 1e-10) {
        throw data_error("deflation vector must be unit length");
    }
    WhitenedThirdMoment out;
    out.tensor = t.tensor;
    out.tensor.add_symmetric_cube(u, -lambda);
    return out;
}

}  // namespace smom
