#include "smom/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace smom {

namespace {

Eigen::VectorXd random_unit(std::mt19937_64& rng, Eigen::Index n) {
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

// Remove components along the first `cols` basis columns, twice.
void orthogonalize(Eigen::VectorXd& w, const Eigen::MatrixXd& basis,
                   Eigen::Index cols) {
    if (cols == 0) return;
    auto v = basis.leftCols(cols);
    w.noalias() -= v * (v.transpose() * w);
    w.noalias() -= v * (v.transpose() * w);
}

}  // namespace

void canonicalize_columns(Eigen::MatrixXd& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const double x = m(r, c);
            if (x != 0.0) {
                if (x < 0.0) m.col(c) = -m.col(c);
                break;
            }
        }
    }
}

EigPairs truncated_eig(const PairwiseMoment& m2, std::size_t k, double tol,
                       std::size_t max_iter, std::uint64_t seed) {
    const Eigen::Index n = static_cast<Eigen::Index>(m2.dim);
    if (k == 0 || static_cast<Eigen::Index>(k) > n) {
        throw data_error("requested rank k must satisfy 1 <= k <= D");
    }
    const Eigen::Index kk = static_cast<Eigen::Index>(k);

    std::mt19937_64 rng(seed);

    Eigen::Index cap = std::min<Eigen::Index>(n, std::max<Eigen::Index>(4 * kk, 64));
    Eigen::MatrixXd basis(n, cap);
    std::vector<double> alpha;  // tridiagonal diagonal
    std::vector<double> beta;   // tridiagonal off-diagonal

    basis.col(0) = random_unit(rng, n);

    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    bool converged = false;
    std::size_t matvecs = 0;
    Eigen::Index j = 0;  // index of the newest basis column

    // A breakdown (beta ~ 0) restarts the recurrence from a fresh random
    // direction orthogonal to the current basis; the tridiagonal matrix
    // gains a zero coupling there.
    const double breakdown_eps = 1e-14;

    while (true) {
        if (matvecs >= max_iter) {
            throw numeric_error(
                "eigendecomposition did not converge within max_iter "
                "matrix-vector products");
        }
        Eigen::VectorXd w = m2.matrix * basis.col(j);
        ++matvecs;
        const double a = basis.col(j).dot(w);
        alpha.push_back(a);
        w -= a * basis.col(j);
        if (j > 0 && beta[static_cast<std::size_t>(j) - 1] != 0.0) {
            w -= beta[static_cast<std::size_t>(j) - 1] * basis.col(j - 1);
        }
        orthogonalize(w, basis, j + 1);

        const Eigen::Index dim = j + 1;
        const bool exact_subspace = dim == n;
        if (dim >= kk) {
            // Ritz extraction from the dim x dim tridiagonal matrix.
            Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(dim, dim);
            for (Eigen::Index i = 0; i < dim; ++i) {
                tri(i, i) = alpha[static_cast<std::size_t>(i)];
            }
            for (Eigen::Index i = 0; i + 1 < dim; ++i) {
                tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
            // eigenvalues come out ascending; take the top k from the back
            values.resize(kk);
            Eigen::MatrixXd s(dim, kk);
            for (Eigen::Index i = 0; i < kk; ++i) {
                values[i] = es.eigenvalues()[dim - 1 - i];
                s.col(i) = es.eigenvectors().col(dim - 1 - i);
            }
            const double wnorm = w.norm();
            bool all_small = true;
            for (Eigen::Index i = 0; i < kk && !exact_subspace; ++i) {
                const double resid = wnorm * std::abs(s(dim - 1, i));
                if (!(values[i] > 0.0) || resid > tol * values[i]) {
                    all_small = false;
                    break;
                }
            }
            if (all_small || exact_subspace) {
                vectors.noalias() = basis.leftCols(dim) * s;
                // verify with explicit residuals; the estimate can flatter
                converged = true;
                for (Eigen::Index i = 0; i < kk; ++i) {
                    if (exact_subspace && values[i] <= tol) {
                        continue;  // rank check below reports this case
                    }
                    const double resid =
                        (m2.matrix * vectors.col(i) - values[i] * vectors.col(i))
                            .norm();
                    if (!(values[i] > 0.0) || resid > tol * values[i]) {
                        converged = false;
                        break;
                    }
                }
                if (converged || exact_subspace) break;
            }
        }

        if (j + 1 >= n) break;
        if (j + 1 >= cap) {
            cap = std::min<Eigen::Index>(n, cap * 2);
            basis.conservativeResize(Eigen::NoChange, cap);
        }

        double b = w.norm();
        if (b <= breakdown_eps) {
            w = random_unit(rng, n);
            orthogonalize(w, basis, j + 1);
            const double nw = w.norm();
            if (nw <= breakdown_eps) break;
            basis.col(j + 1) = w / nw;
            b = 0.0;
        } else {
            basis.col(j + 1) = w / b;
        }
        beta.push_back(b);
        ++j;
    }

    if (!converged) {
        throw numeric_error(
            "eigendecomposition did not converge to the requested tolerance");
    }
    if (!(values[kk - 1] > tol)) {
        throw numeric_error("rank deficiency: eigenvalue " + std::to_string(k) +
                            " is not above tolerance; reduce K");
    }

    EigPairs out;
    out.values = values;
    out.vectors = vectors;
    canonicalize_columns(out.vectors);
    return out;
}

WhiteningBasis whitening_from_eig(const EigPairs& eig) {
    const Eigen::Index k = eig.values.size();
    for (Eigen::Index i = 0; i < k; ++i) {
        if (!(eig.values[i] > 0.0)) {
            throw numeric_error("whitening requires strictly positive eigenvalues");
        }
    }
    WhiteningBasis basis;
    basis.eig = eig;
    basis.W.resize(eig.vectors.rows(), k);
    basis.W_pinv.resize(eig.vectors.rows(), k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double root = std::sqrt(eig.values[i]);
        basis.W.col(i) = eig.vectors.col(i) / root;
        basis.W_pinv.col(i) = eig.vectors.col(i) * root;
    }
    return basis;
}

}  // namespace smom
