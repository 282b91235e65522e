#include "smom/tensor.hpp"

#include <cassert>
#include <cmath>

namespace smom {

void SymmetricTensor3::add_symmetric_cube(const Eigen::VectorXd& v, double w) {
    assert(static_cast<std::size_t>(v.size()) == dim_);
    const std::size_t k = dim_;
    for (std::size_t a = 0; a < k; ++a) {
        const double va = w * v[a];
        for (std::size_t b = a; b < k; ++b) {
            const double vab = va * v[b];
            for (std::size_t c = b; c < k; ++c) {
                const double p = vab * v[c];
                // one product per sorted triple, mirrored to every
                // distinct permutation slot
                if (a == b && b == c) {
                    (*this)(a, a, a) += p;
                } else if (a == b) {
                    (*this)(a, a, c) += p;
                    (*this)(a, c, a) += p;
                    (*this)(c, a, a) += p;
                } else if (b == c) {
                    (*this)(a, b, b) += p;
                    (*this)(b, a, b) += p;
                    (*this)(b, b, a) += p;
                } else {
                    (*this)(a, b, c) += p;
                    (*this)(a, c, b) += p;
                    (*this)(b, a, c) += p;
                    (*this)(b, c, a) += p;
                    (*this)(c, a, b) += p;
                    (*this)(c, b, a) += p;
                }
            }
        }
    }
}

Eigen::VectorXd SymmetricTensor3::contract(const Eigen::VectorXd& theta) const {
    assert(static_cast<std::size_t>(theta.size()) == dim_);
    const std::size_t k = dim_;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(k);
    for (std::size_t a = 0; a < k; ++a) {
        double acc = 0.0;
        const double* slab = data_.data() + a * k * k;
        for (std::size_t b = 0; b < k; ++b) {
            double inner = 0.0;
            const double* row = slab + b * k;
            for (std::size_t c = 0; c < k; ++c) {
                inner += row[c] * theta[c];
            }
            acc += inner * theta[b];
        }
        out[a] = acc;
    }
    return out;
}

double SymmetricTensor3::value(const Eigen::VectorXd& theta) const {
    return contract(theta).dot(theta);
}

void SymmetricTensor3::add(const SymmetricTensor3& other) {
    assert(other.dim_ == dim_);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
}

void SymmetricTensor3::scale(double s) {
    for (double& x : data_) x *= s;
}

double SymmetricTensor3::frobenius_norm() const {
    double acc = 0.0;
    for (double x : data_) acc += x * x;
    return std::sqrt(acc);
}

}  // namespace smom
