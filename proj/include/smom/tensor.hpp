#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace smom {

/// Dense symmetric third-order tensor, full K^3 storage. Symmetry is kept
/// exact by construction: every update writes the identical product into
/// all permutation slots of an index triple.
class SymmetricTensor3 {
public:
    SymmetricTensor3() = default;
    explicit SymmetricTensor3(std::size_t dim)
        : dim_(dim), data_(dim * dim * dim, 0.0) {}

    std::size_t dim() const { return dim_; }

    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * dim_ + j) * dim_ + k];
    }
    double& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * dim_ + j) * dim_ + k];
    }

    /// data += w * v (x) v (x) v
    void add_symmetric_cube(const Eigen::VectorXd& v, double w);

    /// T(., theta, theta)
    Eigen::VectorXd contract(const Eigen::VectorXd& theta) const;

    /// T(theta, theta, theta)
    double value(const Eigen::VectorXd& theta) const;

    void add(const SymmetricTensor3& other);
    void scale(double s);

    double frobenius_norm() const;

    const std::vector<double>& raw() const { return data_; }

private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

}  // namespace smom
