#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "smom/corpus.hpp"
#include "smom/tensor.hpp"

namespace smom {

struct WhiteningBasis;  // spectral.hpp
struct TensorEigs;      // tensor_power.hpp

/// Empirical pairwise word co-occurrence pmf: X^T X normalized by
/// sum_i nnz(x_i)^2. Symmetric, non-negative, entries sum to 1.
struct PairwiseMoment {
    std::size_t dim = 0;
    Eigen::SparseMatrix<double> matrix;
};

/// The whitened empirical third moment, a dense symmetric K^3 tensor.
struct WhitenedThirdMoment {
    SymmetricTensor3 tensor;

    std::size_t dim() const { return tensor.dim(); }
};

/// Label cross-moment projected through W and U: column k holds the
/// un-normalized gamma_k estimate.
struct RawLabelProjection {
    std::size_t n_labels = 0;
    std::size_t topics = 0;
    Eigen::MatrixXd matrix;  // L x K
};

/// Pass #1. One reduction pass over documents. Throws numeric_error when
/// every document is empty (normalizer would be zero).
PairwiseMoment estimate_m2(const SparseCorpus& corpus, int threads = 1);

/// Pass #2: T = (1 / sum nnz^3) sum_i z_i (x) z_i (x) z_i with z_i = W^T x_i.
/// Never forms any D x D x D object; cost O(N K^3).
WhitenedThirdMoment whitened_third_moment(const SparseCorpus& corpus,
                                          const WhiteningBasis& basis,
                                          int threads = 1);

/// Pass #3: column k = (1 / sum nnz(x)^2 nnz(y)) sum_i (u_k^T W^T x_i)^2 y_i.
RawLabelProjection estimate_raw_q(const SparseCorpus& corpus,
                                  const LabelSet& labels,
                                  const WhiteningBasis& basis,
                                  const TensorEigs& eigs, int threads = 1);

}  // namespace smom
