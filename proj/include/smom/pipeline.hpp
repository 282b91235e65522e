#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smom/corpus.hpp"
#include "smom/model.hpp"

namespace smom {

struct TrainOptions {
    std::size_t k = 0;
    std::size_t restarts = 0;      // 0 -> 10 + 2k
    std::size_t power_iters = 100;
    double eig_tol = 1e-10;
    double tpm_tol = 1e-10;
    std::size_t eig_max_iter = 0;  // 0 -> 10 * D
    std::uint64_t seed = 42;
    int threads = 1;

    std::size_t effective_restarts() const {
        return restarts ? restarts : 10 + 2 * k;
    }
};

struct StageTime {
    std::string stage;
    double seconds = 0.0;
};

struct TrainResult {
    SpectralModel model;
    int data_passes = 0;  // exactly 3 for a full train
    MomentScales scales;
    Eigen::VectorXd m2_values;  // top-K eigenvalues of the pairwise moment
    Eigen::VectorXd lambdas;    // tensor eigenvalues
    std::vector<StageTime> timings;
};

/// Full parameter extraction: pairwise moment (pass 1), truncated
/// eigendecomposition, whitening, whitened third moment (pass 2), tensor
/// power method, label projection (pass 3), assembly.
TrainResult train_model(const SparseCorpus& corpus, const LabelSet& labels,
                        const TrainOptions& opts);

}  // namespace smom
