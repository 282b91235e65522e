#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "smom/corpus.hpp"
#include "smom/model.hpp"
#include "smom/pipeline.hpp"

namespace smom {

/// Ground-truth parameters of the generative process.
struct GroundTruth {
    std::size_t n_words = 0;
    std::size_t n_labels = 0;
    std::size_t n_topics = 0;
    Eigen::MatrixXd O;   // D x K column-stochastic
    Eigen::MatrixXd Q;   // L x K column-stochastic
    Eigen::VectorXd pi;  // K-simplex
};

/// pi and every O / Q column drawn from a symmetric Dirichlet. O columns
/// with pairwise correlation above 0.95 are resampled so the topics stay
/// identifiable. Requires k <= min(d, l).
GroundTruth sample_params(std::size_t d, std::size_t l, std::size_t k,
                          double concentration, std::uint64_t seed);

/// Per document: one latent topic from pi, words_per_doc word draws and
/// labels_per_doc label draws from that topic, deduplicated into binary rows.
std::pair<SparseCorpus, LabelSet> generate_corpus(const GroundTruth& truth,
                                                  std::size_t n_docs,
                                                  std::size_t words_per_doc,
                                                  std::size_t labels_per_doc,
                                                  std::uint64_t seed);

/// Per-topic recovery errors under the optimal column matching.
/// pi_errs compares truth against the renormalized prior (pi_raw scaled to
/// the simplex, the same normalization the truth carries); pi_errs_raw
/// compares against the raw lambda^{-2} values the extraction produces.
struct RecoveryError {
    Eigen::VectorXd mu_errs;
    Eigen::VectorXd gamma_errs;
    Eigen::VectorXd pi_errs;
    Eigen::VectorXd pi_errs_raw;
    std::vector<int> permutation;  // truth column k matches estimate permutation[k]
};

RecoveryError align_and_error(const GroundTruth& truth,
                              const SpectralModel& model);

struct BoundInputs {
    double sigma1 = 0.0;   // largest eigenvalue of M2
    double sigma_k = 0.0;  // K-th eigenvalue of M2
    MomentScales scales;
    std::size_t n = 0;  // sample count
    double delta = 0.05;
    std::size_t k = 0;
    double c1 = 1.0;  // unspecified constants, exposed as knobs
    double c2 = 1.0;
    double pi_max = 1.0;
    double pi_min = 1.0;
};

/// The three parameter-error bounds and sample thresholds n1-n3, evaluated
/// verbatim. n2 and n3 carry unit implied constants.
struct TheoremBounds {
    double epsilon1 = 0.0;
    double epsilon2 = 0.0;
    double mu_bound = 0.0;
    double gamma_bound = 0.0;
    double pi_bound = 0.0;
    double n1 = 0.0;
    double n2 = 0.0;
    double n3 = 0.0;
};

TheoremBounds theorem_bounds(const BoundInputs& inputs);

struct ExperimentConfig {
    TrainOptions train;
    std::size_t words_per_doc = 20;
    std::size_t labels_per_doc = 3;
};

struct ConvergenceRow {
    std::size_t n = 0;
    double mu_err = 0.0;     // median over trials x topics
    double gamma_err = 0.0;
    double pi_err = 0.0;
    std::size_t failed_trials = 0;
};

/// For each N and trial: generate a corpus, run the full pipeline, align,
/// record errors. Trial t uses seed + t. A failed trial is counted, not
/// fatal; a row with no successful trial reports NaN medians.
std::vector<ConvergenceRow> convergence_experiment(
    const GroundTruth& truth, std::span<const std::size_t> n_grid,
    std::size_t trials, std::uint64_t seed, const ExperimentConfig& config);

void write_convergence_csv(std::ostream& out,
                           std::span<const ConvergenceRow> rows);

}  // namespace smom
