#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "smom/moments.hpp"
#include "smom/spectral.hpp"
#include "smom/tensor_power.hpp"

namespace smom {

inline constexpr double kDefaultSmoothing = 1e-12;

/// Extracted parameters. O and Q are column-stochastic (column k is the
/// word / label distribution of topic k); pi is the topic prior on the
/// simplex; pi_raw keeps the un-normalized lambda_k^{-2} for diagnostics.
struct SpectralModel {
    std::size_t n_words = 0;   // D
    std::size_t n_labels = 0;  // L
    std::size_t n_topics = 0;  // K

    Eigen::MatrixXd O;       // D x K
    Eigen::MatrixXd Q;       // L x K
    Eigen::VectorXd pi;      // K, sums to 1
    Eigen::VectorXd pi_raw;  // K, lambda_k^{-2}
};

struct TopicPosterior {
    Eigen::VectorXd weights;  // K-simplex
};

struct LabelScores {
    Eigen::VectorXd scores;             // L, in [0,1], sums to 1
    std::vector<std::uint32_t> ranking; // descending score, ties by index
};

/// mu_k = W_pinv u_k and gamma_k = raw_q column k, both clamped at zero and
/// column-normalized; pi_raw_k = lambda_k^{-2}, pi = pi_raw renormalized.
/// Throws numeric_error when a column is all-zero after clamping.
SpectralModel assemble_model(const WhiteningBasis& basis,
                             const TensorEigs& eigs,
                             const RawLabelProjection& raw_q);

/// Bayes posterior over topics for the distinct words of a document,
/// computed in log space with max subtraction. Duplicates in `words` are
/// ignored; an empty document returns pi.
TopicPosterior posterior_topics(const SpectralModel& model,
                                std::span<const std::uint32_t> words,
                                double smoothing = kDefaultSmoothing);

/// scores = Q * posterior weights. `top_m` truncates the ranking only;
/// scores always cover all labels.
LabelScores predict_labels(const SpectralModel& model,
                           std::span<const std::uint32_t> words,
                           std::optional<std::size_t> top_m = std::nullopt,
                           double smoothing = kDefaultSmoothing);

/// Binary model file: magic "SMOM", version u32, D/L/K u64, then pi_raw,
/// pi, O (column-major), Q (column-major), all little-endian doubles.
/// Round trips are bit exact.
void save_model(const SpectralModel& model, std::ostream& out);
SpectralModel load_model(std::istream& in);

void save_model_file(const SpectralModel& model, const std::string& path);
SpectralModel load_model_file(const std::string& path);

}  // namespace smom
