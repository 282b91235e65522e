#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "smom/corpus.hpp"
#include "smom/model.hpp"

namespace smom {

struct MetricReport {
    double macro_auc = 0.0;
    std::vector<std::optional<double>> per_doc_auc;  // absent when undefined
    std::map<std::size_t, double> precision_at;
    std::size_t n_docs = 0;
    std::size_t n_skipped = 0;  // docs with no positive or no negative label
};

/// Probability over (positive, negative) label pairs that the positive
/// outscores the negative, ties counting one half. Absent when positives
/// is empty or covers every label. Matches brute-force pair enumeration
/// exactly (all partial sums are half-integers).
std::optional<double> doc_auc(std::span<const double> scores,
                              std::span<const std::uint32_t> positives);

/// Macro-averaged AUC over documents with at least one positive and one
/// negative label, plus precision@m over all documents for each m in `at`.
MetricReport macro_auc(const SpectralModel& model, const SparseCorpus& corpus,
                       const LabelSet& labels,
                       std::span<const std::size_t> at = {},
                       double smoothing = kDefaultSmoothing, int threads = 1);

void print_report(std::ostream& out, const MetricReport& report);
void write_report_csv(std::ostream& out, const MetricReport& report);

}  // namespace smom
