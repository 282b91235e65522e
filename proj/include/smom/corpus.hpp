#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <vector>

#include "smom/common.hpp"

namespace smom {

/// Binary sparse document-word matrix. Each row holds the distinct word
/// indices of one document, sorted ascending; entries are implicitly 1.
struct SparseCorpus {
    std::size_t n_docs = 0;
    std::size_t n_words = 0;
    std::vector<std::vector<std::uint32_t>> rows;

    std::size_t nnz(std::size_t doc) const { return rows[doc].size(); }
};

/// Binary sparse document-label matrix, same row layout as SparseCorpus.
struct LabelSet {
    std::size_t n_docs = 0;
    std::size_t n_labels = 0;
    std::vector<std::vector<std::uint32_t>> rows;

    std::size_t nnz(std::size_t doc) const { return rows[doc].size(); }
};

/// Per-corpus means of nnz powers. The exact integer sums are kept so the
/// moment normalizers stay drift-free; the means are formed by a single
/// double division at the end.
struct MomentScales {
    double d1s = 0.0;  // mean nnz(x_i)
    double d2s = 0.0;  // mean nnz(x_i)^2
    double d3s = 0.0;  // mean nnz(x_i)^3
    double dls = 0.0;  // mean nnz(x_i)^2 * nnz(y_i); 0 without labels

    std::uint64_t sum1 = 0;
    std::uint64_t sum2 = 0;
    std::uint64_t sum3 = 0;
    std::uint64_t sum_ly = 0;
};

struct ParsedCorpus {
    SparseCorpus corpus;
    std::optional<LabelSet> labels;
};

/// Reads the text interchange format:
///   line 1:  "N D L"
///   then one line per document: "l1,l2,...  f1:v1 f2:v2 ..."
/// Label and feature indices are 0-based; any feature value > 0 counts as
/// presence. Duplicate indices collapse. Lines starting with '#' after the
/// header are comments. A whitespace-only line is an empty document.
/// Throws parse_error naming the offending line.
ParsedCorpus parse_corpus(std::istream& in, bool expect_labels);

/// Canonical form of the interchange format: sorted, deduplicated indices,
/// all feature values written as 1.
void serialize_corpus(std::ostream& out, const SparseCorpus& corpus,
                      const LabelSet* labels = nullptr);

/// Exact nnz-power means. Throws data_error on an empty corpus or when the
/// label row count disagrees with the corpus.
MomentScales corpus_stats(const SparseCorpus& corpus,
                          const LabelSet* labels = nullptr);

}  // namespace smom
