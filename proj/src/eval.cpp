#include "smom/eval.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

namespace smom {

std::optional<double> doc_auc(std::span<const double> scores,
                              std::span<const std::uint32_t> positives) {
    const std::size_t l = scores.size();
    std::vector<bool> is_pos(l, false);
    std::size_t n_pos = 0;
    for (std::uint32_t p : positives) {
        if (p >= l) {
            throw data_error("positive label index " + std::to_string(p) +
                             " out of range");
        }
        if (!is_pos[p]) {
            is_pos[p] = true;
            ++n_pos;
        }
    }
    const std::size_t n_neg = l - n_pos;
    if (n_pos == 0 || n_neg == 0) return std::nullopt;

    // Walk score-sorted labels in tie groups; every partial sum is a
    // half-integer, so this equals brute-force pair counting exactly.
    std::vector<std::uint32_t> order(l);
    for (std::size_t i = 0; i < l; ++i) order[i] = static_cast<std::uint32_t>(i);
    std::sort(order.begin(), order.end(),
              [&scores](std::uint32_t a, std::uint32_t b) {
                  return scores[a] < scores[b];
              });

    double correct = 0.0;
    double neg_below = 0.0;
    std::size_t i = 0;
    while (i < l) {
        std::size_t j = i;
        double group_pos = 0.0;
        double group_neg = 0.0;
        while (j < l && scores[order[j]] == scores[order[i]]) {
            if (is_pos[order[j]]) {
                group_pos += 1.0;
            } else {
                group_neg += 1.0;
            }
            ++j;
        }
        correct += group_pos * (neg_below + 0.5 * group_neg);
        neg_below += group_neg;
        i = j;
    }
    return correct / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

MetricReport macro_auc(const SpectralModel& model, const SparseCorpus& corpus,
                       const LabelSet& labels,
                       std::span<const std::size_t> at, double smoothing,
                       int threads) {
    if (labels.n_docs != corpus.n_docs) {
        throw data_error("label row count does not match corpus");
    }
    if (labels.n_labels != model.n_labels) {
        throw data_error("label dimensionality does not match the model");
    }
    const std::size_t n = corpus.n_docs;

    MetricReport report;
    report.n_docs = n;
    report.per_doc_auc.assign(n, std::nullopt);

    std::vector<std::vector<double>> hits(at.size());
    for (auto& h : hits) h.assign(n, 0.0);

    auto eval_doc = [&](std::size_t i) {
        const LabelScores pred = predict_labels(
            model, corpus.rows[i], std::nullopt, smoothing);
        report.per_doc_auc[i] =
            doc_auc(std::span<const double>(pred.scores.data(),
                                            static_cast<std::size_t>(
                                                pred.scores.size())),
                    labels.rows[i]);
        for (std::size_t a = 0; a < at.size(); ++a) {
            const std::size_t m = std::min(at[a], pred.ranking.size());
            if (at[a] == 0) continue;
            std::size_t hit = 0;
            for (std::size_t r = 0; r < m; ++r) {
                if (std::binary_search(labels.rows[i].begin(),
                                       labels.rows[i].end(),
                                       pred.ranking[r])) {
                    ++hit;
                }
            }
            hits[a][i] = static_cast<double>(hit) / static_cast<double>(at[a]);
        }
    };

    const std::size_t t =
        threads > 1 ? std::min<std::size_t>(threads, n ? n : 1) : 1;
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) eval_doc(i);
    } else {
        std::vector<std::thread> workers;
        const std::size_t chunk = (n + t - 1) / t;
        for (std::size_t c = 0; c < t; ++c) {
            const std::size_t lo = c * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            workers.emplace_back([&eval_doc, lo, hi] {
                for (std::size_t i = lo; i < hi; ++i) eval_doc(i);
            });
        }
        for (auto& w : workers) w.join();
    }

    double auc_sum = 0.0;
    std::size_t evaluable = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (report.per_doc_auc[i]) {
            auc_sum += *report.per_doc_auc[i];
            ++evaluable;
        } else {
            ++report.n_skipped;
        }
    }
    if (evaluable == 0) {
        throw data_error("no evaluable documents: every document lacks a "
                         "positive or a negative label");
    }
    report.macro_auc = auc_sum / static_cast<double>(evaluable);

    for (std::size_t a = 0; a < at.size(); ++a) {
        double sum = 0.0;
        for (double h : hits[a]) sum += h;
        report.precision_at[at[a]] = n ? sum / static_cast<double>(n) : 0.0;
    }
    return report;
}

void print_report(std::ostream& out, const MetricReport& report) {
    auto line = [&out](const std::string& key, const std::string& value) {
        out << key;
        for (std::size_t i = key.size(); i < 16; ++i) out << ' ';
        out << value << '\n';
    };
    char buf[64];
    line("documents", std::to_string(report.n_docs));
    line("skipped", std::to_string(report.n_skipped));
    std::snprintf(buf, sizeof(buf), "%.6f", report.macro_auc);
    line("macro_auc", buf);
    for (const auto& [m, p] : report.precision_at) {
        std::snprintf(buf, sizeof(buf), "%.6f", p);
        line("precision@" + std::to_string(m), buf);
    }
}

void write_report_csv(std::ostream& out, const MetricReport& report) {
    out << "metric,value\n";
    out << "documents," << report.n_docs << '\n';
    out << "skipped," << report.n_skipped << '\n';
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", report.macro_auc);
    out << "macro_auc," << buf << '\n';
    for (const auto& [m, p] : report.precision_at) {
        std::snprintf(buf, sizeof(buf), "%.10g", p);
        out << "precision@" << m << ',' << buf << '\n';
    }
}

}  // namespace smom
