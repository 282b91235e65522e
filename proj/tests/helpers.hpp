#pragma once

#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "smom/corpus.hpp"
#include "smom/moments.hpp"

namespace smom::test {

inline PairwiseMoment moment_from_dense(const Eigen::MatrixXd& m) {
    PairwiseMoment pm;
    pm.dim = static_cast<std::size_t>(m.rows());
    std::vector<Eigen::Triplet<double>> trips;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (m(i, j) != 0.0) {
                trips.emplace_back(static_cast<int>(i), static_cast<int>(j),
                                   m(i, j));
            }
        }
    }
    pm.matrix.resize(m.rows(), m.cols());
    pm.matrix.setFromTriplets(trips.begin(), trips.end());
    return pm;
}

inline SparseCorpus make_corpus(std::size_t n_words,
                                std::vector<std::vector<std::uint32_t>> rows) {
    SparseCorpus c;
    c.n_docs = rows.size();
    c.n_words = n_words;
    c.rows = std::move(rows);
    return c;
}

inline LabelSet make_labels(std::size_t n_labels,
                            std::vector<std::vector<std::uint32_t>> rows) {
    LabelSet s;
    s.n_docs = rows.size();
    s.n_labels = n_labels;
    s.rows = std::move(rows);
    return s;
}

inline SparseCorpus random_corpus(std::size_t n_docs, std::size_t n_words,
                                  std::size_t max_len, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::uint32_t> word(
        0, static_cast<std::uint32_t>(n_words - 1));
    std::vector<std::vector<std::uint32_t>> rows(n_docs);
    for (auto& row : rows) {
        const std::size_t l = len(rng);
        for (std::size_t i = 0; i < l; ++i) row.push_back(word(rng));
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return make_corpus(n_words, std::move(rows));
}

// orthonormal basis from a seeded Gaussian matrix
inline Eigen::MatrixXd random_orthonormal(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd g(dim, dim);
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = gauss(rng);
    }
    return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

}  // namespace smom::test
