#include "smom/moments.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>
#include <vector>

#include "smom/spectral.hpp"
#include "smom/tensor_power.hpp"

namespace smom {

namespace {

// Chunked map-reduce over documents. Chunk boundaries and merge order are
// fixed by the document order, so a given thread count always produces the
// same result; threads == 1 is the sequential reference.
template <class Acc, class MakeAcc, class Body, class Merge>
Acc chunked_reduce(std::size_t n, int threads, MakeAcc make, Body body,
                   Merge merge) {
    const std::size_t t = threads > 1 ? static_cast<std::size_t>(threads) : 1;
    if (t == 1 || n < 2 * t) {
        Acc acc = make();
        for (std::size_t i = 0; i < n; ++i) body(acc, i);
        return acc;
    }
    std::vector<Acc> parts;
    parts.reserve(t);
    for (std::size_t c = 0; c < t; ++c) parts.push_back(make());
    const std::size_t chunk = (n + t - 1) / t;
    std::vector<std::thread> workers;
    for (std::size_t c = 0; c < t; ++c) {
        const std::size_t lo = c * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([&parts, &body, c, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) body(parts[c], i);
        });
    }
    for (auto& w : workers) w.join();
    Acc acc = std::move(parts[0]);
    for (std::size_t c = 1; c < t; ++c) merge(acc, parts[c]);
    return acc;
}

// Upper-triangle pair counts; dense array below this dimension, hash map
// above. Counts are integer-valued doubles, so accumulation is exact and
// the result does not depend on thread count.
constexpr std::size_t kDenseDimLimit = 2048;

struct PairCounts {
    std::size_t dim = 0;
    bool dense = false;
    std::vector<double> flat;                       // upper triangle
    std::unordered_map<std::uint64_t, double> map;  // key a*dim+b, a<=b

    std::size_t tri_index(std::size_t a, std::size_t b) const {
        return a * dim - a * (a - 1) / 2 + (b - a);
    }
    void bump(std::size_t a, std::size_t b) {
        if (dense) {
            flat[tri_index(a, b)] += 1.0;
        } else {
            map[static_cast<std::uint64_t>(a) * dim + b] += 1.0;
        }
    }
};

// Row-major copy of W so that per-document row gathers are contiguous.
using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

PairwiseMoment estimate_m2(const SparseCorpus& corpus, int threads) {
    const std::size_t d = corpus.n_words;
    const MomentScales scales = corpus_stats(corpus);
    if (scales.sum2 == 0) {
        throw numeric_error("degenerate pairwise moment: all documents empty");
    }

    auto make = [d] {
        PairCounts pc;
        pc.dim = d;
        pc.dense = d <= kDenseDimLimit;
        if (pc.dense) pc.flat.assign(d * (d + 1) / 2, 0.0);
        return pc;
    };
    auto body = [&corpus](PairCounts& pc, std::size_t i) {
        const auto& row = corpus.rows[i];
        for (std::size_t a = 0; a < row.size(); ++a) {
            for (std::size_t b = a; b < row.size(); ++b) {
                pc.bump(row[a], row[b]);
            }
        }
    };
    auto merge = [](PairCounts& into, const PairCounts& from) {
        if (into.dense) {
            for (std::size_t i = 0; i < into.flat.size(); ++i) {
                into.flat[i] += from.flat[i];
            }
        } else {
            for (const auto& [key, v] : from.map) into.map[key] += v;
        }
    };
    PairCounts counts =
        chunked_reduce<PairCounts>(corpus.n_docs, threads, make, body, merge);

    const double norm = static_cast<double>(scales.sum2);
    std::vector<Eigen::Triplet<double>> trips;
    auto emit = [&trips, norm](std::size_t a, std::size_t b, double c) {
        const double v = c / norm;
        trips.emplace_back(static_cast<int>(a), static_cast<int>(b), v);
        if (a != b) trips.emplace_back(static_cast<int>(b), static_cast<int>(a), v);
    };
    if (counts.dense) {
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = a; b < d; ++b) {
                const double c = counts.flat[counts.tri_index(a, b)];
                if (c != 0.0) emit(a, b, c);
            }
        }
    } else {
        for (const auto& [key, c] : counts.map) {
            emit(key / d, key % d, c);
        }
    }

    PairwiseMoment m2;
    m2.dim = d;
    m2.matrix.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    m2.matrix.setFromTriplets(trips.begin(), trips.end());
    m2.matrix.makeCompressed();
    return m2;
}

WhitenedThirdMoment whitened_third_moment(const SparseCorpus& corpus,
                                          const WhiteningBasis& basis,
                                          int threads) {
    const std::size_t d = corpus.n_words;
    const std::size_t k = static_cast<std::size_t>(basis.W.cols());
    if (static_cast<std::size_t>(basis.W.rows()) != d) {
        throw data_error("whitening basis rows do not match corpus vocabulary");
    }
    const MomentScales scales = corpus_stats(corpus);
    if (scales.sum3 == 0) {
        throw numeric_error("degenerate third moment: all documents empty");
    }

    const RowMajorMatrix w_rows = basis.W;

    auto make = [k] { return SymmetricTensor3(k); };
    auto body = [&corpus, &w_rows, k](SymmetricTensor3& acc, std::size_t i) {
        const auto& row = corpus.rows[i];
        if (row.empty()) return;
        Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
        for (std::uint32_t v : row) z += w_rows.row(v);
        acc.add_symmetric_cube(z, 1.0);
    };
    auto merge = [](SymmetricTensor3& into, const SymmetricTensor3& from) {
        into.add(from);
    };
    SymmetricTensor3 acc =
        chunked_reduce<SymmetricTensor3>(corpus.n_docs, threads, make, body, merge);
    acc.scale(1.0 / static_cast<double>(scales.sum3));

    WhitenedThirdMoment out;
    out.tensor = std::move(acc);
    return out;
}

RawLabelProjection estimate_raw_q(const SparseCorpus& corpus,
                                  const LabelSet& labels,
                                  const WhiteningBasis& basis,
                                  const TensorEigs& eigs, int threads) {
    if (labels.n_docs != corpus.n_docs) {
        throw data_error("label row count does not match corpus");
    }
    const std::size_t d = corpus.n_words;
    const std::size_t k = static_cast<std::size_t>(basis.W.cols());
    if (static_cast<std::size_t>(basis.W.rows()) != d) {
        throw data_error("whitening basis rows do not match corpus vocabulary");
    }
    if (static_cast<std::size_t>(eigs.vectors.rows()) != k) {
        throw data_error("tensor eigenvectors do not match whitening rank");
    }
    const MomentScales scales = corpus_stats(corpus, &labels);
    if (scales.sum_ly == 0) {
        throw numeric_error(
            "degenerate label moment: sum nnz(x)^2 nnz(y) is zero");
    }

    const RowMajorMatrix w_rows = basis.W;
    const Eigen::MatrixXd ut = eigs.vectors.transpose();
    const std::size_t l = labels.n_labels;

    auto make = [l, k] {
        return Eigen::MatrixXd(Eigen::MatrixXd::Zero(
            static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)));
    };
    auto body = [&](Eigen::MatrixXd& acc, std::size_t i) {
        const auto& row = corpus.rows[i];
        const auto& lab = labels.rows[i];
        if (row.empty() || lab.empty()) return;
        Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
        for (std::uint32_t v : row) z += w_rows.row(v);
        const Eigen::VectorXd s = ut * z;
        const Eigen::RowVectorXd sq = s.array().square().transpose();
        for (std::uint32_t y : lab) acc.row(y) += sq;
    };
    auto merge = [](Eigen::MatrixXd& into, const Eigen::MatrixXd& from) {
        into += from;
    };
    Eigen::MatrixXd acc =
        chunked_reduce<Eigen::MatrixXd>(corpus.n_docs, threads, make, body, merge);
    acc /= static_cast<double>(scales.sum_ly);

    RawLabelProjection out;
    out.n_labels = l;
    out.topics = k;
    out.matrix = std::move(acc);
    return out;
}

}  // namespace smom
