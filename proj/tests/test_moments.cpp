#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "smom/moments.hpp"
#include "smom/spectral.hpp"
#include "smom/tensor_power.hpp"

using namespace smom;

namespace {

// brute-force oracle: enumerate ordered word pairs per document
Eigen::MatrixXd m2_bruteforce(const SparseCorpus& corpus) {
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(
        static_cast<Eigen::Index>(corpus.n_words),
        static_cast<Eigen::Index>(corpus.n_words));
    double norm = 0.0;
    for (const auto& row : corpus.rows) {
        for (std::uint32_t a : row) {
            for (std::uint32_t b : row) {
                counts(a, b) += 1.0;
                norm += 1.0;
            }
        }
    }
    return counts / norm;
}

WhiteningBasis basis_from_w(const Eigen::MatrixXd& w) {
    WhiteningBasis basis;
    basis.W = w;
    basis.W_pinv = w;  // only W is read by the passes
    return basis;
}

}  // namespace

TEST_CASE("m2: single word single doc") {
    auto corpus = test::make_corpus(1, {{0}});
    auto m2 = estimate_m2(corpus);
    CHECK(m2.dim == 1);
    CHECK(Eigen::MatrixXd(m2.matrix)(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("m2: hand-enumerated pairs") {
    auto corpus = test::make_corpus(3, {{0, 1}, {1, 2}});
    Eigen::MatrixXd want(3, 3);
    want << 1, 1, 0, 1, 2, 1, 0, 1, 1;
    want /= 8.0;
    Eigen::MatrixXd got = estimate_m2(corpus).matrix;
    CHECK((got - want).norm() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("m2: matches the brute-force oracle and sums to one") {
    auto corpus = test::random_corpus(120, 40, 9, 11);
    Eigen::MatrixXd got = estimate_m2(corpus).matrix;
    Eigen::MatrixXd want = m2_bruteforce(corpus);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(got.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((got - got.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("m2: all-empty corpus is degenerate") {
    auto corpus = test::make_corpus(3, {{}, {}});
    CHECK_THROWS_AS(estimate_m2(corpus), numeric_error);
}

TEST_CASE("whitened third moment: one doc, scalar case") {
    auto corpus = test::make_corpus(1, {{0}});
    Eigen::MatrixXd w(1, 1);
    w << 2.0;
    auto t = whitened_third_moment(corpus, basis_from_w(w));
    CHECK(t.tensor(0, 0, 0) == doctest::Approx(8.0));
}

TEST_CASE("whitened third moment: zero basis annihilates") {
    auto corpus = test::random_corpus(30, 10, 5, 3);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(10, 2);
    auto t = whitened_third_moment(corpus, basis_from_w(w));
    for (double x : t.tensor.raw()) CHECK(x == 0.0);
}

TEST_CASE("whitened third moment: exact index symmetry") {
    auto corpus = test::random_corpus(50, 12, 6, 4);
    Eigen::MatrixXd w = Eigen::MatrixXd::Random(12, 3);
    auto t = whitened_third_moment(corpus, basis_from_w(w));
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) {
            for (std::size_t c = 0; c < 3; ++c) {
                CHECK(t.tensor(a, b, c) == t.tensor(c, b, a));
                CHECK(t.tensor(a, b, c) == t.tensor(b, a, c));
            }
        }
    }
}

TEST_CASE("whitened third moment: dimension mismatch") {
    auto corpus = test::random_corpus(10, 8, 4, 5);
    Eigen::MatrixXd w = Eigen::MatrixXd::Random(9, 2);
    CHECK_THROWS_AS(whitened_third_moment(corpus, basis_from_w(w)), data_error);
}

TEST_CASE("raw q: single-term evaluation") {
    auto corpus = test::make_corpus(1, {{0}});
    auto labels = test::make_labels(2, {{0}});
    const double w = 0.7;
    Eigen::MatrixXd wm(1, 1);
    wm << w;
    TensorEigs eigs;
    eigs.values = Eigen::VectorXd::Ones(1);
    eigs.vectors = Eigen::MatrixXd::Identity(1, 1);
    auto q = estimate_raw_q(corpus, labels, basis_from_w(wm), eigs);
    CHECK(q.matrix(0, 0) == doctest::Approx(w * w));
    CHECK(q.matrix(1, 0) == 0.0);
}

TEST_CASE("raw q: zero U annihilates") {
    auto corpus = test::random_corpus(20, 6, 4, 9);
    auto labels = test::make_labels(3, std::vector<std::vector<std::uint32_t>>(
                                           20, {0}));
    Eigen::MatrixXd w = Eigen::MatrixXd::Random(6, 2);
    TensorEigs eigs;
    eigs.values = Eigen::VectorXd::Ones(2);
    eigs.vectors = Eigen::MatrixXd::Zero(2, 2);
    auto q = estimate_raw_q(corpus, labels, basis_from_w(w), eigs);
    CHECK(q.matrix.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("raw q: duplicated documents leave the estimate unchanged") {
    auto corpus1 = test::make_corpus(5, {{0, 2}, {1, 3}});
    auto labels1 = test::make_labels(3, {{0}, {1, 2}});
    auto corpus2 = test::make_corpus(5, {{0, 2}, {1, 3}, {0, 2}, {1, 3}});
    auto labels2 = test::make_labels(3, {{0}, {1, 2}, {0}, {1, 2}});
    Eigen::MatrixXd w = Eigen::MatrixXd::Random(5, 2);
    TensorEigs eigs;
    eigs.values = Eigen::VectorXd::Ones(2);
    eigs.vectors = test::random_orthonormal(2, 5);
    auto q1 = estimate_raw_q(corpus1, labels1, basis_from_w(w), eigs);
    auto q2 = estimate_raw_q(corpus2, labels2, basis_from_w(w), eigs);
    CHECK((q1.matrix - q2.matrix).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("raw q: label row count mismatch") {
    auto corpus = test::random_corpus(4, 6, 3, 2);
    auto labels = test::make_labels(3, {{0}});
    Eigen::MatrixXd w = Eigen::MatrixXd::Random(6, 2);
    TensorEigs eigs;
    eigs.values = Eigen::VectorXd::Ones(2);
    eigs.vectors = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(estimate_raw_q(corpus, labels, basis_from_w(w), eigs),
                    data_error);
}

TEST_CASE("passes are order-invariant over documents") {
    auto corpus = test::random_corpus(60, 15, 7, 21);
    auto shuffled = corpus;
    std::mt19937_64 rng(99);
    std::shuffle(shuffled.rows.begin(), shuffled.rows.end(), rng);

    Eigen::MatrixXd a = estimate_m2(corpus).matrix;
    Eigen::MatrixXd b = estimate_m2(shuffled).matrix;
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);

    Eigen::MatrixXd w = Eigen::MatrixXd::Random(15, 3);
    auto t1 = whitened_third_moment(corpus, basis_from_w(w));
    auto t2 = whitened_third_moment(shuffled, basis_from_w(w));
    double worst = 0.0;
    for (std::size_t i = 0; i < t1.tensor.raw().size(); ++i) {
        worst = std::max(worst,
                         std::abs(t1.tensor.raw()[i] - t2.tensor.raw()[i]));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("parallel passes match the sequential reference") {
    auto corpus = test::random_corpus(101, 20, 8, 31);
    auto labels = test::make_labels(
        4, [&] {
            std::vector<std::vector<std::uint32_t>> rows(101);
            std::mt19937_64 rng(5);
            for (auto& r : rows) r = {static_cast<std::uint32_t>(rng() % 4)};
            return rows;
        }());
    Eigen::MatrixXd w = Eigen::MatrixXd::Random(20, 3);
    TensorEigs eigs;
    eigs.values = Eigen::VectorXd::Ones(3);
    eigs.vectors = test::random_orthonormal(3, 17);

    Eigen::MatrixXd m_seq = estimate_m2(corpus, 1).matrix;
    Eigen::MatrixXd m_par = estimate_m2(corpus, 3).matrix;
    CHECK((m_seq - m_par).cwiseAbs().maxCoeff() <= 1e-10);

    auto t_seq = whitened_third_moment(corpus, basis_from_w(w), 1);
    auto t_par = whitened_third_moment(corpus, basis_from_w(w), 3);
    double worst = 0.0;
    for (std::size_t i = 0; i < t_seq.tensor.raw().size(); ++i) {
        worst = std::max(
            worst, std::abs(t_seq.tensor.raw()[i] - t_par.tensor.raw()[i]));
    }
    CHECK(worst <= 1e-10);

    auto q_seq = estimate_raw_q(corpus, labels, basis_from_w(w), eigs, 1);
    auto q_par = estimate_raw_q(corpus, labels, basis_from_w(w), eigs, 3);
    CHECK((q_seq.matrix - q_par.matrix).cwiseAbs().maxCoeff() <= 1e-10);
}
