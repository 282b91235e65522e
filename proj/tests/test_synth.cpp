#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "smom/synth.hpp"

using namespace smom;

TEST_CASE("sample_params: k=1 prior is trivial") {
    auto truth = sample_params(5, 4, 1, 0.7, 3);
    CHECK(truth.pi.size() == 1);
    CHECK(truth.pi[0] == 1.0);
}

TEST_CASE("sample_params: deterministic in the seed") {
    auto a = sample_params(10, 6, 3, 0.4, 123);
    auto b = sample_params(10, 6, 3, 0.4, 123);
    CHECK(a.pi == b.pi);
    CHECK(a.O == b.O);
    CHECK(a.Q == b.Q);
}

TEST_CASE("sample_params: columns are stochastic and identifiable") {
    auto truth = sample_params(40, 20, 6, 0.3, 9);
    for (Eigen::Index c = 0; c < truth.O.cols(); ++c) {
        CHECK(truth.O.col(c).sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(truth.O.col(c).minCoeff() >= 0.0);
    }
    for (Eigen::Index a = 0; a < truth.O.cols(); ++a) {
        for (Eigen::Index b = a + 1; b < truth.O.cols(); ++b) {
            const Eigen::VectorXd ca =
                truth.O.col(a).array() - truth.O.col(a).mean();
            const Eigen::VectorXd cb =
                truth.O.col(b).array() - truth.O.col(b).mean();
            CHECK(ca.dot(cb) / (ca.norm() * cb.norm()) <= 0.95);
        }
    }
}

TEST_CASE("sample_params: k above min(d,l) is rejected") {
    CHECK_THROWS_AS(sample_params(4, 3, 4, 0.5, 1), data_error);
}

TEST_CASE("sample_params: Dirichlet marginal means") {
    // concentration 1, d=3: each entry uniform on the simplex, mean 1/3
    const int draws = 10000;
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (int i = 0; i < draws; ++i) {
        auto truth = sample_params(3, 3, 1, 1.0, 1000 + i);
        mean += truth.O.col(0);
    }
    mean /= draws;
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(mean[i] - 1.0 / 3) <= 0.02);
    }
}

TEST_CASE("generate_corpus: rows satisfy corpus invariants") {
    auto truth = sample_params(25, 10, 4, 0.5, 4);
    auto [corpus, labels] = generate_corpus(truth, 300, 12, 3, 5);
    CHECK(corpus.n_docs == 300);
    for (const auto& row : corpus.rows) {
        CHECK(row.size() <= 12);
        CHECK(!row.empty());
        for (std::size_t i = 1; i < row.size(); ++i) {
            CHECK(row[i - 1] < row[i]);  // strictly increasing
        }
        CHECK(row.back() < 25);
    }
    for (const auto& row : labels.rows) {
        CHECK(row.size() <= 3);
        for (std::size_t i = 1; i < row.size(); ++i) {
            CHECK(row[i - 1] < row[i]);
        }
    }
}

TEST_CASE("generate_corpus: point-mass word distribution") {
    GroundTruth truth;
    truth.n_words = 8;
    truth.n_labels = 2;
    truth.n_topics = 1;
    truth.O = Eigen::MatrixXd::Zero(8, 1);
    truth.O(5, 0) = 1.0;
    truth.Q = Eigen::MatrixXd::Constant(2, 1, 0.5);
    truth.pi = Eigen::VectorXd::Ones(1);
    auto [corpus, labels] = generate_corpus(truth, 20, 7, 1, 6);
    for (const auto& row : corpus.rows) {
        CHECK(row == std::vector<std::uint32_t>{5});
    }
}

TEST_CASE("generate_corpus: words_per_doc must be positive") {
    auto truth = sample_params(5, 5, 2, 0.5, 7);
    CHECK_THROWS_AS(generate_corpus(truth, 10, 0, 1, 8), data_error);
}

TEST_CASE("generate_corpus: empirical word frequencies approach O pi") {
    // diffuse columns keep the dedup distortion negligible
    auto truth = sample_params(200, 10, 5, 5.0, 11);
    auto [corpus, labels] = generate_corpus(truth, 100000, 20, 1, 12);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(200);
    for (const auto& row : corpus.rows) {
        for (std::uint32_t w : row) counts[w] += 1.0;
    }
    counts /= counts.sum();
    const Eigen::VectorXd expected = truth.O * truth.pi;
    const double tv = 0.5 * (counts - expected).cwiseAbs().sum();
    CHECK(tv <= 0.01);
}

TEST_CASE("align_and_error: exact model gives zero errors") {
    auto truth = sample_params(12, 8, 3, 0.5, 13);
    SpectralModel model;
    model.n_words = truth.n_words;
    model.n_labels = truth.n_labels;
    model.n_topics = truth.n_topics;
    model.O = truth.O;
    model.Q = truth.Q;
    model.pi = truth.pi;
    model.pi_raw = truth.pi;
    auto err = align_and_error(truth, model);
    CHECK(err.mu_errs.maxCoeff() == 0.0);
    CHECK(err.gamma_errs.maxCoeff() == 0.0);
    CHECK(err.pi_errs.maxCoeff() == 0.0);
    CHECK(err.pi_errs_raw.maxCoeff() == 0.0);
}

TEST_CASE("align_and_error: permuted columns are absorbed") {
    auto truth = sample_params(12, 8, 4, 0.5, 14);
    SpectralModel model;
    model.n_words = truth.n_words;
    model.n_labels = truth.n_labels;
    model.n_topics = truth.n_topics;
    const int perm[] = {2, 3, 1, 0};
    model.O.resize(12, 4);
    model.Q.resize(8, 4);
    model.pi.resize(4);
    for (int i = 0; i < 4; ++i) {
        model.O.col(perm[i]) = truth.O.col(i);
        model.Q.col(perm[i]) = truth.Q.col(i);
        model.pi[perm[i]] = truth.pi[i];
    }
    model.pi_raw = model.pi;
    auto err = align_and_error(truth, model);
    CHECK(err.mu_errs.maxCoeff() == 0.0);
    CHECK(err.gamma_errs.maxCoeff() == 0.0);
    CHECK(err.pi_errs.maxCoeff() == 0.0);
    for (int i = 0; i < 4; ++i) {
        CHECK(err.permutation[static_cast<std::size_t>(i)] == perm[i]);
    }
}

TEST_CASE("align_and_error: direct two-norm") {
    GroundTruth truth;
    truth.n_words = 2;
    truth.n_labels = 1;
    truth.n_topics = 1;
    truth.O.resize(2, 1);
    truth.O << 1.0, 0.0;
    truth.Q = Eigen::MatrixXd::Ones(1, 1);
    truth.pi = Eigen::VectorXd::Ones(1);
    SpectralModel model;
    model.n_words = 2;
    model.n_labels = 1;
    model.n_topics = 1;
    model.O.resize(2, 1);
    model.O << 0.9, 0.1;
    model.Q = Eigen::MatrixXd::Ones(1, 1);
    model.pi = Eigen::VectorXd::Ones(1);
    model.pi_raw = model.pi;
    auto err = align_and_error(truth, model);
    CHECK(err.mu_errs[0] == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
}

TEST_CASE("align_and_error: dimension mismatch") {
    auto truth = sample_params(5, 4, 2, 0.5, 15);
    SpectralModel model;
    model.n_words = 6;
    model.n_labels = 4;
    model.n_topics = 2;
    CHECK_THROWS_AS(align_and_error(truth, model), data_error);
}

TEST_CASE("theorem_bounds: epsilon_1 limit at delta=1") {
    BoundInputs in;
    in.sigma1 = 1.0;
    in.sigma_k = 1.0;
    in.scales.d2s = in.scales.d3s = in.scales.dls = 1.0;
    in.n = 1;
    in.delta = 1.0;
    in.k = 2;
    auto b = theorem_bounds(in);
    CHECK(b.epsilon1 == 1.0);
}

TEST_CASE("theorem_bounds: pi bound closed form") {
    BoundInputs in;
    in.sigma1 = 1.0;
    in.sigma_k = 1.0;
    in.scales.d2s = in.scales.d3s = in.scales.dls = 1.0;
    in.n = 1;
    in.delta = 1.0;
    in.k = 2;
    auto b = theorem_bounds(in);
    CHECK(b.pi_bound ==
          doctest::Approx(200.0 + 40.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("theorem_bounds: quadrupling N halves every bound exactly") {
    BoundInputs in;
    in.sigma1 = 0.2;
    in.sigma_k = 0.05;
    in.scales.d2s = 380.0;
    in.scales.d3s = 7000.0;
    in.scales.dls = 1100.0;
    in.n = 12345;
    in.delta = 0.05;
    in.k = 5;
    auto a = theorem_bounds(in);
    in.n *= 4;
    auto b = theorem_bounds(in);
    CHECK(b.mu_bound == a.mu_bound / 2);
    CHECK(b.gamma_bound == a.gamma_bound / 2);
    CHECK(b.pi_bound == a.pi_bound / 2);
}

TEST_CASE("theorem_bounds: monotonicity in N, delta, sigma_K") {
    BoundInputs in;
    in.sigma1 = 0.3;
    in.sigma_k = 0.1;
    in.scales.d2s = 100.0;
    in.scales.d3s = 900.0;
    in.scales.dls = 250.0;
    in.n = 1000;
    in.delta = 0.5;
    in.k = 3;
    auto base = theorem_bounds(in);

    in.n = 2000;
    auto more_data = theorem_bounds(in);
    CHECK(more_data.mu_bound < base.mu_bound);
    in.n = 1000;

    in.delta = 0.9;
    auto higher_delta = theorem_bounds(in);
    CHECK(higher_delta.mu_bound < base.mu_bound);
    in.delta = 0.5;

    in.sigma_k = 0.05;
    auto smaller_gap = theorem_bounds(in);
    CHECK(smaller_gap.mu_bound > base.mu_bound);
    CHECK(smaller_gap.gamma_bound > base.gamma_bound);
    CHECK(smaller_gap.pi_bound > base.pi_bound);
}

TEST_CASE("theorem_bounds: input validation") {
    BoundInputs in;
    in.sigma1 = 1.0;
    in.sigma_k = 0.0;
    in.n = 1;
    in.k = 1;
    CHECK_THROWS_AS(theorem_bounds(in), data_error);
    in.sigma_k = 1.0;
    in.delta = 0.0;
    CHECK_THROWS_AS(theorem_bounds(in), data_error);
    in.delta = 1.5;
    CHECK_THROWS_AS(theorem_bounds(in), data_error);
}

TEST_CASE("convergence_experiment: deterministic and well-formed CSV") {
    auto truth = sample_params(20, 10, 2, 0.8, 16);
    ExperimentConfig config;
    config.train.power_iters = 60;
    config.words_per_doc = 8;
    config.labels_per_doc = 2;
    const std::size_t grid[] = {400, 800};
    auto a = convergence_experiment(truth, grid, 2, 7, config);
    auto b = convergence_experiment(truth, grid, 2, 7, config);
    REQUIRE(a.size() == 2);
    CHECK(a[0].n == 400);
    CHECK(a[1].n == 800);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].mu_err == b[i].mu_err);
        CHECK(a[i].gamma_err == b[i].gamma_err);
        CHECK(a[i].pi_err == b[i].pi_err);
        CHECK(a[i].failed_trials == 0);
    }
    std::ostringstream csv;
    write_convergence_csv(csv, a);
    CHECK(csv.str().rfind("N,mu_err,gamma_err,pi_err\n", 0) == 0);
    CHECK(std::count(csv.str().begin(), csv.str().end(), '\n') == 3);
}

TEST_CASE("convergence_experiment: grid must ascend") {
    auto truth = sample_params(10, 5, 2, 0.8, 17);
    ExperimentConfig config;
    const std::size_t grid[] = {800, 400};
    CHECK_THROWS_AS(convergence_experiment(truth, grid, 1, 1, config),
                    data_error);
}
