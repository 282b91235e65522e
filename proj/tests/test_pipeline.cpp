#include <doctest.h>

#include "helpers.hpp"
#include "smom/moments.hpp"
#include "smom/pipeline.hpp"
#include "smom/spectral.hpp"
#include "smom/synth.hpp"

using namespace smom;

namespace {

std::pair<SparseCorpus, LabelSet> small_synthetic(std::uint64_t seed) {
    auto truth = sample_params(30, 12, 3, 0.5, seed);
    return generate_corpus(truth, 4000, 10, 2, seed + 1);
}

}  // namespace

TEST_CASE("a full train makes exactly three data passes") {
    auto [corpus, labels] = small_synthetic(41);
    TrainOptions opts;
    opts.k = 3;
    auto result = train_model(corpus, labels, opts);
    CHECK(result.data_passes == 3);
    CHECK(result.model.n_topics == 3);
    CHECK(result.m2_values.size() == 3);
    CHECK(result.lambdas.size() == 3);
    CHECK(result.lambdas.minCoeff() > 0.0);
}

TEST_CASE("trained model satisfies the stochasticity invariants") {
    auto [corpus, labels] = small_synthetic(43);
    TrainOptions opts;
    opts.k = 3;
    auto result = train_model(corpus, labels, opts);
    for (Eigen::Index c = 0; c < 3; ++c) {
        CHECK(result.model.O.col(c).sum() ==
              doctest::Approx(1.0).epsilon(1e-10));
        CHECK(result.model.O.col(c).minCoeff() >= 0.0);
        CHECK(result.model.Q.col(c).sum() ==
              doctest::Approx(1.0).epsilon(1e-10));
        CHECK(result.model.Q.col(c).minCoeff() >= 0.0);
    }
    CHECK(result.model.pi.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(result.model.pi.minCoeff() > 0.0);
}

TEST_CASE("whitening identity holds on the trained corpus") {
    auto [corpus, labels] = small_synthetic(47);
    auto m2 = estimate_m2(corpus);
    auto eig = truncated_eig(m2, 3, 1e-10, 10 * corpus.n_words, 42);
    auto basis = whitening_from_eig(eig);
    Eigen::MatrixXd whitened = basis.W.transpose() * m2.matrix * basis.W;
    CHECK((whitened - Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-8);
}

TEST_CASE("training is bitwise deterministic for a fixed seed") {
    auto [corpus, labels] = small_synthetic(53);
    TrainOptions opts;
    opts.k = 3;
    opts.seed = 7;
    auto a = train_model(corpus, labels, opts);
    auto b = train_model(corpus, labels, opts);
    CHECK(a.model.O == b.model.O);
    CHECK(a.model.Q == b.model.Q);
    CHECK(a.model.pi == b.model.pi);
    CHECK(a.model.pi_raw == b.model.pi_raw);
}

TEST_CASE("parallel training matches the sequential reference") {
    auto [corpus, labels] = small_synthetic(59);
    TrainOptions opts;
    opts.k = 3;
    auto seq = train_model(corpus, labels, opts);
    opts.threads = 3;
    auto par = train_model(corpus, labels, opts);
    CHECK((seq.model.O - par.model.O).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((seq.model.Q - par.model.Q).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((seq.model.pi - par.model.pi).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("model is invariant to upstream eigenvector sign flips") {
    auto [corpus, labels] = small_synthetic(61);
    auto m2 = estimate_m2(corpus);
    auto eig = truncated_eig(m2, 3, 1e-10, 10 * corpus.n_words, 42);

    auto flipped = eig;
    flipped.vectors.col(0) = -flipped.vectors.col(0);
    flipped.vectors.col(2) = -flipped.vectors.col(2);
    canonicalize_columns(flipped.vectors);
    CHECK(flipped.vectors == eig.vectors);
}

TEST_CASE("train rejects k = 0 and mismatched labels") {
    auto [corpus, labels] = small_synthetic(67);
    TrainOptions opts;
    CHECK_THROWS_AS(train_model(corpus, labels, opts), data_error);
    opts.k = 2;
    labels.rows.pop_back();
    labels.n_docs -= 1;
    CHECK_THROWS_AS(train_model(corpus, labels, opts), data_error);
}

TEST_CASE("stage timings cover every stage") {
    auto [corpus, labels] = small_synthetic(71);
    TrainOptions opts;
    opts.k = 2;
    auto result = train_model(corpus, labels, opts);
    REQUIRE(result.timings.size() == 6);
    CHECK(result.timings[0].stage == "m2_pass");
    CHECK(result.timings[5].stage == "assemble");
}
