#include "smom/pipeline.hpp"

#include <chrono>

#include "smom/moments.hpp"
#include "smom/spectral.hpp"
#include "smom/tensor_power.hpp"

namespace smom {

namespace {

class StageClock {
public:
    explicit StageClock(std::vector<StageTime>& out) : out_(out) {}

    template <class F>
    auto run(const std::string& stage, F&& f) {
        const auto start = std::chrono::steady_clock::now();
        auto result = f();
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - start;
        out_.push_back({stage, elapsed.count()});
        return result;
    }

private:
    std::vector<StageTime>& out_;
};

}  // namespace

TrainResult train_model(const SparseCorpus& corpus, const LabelSet& labels,
                        const TrainOptions& opts) {
    if (opts.k == 0) {
        throw data_error("topic count k must be at least 1");
    }
    if (labels.n_docs != corpus.n_docs) {
        throw data_error("label row count does not match corpus");
    }

    TrainResult result;
    StageClock clock(result.timings);

    result.scales = corpus_stats(corpus, &labels);

    const PairwiseMoment m2 = clock.run("m2_pass", [&] {
        auto m = estimate_m2(corpus, opts.threads);
        ++result.data_passes;
        return m;
    });

    const std::size_t eig_iter =
        opts.eig_max_iter ? opts.eig_max_iter : 10 * corpus.n_words;
    const EigPairs eig = clock.run("eig", [&] {
        return truncated_eig(m2, opts.k, opts.eig_tol, eig_iter, opts.seed);
    });
    const WhiteningBasis basis =
        clock.run("whiten", [&] { return whitening_from_eig(eig); });

    const WhitenedThirdMoment t3 = clock.run("m3_pass", [&] {
        auto t = whitened_third_moment(corpus, basis, opts.threads);
        ++result.data_passes;
        return t;
    });

    const TensorEigs teigs = clock.run("tensor_power", [&] {
        return tensor_power_method(t3, opts.k, opts.effective_restarts(),
                                   opts.power_iters, opts.tpm_tol, opts.seed);
    });

    const RawLabelProjection raw_q = clock.run("q_pass", [&] {
        auto q = estimate_raw_q(corpus, labels, basis, teigs, opts.threads);
        ++result.data_passes;
        return q;
    });

    result.model = clock.run(
        "assemble", [&] { return assemble_model(basis, teigs, raw_q); });
    result.m2_values = eig.values;
    result.lambdas = teigs.values;
    return result;
}

}  // namespace smom
