// smom: spectral method-of-moments training and label ranking for sparse
// multi-label text corpora.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smom/corpus.hpp"
#include "smom/eval.hpp"
#include "smom/model.hpp"
#include "smom/moments.hpp"
#include "smom/pipeline.hpp"
#include "smom/spectral.hpp"
#include "smom/synth.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

smom::ParsedCorpus load_data(const std::string& path, bool expect_labels) {
    std::ifstream in(path);
    if (!in) throw smom::data_error("cannot open '" + path + "'");
    return smom::parse_corpus(in, expect_labels);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct TrainArgs {
    std::string data;
    std::string model;
    smom::TrainOptions opts;
};

int run_train(const TrainArgs& args) {
    smom::ParsedCorpus parsed = load_data(args.data, true);
    const auto& corpus = parsed.corpus;
    const auto& labels = *parsed.labels;

    const std::size_t k = args.opts.k;
    if (corpus.n_docs < k * k) {
        std::cerr << "warning: N=" << corpus.n_docs << " is below K^2="
                  << k * k << "; moment estimates may be unreliable\n";
    }

    const smom::TrainResult result =
        smom::train_model(corpus, labels, args.opts);
    smom::save_model_file(result.model, args.model);

    std::cout << "docs       " << corpus.n_docs << "\nvocab      "
              << corpus.n_words << "\nlabels     " << labels.n_labels
              << "\ntopics     " << k << "\npasses     " << result.data_passes
              << '\n';
    for (const auto& stage : result.timings) {
        std::cout << "time[" << stage.stage << "]";
        for (std::size_t i = stage.stage.size(); i < 13; ++i) std::cout << ' ';
        std::cout << fmt(stage.seconds) << " s\n";
    }
    std::cout << "sigma_1    " << fmt(result.m2_values[0]) << "\nsigma_K    "
              << fmt(result.m2_values[result.m2_values.size() - 1])
              << "\nlambda_min " << fmt(result.lambdas.minCoeff())
              << "\nlambda_max " << fmt(result.lambdas.maxCoeff())
              << "\nmodel      " << args.model << '\n';
    return 0;
}

struct PredictArgs {
    std::string data;
    std::string model;
    std::string out = "-";
    std::size_t top = 0;  // 0 = all labels
    double smoothing = smom::kDefaultSmoothing;
    int threads = 1;
};

void write_predictions(std::ostream& out, const smom::SpectralModel& model,
                       const smom::SparseCorpus& corpus,
                       const PredictArgs& args) {
    const std::optional<std::size_t> top =
        args.top ? std::optional<std::size_t>(args.top) : std::nullopt;
    for (std::size_t i = 0; i < corpus.n_docs; ++i) {
        const smom::LabelScores pred = smom::predict_labels(
            model, corpus.rows[i], top, args.smoothing);
        out << i;
        for (std::uint32_t label : pred.ranking) {
            out << '\t' << label << ':' << fmt(pred.scores[label]);
        }
        out << '\n';
    }
}

int run_predict(const PredictArgs& args) {
    const smom::SpectralModel model = smom::load_model_file(args.model);
    smom::ParsedCorpus parsed = load_data(args.data, false);
    if (parsed.corpus.n_words != model.n_words) {
        throw smom::data_error("data vocabulary size does not match the model");
    }
    if (args.out == "-") {
        write_predictions(std::cout, model, parsed.corpus, args);
    } else {
        std::ofstream out(args.out);
        if (!out) throw smom::data_error("cannot open '" + args.out + "'");
        write_predictions(out, model, parsed.corpus, args);
    }
    return 0;
}

struct EvalArgs {
    std::string data;
    std::string model;
    std::vector<std::size_t> at = {1, 3, 5};
    std::string csv;
    double smoothing = smom::kDefaultSmoothing;
    int threads = 1;
};

int run_eval(const EvalArgs& args) {
    const smom::SpectralModel model = smom::load_model_file(args.model);
    smom::ParsedCorpus parsed = load_data(args.data, true);
    const smom::MetricReport report =
        smom::macro_auc(model, parsed.corpus, *parsed.labels, args.at,
                        args.smoothing, args.threads);
    smom::print_report(std::cout, report);
    if (!args.csv.empty()) {
        std::ofstream out(args.csv);
        if (!out) throw smom::data_error("cannot open '" + args.csv + "'");
        smom::write_report_csv(out, report);
    }
    return 0;
}

struct SynthArgs {
    std::size_t d = 100;
    std::size_t l = 50;
    std::size_t k = 5;
    std::size_t docs = 10000;
    std::size_t words = 20;
    std::size_t labels = 3;
    double concentration = 0.3;
    std::uint64_t seed = 42;
    std::string out;
    std::string truth;
};

int run_synth(const SynthArgs& args) {
    const smom::GroundTruth truth = smom::sample_params(
        args.d, args.l, args.k, args.concentration, args.seed);
    auto [corpus, labels] = smom::generate_corpus(truth, args.docs, args.words,
                                                  args.labels, args.seed);
    {
        std::ofstream out(args.out);
        if (!out) throw smom::data_error("cannot open '" + args.out + "'");
        smom::serialize_corpus(out, corpus, &labels);
    }
    if (!args.truth.empty()) {
        // the truth file reuses the model format; pi_raw doubles as pi
        smom::SpectralModel as_model;
        as_model.n_words = truth.n_words;
        as_model.n_labels = truth.n_labels;
        as_model.n_topics = truth.n_topics;
        as_model.O = truth.O;
        as_model.Q = truth.Q;
        as_model.pi = truth.pi;
        as_model.pi_raw = truth.pi;
        smom::save_model_file(as_model, args.truth);
    }
    std::cout << "corpus     " << args.out << "\ndocs       " << args.docs
              << "\nvocab      " << args.d << "\nlabels     " << args.l
              << "\ntopics     " << args.k << '\n';
    if (!args.truth.empty()) std::cout << "truth      " << args.truth << '\n';
    return 0;
}

struct BoundsArgs {
    std::string data;
    std::size_t k = 0;
    double delta = 0.05;
    double c1 = 1.0;
    double c2 = 1.0;
    double pi_max = 1.0;
    double pi_min = 1.0;
    double eig_tol = 1e-10;
    std::uint64_t seed = 42;
    int threads = 1;
};

int run_bounds(const BoundsArgs& args) {
    smom::ParsedCorpus parsed = load_data(args.data, true);
    const auto& corpus = parsed.corpus;

    smom::BoundInputs inputs;
    inputs.scales = smom::corpus_stats(corpus, parsed.labels ? &*parsed.labels
                                                             : nullptr);
    const smom::PairwiseMoment m2 = smom::estimate_m2(corpus, args.threads);
    const smom::EigPairs eig = smom::truncated_eig(
        m2, args.k, args.eig_tol, 10 * corpus.n_words, args.seed);
    inputs.sigma1 = eig.values[0];
    inputs.sigma_k = eig.values[eig.values.size() - 1];
    inputs.n = corpus.n_docs;
    inputs.delta = args.delta;
    inputs.k = args.k;
    inputs.c1 = args.c1;
    inputs.c2 = args.c2;
    inputs.pi_max = args.pi_max;
    inputs.pi_min = args.pi_min;

    const smom::TheoremBounds b = smom::theorem_bounds(inputs);
    std::cout << "N            " << inputs.n << "\nK            " << args.k
              << "\nsigma_1      " << fmt(inputs.sigma1) << "\nsigma_K      "
              << fmt(inputs.sigma_k) << "\nd2s          "
              << fmt(inputs.scales.d2s) << "\nd3s          "
              << fmt(inputs.scales.d3s) << "\ndls          "
              << fmt(inputs.scales.dls) << "\nepsilon_1    " << fmt(b.epsilon1)
              << "\nepsilon_2    " << fmt(b.epsilon2) << "\nmu_bound     "
              << fmt(b.mu_bound) << "\ngamma_bound  " << fmt(b.gamma_bound)
              << "\npi_bound     " << fmt(b.pi_bound) << "\nn1           "
              << fmt(b.n1) << "\nn2           " << fmt(b.n2)
              << " (up to constants)\nn3           " << fmt(b.n3)
              << " (up to constants)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral method-of-moments multi-label text model"};
    app.require_subcommand(1);

    TrainArgs train;
    auto* cmd_train = app.add_subcommand(
        "train", "Extract model parameters in three data passes");
    cmd_train->add_option("--data", train.data, "labeled corpus file")
        ->required();
    cmd_train->add_option("--model", train.model, "output model file")
        ->required();
    cmd_train->add_option("--k", train.opts.k, "number of latent topics")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_train->add_option("--restarts", train.opts.restarts,
                          "tensor power restarts (default 10+2K)");
    cmd_train->add_option("--power-iters", train.opts.power_iters,
                          "power iteration cap per restart");
    cmd_train->add_option("--eig-tol", train.opts.eig_tol,
                          "eigensolver residual tolerance");
    cmd_train->add_option("--tpm-tol", train.opts.tpm_tol,
                          "tensor power convergence tolerance");
    cmd_train->add_option("--seed", train.opts.seed, "random seed");
    cmd_train->add_option("--threads", train.opts.threads,
                          "worker threads (1 = deterministic reference)");

    PredictArgs predict;
    auto* cmd_predict =
        app.add_subcommand("predict", "Rank labels for each document");
    cmd_predict->add_option("--data", predict.data, "corpus file")->required();
    cmd_predict->add_option("--model", predict.model, "model file")->required();
    cmd_predict->add_option("--out", predict.out, "output TSV ('-' = stdout)");
    cmd_predict->add_option("--top", predict.top,
                            "emit only the top-m labels (default: all)");
    cmd_predict->add_option("--smoothing", predict.smoothing,
                            "additive smoothing for unseen words");
    cmd_predict->add_option("--threads", predict.threads, "worker threads");

    EvalArgs eval;
    auto* cmd_eval =
        app.add_subcommand("eval", "Macro-averaged AUC and precision@m");
    cmd_eval->add_option("--data", eval.data, "labeled corpus file")->required();
    cmd_eval->add_option("--model", eval.model, "model file")->required();
    cmd_eval->add_option("--at", eval.at, "precision cutoffs");
    cmd_eval->add_option("--csv", eval.csv, "also write the report as CSV");
    cmd_eval->add_option("--smoothing", eval.smoothing,
                         "additive smoothing for unseen words");
    cmd_eval->add_option("--threads", eval.threads, "worker threads");

    SynthArgs synth;
    auto* cmd_synth = app.add_subcommand(
        "synth", "Sample ground-truth parameters and a corpus");
    cmd_synth->add_option("--d", synth.d, "vocabulary size");
    cmd_synth->add_option("--l", synth.l, "label count");
    cmd_synth->add_option("--k", synth.k, "topic count")
        ->check(CLI::PositiveNumber);
    cmd_synth->add_option("--docs", synth.docs, "documents to generate");
    cmd_synth->add_option("--words", synth.words, "word draws per document");
    cmd_synth->add_option("--labels", synth.labels, "label draws per document");
    cmd_synth->add_option("--concentration", synth.concentration,
                          "Dirichlet concentration");
    cmd_synth->add_option("--seed", synth.seed, "random seed");
    cmd_synth->add_option("--out", synth.out, "corpus output file")->required();
    cmd_synth->add_option("--truth", synth.truth,
                          "ground-truth parameters (model file format)");

    BoundsArgs bounds;
    auto* cmd_bounds = app.add_subcommand(
        "bounds", "Parameter-error bounds and sample thresholds for a corpus");
    cmd_bounds->add_option("--data", bounds.data, "corpus file")->required();
    cmd_bounds->add_option("--k", bounds.k, "topic count")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_bounds->add_option("--delta", bounds.delta, "confidence parameter");
    cmd_bounds->add_option("--c1", bounds.c1, "power-method constant c1");
    cmd_bounds->add_option("--c2", bounds.c2, "power-method constant c2");
    cmd_bounds->add_option("--pi-max", bounds.pi_max, "largest prior weight");
    cmd_bounds->add_option("--pi-min", bounds.pi_min, "smallest prior weight");
    cmd_bounds->add_option("--eig-tol", bounds.eig_tol,
                           "eigensolver residual tolerance");
    cmd_bounds->add_option("--seed", bounds.seed, "random seed");
    cmd_bounds->add_option("--threads", bounds.threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (cmd_train->parsed()) return run_train(train);
        if (cmd_predict->parsed()) return run_predict(predict);
        if (cmd_eval->parsed()) return run_eval(eval);
        if (cmd_synth->parsed()) return run_synth(synth);
        if (cmd_bounds->parsed()) return run_bounds(bounds);
    } catch (const smom::parse_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const smom::data_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const smom::numeric_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
