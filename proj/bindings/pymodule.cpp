#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "smom/corpus.hpp"
#include "smom/eval.hpp"
#include "smom/model.hpp"
#include "smom/pipeline.hpp"
#include "smom/synth.hpp"

namespace py = pybind11;

namespace {

smom::ParsedCorpus parse_from_string(const std::string& text,
                                     bool expect_labels) {
    std::istringstream in(text);
    return smom::parse_corpus(in, expect_labels);
}

smom::ParsedCorpus parse_from_file(const std::string& path,
                                   bool expect_labels) {
    std::ifstream in(path);
    if (!in) throw smom::data_error("cannot open '" + path + "'");
    return smom::parse_corpus(in, expect_labels);
}

std::string corpus_to_string(const smom::SparseCorpus& corpus,
                             const smom::LabelSet* labels) {
    std::ostringstream out;
    smom::serialize_corpus(out, corpus, labels);
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_smom, m) {
    m.doc() = "Spectral method-of-moments multi-label text model";

    py::register_exception<smom::parse_error>(m, "ParseError");
    py::register_exception<smom::data_error>(m, "DataError");
    py::register_exception<smom::numeric_error>(m, "NumericError");

    py::class_<smom::SparseCorpus>(m, "SparseCorpus")
        .def(py::init([](std::size_t n_words,
                         std::vector<std::vector<std::uint32_t>> rows) {
                 smom::SparseCorpus c;
                 c.n_docs = rows.size();
                 c.n_words = n_words;
                 c.rows = std::move(rows);
                 return c;
             }),
             py::arg("n_words"), py::arg("rows"))
        .def_readonly("n_docs", &smom::SparseCorpus::n_docs)
        .def_readonly("n_words", &smom::SparseCorpus::n_words)
        .def_readonly("rows", &smom::SparseCorpus::rows)
        .def("nnz", &smom::SparseCorpus::nnz, py::arg("doc"));

    py::class_<smom::LabelSet>(m, "LabelSet")
        .def(py::init([](std::size_t n_labels,
                         std::vector<std::vector<std::uint32_t>> rows) {
                 smom::LabelSet s;
                 s.n_docs = rows.size();
                 s.n_labels = n_labels;
                 s.rows = std::move(rows);
                 return s;
             }),
             py::arg("n_labels"), py::arg("rows"))
        .def_readonly("n_docs", &smom::LabelSet::n_docs)
        .def_readonly("n_labels", &smom::LabelSet::n_labels)
        .def_readonly("rows", &smom::LabelSet::rows);

    py::class_<smom::MomentScales>(m, "MomentScales")
        .def_readonly("d1s", &smom::MomentScales::d1s)
        .def_readonly("d2s", &smom::MomentScales::d2s)
        .def_readonly("d3s", &smom::MomentScales::d3s)
        .def_readonly("dls", &smom::MomentScales::dls);

    py::class_<smom::SpectralModel>(m, "SpectralModel")
        .def_readonly("n_words", &smom::SpectralModel::n_words)
        .def_readonly("n_labels", &smom::SpectralModel::n_labels)
        .def_readonly("n_topics", &smom::SpectralModel::n_topics)
        .def_readonly("O", &smom::SpectralModel::O)
        .def_readonly("Q", &smom::SpectralModel::Q)
        .def_readonly("pi", &smom::SpectralModel::pi)
        .def_readonly("pi_raw", &smom::SpectralModel::pi_raw)
        .def("save", &smom::save_model_file, py::arg("path"))
        .def_static("load", &smom::load_model_file, py::arg("path"));

    py::class_<smom::GroundTruth>(m, "GroundTruth")
        .def_readonly("n_words", &smom::GroundTruth::n_words)
        .def_readonly("n_labels", &smom::GroundTruth::n_labels)
        .def_readonly("n_topics", &smom::GroundTruth::n_topics)
        .def_readonly("O", &smom::GroundTruth::O)
        .def_readonly("Q", &smom::GroundTruth::Q)
        .def_readonly("pi", &smom::GroundTruth::pi);

    py::class_<smom::TrainResult>(m, "TrainResult")
        .def_readonly("model", &smom::TrainResult::model)
        .def_readonly("data_passes", &smom::TrainResult::data_passes)
        .def_readonly("m2_values", &smom::TrainResult::m2_values)
        .def_readonly("lambdas", &smom::TrainResult::lambdas);

    py::class_<smom::RecoveryError>(m, "RecoveryError")
        .def_readonly("mu_errs", &smom::RecoveryError::mu_errs)
        .def_readonly("gamma_errs", &smom::RecoveryError::gamma_errs)
        .def_readonly("pi_errs", &smom::RecoveryError::pi_errs)
        .def_readonly("pi_errs_raw", &smom::RecoveryError::pi_errs_raw)
        .def_readonly("permutation", &smom::RecoveryError::permutation);

    py::class_<smom::MetricReport>(m, "MetricReport")
        .def_readonly("macro_auc", &smom::MetricReport::macro_auc)
        .def_readonly("per_doc_auc", &smom::MetricReport::per_doc_auc)
        .def_readonly("precision_at", &smom::MetricReport::precision_at)
        .def_readonly("n_docs", &smom::MetricReport::n_docs)
        .def_readonly("n_skipped", &smom::MetricReport::n_skipped);

    m.def(
        "load_corpus",
        [](const std::string& path, bool expect_labels) {
            auto parsed = parse_from_file(path, expect_labels);
            return py::make_tuple(parsed.corpus, parsed.labels);
        },
        py::arg("path"), py::arg("expect_labels") = true,
        "Read a corpus file; returns (corpus, labels or None).");
    m.def(
        "parse_corpus",
        [](const std::string& text, bool expect_labels) {
            auto parsed = parse_from_string(text, expect_labels);
            return py::make_tuple(parsed.corpus, parsed.labels);
        },
        py::arg("text"), py::arg("expect_labels") = true,
        "Parse the corpus text format; returns (corpus, labels or None).");
    m.def(
        "serialize_corpus",
        [](const smom::SparseCorpus& corpus, const smom::LabelSet* labels) {
            return corpus_to_string(corpus, labels);
        },
        py::arg("corpus"), py::arg("labels") = nullptr);
    m.def(
        "corpus_stats",
        [](const smom::SparseCorpus& corpus, const smom::LabelSet* labels) {
            return smom::corpus_stats(corpus, labels);
        },
        py::arg("corpus"), py::arg("labels") = nullptr);

    m.def(
        "train",
        [](const smom::SparseCorpus& corpus, const smom::LabelSet& labels,
           std::size_t k, std::size_t restarts, std::size_t power_iters,
           double eig_tol, double tpm_tol, std::uint64_t seed, int threads) {
            smom::TrainOptions opts;
            opts.k = k;
            opts.restarts = restarts;
            opts.power_iters = power_iters;
            opts.eig_tol = eig_tol;
            opts.tpm_tol = tpm_tol;
            opts.seed = seed;
            opts.threads = threads;
            return smom::train_model(corpus, labels, opts);
        },
        py::arg("corpus"), py::arg("labels"), py::arg("k"),
        py::arg("restarts") = 0, py::arg("power_iters") = 100,
        py::arg("eig_tol") = 1e-10, py::arg("tpm_tol") = 1e-10,
        py::arg("seed") = 42, py::arg("threads") = 1,
        "Run the three-pass parameter extraction.");

    m.def(
        "posterior_topics",
        [](const smom::SpectralModel& model,
           const std::vector<std::uint32_t>& words, double smoothing) {
            return smom::posterior_topics(model, words, smoothing).weights;
        },
        py::arg("model"), py::arg("words"),
        py::arg("smoothing") = smom::kDefaultSmoothing);
    m.def(
        "predict_labels",
        [](const smom::SpectralModel& model,
           const std::vector<std::uint32_t>& words,
           std::optional<std::size_t> top, double smoothing) {
            auto scores = smom::predict_labels(model, words, top, smoothing);
            return py::make_tuple(scores.scores, scores.ranking);
        },
        py::arg("model"), py::arg("words"), py::arg("top") = std::nullopt,
        py::arg("smoothing") = smom::kDefaultSmoothing,
        "Returns (scores over all labels, ranked label indices).");

    m.def("sample_params", &smom::sample_params, py::arg("d"), py::arg("l"),
          py::arg("k"), py::arg("concentration"), py::arg("seed"));
    m.def(
        "generate_corpus",
        [](const smom::GroundTruth& truth, std::size_t n_docs,
           std::size_t words_per_doc, std::size_t labels_per_doc,
           std::uint64_t seed) {
            auto [corpus, labels] = smom::generate_corpus(
                truth, n_docs, words_per_doc, labels_per_doc, seed);
            return py::make_tuple(corpus, labels);
        },
        py::arg("truth"), py::arg("n_docs"), py::arg("words_per_doc"),
        py::arg("labels_per_doc"), py::arg("seed"));
    m.def("align_and_error", &smom::align_and_error, py::arg("truth"),
          py::arg("model"));

    m.def(
        "theorem_bounds",
        [](double sigma1, double sigma_k, double d2s, double d3s, double dls,
           std::size_t n, double delta, std::size_t k, double c1, double c2,
           double pi_max, double pi_min) {
            smom::BoundInputs in;
            in.sigma1 = sigma1;
            in.sigma_k = sigma_k;
            in.scales.d2s = d2s;
            in.scales.d3s = d3s;
            in.scales.dls = dls;
            in.n = n;
            in.delta = delta;
            in.k = k;
            in.c1 = c1;
            in.c2 = c2;
            in.pi_max = pi_max;
            in.pi_min = pi_min;
            const auto b = smom::theorem_bounds(in);
            py::dict out;
            out["epsilon1"] = b.epsilon1;
            out["epsilon2"] = b.epsilon2;
            out["mu_bound"] = b.mu_bound;
            out["gamma_bound"] = b.gamma_bound;
            out["pi_bound"] = b.pi_bound;
            out["n1"] = b.n1;
            out["n2"] = b.n2;
            out["n3"] = b.n3;
            return out;
        },
        py::arg("sigma1"), py::arg("sigma_k"), py::arg("d2s"), py::arg("d3s"),
        py::arg("dls"), py::arg("n"), py::arg("delta") = 0.05, py::arg("k") = 1,
        py::arg("c1") = 1.0, py::arg("c2") = 1.0, py::arg("pi_max") = 1.0,
        py::arg("pi_min") = 1.0);

    m.def(
        "doc_auc",
        [](const std::vector<double>& scores,
           const std::vector<std::uint32_t>& positives) {
            return smom::doc_auc(scores, positives);
        },
        py::arg("scores"), py::arg("positives"));
    m.def(
        "macro_auc",
        [](const smom::SpectralModel& model, const smom::SparseCorpus& corpus,
           const smom::LabelSet& labels, const std::vector<std::size_t>& at,
           double smoothing, int threads) {
            return smom::macro_auc(model, corpus, labels, at, smoothing,
                                   threads);
        },
        py::arg("model"), py::arg("corpus"), py::arg("labels"),
        py::arg("at") = std::vector<std::size_t>{1, 3, 5},
        py::arg("smoothing") = smom::kDefaultSmoothing, py::arg("threads") = 1);
}
