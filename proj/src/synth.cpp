#include "smom/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "smom/assignment.hpp"

namespace smom {

namespace {

Eigen::VectorXd dirichlet(std::mt19937_64& rng, std::size_t dim,
                          double concentration) {
    std::gamma_distribution<double> gamma(concentration, 1.0);
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    double sum = 0.0;
    do {
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            v[i] = gamma(rng);
        }
        sum = v.sum();
    } while (!(sum > 0.0));
    return v / sum;
}

double column_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double ma = a.mean();
    const double mb = b.mean();
    const Eigen::VectorXd ca = a.array() - ma;
    const Eigen::VectorXd cb = b.array() - mb;
    const double denom = ca.norm() * cb.norm();
    if (denom == 0.0) return 1.0;  // constant columns are indistinguishable
    return ca.dot(cb) / denom;
}

// Cumulative distribution for inverse-CDF sampling. The final entry is
// forced to 1 so a draw of u -> 1 cannot fall off the end.
std::vector<double> cumulative(const Eigen::VectorXd& p) {
    std::vector<double> cum(static_cast<std::size_t>(p.size()));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        acc += p[i];
        cum[static_cast<std::size_t>(i)] = acc;
    }
    cum.back() = 1.0;
    return cum;
}

std::uint32_t draw_index(const std::vector<double>& cum, double u) {
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const std::size_t idx = it == cum.end() ? cum.size() - 1
                                            : static_cast<std::size_t>(
                                                  it - cum.begin());
    return static_cast<std::uint32_t>(idx);
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    if (v.size() % 2 == 1) return v[mid];
    return 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

GroundTruth sample_params(std::size_t d, std::size_t l, std::size_t k,
                          double concentration, std::uint64_t seed) {
    if (k == 0 || k > std::min(d, l)) {
        throw data_error("k must satisfy 1 <= k <= min(D, L) for full-rank "
                         "parameters");
    }
    if (!(concentration > 0.0)) {
        throw data_error("Dirichlet concentration must be positive");
    }

    std::mt19937_64 rng(seed);
    GroundTruth truth;
    truth.n_words = d;
    truth.n_labels = l;
    truth.n_topics = k;

    truth.pi = dirichlet(rng, k, concentration);

    truth.O.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k));
    for (std::size_t c = 0; c < k; ++c) {
        truth.O.col(static_cast<Eigen::Index>(c)) = dirichlet(rng, d, concentration);
        // keep columns identifiable
        bool ok = false;
        for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
            ok = true;
            for (std::size_t prev = 0; prev < c; ++prev) {
                if (column_correlation(
                        truth.O.col(static_cast<Eigen::Index>(prev)),
                        truth.O.col(static_cast<Eigen::Index>(c))) > 0.95) {
                    truth.O.col(static_cast<Eigen::Index>(c)) =
                        dirichlet(rng, d, concentration);
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) {
            throw numeric_error("could not sample identifiable topic-word "
                                "columns; lower K or the concentration");
        }
    }

    truth.Q.resize(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k));
    for (std::size_t c = 0; c < k; ++c) {
        truth.Q.col(static_cast<Eigen::Index>(c)) = dirichlet(rng, l, concentration);
    }
    return truth;
}

std::pair<SparseCorpus, LabelSet> generate_corpus(const GroundTruth& truth,
                                                  std::size_t n_docs,
                                                  std::size_t words_per_doc,
                                                  std::size_t labels_per_doc,
                                                  std::uint64_t seed) {
    if (words_per_doc == 0) {
        throw data_error("words_per_doc must be at least 1");
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const std::vector<double> cum_pi = cumulative(truth.pi);
    std::vector<std::vector<double>> cum_words(truth.n_topics);
    std::vector<std::vector<double>> cum_labels(truth.n_topics);
    for (std::size_t t = 0; t < truth.n_topics; ++t) {
        cum_words[t] = cumulative(truth.O.col(static_cast<Eigen::Index>(t)));
        cum_labels[t] = cumulative(truth.Q.col(static_cast<Eigen::Index>(t)));
    }

    SparseCorpus corpus;
    corpus.n_docs = n_docs;
    corpus.n_words = truth.n_words;
    corpus.rows.resize(n_docs);
    LabelSet labels;
    labels.n_docs = n_docs;
    labels.n_labels = truth.n_labels;
    labels.rows.resize(n_docs);

    std::vector<std::uint32_t> scratch;
    for (std::size_t i = 0; i < n_docs; ++i) {
        const std::uint32_t topic = draw_index(cum_pi, unif(rng));

        scratch.clear();
        for (std::size_t w = 0; w < words_per_doc; ++w) {
            scratch.push_back(draw_index(cum_words[topic], unif(rng)));
        }
        std::sort(scratch.begin(), scratch.end());
        scratch.erase(std::unique(scratch.begin(), scratch.end()),
                      scratch.end());
        corpus.rows[i] = scratch;

        scratch.clear();
        for (std::size_t w = 0; w < labels_per_doc; ++w) {
            scratch.push_back(draw_index(cum_labels[topic], unif(rng)));
        }
        std::sort(scratch.begin(), scratch.end());
        scratch.erase(std::unique(scratch.begin(), scratch.end()),
                      scratch.end());
        labels.rows[i] = scratch;
    }
    return {std::move(corpus), std::move(labels)};
}

RecoveryError align_and_error(const GroundTruth& truth,
                              const SpectralModel& model) {
    if (truth.n_words != model.n_words || truth.n_labels != model.n_labels ||
        truth.n_topics != model.n_topics) {
        throw data_error("truth and model dimensions do not match");
    }
    const Eigen::Index k = static_cast<Eigen::Index>(truth.n_topics);

    Eigen::MatrixXd cost(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
            cost(a, b) = (truth.O.col(a) - model.O.col(b)).norm();
        }
    }

    RecoveryError err;
    err.permutation = min_cost_assignment(cost);
    err.mu_errs.resize(k);
    err.gamma_errs.resize(k);
    err.pi_errs.resize(k);
    err.pi_errs_raw.resize(k);
    for (Eigen::Index a = 0; a < k; ++a) {
        const Eigen::Index b = err.permutation[static_cast<std::size_t>(a)];
        err.mu_errs[a] = cost(a, b);
        err.gamma_errs[a] = (truth.Q.col(a) - model.Q.col(b)).norm();
        err.pi_errs[a] = std::abs(truth.pi[a] - model.pi[b]);
        err.pi_errs_raw[a] = std::abs(truth.pi[a] - model.pi_raw[b]);
    }
    return err;
}

TheoremBounds theorem_bounds(const BoundInputs& in) {
    if (!(in.sigma_k > 0.0) || in.sigma1 < in.sigma_k) {
        throw data_error("need 0 < sigma_K <= sigma_1");
    }
    if (!(in.delta > 0.0) || in.delta > 1.0) {
        throw data_error("delta must lie in (0, 1]");
    }
    if (in.n == 0 || in.k == 0) {
        throw data_error("sample count and k must be positive");
    }

    const double sqrt2 = std::sqrt(2.0);
    const double sk = in.sigma_k;
    const double sk_32 = std::pow(sk, 1.5);
    const double sk_52 = std::pow(sk, 2.5);
    const double sk_72 = std::pow(sk, 3.5);
    const double root_n = std::sqrt(static_cast<double>(in.n));
    const double kd = static_cast<double>(in.k);

    TheoremBounds out;
    out.epsilon1 = 1.0 + std::sqrt(std::log(1.0 / in.delta) / 2.0);
    out.epsilon2 = 1.0 + std::sqrt(std::log(2.0 / in.delta) / 2.0);

    const double d2s = in.scales.d2s;
    const double d3s = in.scales.d3s;
    const double dls = in.scales.dls;

    out.mu_bound = (160.0 * std::sqrt(in.sigma1) / (d2s * sk_52) +
                    32.0 * std::sqrt(2.0 * in.sigma1) / (d3s * sk_32) +
                    4.0 * std::sqrt(in.sigma1) / (d2s * sk)) *
                   out.epsilon1 / root_n;

    out.gamma_bound = (160.0 / (d2s * sk_72) + 32.0 * sqrt2 / (d3s * sk_52) +
                       (2.0 + 2.0 * sqrt2) / (d2s * sk * sk)) *
                          2.0 * out.epsilon1 / root_n +
                      8.0 * out.epsilon2 / (dls * sk * root_n);

    out.pi_bound = (200.0 / sk_52 + 40.0 * sqrt2 / sk_32) * out.epsilon1 /
                   (d3s * root_n);

    out.n1 = in.c2 * (std::log(kd) +
                      std::log(std::log(kd / in.c1 *
                                        std::sqrt(in.pi_max / in.pi_min))));
    const double n2_term = out.epsilon1 / (d2s * sk);
    out.n2 = n2_term * n2_term;
    const double n3_term = 10.0 / (d2s * sk_52) + 2.0 * sqrt2 / (d3s * sk_32);
    out.n3 = kd * kd * n3_term * n3_term * out.epsilon1 * out.epsilon1;
    return out;
}

std::vector<ConvergenceRow> convergence_experiment(
    const GroundTruth& truth, std::span<const std::size_t> n_grid,
    std::size_t trials, std::uint64_t seed, const ExperimentConfig& config) {
    if (n_grid.empty() || trials == 0) {
        throw data_error("need a non-empty N grid and at least one trial");
    }
    if (!std::is_sorted(n_grid.begin(), n_grid.end())) {
        throw data_error("N grid must be ascending");
    }

    std::vector<ConvergenceRow> rows;
    rows.reserve(n_grid.size());
    for (const std::size_t n : n_grid) {
        ConvergenceRow row;
        row.n = n;
        std::vector<double> mu, gamma, pi;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::uint64_t trial_seed = seed + t;
            try {
                auto [corpus, labels] = generate_corpus(
                    truth, n, config.words_per_doc, config.labels_per_doc,
                    trial_seed);
                TrainOptions opts = config.train;
                opts.k = truth.n_topics;
                opts.seed = trial_seed;
                const TrainResult trained = train_model(corpus, labels, opts);
                const RecoveryError err = align_and_error(truth, trained.model);
                for (Eigen::Index i = 0; i < err.mu_errs.size(); ++i) {
                    mu.push_back(err.mu_errs[i]);
                    gamma.push_back(err.gamma_errs[i]);
                    pi.push_back(err.pi_errs_raw[i]);
                }
            } catch (const numeric_error&) {
                ++row.failed_trials;
            }
        }
        row.mu_err = median(mu);
        row.gamma_err = median(gamma);
        row.pi_err = median(pi);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_convergence_csv(std::ostream& out,
                           std::span<const ConvergenceRow> rows) {
    out << "N,mu_err,gamma_err,pi_err\n";
    char buf[128];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g,%.10g", row.n,
                      row.mu_err, row.gamma_err, row.pi_err);
        out << buf << '\n';
    }
}

}  // namespace smom
