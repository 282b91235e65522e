#include "smom/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <ostream>
#include <string>

namespace smom {

namespace {

constexpr char kMagic[4] = {'S', 'M', 'O', 'M'};
constexpr std::uint32_t kVersion = 1;

void clamp_normalize_columns(Eigen::MatrixXd& m, const char* what) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        double sum = 0.0;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (m(r, c) < 0.0) m(r, c) = 0.0;
            sum += m(r, c);
        }
        if (sum <= 0.0) {
            throw numeric_error(std::string("degenerate topic ") +
                                std::to_string(c + 1) + ": " + what +
                                " column is all zero after clamping");
        }
        m.col(c) /= sum;
    }
}

// Little-endian scalar I/O. Sections are read with their name so a
// truncated file reports what is missing.
template <class T>
void write_le(std::ostream& out, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(buf, buf + sizeof(T));
    }
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T read_le(std::istream& in, const char* section) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) {
        throw data_error(std::string("model file truncated in section '") +
                         section + "'");
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(buf, buf + sizeof(T));
    }
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

void write_doubles(std::ostream& out, const double* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) write_le(out, p[i]);
}

void read_doubles(std::istream& in, double* p, std::size_t n,
                  const char* section) {
    for (std::size_t i = 0; i < n; ++i) p[i] = read_le<double>(in, section);
}

void check_stochastic(const Eigen::MatrixXd& m, const char* what) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        double sum = 0.0;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (m(r, c) < 0.0) {
                throw data_error(std::string(what) +
                                 " has a negative entry; model file invalid");
            }
            sum += m(r, c);
        }
        if (std::abs(sum - 1.0) > 1e-10) {
            throw data_error(std::string(what) + " column " +
                             std::to_string(c + 1) +
                             " does not sum to 1; model file invalid");
        }
    }
}

}  // namespace

SpectralModel assemble_model(const WhiteningBasis& basis,
                             const TensorEigs& eigs,
                             const RawLabelProjection& raw_q) {
    const Eigen::Index k = eigs.values.size();
    if (basis.W_pinv.cols() != k || eigs.vectors.rows() != k ||
        static_cast<Eigen::Index>(raw_q.topics) != k) {
        throw data_error("basis, tensor eigenpairs, and label projection "
                         "disagree on the topic count");
    }

    SpectralModel model;
    model.n_words = static_cast<std::size_t>(basis.W_pinv.rows());
    model.n_labels = raw_q.n_labels;
    model.n_topics = static_cast<std::size_t>(k);

    model.O.noalias() = basis.W_pinv * eigs.vectors;
    clamp_normalize_columns(model.O, "word");

    model.Q = raw_q.matrix;
    clamp_normalize_columns(model.Q, "label");

    model.pi_raw.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double lambda = eigs.values[i];
        if (!(lambda > 0.0)) {
            throw numeric_error("degenerate topic " + std::to_string(i + 1) +
                                ": non-positive tensor eigenvalue");
        }
        model.pi_raw[i] = 1.0 / (lambda * lambda);
    }
    model.pi = model.pi_raw / model.pi_raw.sum();
    return model;
}

TopicPosterior posterior_topics(const SpectralModel& model,
                                std::span<const std::uint32_t> words,
                                double smoothing) {
    const Eigen::Index k = static_cast<Eigen::Index>(model.n_topics);

    std::vector<std::uint32_t> distinct(words.begin(), words.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    for (std::uint32_t w : distinct) {
        if (w >= model.n_words) {
            throw data_error("word index " + std::to_string(w) +
                             " out of range for the model vocabulary");
        }
    }

    TopicPosterior post;
    if (distinct.empty()) {
        post.weights = model.pi;
        return post;
    }

    Eigen::VectorXd logw(k);
    for (Eigen::Index t = 0; t < k; ++t) {
        double acc = std::log(model.pi[t]);
        for (std::uint32_t w : distinct) {
            acc += std::log(model.O(w, t) + smoothing);
        }
        logw[t] = acc;
    }
    const double shift = logw.maxCoeff();
    post.weights = (logw.array() - shift).exp();
    post.weights /= post.weights.sum();
    return post;
}

LabelScores predict_labels(const SpectralModel& model,
                           std::span<const std::uint32_t> words,
                           std::optional<std::size_t> top_m,
                           double smoothing) {
    const TopicPosterior post = posterior_topics(model, words, smoothing);

    LabelScores out;
    out.scores.noalias() = model.Q * post.weights;

    out.ranking.resize(model.n_labels);
    std::iota(out.ranking.begin(), out.ranking.end(), 0u);
    std::stable_sort(out.ranking.begin(), out.ranking.end(),
                     [&out](std::uint32_t a, std::uint32_t b) {
                         return out.scores[a] > out.scores[b];
                     });
    if (top_m && *top_m < out.ranking.size()) {
        out.ranking.resize(*top_m);
    }
    return out;
}

void save_model(const SpectralModel& model, std::ostream& out) {
    out.write(kMagic, 4);
    write_le(out, kVersion);
    write_le(out, static_cast<std::uint64_t>(model.n_words));
    write_le(out, static_cast<std::uint64_t>(model.n_labels));
    write_le(out, static_cast<std::uint64_t>(model.n_topics));
    write_doubles(out, model.pi_raw.data(),
                  static_cast<std::size_t>(model.pi_raw.size()));
    write_doubles(out, model.pi.data(),
                  static_cast<std::size_t>(model.pi.size()));
    write_doubles(out, model.O.data(), static_cast<std::size_t>(model.O.size()));
    write_doubles(out, model.Q.data(), static_cast<std::size_t>(model.Q.size()));
    if (!out) throw data_error("failed writing model file");
}

SpectralModel load_model(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw data_error("bad magic: not a model file");
    }
    const auto version = read_le<std::uint32_t>(in, "header");
    if (version != kVersion) {
        throw data_error("unsupported model file version " +
                         std::to_string(version));
    }

    SpectralModel model;
    model.n_words = read_le<std::uint64_t>(in, "dims");
    model.n_labels = read_le<std::uint64_t>(in, "dims");
    model.n_topics = read_le<std::uint64_t>(in, "dims");
    if (model.n_words == 0 || model.n_topics == 0) {
        throw data_error("model file declares empty dimensions");
    }

    const auto d = static_cast<Eigen::Index>(model.n_words);
    const auto l = static_cast<Eigen::Index>(model.n_labels);
    const auto k = static_cast<Eigen::Index>(model.n_topics);

    model.pi_raw.resize(k);
    read_doubles(in, model.pi_raw.data(), model.n_topics, "pi_raw");
    model.pi.resize(k);
    read_doubles(in, model.pi.data(), model.n_topics, "pi");
    model.O.resize(d, k);
    read_doubles(in, model.O.data(), static_cast<std::size_t>(model.O.size()),
                 "O");
    model.Q.resize(l, k);
    read_doubles(in, model.Q.data(), static_cast<std::size_t>(model.Q.size()),
                 "Q");

    check_stochastic(model.O, "O");
    check_stochastic(model.Q, "Q");
    for (Eigen::Index i = 0; i < k; ++i) {
        if (!(model.pi[i] > 0.0) || !(model.pi_raw[i] > 0.0)) {
            throw data_error("pi has a non-positive entry; model file invalid");
        }
    }
    if (std::abs(model.pi.sum() - 1.0) > 1e-12) {
        throw data_error("pi does not sum to 1; model file invalid");
    }
    return model;
}

void save_model_file(const SpectralModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot open '" + path + "' for writing");
    save_model(model, out);
}

SpectralModel load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open '" + path + "'");
    return load_model(in);
}

}  // namespace smom
