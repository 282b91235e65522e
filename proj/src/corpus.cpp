#include "smom/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>

namespace smom {

namespace {

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

std::uint64_t parse_index(std::string_view tok, std::size_t line,
                          const char* what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw parse_error(line, std::string("non-numeric ") + what + " '" +
                                    std::string(tok) + "'");
    }
    return value;
}

double parse_value(std::string_view tok, std::size_t line) {
    std::string buf(tok);
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || buf.empty()) {
        throw parse_error(line, "non-numeric feature value '" + buf + "'");
    }
    return v;
}

void sort_dedup(std::vector<std::uint32_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

ParsedCorpus parse_corpus(std::istream& in, bool expect_labels) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw parse_error(1, "missing header");
    }
    ++line_no;

    std::uint64_t n = 0, d = 0, l = 0;
    {
        std::string_view sv(line);
        std::size_t pos = 0;
        std::uint64_t* fields[3] = {&n, &d, &l};
        for (int f = 0; f < 3; ++f) {
            while (pos < sv.size() && std::isspace((unsigned char)sv[pos])) ++pos;
            std::size_t start = pos;
            while (pos < sv.size() && !std::isspace((unsigned char)sv[pos])) ++pos;
            if (start == pos) throw parse_error(1, "malformed header, expected 'N D L'");
            *fields[f] = parse_index(sv.substr(start, pos - start), 1, "header field");
        }
        while (pos < sv.size() && std::isspace((unsigned char)sv[pos])) ++pos;
        if (pos != sv.size()) throw parse_error(1, "malformed header, trailing tokens");
    }

    SparseCorpus corpus;
    corpus.n_docs = n;
    corpus.n_words = d;
    corpus.rows.reserve(n);
    LabelSet labels;
    labels.n_docs = n;
    labels.n_labels = l;
    labels.rows.reserve(n);

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') continue;
        if (is_blank(line) && corpus.rows.size() >= n) continue;  // trailing blanks
        if (corpus.rows.size() >= n) {
            throw parse_error(line_no, "row count exceeds header N=" + std::to_string(n));
        }

        std::vector<std::uint32_t> words;
        std::vector<std::uint32_t> doc_labels;

        std::string_view sv(line);
        std::size_t pos = 0;
        bool first_token = true;
        while (pos < sv.size()) {
            while (pos < sv.size() && std::isspace((unsigned char)sv[pos])) ++pos;
            std::size_t start = pos;
            while (pos < sv.size() && !std::isspace((unsigned char)sv[pos])) ++pos;
            if (start == pos) break;
            std::string_view tok = sv.substr(start, pos - start);

            auto colon = tok.find(':');
            if (colon == std::string_view::npos) {
                if (!first_token) {
                    throw parse_error(line_no, "label list must precede features");
                }
                // comma-separated label indices
                std::size_t p = 0;
                while (p <= tok.size()) {
                    auto comma = tok.find(',', p);
                    std::string_view item = tok.substr(
                        p, comma == std::string_view::npos ? tok.size() - p : comma - p);
                    std::uint64_t idx = parse_index(item, line_no, "label index");
                    if (idx >= l) {
                        throw parse_error(line_no, "label index " + std::to_string(idx) +
                                                       " >= L=" + std::to_string(l));
                    }
                    doc_labels.push_back(static_cast<std::uint32_t>(idx));
                    if (comma == std::string_view::npos) break;
                    p = comma + 1;
                }
            } else {
                std::uint64_t idx =
                    parse_index(tok.substr(0, colon), line_no, "feature index");
                if (idx >= d) {
                    throw parse_error(line_no, "feature index " + std::to_string(idx) +
                                                   " >= D=" + std::to_string(d));
                }
                double v = parse_value(tok.substr(colon + 1), line_no);
                if (v > 0.0) {
                    words.push_back(static_cast<std::uint32_t>(idx));
                }
            }
            first_token = false;
        }

        sort_dedup(words);
        sort_dedup(doc_labels);
        corpus.rows.push_back(std::move(words));
        labels.rows.push_back(std::move(doc_labels));
    }

    if (corpus.rows.size() != n) {
        throw parse_error(line_no, "row count " + std::to_string(corpus.rows.size()) +
                                       " does not match header N=" + std::to_string(n));
    }

    ParsedCorpus out;
    out.corpus = std::move(corpus);
    if (expect_labels) out.labels = std::move(labels);
    return out;
}

void serialize_corpus(std::ostream& out, const SparseCorpus& corpus,
                      const LabelSet* labels) {
    if (labels && labels->n_docs != corpus.n_docs) {
        throw data_error("label row count does not match corpus");
    }
    out << corpus.n_docs << ' ' << corpus.n_words << ' '
        << (labels ? labels->n_labels : 0) << '\n';
    for (std::size_t i = 0; i < corpus.n_docs; ++i) {
        if (labels) {
            const auto& ls = labels->rows[i];
            for (std::size_t j = 0; j < ls.size(); ++j) {
                if (j) out << ',';
                out << ls[j];
            }
        }
        for (std::uint32_t w : corpus.rows[i]) {
            out << ' ' << w << ":1";
        }
        out << '\n';
    }
}

MomentScales corpus_stats(const SparseCorpus& corpus, const LabelSet* labels) {
    if (corpus.n_docs == 0) {
        throw data_error("empty corpus: no documents");
    }
    if (labels && labels->n_docs != corpus.n_docs) {
        throw data_error("label row count does not match corpus");
    }

    MomentScales s;
    for (std::size_t i = 0; i < corpus.n_docs; ++i) {
        std::uint64_t c = corpus.nnz(i);
        s.sum1 += c;
        s.sum2 += c * c;
        s.sum3 += c * c * c;
        if (labels) s.sum_ly += c * c * static_cast<std::uint64_t>(labels->nnz(i));
    }
    double n_docs = static_cast<double>(corpus.n_docs);
    s.d1s = static_cast<double>(s.sum1) / n_docs;
    s.d2s = static_cast<double>(s.sum2) / n_docs;
    s.d3s = static_cast<double>(s.sum3) / n_docs;
    s.dls = static_cast<double>(s.sum_ly) / n_docs;
    return s;
}

}  // namespace smom
