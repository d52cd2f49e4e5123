#include "detran/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>

#include "detran/common.hpp"
#include "detran/corpus.hpp"

namespace detran {

EmbeddingSpace::EmbeddingSpace(std::vector<std::string> vocab, Eigen::MatrixXd matrix,
                               std::vector<std::int64_t> counts)
    : vocab_(std::move(vocab)), matrix_(std::move(matrix)), counts_(std::move(counts)) {
    if (static_cast<std::size_t>(matrix_.rows()) != vocab_.size())
        throw Error("embedding space: " + std::to_string(vocab_.size()) + " tokens but " +
                    std::to_string(matrix_.rows()) + " matrix rows");
    if (!counts_.empty() && counts_.size() != vocab_.size())
        throw Error("embedding space: count list does not match vocabulary size");
    index_.reserve(vocab_.size());
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
        auto [it, inserted] = index_.emplace(vocab_[i], static_cast<int>(i));
        if (!inserted) throw Error("duplicate token '" + vocab_[i] + "'");
    }
}

int EmbeddingSpace::find(std::string_view token) const {
    auto it = index_.find(std::string(token));
    return it == index_.end() ? -1 : it->second;
}

int EmbeddingSpace::at(std::string_view token) const {
    const int idx = find(token);
    if (idx < 0) throw Error("token '" + std::string(token) + "' not in vocabulary");
    return idx;
}

namespace {

double parse_double(std::string_view text, const std::string& path, int line_no) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error(path + ": line " + std::to_string(line_no) + ": bad number '" +
                    std::string(text) + "'");
    return value;
}

long parse_long(std::string_view text, const std::string& path, int line_no) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error(path + ": line " + std::to_string(line_no) + ": bad integer '" +
                    std::string(text) + "'");
    return value;
}

}  // namespace

EmbeddingSpace load_space(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open embedding file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(path + ": empty file");
    std::vector<std::string> header = split_tokens(line);
    if (header.size() != 2) throw Error(path + ": line 1: expected '<n> <d>' header");
    const long n = parse_long(header[0], path, 1);
    const long d = parse_long(header[1], path, 1);
    if (n < 0 || d <= 0) throw Error(path + ": line 1: bad dimensions");

    std::vector<std::string> vocab;
    vocab.reserve(n);
    Eigen::MatrixXd matrix(n, d);
    int line_no = 1;
    long row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (row >= n) throw Error(path + ": line " + std::to_string(line_no) + ": more than " +
                                  std::to_string(n) + " declared rows");
        std::vector<std::string> parts = split_tokens(line);
        if (static_cast<long>(parts.size()) != d + 1)
            throw Error(path + ": line " + std::to_string(line_no) + ": expected " +
                        std::to_string(d) + " values, got " + std::to_string(parts.size() - 1));
        vocab.push_back(parts[0]);
        for (long j = 0; j < d; ++j) matrix(row, j) = parse_double(parts[j + 1], path, line_no);
        ++row;
    }
    if (row != n)
        throw Error(path + ": declared " + std::to_string(n) + " rows but found " +
                    std::to_string(row));
    return EmbeddingSpace(std::move(vocab), std::move(matrix));
}

void save_space(const EmbeddingSpace& space, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open file for writing: " + path);
    out << space.size() << ' ' << space.dim() << '\n';
    char buf[32];
    for (int i = 0; i < space.size(); ++i) {
        out << space.vocab()[i];
        for (int j = 0; j < space.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.6f", space.matrix()(i, j));
            out << ' ' << buf;
        }
        out << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

EmbeddingSpace normalize(const EmbeddingSpace& space) {
    Eigen::MatrixXd unit = space.matrix();
    for (int i = 0; i < unit.rows(); ++i) {
        const double norm = unit.row(i).norm();
        if (norm == 0.0) throw Error("cannot normalize zero vector of token '" +
                                     space.vocab()[i] + "'");
        unit.row(i) /= norm;
    }
    return EmbeddingSpace(space.vocab(), std::move(unit), space.counts());
}

std::vector<int> knn_indices(const Eigen::MatrixXd& unit_rows, int query, int k) {
    const int n = static_cast<int>(unit_rows.rows());
    if (k < 1 || k >= n)
        throw Error("k must be in [1, " + std::to_string(n - 1) + "], got " + std::to_string(k));
    const Eigen::VectorXd sims = unit_rows * unit_rows.row(query).transpose();
    std::vector<int> order;
    order.reserve(n - 1);
    for (int i = 0; i < n; ++i)
        if (i != query) order.push_back(i);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
        if (sims(a) != sims(b)) return sims(a) > sims(b);
        return a < b;
    });
    order.resize(k);
    return order;
}

std::vector<std::string> knn(const EmbeddingSpace& space, std::string_view word, int k) {
    const int query = space.at(word);
    if (k >= space.size())
        throw Error("k=" + std::to_string(k) + " must be smaller than vocabulary size " +
                    std::to_string(space.size()));
    // Cosine similarity on a unit-normalized copy.
    const EmbeddingSpace unit = normalize(space);
    std::vector<int> idx = knn_indices(unit.matrix(), query, k);
    std::vector<std::string> neighbors;
    neighbors.reserve(idx.size());
    for (int i : idx) neighbors.push_back(space.vocab()[i]);
    return neighbors;
}

SentenceVectors sentence_vectors(const EmbeddingSpace& space, const std::string& corpus_path) {
    std::ifstream in(corpus_path);
    if (!in) throw Error("cannot open sentence file: " + corpus_path);

    std::vector<std::string> ids;
    std::vector<std::string> raw_labels;
    std::vector<Eigen::VectorXd> rows;
    int dropped = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw Error(corpus_path + ": line " + std::to_string(line_no) +
                        ": expected '<label>\\t<sentence>'");
        const std::string label = line.substr(0, tab);
        std::vector<std::string> tokens = split_tokens(line.substr(tab + 1));
        if (tokens.empty())
            throw Error(corpus_path + ": line " + std::to_string(line_no) + ": empty sentence");
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(space.dim());
        int covered = 0;
        for (const std::string& token : tokens) {
            const int idx = space.find(token);
            if (idx >= 0) {
                sum += space.matrix().row(idx).transpose();
                ++covered;
            }
        }
        if (covered == 0) {
            ++dropped;
            continue;
        }
        ids.push_back(std::to_string(line_no));
        raw_labels.push_back(label);
        rows.push_back(sum / covered);
    }
    if (rows.empty()) throw Error(corpus_path + ": no sentence had in-vocabulary tokens");

    std::map<std::string, int> name_to_class;
    for (const std::string& name : raw_labels) name_to_class.emplace(name, 0);
    int next = 0;
    for (auto& [name, idx] : name_to_class) idx = next++;

    SentenceVectors result;
    result.dropped_sentences = dropped;
    result.set.ids = std::move(ids);
    result.set.vectors.resize(static_cast<int>(rows.size()), space.dim());
    for (std::size_t i = 0; i < rows.size(); ++i) result.set.vectors.row(static_cast<int>(i)) = rows[i];
    result.set.labels.reserve(raw_labels.size());
    for (const std::string& name : raw_labels) result.set.labels.push_back(name_to_class.at(name));
    result.set.label_names.resize(name_to_class.size());
    for (const auto& [name, idx] : name_to_class) result.set.label_names[idx] = name;
    return result;
}

}  // namespace detran
