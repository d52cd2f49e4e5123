#include "detran/usage_change.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_set>

#include "detran/common.hpp"
#include "detran/corpus.hpp"

namespace detran {

namespace {

Eigen::MatrixXd unit_submatrix(const EmbeddingSpace& space, const std::vector<int>& rows) {
    Eigen::MatrixXd sub(rows.size(), space.dim());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Eigen::RowVectorXd row = space.matrix().row(rows[i]);
        const double norm = row.norm();
        if (norm == 0.0)
            throw Error("cannot normalize zero vector of token '" + space.vocab()[rows[i]] + "'");
        sub.row(static_cast<int>(i)) = row / norm;
    }
    return sub;
}

}  // namespace

TranslationeseLexicon score_usage_change(const EmbeddingSpace& space_o,
                                         const EmbeddingSpace& space_t, int k, int min_count) {
    if (!space_o.has_counts() || !space_t.has_counts())
        throw Error("usage change scoring requires token counts in both spaces");
    if (space_o.dim() != space_t.dim())
        throw Error("spaces have different dimensions");

    // Shared vocabulary, count-filtered in both corpora, in lexicographic
    // order so neighbor tie-breaking does not depend on input file order.
    std::vector<std::string> eligible;
    std::vector<int> rows_o, rows_t;
    for (int i = 0; i < space_o.size(); ++i) {
        if (space_o.counts()[i] < min_count) continue;
        const int j = space_t.find(space_o.vocab()[i]);
        if (j < 0 || space_t.counts()[j] < min_count) continue;
        eligible.push_back(space_o.vocab()[i]);
    }
    std::sort(eligible.begin(), eligible.end());
    if (eligible.empty()) throw Error("no token passes the shared-vocabulary count filter");
    const int m = static_cast<int>(eligible.size());
    if (k < 1 || k >= m)
        throw Error("k=" + std::to_string(k) + " must be in [1, " + std::to_string(m - 1) +
                    "] for " + std::to_string(m) + " eligible tokens");

    rows_o.reserve(m);
    rows_t.reserve(m);
    for (const std::string& token : eligible) {
        rows_o.push_back(space_o.at(token));
        rows_t.push_back(space_t.at(token));
    }
    const Eigen::MatrixXd unit_o = unit_submatrix(space_o, rows_o);
    const Eigen::MatrixXd unit_t = unit_submatrix(space_t, rows_t);

    TranslationeseLexicon lexicon;
    lexicon.k = k;
    lexicon.min_count_used = min_count;
    lexicon.entries.reserve(m);
    std::vector<char> in_set_o(m, 0);
    for (int w = 0; w < m; ++w) {
        const std::vector<int> nn_o = knn_indices(unit_o, w, k);
        const std::vector<int> nn_t = knn_indices(unit_t, w, k);
        for (int i : nn_o) in_set_o[i] = 1;
        int intersection = 0;
        for (int i : nn_t) intersection += in_set_o[i];
        for (int i : nn_o) in_set_o[i] = 0;
        lexicon.entries.push_back({eligible[w], intersection, -intersection});
    }
    std::sort(lexicon.entries.begin(), lexicon.entries.end(),
              [](const LexiconEntry& a, const LexiconEntry& b) {
                  if (a.intersection_size != b.intersection_size)
                      return a.intersection_size < b.intersection_size;
                  return a.token < b.token;
              });
    return lexicon;
}

std::vector<std::string> top_g(const TranslationeseLexicon& lexicon, int size) {
    if (size < 1) throw Error("g size must be >= 1");
    const int n = std::min<int>(size, static_cast<int>(lexicon.entries.size()));
    std::vector<std::string> tokens;
    tokens.reserve(n);
    for (int i = 0; i < n; ++i) tokens.push_back(lexicon.entries[i].token);
    return tokens;
}

void save_lexicon(const TranslationeseLexicon& lexicon, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open file for writing: " + path);
    out << "#k=" << lexicon.k << " min_count=" << lexicon.min_count_used << '\n';
    for (const LexiconEntry& entry : lexicon.entries)
        out << entry.token << '\t' << entry.intersection_size << '\t' << entry.score << '\n';
    if (!out) throw Error("write failed: " + path);
}

TranslationeseLexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("#k=", 0) != 0)
        throw Error(path + ": line 1: expected '#k=<k> min_count=<m>' header");
    TranslationeseLexicon lexicon;
    {
        std::vector<std::string> parts = split_tokens(line.substr(1));
        if (parts.size() != 2 || parts[0].rfind("k=", 0) != 0 || parts[1].rfind("min_count=", 0) != 0)
            throw Error(path + ": line 1: bad header '" + line + "'");
        lexicon.k = std::stoi(parts[0].substr(2));
        lexicon.min_count_used = std::stoi(parts[1].substr(10));
    }
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> parts = split_tokens(line);
        if (parts.size() != 3)
            throw Error(path + ": line " + std::to_string(line_no) + ": expected 3 columns");
        lexicon.entries.push_back({parts[0], std::stoi(parts[1]), std::stoi(parts[2])});
    }
    return lexicon;
}

}  // namespace detran
