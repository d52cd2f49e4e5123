#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "detran/labeled.hpp"

namespace detran {

/// Vocabulary plus dense vector matrix, immutable after construction.
/// Optionally carries per-token corpus frequencies.
class EmbeddingSpace {
public:
    EmbeddingSpace() = default;
    EmbeddingSpace(std::vector<std::string> vocab, Eigen::MatrixXd matrix,
                   std::vector<std::int64_t> counts = {});

    int size() const { return static_cast<int>(matrix_.rows()); }
    int dim() const { return static_cast<int>(matrix_.cols()); }
    const std::vector<std::string>& vocab() const { return vocab_; }
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    const std::vector<std::int64_t>& counts() const { return counts_; }
    bool has_counts() const { return !counts_.empty(); }

    /// Index of a token, or -1 if absent.
    int find(std::string_view token) const;
    /// Index of a token; throws if absent.
    int at(std::string_view token) const;

private:
    std::vector<std::string> vocab_;
    Eigen::MatrixXd matrix_;
    std::vector<std::int64_t> counts_;
    std::unordered_map<std::string, int> index_;
};

/// text-vec format: first line "<n> <d>", then "<token> <v1> ... <vd>" per
/// line, single-space separated. Frequencies are not part of the format.
EmbeddingSpace load_space(const std::string& path);
void save_space(const EmbeddingSpace& space, const std::string& path);

/// Returns a copy with every row scaled to unit L2 norm. Counts carry over.
EmbeddingSpace normalize(const EmbeddingSpace& space);

/// The k tokens most cosine-similar to `word`, excluding the word itself.
/// Ties break by ascending vocabulary index.
std::vector<std::string> knn(const EmbeddingSpace& space, std::string_view word, int k);

/// knn core over pre-normalized rows: neighbor row indices of row `query`
/// among `unit_rows`, by descending dot product, ties by ascending index.
std::vector<int> knn_indices(const Eigen::MatrixXd& unit_rows, int query, int k);

struct SentenceVectors {
    LabeledVectorSet set;
    int dropped_sentences = 0;  // sentences with zero in-vocabulary tokens
};

/// Mean-of-token-vectors sentence embeddings from a labeled sentence file
/// ("<label>\t<tokenized sentence>" per line). Ids are 1-based line numbers.
SentenceVectors sentence_vectors(const EmbeddingSpace& space, const std::string& corpus_path);

}  // namespace detran
