#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "detran/embedding.hpp"
#include "detran/labeled.hpp"

namespace detran {

/// Orthogonal d x d map taking (preprocessed) source rows onto the target.
struct OrthogonalMap {
    Eigen::MatrixXd matrix;
    std::string preprocessing;  // identifier of the chain applied before solving
    int dictionary_size = 0;
};

/// Unit direction with a record of how it was derived.
struct DirectionVector {
    Eigen::VectorXd v;
    std::string provenance;  // "single:<token>" or "avg:<count>"
};

inline constexpr const char* kAlignPreprocessing = "unit,center,unit";

/// The standard chain applied to a whole space before alignment:
/// unit-normalize rows, mean-center per dimension, unit-normalize again.
EmbeddingSpace preprocess_for_alignment(const EmbeddingSpace& space);

/// All tokens shared by the two vocabularies, as identical-word pairs,
/// in source vocabulary order.
std::vector<std::string> shared_dictionary(const EmbeddingSpace& source,
                                           const EmbeddingSpace& target);

/// Solves the orthogonal Procrustes problem over the dictionary rows of the
/// preprocessed spaces: the W minimizing ||X_src W - X_tgt||_F, via SVD of
/// X_src^T X_tgt.
OrthogonalMap procrustes_align(const EmbeddingSpace& source, const EmbeddingSpace& target,
                               const std::vector<std::string>& dictionary);

/// preprocess(source) * W — the aligned space in the target's coordinates.
EmbeddingSpace apply_alignment(const EmbeddingSpace& source, const OrthogonalMap& map);

DirectionVector direction_from_word(const EmbeddingSpace& aligned_t,
                                    const EmbeddingSpace& aligned_o, const std::string& word);

struct ListDirection {
    DirectionVector direction;
    int used = 0;                       // tokens present in both spaces
    std::vector<std::string> skipped;   // tokens missing from either space
};

ListDirection direction_from_list(const EmbeddingSpace& aligned_t,
                                  const EmbeddingSpace& aligned_o,
                                  const std::vector<std::string>& g);

/// Labels every word of the joint space by the sign of its cosine with v:
/// cos >= 0 -> translationese (1), cos < 0 -> original (0). With
/// min_count > 0 only tokens at or above that frequency are kept.
LabeledVectorSet split_by_direction(const EmbeddingSpace& joint, const DirectionVector& direction,
                                    std::int64_t min_count = 0);

/// Map file: first line "<d> <d>", then "#preprocess=<chain> dict=<n>",
/// then d rows of d values.
void save_map(const OrthogonalMap& map, const std::string& path);
OrthogonalMap load_map(const std::string& path);

/// Direction file: first line "<d>", then "#provenance=<p>", then d values.
void save_direction(const DirectionVector& direction, const std::string& path);
DirectionVector load_direction(const std::string& path);

}  // namespace detran
