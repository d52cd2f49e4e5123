#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace detran {

/// Vectors paired with integer class labels. For the protected attribute
/// the convention is label 0 = original, label 1 = translationese.
struct LabeledVectorSet {
    std::vector<std::string> ids;  // optional row names; empty or size m
    Eigen::MatrixXd vectors;       // m x d
    std::vector<int> labels;       // size m, values in [0, C)
    std::vector<std::string> label_names;  // size C

    int size() const { return static_cast<int>(vectors.rows()); }
    int dim() const { return static_cast<int>(vectors.cols()); }
    int num_classes() const { return static_cast<int>(label_names.size()); }

    /// Throws if labels, ids, and label_names are inconsistent.
    void validate() const;
};

/// TSV interchange format: "#d=<d>" header, then "id<TAB>label<TAB>v1 ... vd".
/// Labels are written as names; class indices are assigned by sorted name.
void save_labeled(const LabeledVectorSet& set, const std::string& path);
LabeledVectorSet load_labeled(const std::string& path);

/// Fraction of the most frequent label.
double majority_fraction(const std::vector<int>& labels);

}  // namespace detran
