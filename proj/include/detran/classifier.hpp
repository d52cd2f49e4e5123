#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "detran/labeled.hpp"

namespace detran {

/// Seeded SGD with L2 penalty. Epoch count mirrors the solver iteration cap
/// of the reference setup.
struct ClassifierConfig {
    int epochs = 7;
    double learning_rate = 0.1;
    double l2 = 1e-4;
    std::uint64_t seed = 23;

    void validate() const;
};

/// Linear probe: W is 1 x d for the binary sigmoid case, C x d for softmax.
struct LinearClassifier {
    Eigen::MatrixXd W;
    Eigen::VectorXd bias;
    double trained_accuracy = 0.0;
};

/// Binary logistic regression; labels must be {0, 1} with both present.
/// `warm` seeds the weights of an earlier classifier when given.
LinearClassifier train_logistic(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                const ClassifierConfig& config,
                                const LinearClassifier* warm = nullptr);
LinearClassifier train_logistic(const LabeledVectorSet& data, const ClassifierConfig& config);

/// Multinomial softmax regression for num_classes >= 2.
LinearClassifier train_softmax(const Eigen::MatrixXd& x, const std::vector<int>& y,
                               int num_classes, const ClassifierConfig& config);
LinearClassifier train_softmax(const LabeledVectorSet& data, const ClassifierConfig& config);

std::vector<int> predict_labels(const LinearClassifier& clf, const Eigen::MatrixXd& x);
double accuracy(const LinearClassifier& clf, const Eigen::MatrixXd& x, const std::vector<int>& y);
double accuracy(const LinearClassifier& clf, const LabeledVectorSet& data);

}  // namespace detran
