#include "detran/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "detran/common.hpp"
#include "detran/rng.hpp"

namespace detran {

void ClassifierConfig::validate() const {
    if (epochs < 1) throw Error("classifier epochs must be >= 1");
    if (learning_rate <= 0.0) throw Error("classifier learning_rate must be > 0");
    if (l2 < 0.0) throw Error("classifier l2 must be >= 0");
}

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_labels(const std::vector<int>& y, int num_classes, long rows) {
    if (static_cast<long>(y.size()) != rows)
        throw Error("label count does not match data rows");
    std::set<int> seen(y.begin(), y.end());
    if (*seen.begin() < 0 || *seen.rbegin() >= num_classes)
        throw Error("label outside [0, " + std::to_string(num_classes) + ")");
    if (seen.size() < 2) throw Error("training data contains a single class");
    for (int c : seen) {
        const long count = std::count(y.begin(), y.end(), c);
        if (count < 2) throw Error("class " + std::to_string(c) + " has fewer than 2 examples");
    }
}

}  // namespace

LinearClassifier train_logistic(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                const ClassifierConfig& config, const LinearClassifier* warm) {
    config.validate();
    check_labels(y, 2, x.rows());
    const int n = static_cast<int>(x.rows());
    const int d = static_cast<int>(x.cols());

    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    double b = 0.0;
    if (warm && warm->W.rows() == 1 && warm->W.cols() == d) {
        w = warm->W.row(0).transpose();
        b = warm->bias(0);
    }

    Rng rng(config.seed);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Inverse-sqrt step decay plus tail averaging over the second half of
    // training; the averaged iterate sits far closer to the optimum than
    // the last one.
    Eigen::VectorXd w_avg = Eigen::VectorXd::Zero(d);
    double b_avg = 0.0;
    long averaged = 0;
    long step = 0;
    const int tail_start = config.epochs / 2;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (int i : order) {
            const double lr = config.learning_rate / std::sqrt(1.0 + static_cast<double>(step) / n);
            ++step;
            const double margin = x.row(i) * w + b;
            const double g = sigmoid(margin) - y[i];
            w -= lr * (g * x.row(i).transpose() + config.l2 * w);
            b -= lr * g;
            if (epoch >= tail_start) {
                w_avg += w;
                b_avg += b;
                ++averaged;
            }
        }
    }

    LinearClassifier clf;
    clf.W = (w_avg / averaged).transpose();
    clf.bias = Eigen::VectorXd::Constant(1, b_avg / averaged);
    clf.trained_accuracy = accuracy(clf, x, y);
    return clf;
}

LinearClassifier train_logistic(const LabeledVectorSet& data, const ClassifierConfig& config) {
    if (data.num_classes() != 2) throw Error("logistic classifier expects binary labels");
    return train_logistic(data.vectors, data.labels, config);
}

LinearClassifier train_softmax(const Eigen::MatrixXd& x, const std::vector<int>& y,
                               int num_classes, const ClassifierConfig& config) {
    config.validate();
    if (num_classes < 2) throw Error("softmax needs at least 2 classes");
    check_labels(y, num_classes, x.rows());
    const int n = static_cast<int>(x.rows());
    const int d = static_cast<int>(x.cols());

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(num_classes, d);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(num_classes);

    Rng rng(config.seed);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Eigen::VectorXd logits(num_classes);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (int i : order) {
            logits = w * x.row(i).transpose() + b;
            logits.array() -= logits.maxCoeff();
            Eigen::VectorXd p = logits.array().exp();
            p /= p.sum();
            p(y[i]) -= 1.0;  // gradient of cross-entropy wrt logits
            w -= config.learning_rate * (p * x.row(i) + config.l2 * w);
            b -= config.learning_rate * p;
        }
    }

    LinearClassifier clf;
    clf.W = std::move(w);
    clf.bias = std::move(b);
    clf.trained_accuracy = accuracy(clf, x, y);
    return clf;
}

LinearClassifier train_softmax(const LabeledVectorSet& data, const ClassifierConfig& config) {
    return train_softmax(data.vectors, data.labels, data.num_classes(), config);
}

std::vector<int> predict_labels(const LinearClassifier& clf, const Eigen::MatrixXd& x) {
    if (x.cols() != clf.W.cols()) throw Error("feature dimension does not match classifier");
    std::vector<int> labels(x.rows());
    if (clf.W.rows() == 1) {
        const Eigen::VectorXd margins = x * clf.W.row(0).transpose();
        for (int i = 0; i < x.rows(); ++i) labels[i] = margins(i) + clf.bias(0) > 0.0 ? 1 : 0;
    } else {
        const Eigen::MatrixXd scores = (x * clf.W.transpose()).rowwise() + clf.bias.transpose();
        for (int i = 0; i < x.rows(); ++i) {
            Eigen::Index best = 0;
            scores.row(i).maxCoeff(&best);
            labels[i] = static_cast<int>(best);
        }
    }
    return labels;
}

double accuracy(const LinearClassifier& clf, const Eigen::MatrixXd& x, const std::vector<int>& y) {
    if (static_cast<long>(y.size()) != x.rows()) throw Error("label count does not match data rows");
    if (y.empty()) throw Error("cannot compute accuracy on empty data");
    const std::vector<int> predicted = predict_labels(clf, x);
    long correct = 0;
    for (std::size_t i = 0; i < y.size(); ++i) correct += predicted[i] == y[i];
    return static_cast<double>(correct) / static_cast<double>(y.size());
}

double accuracy(const LinearClassifier& clf, const LabeledVectorSet& data) {
    return accuracy(clf, data.vectors, data.labels);
}

}  // namespace detran
