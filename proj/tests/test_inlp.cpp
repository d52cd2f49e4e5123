#include <doctest.h>

#include "detran/common.hpp"
#include "detran/inlp.hpp"
#include "detran/rng.hpp"
#include "test_util.hpp"

using namespace detran;

using testutil::label_noise;
using testutil::planted_direction;
using testutil::planted_subspace;

TEST_CASE("train_logistic separates linearly separable clusters") {
    const LabeledVectorSet data = planted_direction(200, 8, 2.0, 0.3, 17);
    const LinearClassifier clf = train_logistic(data, ClassifierConfig{});
    CHECK(clf.trained_accuracy >= 0.99);
}

TEST_CASE("train_logistic stays near chance on shuffled labels") {
    const LabeledVectorSet data = label_noise(500, 10, 19);
    const LinearClassifier clf = train_logistic(data, ClassifierConfig{});
    CHECK(clf.trained_accuracy <= 0.6);
}

TEST_CASE("train_logistic is bit-for-bit deterministic under a fixed seed") {
    const LabeledVectorSet data = planted_direction(100, 6, 1.0, 0.5, 23);
    const LinearClassifier a = train_logistic(data, ClassifierConfig{});
    const LinearClassifier b = train_logistic(data, ClassifierConfig{});
    CHECK(a.W == b.W);
    CHECK(a.bias == b.bias);
}

TEST_CASE("train_logistic rejects single-class data") {
    LabeledVectorSet data = planted_direction(50, 4, 1.0, 0.1, 29);
    for (int& label : data.labels) label = 1;
    CHECK_THROWS_AS(train_logistic(data, ClassifierConfig{}), Error);
}

TEST_CASE("nullspace projection of an axis classifier zeroes that axis") {
    LinearClassifier clf;
    clf.W = Eigen::MatrixXd::Zero(1, 3);
    clf.W(0, 0) = 1.0;
    clf.bias = Eigen::VectorXd::Zero(1);
    const Eigen::MatrixXd p = nullspace_projection(clf);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
    expected(1, 1) = expected(2, 2) = 1.0;
    CHECK((p - expected).norm() < 1e-12);
}

TEST_CASE("nullspace projection of the diagonal direction in 2D") {
    LinearClassifier clf;
    clf.W = Eigen::MatrixXd::Constant(1, 2, 1.0 / std::sqrt(2.0));
    clf.bias = Eigen::VectorXd::Zero(1);
    const Eigen::MatrixXd p = nullspace_projection(clf);
    Eigen::MatrixXd expected(2, 2);
    expected << 0.5, -0.5, -0.5, 0.5;
    CHECK((p - expected).norm() < 1e-9);
}

TEST_CASE("nullspace projection annihilates random multi-row classifiers") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        LinearClassifier clf;
        clf.W = testutil::random_matrix(2, 5, 300 + seed);
        clf.bias = Eigen::VectorXd::Zero(2);
        const Eigen::MatrixXd p = nullspace_projection(clf);
        CHECK((clf.W * p).norm() <= 1e-6);
        CHECK((p * p - p).norm() <= 1e-6);
        CHECK((p - p.transpose()).norm() <= 1e-6);
    }
    LinearClassifier zero;
    zero.W = Eigen::MatrixXd::Zero(1, 4);
    zero.bias = Eigen::VectorXd::Zero(1);
    CHECK_THROWS_AS(nullspace_projection(zero), Error);
}

TEST_CASE("run_inlp removes a planted direction in a few iterations") {
    const LabeledVectorSet train = planted_direction(1200, 10, 1.5, 0.4, 41, 141);
    const LabeledVectorSet dev = planted_direction(800, 10, 1.5, 0.4, 41, 142);
    InlpConfig config;
    config.stop_epsilon = 0.02;
    const Projection proj = run_inlp(train, dev, config);
    CHECK(proj.converged);
    CHECK(proj.iterations <= 3);
    CHECK(proj.accuracy_trace.front() >= 0.95);
    CHECK(proj.accuracy_trace.back() <= 0.55);

    // Every recorded non-converging classifier left at least one basis row;
    // each projecting iteration reduces rank by exactly one.
    CHECK(proj.basis.rows() == proj.iterations - 1);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(proj.P);
    CHECK(lu.rank() == 10 - proj.basis.rows());

    // Retraining on the projected data stays at the majority baseline.
    const LabeledVectorSet train_proj = apply_projection(proj, train);
    const LabeledVectorSet dev_proj = apply_projection(proj, dev);
    const LinearClassifier retrained = train_logistic(train_proj, config.classifier);
    const double majority = majority_fraction(dev.labels);
    CHECK(accuracy(retrained, dev_proj) <= majority + 2 * config.stop_epsilon);
}

TEST_CASE("run_inlp stops immediately when labels carry no signal") {
    const LabeledVectorSet train = label_noise(1500, 8, 51);
    const LabeledVectorSet dev = label_noise(1000, 8, 52);
    InlpConfig config;
    config.stop_epsilon = 0.02;
    const Projection proj = run_inlp(train, dev, config);
    CHECK(proj.converged);
    CHECK(proj.iterations == 1);
    CHECK(proj.basis.rows() == 0);
    CHECK((proj.P - Eigen::MatrixXd::Identity(8, 8)).norm() == 0.0);
}

TEST_CASE("run_inlp recovers a planted 3-dim subspace with small slack") {
    const LabeledVectorSet train = planted_subspace(3000, 10, 2.0, 0.3, 61, 161);
    const LabeledVectorSet dev = planted_subspace(1500, 10, 2.0, 0.3, 61, 162);
    InlpConfig config;
    config.stop_epsilon = 0.02;
    // A firm L2 keeps each classifier inside the signal subspace, so the
    // basis stays close to the planted rank.
    config.classifier.l2 = 0.1;
    const Projection proj = run_inlp(train, dev, config);
    CHECK(proj.converged);
    CHECK(proj.basis.rows() >= 3);
    CHECK(proj.basis.rows() <= 5);
    CHECK(proj.accuracy_trace.back() <= majority_fraction(dev.labels) + 0.05);

    // Orthogonal-basis mode: every recorded classifier is annihilated on the
    // final projected training data.
    const Eigen::MatrixXd projected = apply_projection(proj, train.vectors);
    // The basis rows are orthonormal.
    const Eigen::MatrixXd gram = proj.basis * proj.basis.transpose();
    CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).norm() <= 1e-6);
    for (int i = 0; i < proj.basis.rows(); ++i)
        CHECK((projected * proj.basis.row(i).transpose()).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("product mode annihilates the last classifier and matches Eq-style composition") {
    const LabeledVectorSet train = planted_subspace(2000, 8, 2.0, 0.3, 71, 171);
    const LabeledVectorSet dev = planted_subspace(1000, 8, 2.0, 0.3, 71, 172);
    InlpConfig config;
    config.mode = ProjectionMode::product;
    config.stop_epsilon = 0.02;
    config.classifier.l2 = 0.1;
    const Projection proj = run_inlp(train, dev, config);
    CHECK(proj.converged);
    REQUIRE(proj.iterations >= 2);

    // Rebuild the final classifier exactly as run_inlp trained it: the last
    // projecting iteration was iterations - 2 (the last one converged).
    // Its weights must be annihilated by the final product.
    Eigen::MatrixXd x_train = train.vectors;
    Projection partial = Projection::identity(8, ProjectionMode::product);
    for (int iter = 0; iter + 1 < proj.iterations; ++iter) {
        ClassifierConfig clf_config = config.classifier;
        clf_config.seed = config.classifier.seed + static_cast<std::uint64_t>(iter);
        const LinearClassifier clf = train_logistic(x_train, train.labels, clf_config);
        if (iter + 2 == proj.iterations) CHECK((clf.W * proj.P).norm() <= 1e-6);
        partial.P = nullspace_projection(clf) * partial.P;
        x_train = train.vectors * partial.P.transpose();
    }
    CHECK((partial.P - proj.P).norm() <= 1e-12);
}

TEST_CASE("apply_projection is linear and idempotent in orthogonal-basis mode") {
    const LabeledVectorSet train = planted_direction(800, 6, 1.5, 0.4, 81, 181);
    const LabeledVectorSet dev = planted_direction(500, 6, 1.5, 0.4, 81, 182);
    const Projection proj = run_inlp(train, dev, InlpConfig{});

    const Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(5, 6);
    CHECK(apply_projection(proj, zeros).norm() == 0.0);

    const Eigen::MatrixXd x = testutil::random_matrix(20, 6, 83);
    const Eigen::MatrixXd once = apply_projection(proj, x);
    const Eigen::MatrixXd twice = apply_projection(proj, once);
    CHECK((twice - once).cwiseAbs().maxCoeff() <= 1e-6);

    // Components along removed directions vanish.
    for (int i = 0; i < proj.basis.rows(); ++i)
        CHECK((once * proj.basis.row(i).transpose()).cwiseAbs().maxCoeff() <= 1e-6);

    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 7);
    CHECK_THROWS_AS(apply_projection(proj, bad), Error);
}

TEST_CASE("projection files round-trip within 1e-9") {
    testutil::TempDir tmp("proj");
    const LabeledVectorSet train = planted_direction(800, 7, 1.5, 0.4, 91, 191);
    const LabeledVectorSet dev = planted_direction(500, 7, 1.5, 0.4, 91, 192);
    const Projection proj = run_inlp(train, dev, InlpConfig{});
    save_projection(proj, tmp.path("p.proj"));
    const Projection loaded = load_projection(tmp.path("p.proj"));
    CHECK(loaded.mode == proj.mode);
    CHECK(loaded.iterations == proj.iterations);
    CHECK(loaded.converged == proj.converged);
    CHECK((loaded.P - proj.P).cwiseAbs().maxCoeff() <= 1e-9);
    REQUIRE(loaded.basis.rows() == proj.basis.rows());
    if (proj.basis.rows() > 0)
        CHECK((loaded.basis - proj.basis).cwiseAbs().maxCoeff() <= 1e-9);
    REQUIRE(loaded.accuracy_trace.size() == proj.accuracy_trace.size());
    for (std::size_t i = 0; i < proj.accuracy_trace.size(); ++i)
        CHECK(loaded.accuracy_trace[i] == doctest::Approx(proj.accuracy_trace[i]).epsilon(1e-5));
}

TEST_CASE("train_softmax fits separable multiclass data deterministically") {
    Rng rng(99);
    const int n = 300, d = 6, classes = 3;
    LabeledVectorSet data;
    data.label_names = {"c0", "c1", "c2"};
    data.vectors.resize(n, d);
    data.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        const int label = i % classes;
        data.labels[i] = label;
        for (int j = 0; j < d; ++j)
            data.vectors(i, j) = (j == label ? 2.0 : 0.0) + 0.3 * rng.gaussian();
    }
    const LinearClassifier a = train_softmax(data, ClassifierConfig{});
    CHECK(a.trained_accuracy >= 0.95);
    const LinearClassifier b = train_softmax(data, ClassifierConfig{});
    CHECK(a.W == b.W);
}
