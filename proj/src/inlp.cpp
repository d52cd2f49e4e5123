#include "detran/inlp.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "detran/common.hpp"
#include "detran/corpus.hpp"

namespace detran {

std::string to_string(ProjectionMode mode) {
    return mode == ProjectionMode::orthogonal_basis ? "orthogonal-basis" : "product";
}

ProjectionMode projection_mode_from_string(const std::string& name) {
    if (name == "orthogonal-basis") return ProjectionMode::orthogonal_basis;
    if (name == "product") return ProjectionMode::product;
    throw Error("unknown projection mode '" + name + "'");
}

Projection Projection::identity(int d, ProjectionMode mode) {
    Projection proj;
    proj.P = Eigen::MatrixXd::Identity(d, d);
    proj.basis.resize(0, d);
    proj.mode = mode;
    return proj;
}

void InlpConfig::validate() const {
    if (max_classifiers < 1) throw Error("max_classifiers must be >= 1");
    if (stop_epsilon < 0.0) throw Error("stop_epsilon must be >= 0");
    classifier.validate();
}

Eigen::MatrixXd nullspace_projection(const LinearClassifier& clf) {
    const Eigen::MatrixXd& w = clf.W;
    if (w.norm() == 0.0) throw Error("all-zero classifier matrix has no rowspace");
    const int d = static_cast<int>(w.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(w, Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double tol = sigma(0) * 1e-12;
    int rank = 0;
    for (int i = 0; i < sigma.size(); ++i)
        if (sigma(i) > tol) ++rank;
    const Eigen::MatrixXd basis = svd.matrixV().leftCols(rank);  // d x rank, orthonormal
    return Eigen::MatrixXd::Identity(d, d) - basis * basis.transpose();
}

namespace {

/// Orthonormalizes the rowspace of W against the accumulated basis rows;
/// directions nearly inside the existing span are dropped.
void accumulate_basis(Eigen::MatrixXd& basis, const Eigen::MatrixXd& w) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(w, Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double tol = sigma(0) * 1e-12;
    for (int i = 0; i < sigma.size(); ++i) {
        if (sigma(i) <= tol) continue;
        Eigen::VectorXd dir = svd.matrixV().col(i);
        // Two Gram-Schmidt passes for numerical orthogonality.
        for (int pass = 0; pass < 2; ++pass)
            if (basis.rows() > 0) dir -= basis.transpose() * (basis * dir);
        const double residual = dir.norm();
        if (residual < 1e-8) continue;
        basis.conservativeResize(basis.rows() + 1, Eigen::NoChange);
        basis.row(basis.rows() - 1) = dir.transpose() / residual;
    }
}

}  // namespace

Projection run_inlp(const LabeledVectorSet& train, const LabeledVectorSet& dev,
                    const InlpConfig& config) {
    config.validate();
    train.validate();
    dev.validate();
    if (train.dim() != dev.dim()) throw Error("train and dev dimensions differ");
    if (train.num_classes() != 2 || dev.num_classes() != 2)
        throw Error("INLP expects a binary protected attribute");

    const int d = train.dim();
    const double majority = majority_fraction(dev.labels);

    Projection proj = Projection::identity(d, config.mode);
    Eigen::MatrixXd x_train = train.vectors;
    Eigen::MatrixXd x_dev = dev.vectors;
    LinearClassifier previous;

    for (int iter = 0; iter < config.max_classifiers; ++iter) {
        ClassifierConfig clf_config = config.classifier;
        clf_config.seed = config.classifier.seed + static_cast<std::uint64_t>(iter);
        const LinearClassifier clf =
            train_logistic(x_train, train.labels, clf_config,
                           config.warm_start && iter > 0 ? &previous : nullptr);
        const double dev_accuracy = accuracy(clf, x_dev, dev.labels);
        proj.accuracy_trace.push_back(dev_accuracy);
        ++proj.iterations;
        if (dev_accuracy <= majority + config.stop_epsilon) {
            proj.converged = true;
            break;
        }
        const Eigen::MatrixXd p_step = nullspace_projection(clf);
        accumulate_basis(proj.basis, clf.W);
        if (config.mode == ProjectionMode::orthogonal_basis) {
            proj.P = Eigen::MatrixXd::Identity(d, d) - proj.basis.transpose() * proj.basis;
        } else {
            // Newest projection leftmost, so the latest classifier is
            // annihilated exactly: W_i (P_i ... P_1) = 0.
            proj.P = p_step * proj.P;
        }
        x_train = train.vectors * proj.P.transpose();
        x_dev = dev.vectors * proj.P.transpose();
        previous = clf;
    }
    return proj;
}

Eigen::MatrixXd apply_projection(const Projection& proj, const Eigen::MatrixXd& rows) {
    if (rows.cols() != proj.P.cols())
        throw Error("vector dimension " + std::to_string(rows.cols()) +
                    " does not match projection dimension " + std::to_string(proj.P.cols()));
    return rows * proj.P.transpose();
}

LabeledVectorSet apply_projection(const Projection& proj, const LabeledVectorSet& set) {
    LabeledVectorSet out = set;
    out.vectors = apply_projection(proj, set.vectors);
    return out;
}

EmbeddingSpace apply_projection(const Projection& proj, const EmbeddingSpace& space) {
    return EmbeddingSpace(space.vocab(), apply_projection(proj, space.matrix()), space.counts());
}

void save_projection(const Projection& proj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open file for writing: " + path);
    out << proj.dim() << " mode=" << to_string(proj.mode) << " iters=" << proj.iterations
        << " converged=" << (proj.converged ? "true" : "false") << '\n';
    char buf[40];
    auto write_rows = [&](const Eigen::MatrixXd& m) {
        for (int i = 0; i < m.rows(); ++i) {
            for (int j = 0; j < m.cols(); ++j) {
                if (j > 0) out << ' ';
                std::snprintf(buf, sizeof(buf), "%.12f", m(i, j));
                out << buf;
            }
            out << '\n';
        }
    };
    write_rows(proj.P);
    write_rows(proj.basis);
    out << "#acc=";
    for (std::size_t i = 0; i < proj.accuracy_trace.size(); ++i) {
        if (i > 0) out << ',';
        std::snprintf(buf, sizeof(buf), "%.6f", proj.accuracy_trace[i]);
        out << buf;
    }
    out << '\n';
    if (!out) throw Error("write failed: " + path);
}

Projection load_projection(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open projection file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(path + ": empty file");
    std::vector<std::string> header = split_tokens(line);
    if (header.size() != 4) throw Error(path + ": line 1: expected '<d> mode=<m> iters=<i> converged=<b>'");

    Projection proj;
    const int d = std::stoi(header[0]);
    for (std::size_t i = 1; i < header.size(); ++i) {
        const std::string& item = header[i];
        if (item.rfind("mode=", 0) == 0) proj.mode = projection_mode_from_string(item.substr(5));
        else if (item.rfind("iters=", 0) == 0) proj.iterations = std::stoi(item.substr(6));
        else if (item.rfind("converged=", 0) == 0) proj.converged = item.substr(10) == "true";
    }

    proj.P.resize(d, d);
    std::vector<Eigen::VectorXd> basis_rows;
    int row = 0;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("#acc=", 0) == 0 && line.size() > 5) {
                std::string accs = line.substr(5);
                std::size_t start = 0;
                while (start <= accs.size()) {
                    std::size_t comma = accs.find(',', start);
                    if (comma == std::string::npos) comma = accs.size();
                    proj.accuracy_trace.push_back(std::stod(accs.substr(start, comma - start)));
                    start = comma + 1;
                }
            }
            continue;
        }
        std::vector<std::string> parts = split_tokens(line);
        if (static_cast<int>(parts.size()) != d)
            throw Error(path + ": line " + std::to_string(line_no) + ": expected " +
                        std::to_string(d) + " values");
        Eigen::VectorXd values(d);
        for (int j = 0; j < d; ++j) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(parts[j].data(), parts[j].data() + parts[j].size(), v);
            if (ec != std::errc() || ptr != parts[j].data() + parts[j].size())
                throw Error(path + ": line " + std::to_string(line_no) + ": bad number '" +
                            parts[j] + "'");
            values(j) = v;
        }
        if (row < d) proj.P.row(row) = values.transpose();
        else basis_rows.push_back(values);
        ++row;
    }
    if (row < d) throw Error(path + ": expected " + std::to_string(d) + " projection rows");
    proj.basis.resize(static_cast<int>(basis_rows.size()), d);
    for (std::size_t i = 0; i < basis_rows.size(); ++i)
        proj.basis.row(static_cast<int>(i)) = basis_rows[i].transpose();
    return proj;
}

}  // namespace detran
