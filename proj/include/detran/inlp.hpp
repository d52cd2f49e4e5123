#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "detran/classifier.hpp"
#include "detran/embedding.hpp"
#include "detran/labeled.hpp"

namespace detran {

enum class ProjectionMode { orthogonal_basis, product };

std::string to_string(ProjectionMode mode);
ProjectionMode projection_mode_from_string(const std::string& name);

/// A d x d projection together with the orthonormal classifier directions
/// it removes. In orthogonal-basis mode P = I - B^T B is symmetric and
/// idempotent; in product mode P is the composition of the per-iteration
/// nullspace projections, newest leftmost.
struct Projection {
    Eigen::MatrixXd P;
    Eigen::MatrixXd basis;  // rows are orthonormal removed directions
    ProjectionMode mode = ProjectionMode::orthogonal_basis;
    int iterations = 0;     // classifiers trained, including the converging one
    bool converged = false;
    std::vector<double> accuracy_trace;  // dev accuracy per iteration

    int dim() const { return static_cast<int>(P.rows()); }

    static Projection identity(int d, ProjectionMode mode = ProjectionMode::orthogonal_basis);
};

struct InlpConfig {
    int max_classifiers = 35;
    double stop_epsilon = 0.01;  // stop once dev accuracy <= majority + stop_epsilon
    ProjectionMode mode = ProjectionMode::orthogonal_basis;
    ClassifierConfig classifier;
    bool warm_start = false;

    void validate() const;
};

/// P = I - B B^T for B an orthonormal basis of rowspace(W), via SVD.
/// Guarantees ||W P||_F <= 1e-6.
Eigen::MatrixXd nullspace_projection(const LinearClassifier& clf);

/// Iteratively trains a protected-attribute classifier on the projected
/// training data and collapses the data onto its nullspace, until the dev
/// accuracy falls to the majority baseline (within stop_epsilon) or the
/// classifier budget runs out.
Projection run_inlp(const LabeledVectorSet& train, const LabeledVectorSet& dev,
                    const InlpConfig& config);

/// rows * P^T (row convention).
Eigen::MatrixXd apply_projection(const Projection& proj, const Eigen::MatrixXd& rows);
LabeledVectorSet apply_projection(const Projection& proj, const LabeledVectorSet& set);
EmbeddingSpace apply_projection(const Projection& proj, const EmbeddingSpace& space);

/// Header "<d> mode=<mode> iters=<i> converged=<bool>", d rows of P, then
/// basis rows, then a trailing "#acc=<a1,a2,...>" line.
void save_projection(const Projection& proj, const std::string& path);
Projection load_projection(const std::string& path);

}  // namespace detran
