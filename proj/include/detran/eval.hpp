#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "detran/embedding.hpp"
#include "detran/inlp.hpp"
#include "detran/labeled.hpp"

namespace detran {

struct SplitSpec {
    double train_frac = 0.70;
    double dev_frac = 0.15;
    double test_frac = 0.15;
    std::uint64_t seed = 23;

    void validate() const;
};

struct SplitResult {
    LabeledVectorSet train;
    LabeledVectorSet dev;
    LabeledVectorSet test;
};

/// Stratified seeded split; per-class partition sizes stay within +-1 of the
/// exact fractions, and remainders are balanced so the totals do too.
SplitResult split(const LabeledVectorSet& data, const SplitSpec& spec);

struct EvalReport {
    std::string task;
    double accuracy_before = 0.0;
    double accuracy_after = 0.0;
    double majority_baseline = 0.0;
    int n_train = 0;
    int n_dev = 0;
    int n_test = 0;
    int iterations_used = 0;
    std::uint64_t seed = 0;
};

/// Test accuracy of a linear probe before and after INLP debiasing.
/// The probe is retrained on the projected train split and evaluated on the
/// projected test split. `out_proj` receives the fitted projection when set.
EvalReport classify_before_after(const LabeledVectorSet& data, const SplitSpec& spec,
                                 const InlpConfig& config, Projection* out_proj = nullptr);

struct SpearmanResult {
    double rho = 0.0;
    int covered = 0;  // gold pairs with both words in the vocabulary
    int total = 0;
};

/// Spearman rank correlation between gold scores and cosine similarities.
/// Gold file: "w1<TAB>w2<TAB>score" per line; at least 5 covered pairs.
SpearmanResult spearman_similarity(const EmbeddingSpace& space, const std::string& gold_path);

/// Spearman on two parallel score lists, ties by average rank.
double spearman_rho(const std::vector<double>& a, const std::vector<double>& b);

struct SymAsymReport {
    // Sym: each model on its own distribution's test set.
    double original_sym = 0.0;   // also the Asym row for Original
    double shifted_sym = 0.0;
    double debiased_sym = 0.0;
    // Asym: shifted-family models on the original test set.
    double shifted_asym = 0.0;
    double debiased_asym = 0.0;
    double majority_baseline = 0.0;  // majority class of the original test set
    std::uint64_t seed = 0;
};

/// Trains Original / Shifted / Debiased linear softmax models and evaluates
/// them in the symmetric and asymmetric settings.
SymAsymReport sym_asym_eval(const LabeledVectorSet& orig_train, const LabeledVectorSet& orig_test,
                            const LabeledVectorSet& shifted_train,
                            const LabeledVectorSet& shifted_test, const Projection& proj,
                            const ClassifierConfig& config);

/// Writes "id<TAB>label<TAB>x<TAB>y" rows: the top-2 principal components of
/// the mean-centered vectors, with the largest-magnitude loading of each
/// component made positive.
void export_2d(const LabeledVectorSet& set, const std::string& out_path);

}  // namespace detran
