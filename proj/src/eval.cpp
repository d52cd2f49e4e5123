#include "detran/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>

#include "detran/common.hpp"
#include "detran/corpus.hpp"
#include "detran/rng.hpp"

namespace detran {

void SplitSpec::validate() const {
    if (train_frac <= 0.0 || dev_frac <= 0.0 || test_frac <= 0.0)
        throw Error("split fractions must be positive");
    if (std::abs(train_frac + dev_frac + test_frac - 1.0) > 1e-9)
        throw Error("split fractions must sum to 1");
}

namespace {

LabeledVectorSet take_rows(const LabeledVectorSet& data, const std::vector<int>& rows) {
    LabeledVectorSet out;
    out.label_names = data.label_names;
    out.vectors.resize(static_cast<int>(rows.size()), data.dim());
    out.labels.reserve(rows.size());
    if (!data.ids.empty()) out.ids.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.vectors.row(static_cast<int>(i)) = data.vectors.row(rows[i]);
        out.labels.push_back(data.labels[rows[i]]);
        if (!data.ids.empty()) out.ids.push_back(data.ids[rows[i]]);
    }
    return out;
}

}  // namespace

SplitResult split(const LabeledVectorSet& data, const SplitSpec& spec) {
    spec.validate();
    data.validate();
    if (data.size() < 10) throw Error("need at least 10 examples to split");

    std::vector<std::vector<int>> by_class(data.num_classes());
    for (int i = 0; i < data.size(); ++i) by_class[data.labels[i]].push_back(i);
    for (int c = 0; c < data.num_classes(); ++c)
        if (!by_class[c].empty() && by_class[c].size() < 3)
            throw Error("class '" + data.label_names[c] + "' has fewer than 3 examples");

    const double fracs[3] = {spec.train_frac, spec.dev_frac, spec.test_frac};
    // Largest remainder with carried per-part error, so the divisible case
    // comes out exact overall, not only per class.
    double carry[3] = {0.0, 0.0, 0.0};
    std::vector<int> parts[3];
    Rng rng(spec.seed);
    for (auto& members : by_class) {
        if (members.empty()) continue;
        rng.shuffle(members);
        const int n = static_cast<int>(members.size());
        int quota[3];
        double remainder[3];
        int assigned = 0;
        for (int p = 0; p < 3; ++p) {
            const double exact = fracs[p] * n;
            quota[p] = static_cast<int>(exact);
            remainder[p] = exact - quota[p] + carry[p];
            assigned += quota[p];
        }
        for (int left = n - assigned; left > 0; --left) {
            int best = 0;
            for (int p = 1; p < 3; ++p)
                if (remainder[p] > remainder[best]) best = p;
            ++quota[best];
            remainder[best] -= 1.0;
        }
        for (int p = 0; p < 3; ++p) carry[p] = remainder[p];
        int offset = 0;
        for (int p = 0; p < 3; ++p) {
            for (int i = 0; i < quota[p]; ++i) parts[p].push_back(members[offset + i]);
            offset += quota[p];
        }
    }
    return {take_rows(data, parts[0]), take_rows(data, parts[1]), take_rows(data, parts[2])};
}

EvalReport classify_before_after(const LabeledVectorSet& data, const SplitSpec& spec,
                                 const InlpConfig& config, Projection* out_proj) {
    if (data.num_classes() != 2) throw Error("before/after evaluation expects binary labels");
    const SplitResult splits = split(data, spec);

    EvalReport report;
    report.task = "classify-before-after";
    report.seed = spec.seed;
    report.n_train = splits.train.size();
    report.n_dev = splits.dev.size();
    report.n_test = splits.test.size();
    report.majority_baseline = majority_fraction(splits.test.labels);

    const LinearClassifier before = train_logistic(splits.train, config.classifier);
    report.accuracy_before = accuracy(before, splits.test);

    const Projection proj = run_inlp(splits.train, splits.dev, config);
    report.iterations_used = proj.iterations;

    const LabeledVectorSet train_proj = apply_projection(proj, splits.train);
    const LabeledVectorSet test_proj = apply_projection(proj, splits.test);
    const LinearClassifier after = train_logistic(train_proj, config.classifier);
    report.accuracy_after = accuracy(after, test_proj);

    if (out_proj) *out_proj = proj;
    return report;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw Error("spearman needs two equal lists of >= 2");
    const std::vector<double> ra = average_ranks(a);
    const std::vector<double> rb = average_ranks(b);
    const double n = static_cast<double>(a.size());
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean_a += ra[i];
        mean_b += rb[i];
    }
    mean_a /= n;
    mean_b /= n;
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = ra[i] - mean_a;
        const double db = rb[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) throw Error("spearman undefined: constant ranks");
    return cov / std::sqrt(var_a * var_b);
}

SpearmanResult spearman_similarity(const EmbeddingSpace& space, const std::string& gold_path) {
    std::ifstream in(gold_path);
    if (!in) throw Error("cannot open gold similarity file: " + gold_path);
    SpearmanResult result;
    std::vector<double> gold;
    std::vector<double> cosine;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> parts = split_tokens(line);
        if (parts.size() != 3)
            throw Error(gold_path + ": line " + std::to_string(line_no) +
                        ": expected 'w1<TAB>w2<TAB>score'");
        ++result.total;
        const int i = space.find(parts[0]);
        const int j = space.find(parts[1]);
        if (i < 0 || j < 0) continue;
        const double ni = space.matrix().row(i).norm();
        const double nj = space.matrix().row(j).norm();
        if (ni == 0.0 || nj == 0.0) continue;
        gold.push_back(std::stod(parts[2]));
        cosine.push_back(space.matrix().row(i).dot(space.matrix().row(j)) / (ni * nj));
        ++result.covered;
    }
    if (result.covered < 5)
        throw Error("only " + std::to_string(result.covered) +
                    " gold pairs covered by the vocabulary; need at least 5");
    result.rho = spearman_rho(gold, cosine);
    return result;
}

SymAsymReport sym_asym_eval(const LabeledVectorSet& orig_train, const LabeledVectorSet& orig_test,
                            const LabeledVectorSet& shifted_train,
                            const LabeledVectorSet& shifted_test, const Projection& proj,
                            const ClassifierConfig& config) {
    for (const LabeledVectorSet* set : {&orig_train, &orig_test, &shifted_train, &shifted_test}) {
        set->validate();
        if (set->dim() != orig_train.dim()) throw Error("sym/asym sets have different dimensions");
        if (set->label_names != orig_train.label_names)
            throw Error("sym/asym sets have different label sets");
    }
    if (proj.dim() != orig_train.dim())
        throw Error("projection dimension does not match the data");

    const LabeledVectorSet shifted_train_deb = apply_projection(proj, shifted_train);
    const LabeledVectorSet shifted_test_deb = apply_projection(proj, shifted_test);

    const LinearClassifier original = train_softmax(orig_train, config);
    const LinearClassifier shifted = train_softmax(shifted_train, config);
    const LinearClassifier debiased = train_softmax(shifted_train_deb, config);

    SymAsymReport report;
    report.seed = config.seed;
    report.original_sym = accuracy(original, orig_test);
    report.shifted_sym = accuracy(shifted, shifted_test);
    report.debiased_sym = accuracy(debiased, shifted_test_deb);
    report.shifted_asym = accuracy(shifted, orig_test);
    report.debiased_asym = accuracy(debiased, orig_test);
    report.majority_baseline = majority_fraction(orig_test.labels);
    return report;
}

void export_2d(const LabeledVectorSet& set, const std::string& out_path) {
    set.validate();
    if (set.size() < 3) throw Error("2D export needs at least 3 vectors");
    Eigen::MatrixXd centered = set.vectors;
    centered.rowwise() -= set.vectors.colwise().mean();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    if (sigma.size() < 2 || sigma(1) <= sigma(0) * 1e-10)
        throw Error("2D export needs data of rank >= 2");

    Eigen::MatrixXd components = svd.matrixV().leftCols(2);  // d x 2
    for (int c = 0; c < 2; ++c) {
        Eigen::Index peak = 0;
        components.col(c).cwiseAbs().maxCoeff(&peak);
        if (components(peak, c) < 0.0) components.col(c) = -components.col(c);
    }
    const Eigen::MatrixXd scores = centered * components;

    std::ofstream out(out_path);
    if (!out) throw Error("cannot open file for writing: " + out_path);
    char buf[40];
    for (int i = 0; i < set.size(); ++i) {
        const std::string id = set.ids.empty() ? std::to_string(i) : set.ids[i];
        out << id << '\t' << set.label_names[set.labels[i]];
        for (int c = 0; c < 2; ++c) {
            std::snprintf(buf, sizeof(buf), "%.8f", scores(i, c));
            out << '\t' << buf;
        }
        out << '\n';
    }
    if (!out) throw Error("write failed: " + out_path);
}

}  // namespace detran
