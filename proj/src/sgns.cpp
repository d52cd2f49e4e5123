#include "detran/sgns.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "detran/common.hpp"
#include "detran/corpus.hpp"
#include "detran/rng.hpp"

namespace detran {

void TrainConfig::validate() const {
    if (dim < 2) throw Error("dim must be >= 2");
    if (window < 1) throw Error("window must be >= 1");
    if (negatives < 1) throw Error("negatives must be >= 1");
    if (epochs < 1) throw Error("epochs must be >= 1");
    if (min_count < 1) throw Error("min_count must be >= 1");
    if (learning_rate <= 0.0) throw Error("learning_rate must be > 0");
}

std::vector<VocabEntry> build_vocab(const std::vector<Sentence>& corpus, int min_count) {
    if (corpus.empty()) throw Error("empty corpus");
    if (min_count < 1) throw Error("min_count must be >= 1");
    std::unordered_map<std::string, std::int64_t> counts;
    for (const Sentence& sent : corpus)
        for (const std::string& token : sent) ++counts[token];
    std::vector<VocabEntry> vocab;
    for (const auto& [token, count] : counts)
        if (count >= min_count) vocab.push_back({token, count});
    std::sort(vocab.begin(), vocab.end(), [](const VocabEntry& a, const VocabEntry& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.token < b.token;
    });
    return vocab;
}

std::vector<VocabEntry> build_vocab_file(const std::string& corpus_path, int min_count) {
    return build_vocab(read_corpus(corpus_path), min_count);
}

namespace {

constexpr int kUnigramTableSize = 1 << 20;
constexpr double kUnigramPower = 0.75;

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<int> build_unigram_table(const std::vector<VocabEntry>& vocab) {
    std::vector<int> table(kUnigramTableSize);
    double total = 0.0;
    for (const VocabEntry& entry : vocab) total += std::pow(static_cast<double>(entry.count), kUnigramPower);
    int word = 0;
    double cumulative = std::pow(static_cast<double>(vocab[0].count), kUnigramPower) / total;
    for (int i = 0; i < kUnigramTableSize; ++i) {
        table[i] = word;
        if (static_cast<double>(i + 1) / kUnigramTableSize > cumulative &&
            word + 1 < static_cast<int>(vocab.size())) {
            ++word;
            cumulative += std::pow(static_cast<double>(vocab[word].count), kUnigramPower) / total;
        }
    }
    return table;
}

}  // namespace

TrainResult train_sgns(const std::vector<Sentence>& corpus, const TrainConfig& config) {
    config.validate();
    std::vector<VocabEntry> vocab = build_vocab(corpus, config.min_count);
    if (vocab.empty()) throw Error("vocabulary empty after min_count filtering");

    std::unordered_map<std::string, int> index;
    index.reserve(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) index.emplace(vocab[i].token, static_cast<int>(i));

    // Corpus as vocabulary ids; out-of-vocabulary tokens are removed.
    std::vector<std::vector<int>> sentences;
    sentences.reserve(corpus.size());
    std::int64_t total_tokens = 0;
    std::int64_t trainable = 0;
    for (const Sentence& sent : corpus) {
        std::vector<int> ids;
        ids.reserve(sent.size());
        for (const std::string& token : sent) {
            auto it = index.find(token);
            if (it != index.end()) ids.push_back(it->second);
        }
        total_tokens += static_cast<std::int64_t>(ids.size());
        if (ids.size() >= 2) trainable += static_cast<std::int64_t>(ids.size());
        if (!ids.empty()) sentences.push_back(std::move(ids));
    }
    if (trainable == 0) throw Error("corpus too small: no sentence has two in-vocabulary tokens");

    const int n = static_cast<int>(vocab.size());
    const int d = config.dim;
    Rng rng(config.seed);

    // word2vec layout: input vectors uniform in [-0.5/d, 0.5/d), output vectors zero.
    std::vector<double> syn0(static_cast<std::size_t>(n) * d);
    std::vector<double> syn1(static_cast<std::size_t>(n) * d, 0.0);
    for (double& w : syn0) w = (rng.uniform() - 0.5) / d;

    const std::vector<int> unigram = build_unigram_table(vocab);
    std::vector<double> grad(d);

    const double lr0 = config.learning_rate;
    const double lr_floor = lr0 * 1e-4;
    const std::int64_t schedule_total = static_cast<std::int64_t>(config.epochs) * total_tokens + 1;
    std::int64_t processed = 0;

    std::vector<double> epoch_loss;
    epoch_loss.reserve(config.epochs);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        double loss_sum = 0.0;
        std::int64_t loss_terms = 0;
        for (const std::vector<int>& ids : sentences) {
            const int len = static_cast<int>(ids.size());
            for (int pos = 0; pos < len; ++pos) {
                const double lr = std::max(
                    lr_floor, lr0 * (1.0 - static_cast<double>(processed) / schedule_total));
                ++processed;
                const int center = ids[pos];
                double* v_center = &syn0[static_cast<std::size_t>(center) * d];
                const int lo = std::max(0, pos - config.window);
                const int hi = std::min(len - 1, pos + config.window);
                for (int ctx_pos = lo; ctx_pos <= hi; ++ctx_pos) {
                    if (ctx_pos == pos) continue;
                    const int context = ids[ctx_pos];
                    std::fill(grad.begin(), grad.end(), 0.0);
                    // Positive example plus sampled negatives against syn1.
                    for (int s = 0; s < config.negatives + 1; ++s) {
                        int target;
                        double label;
                        if (s == 0) {
                            target = context;
                            label = 1.0;
                        } else {
                            target = unigram[rng.below(kUnigramTableSize)];
                            if (target == context) continue;
                            label = 0.0;
                        }
                        double* v_target = &syn1[static_cast<std::size_t>(target) * d];
                        double dot = 0.0;
                        for (int j = 0; j < d; ++j) dot += v_center[j] * v_target[j];
                        const double pred = sigmoid(dot);
                        loss_sum += label > 0.5 ? -std::log(std::max(pred, 1e-12))
                                                : -std::log(std::max(1.0 - pred, 1e-12));
                        ++loss_terms;
                        const double g = (label - pred) * lr;
                        for (int j = 0; j < d; ++j) grad[j] += g * v_target[j];
                        for (int j = 0; j < d; ++j) v_target[j] += g * v_center[j];
                    }
                    for (int j = 0; j < d; ++j) v_center[j] += grad[j];
                }
            }
        }
        epoch_loss.push_back(loss_terms > 0 ? loss_sum / loss_terms : 0.0);
    }

    std::vector<std::string> tokens;
    std::vector<std::int64_t> counts;
    tokens.reserve(n);
    counts.reserve(n);
    for (const VocabEntry& entry : vocab) {
        tokens.push_back(entry.token);
        counts.push_back(entry.count);
    }
    Eigen::MatrixXd matrix(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) matrix(i, j) = syn0[static_cast<std::size_t>(i) * d + j];

    TrainResult result{EmbeddingSpace(std::move(tokens), std::move(matrix), std::move(counts)),
                       std::move(epoch_loss)};
    return result;
}

TrainResult train_sgns_file(const std::string& corpus_path, const TrainConfig& config) {
    return train_sgns(read_corpus(corpus_path), config);
}

}  // namespace detran
