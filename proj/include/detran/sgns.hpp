#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "detran/corpus.hpp"
#include "detran/embedding.hpp"

namespace detran {

/// Skip-gram with negative sampling. Single-threaded and deterministic
/// under a fixed seed; the context window is fixed (no dynamic shrink)
/// and frequent-word subsampling is off by default.
struct TrainConfig {
    int dim = 100;
    int window = 5;
    int negatives = 5;
    int epochs = 5;
    int min_count = 5;
    double learning_rate = 0.025;  // linear decay towards learning_rate * 1e-4
    std::uint64_t seed = 1;

    void validate() const;
};

struct VocabEntry {
    std::string token;
    std::int64_t count = 0;
};

/// Tokens occurring at least min_count times, ordered by descending count,
/// ties by ascending token.
std::vector<VocabEntry> build_vocab(const std::vector<Sentence>& corpus, int min_count);
std::vector<VocabEntry> build_vocab_file(const std::string& corpus_path, int min_count);

struct TrainResult {
    EmbeddingSpace space;
    std::vector<double> epoch_loss;  // mean SGNS loss per epoch
};

TrainResult train_sgns(const std::vector<Sentence>& corpus, const TrainConfig& config);
TrainResult train_sgns_file(const std::string& corpus_path, const TrainConfig& config);

}  // namespace detran
