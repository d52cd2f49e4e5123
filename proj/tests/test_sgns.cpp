#include <doctest.h>

#include <map>
#include <sstream>

#include "detran/common.hpp"
#include "detran/rng.hpp"
#include "detran/sgns.hpp"
#include "test_util.hpp"

using namespace detran;

namespace {

std::vector<Sentence> parse(const std::string& text) {
    std::vector<Sentence> corpus;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        Sentence tokens = split_tokens(line);
        if (!tokens.empty()) corpus.push_back(tokens);
    }
    return corpus;
}

/// Corpus where pairs (p2i, p2i+1) co-occur only with each other.
std::vector<Sentence> paired_corpus(int pairs, int sentences, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Sentence> corpus;
    for (int s = 0; s < sentences; ++s) {
        const int p = static_cast<int>(rng.below(pairs));
        Sentence sent;
        for (int i = 0; i < 6; ++i)
            sent.push_back("p" + std::to_string(2 * p + rng.below(2)));
        corpus.push_back(sent);
    }
    return corpus;
}

double cosine(const EmbeddingSpace& space, const std::string& a, const std::string& b) {
    const Eigen::RowVectorXd va = space.matrix().row(space.at(a));
    const Eigen::RowVectorXd vb = space.matrix().row(space.at(b));
    return va.dot(vb) / (va.norm() * vb.norm());
}

}  // namespace

TEST_CASE("build_vocab filters by min_count and keeps exact counts") {
    const std::vector<Sentence> corpus = parse("a a b\n");
    const std::vector<VocabEntry> filtered = build_vocab(corpus, 2);
    REQUIRE(filtered.size() == 1);
    CHECK(filtered[0].token == "a");
    CHECK(filtered[0].count == 2);

    const std::vector<VocabEntry> all = build_vocab(corpus, 1);
    REQUIRE(all.size() == 2);
    CHECK(all[0].token == "a");
    CHECK(all[0].count == 2);
    CHECK(all[1].token == "b");
    CHECK(all[1].count == 1);
}

TEST_CASE("build_vocab counts match an independent line-scan oracle") {
    const std::vector<Sentence> corpus = paired_corpus(5, 200, 3);
    std::map<std::string, long> oracle;
    for (const Sentence& sent : corpus)
        for (const std::string& token : sent) ++oracle[token];
    for (const VocabEntry& entry : build_vocab(corpus, 1))
        CHECK(entry.count == oracle.at(entry.token));
}

TEST_CASE("build_vocab rejects an empty corpus") {
    CHECK_THROWS_AS(build_vocab({}, 1), Error);
}

TEST_CASE("train is deterministic and shapes match the config") {
    const std::vector<Sentence> corpus = paired_corpus(4, 300, 5);
    TrainConfig config;
    config.dim = 50;
    config.epochs = 2;
    config.min_count = 1;
    config.seed = 9;
    const TrainResult a = train_sgns(corpus, config);
    const TrainResult b = train_sgns(corpus, config);
    CHECK(a.space.dim() == 50);
    CHECK(a.space.vocab() == b.space.vocab());
    CHECK(a.space.matrix() == b.space.matrix());  // bit-identical

    // Vocabulary equals build_vocab output exactly.
    const std::vector<VocabEntry> vocab = build_vocab(corpus, 1);
    REQUIRE(a.space.size() == static_cast<int>(vocab.size()));
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        CHECK(a.space.vocab()[i] == vocab[i].token);
        CHECK(a.space.counts()[i] == vocab[i].count);
    }
}

TEST_CASE("tokens that co-occur exclusively end up mutual nearest") {
    // 10k short sentences, each drawn from one pair of words.
    const std::vector<Sentence> corpus = paired_corpus(5, 10000, 17);
    TrainConfig config;
    config.dim = 16;
    config.window = 3;
    config.epochs = 3;
    config.min_count = 1;
    config.seed = 2;
    const TrainResult result = train_sgns(corpus, config);
    const double partner = cosine(result.space, "p0", "p1");
    for (int other = 2; other < 10; ++other)
        CHECK(partner > cosine(result.space, "p0", "p" + std::to_string(other)));
}

TEST_CASE("training loss decreases from first to last epoch") {
    const std::vector<Sentence> corpus = paired_corpus(6, 2000, 23);
    TrainConfig config;
    config.dim = 12;
    config.epochs = 5;
    config.min_count = 1;
    config.seed = 4;
    const TrainResult result = train_sgns(corpus, config);
    REQUIRE(result.epoch_loss.size() == 5);
    CHECK(result.epoch_loss.back() < result.epoch_loss.front());
}

TEST_CASE("train rejects corpora with no usable context pairs") {
    CHECK_THROWS_AS(train_sgns(parse("a\nb\nc\n"), TrainConfig{.min_count = 1}), Error);
}
