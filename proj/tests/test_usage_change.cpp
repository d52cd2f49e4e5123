#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "detran/common.hpp"
#include "detran/usage_change.hpp"
#include "test_util.hpp"

using namespace detran;

namespace {

EmbeddingSpace random_space(int n, int d, std::uint64_t seed, std::int64_t count = 100) {
    std::vector<std::string> vocab;
    for (int i = 0; i < n; ++i) vocab.push_back("w" + std::to_string(i));
    return EmbeddingSpace(vocab, testutil::random_matrix(n, d, seed),
                          std::vector<std::int64_t>(n, count));
}

/// Brute-force oracle: full similarity sort per space, intersect top-k sets.
/// Candidates are the tokens shared by both spaces (all, in these tests).
int intersection_oracle(const EmbeddingSpace& o, const EmbeddingSpace& t,
                        const std::string& word, int k) {
    auto top_k = [&](const EmbeddingSpace& space) {
        std::vector<std::string> candidates = space.vocab();
        std::sort(candidates.begin(), candidates.end());
        const Eigen::RowVectorXd q = space.matrix().row(space.at(word));
        std::vector<std::pair<double, std::string>> scored;
        for (const std::string& c : candidates) {
            if (c == word) continue;
            const Eigen::RowVectorXd v = space.matrix().row(space.at(c));
            scored.push_back({v.dot(q) / (v.norm() * q.norm()), c});
        }
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        std::set<std::string> result;
        for (int i = 0; i < k; ++i) result.insert(scored[i].second);
        return result;
    };
    const std::set<std::string> nn_o = top_k(o);
    const std::set<std::string> nn_t = top_k(t);
    int common = 0;
    for (const std::string& w : nn_o) common += nn_t.count(w);
    return common;
}

}  // namespace

TEST_CASE("identical neighborhoods score -k, disjoint ones rank first at 0") {
    // Space T equals O except word w0 is moved to a far corner, flipping
    // its whole neighborhood.
    const int n = 20, d = 4, k = 5;
    EmbeddingSpace o = random_space(n, d, 31);
    Eigen::MatrixXd mt = o.matrix();
    mt.row(0) = Eigen::RowVectorXd::Constant(d, -50.0);
    const EmbeddingSpace t(o.vocab(), mt, o.counts());

    const TranslationeseLexicon lexicon = score_usage_change(o, t, k, 1);
    REQUIRE(lexicon.entries.size() == n);
    // Unmoved words keep identical neighbor sets unless w0 enters/leaves them.
    for (const LexiconEntry& entry : lexicon.entries) {
        CHECK(entry.score == -entry.intersection_size);
        CHECK(entry.intersection_size >= 0);
        CHECK(entry.intersection_size <= k);
    }
    // The moved word's sets can only overlap by chance; verify via oracle.
    for (const LexiconEntry& entry : lexicon.entries)
        CHECK(entry.intersection_size == intersection_oracle(o, t, entry.token, k));
}

TEST_CASE("identical spaces give every word the full -k score") {
    const EmbeddingSpace o = random_space(15, 3, 77);
    const TranslationeseLexicon lexicon = score_usage_change(o, o, 4, 1);
    for (const LexiconEntry& entry : lexicon.entries) {
        CHECK(entry.intersection_size == 4);
        CHECK(entry.score == -4);
    }
}

TEST_CASE("scores match the brute-force oracle on 50-word random spaces") {
    const EmbeddingSpace o = random_space(50, 6, 101);
    const EmbeddingSpace t = random_space(50, 6, 202);
    const TranslationeseLexicon lexicon = score_usage_change(o, t, 5, 1);
    REQUIRE(lexicon.entries.size() == 50);
    for (const LexiconEntry& entry : lexicon.entries)
        CHECK(entry.intersection_size == intersection_oracle(o, t, entry.token, 5));
    // Ranking: ascending intersection, ties by token.
    for (std::size_t i = 1; i < lexicon.entries.size(); ++i) {
        const LexiconEntry& prev = lexicon.entries[i - 1];
        const LexiconEntry& cur = lexicon.entries[i];
        const bool ordered = prev.intersection_size < cur.intersection_size ||
                             (prev.intersection_size == cur.intersection_size &&
                              prev.token < cur.token);
        CHECK(ordered);
    }
}

TEST_CASE("scoring is symmetric in the two spaces") {
    const EmbeddingSpace o = random_space(30, 5, 11);
    const EmbeddingSpace t = random_space(30, 5, 12);
    const TranslationeseLexicon ot = score_usage_change(o, t, 6, 1);
    const TranslationeseLexicon to = score_usage_change(t, o, 6, 1);
    REQUIRE(ot.entries.size() == to.entries.size());
    for (std::size_t i = 0; i < ot.entries.size(); ++i) {
        CHECK(ot.entries[i].token == to.entries[i].token);
        CHECK(ot.entries[i].intersection_size == to.entries[i].intersection_size);
    }
}

TEST_CASE("intersection size is monotone in k") {
    const EmbeddingSpace o = random_space(30, 5, 21);
    const EmbeddingSpace t = random_space(30, 5, 22);
    const TranslationeseLexicon small = score_usage_change(o, t, 3, 1);
    const TranslationeseLexicon big = score_usage_change(o, t, 10, 1);
    auto lookup = [](const TranslationeseLexicon& lex, const std::string& token) {
        for (const LexiconEntry& e : lex.entries)
            if (e.token == token) return e.intersection_size;
        return -1;
    };
    for (const LexiconEntry& entry : small.entries)
        CHECK(entry.intersection_size <= lookup(big, entry.token));
}

TEST_CASE("tokens outside the shared filtered vocabulary do not affect scores") {
    const EmbeddingSpace o = random_space(25, 4, 51);
    const EmbeddingSpace t = random_space(25, 4, 52);
    // Extend O with extra tokens absent from T; scores must not move.
    std::vector<std::string> vocab = o.vocab();
    Eigen::MatrixXd m(30, 4);
    m.topRows(25) = o.matrix();
    m.bottomRows(5) = testutil::random_matrix(5, 4, 53);
    std::vector<std::int64_t> counts(30, 100);
    for (int i = 0; i < 5; ++i) vocab.push_back("extra" + std::to_string(i));
    const EmbeddingSpace o_ext(vocab, m, counts);

    const TranslationeseLexicon base = score_usage_change(o, t, 5, 1);
    const TranslationeseLexicon ext = score_usage_change(o_ext, t, 5, 1);
    REQUIRE(base.entries.size() == ext.entries.size());
    for (std::size_t i = 0; i < base.entries.size(); ++i) {
        CHECK(base.entries[i].token == ext.entries[i].token);
        CHECK(base.entries[i].intersection_size == ext.entries[i].intersection_size);
    }
}

TEST_CASE("count filter applies per corpus") {
    const EmbeddingSpace o = random_space(10, 3, 61, 100);
    std::vector<std::int64_t> counts_t(10, 100);
    counts_t[2] = 1;  // w2 rare in T only
    const EmbeddingSpace t(o.vocab(), testutil::random_matrix(10, 3, 62), counts_t);
    const TranslationeseLexicon lexicon = score_usage_change(o, t, 3, 50);
    for (const LexiconEntry& entry : lexicon.entries) CHECK(entry.token != "w2");
    CHECK(lexicon.entries.size() == 9);
}

TEST_CASE("missing counts and empty eligible vocabulary are errors") {
    std::vector<std::string> vocab = {"a", "b", "c", "d"};
    const Eigen::MatrixXd m = testutil::random_matrix(4, 3, 71);
    const EmbeddingSpace no_counts(vocab, m);
    const EmbeddingSpace with_counts(vocab, m, {10, 10, 10, 10});
    CHECK_THROWS_AS(score_usage_change(no_counts, with_counts, 2, 1), Error);
    CHECK_THROWS_AS(score_usage_change(with_counts, with_counts, 2, 100), Error);
}

TEST_CASE("top_g clamps to the lexicon size") {
    const EmbeddingSpace o = random_space(12, 3, 81);
    const EmbeddingSpace t = random_space(12, 3, 82);
    const TranslationeseLexicon lexicon = score_usage_change(o, t, 3, 1);
    CHECK(top_g(lexicon, 1).size() == 1);
    CHECK(top_g(lexicon, 1)[0] == lexicon.entries[0].token);
    CHECK(top_g(lexicon, 500).size() == 12);
    CHECK_THROWS_AS(top_g(lexicon, 0), Error);
}

TEST_CASE("lexicon file round-trips") {
    testutil::TempDir tmp("lexicon");
    const EmbeddingSpace o = random_space(12, 3, 91);
    const EmbeddingSpace t = random_space(12, 3, 92);
    const TranslationeseLexicon lexicon = score_usage_change(o, t, 3, 1);
    save_lexicon(lexicon, tmp.path("g.tsv"));
    const TranslationeseLexicon loaded = load_lexicon(tmp.path("g.tsv"));
    CHECK(loaded.k == 3);
    CHECK(loaded.min_count_used == 1);
    REQUIRE(loaded.entries.size() == lexicon.entries.size());
    for (std::size_t i = 0; i < lexicon.entries.size(); ++i) {
        CHECK(loaded.entries[i].token == lexicon.entries[i].token);
        CHECK(loaded.entries[i].score == lexicon.entries[i].score);
    }
}
