#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "detran/common.hpp"
#include "detran/embedding.hpp"
#include "test_util.hpp"

using namespace detran;

namespace {

EmbeddingSpace tiny_space() {
    std::vector<std::string> vocab = {"a", "b", "c"};
    Eigen::MatrixXd m(3, 2);
    m << 1, 0, 1, 0.01, -1, 0;
    return EmbeddingSpace(vocab, m);
}

/// Full-sort nearest-neighbor oracle (cosine, query excluded, ties by index).
std::vector<int> knn_oracle(const Eigen::MatrixXd& rows, int query, int k) {
    std::vector<double> sims(rows.rows());
    for (int i = 0; i < rows.rows(); ++i)
        sims[i] = rows.row(i).dot(rows.row(query)) / (rows.row(i).norm() * rows.row(query).norm());
    std::vector<int> order(rows.rows());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (sims[a] != sims[b]) return sims[a] > sims[b];
        return a < b;
    });
    std::vector<int> result;
    for (int i : order)
        if (i != query && static_cast<int>(result.size()) < k) result.push_back(i);
    return result;
}

}  // namespace

TEST_CASE("load_space reads the text-vec format") {
    testutil::TempDir tmp("load_space");
    testutil::write_file(tmp.path("s.vec"), "2 3\na 1 0 0\nb 0 1 0\n");
    const EmbeddingSpace space = load_space(tmp.path("s.vec"));
    CHECK(space.vocab() == std::vector<std::string>{"a", "b"});
    CHECK(space.dim() == 3);
    CHECK(space.matrix()(0, 0) == doctest::Approx(1.0));
    CHECK(space.matrix()(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("load_space reports dimension mismatch with the line number") {
    testutil::TempDir tmp("load_bad");
    testutil::write_file(tmp.path("s.vec"), "1 2\na 1 0 0\n");
    CHECK_THROWS_WITH_AS(load_space(tmp.path("s.vec")), doctest::Contains("line 2"), Error);
}

TEST_CASE("load_space rejects duplicate tokens by name") {
    testutil::TempDir tmp("load_dup");
    testutil::write_file(tmp.path("s.vec"), "2 2\na 1 0\na 0 1\n");
    CHECK_THROWS_WITH_AS(load_space(tmp.path("s.vec")), doctest::Contains("'a'"), Error);
}

TEST_CASE("save then load round-trips vocab and matrix") {
    testutil::TempDir tmp("roundtrip");
    const Eigen::MatrixXd m = testutil::random_matrix(17, 5, 42);
    std::vector<std::string> vocab;
    for (int i = 0; i < 17; ++i) vocab.push_back("w" + std::to_string(i));
    const EmbeddingSpace space(vocab, m);
    save_space(space, tmp.path("s.vec"));
    const EmbeddingSpace loaded = load_space(tmp.path("s.vec"));
    CHECK(loaded.vocab() == space.vocab());
    CHECK((loaded.matrix() - space.matrix()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("save_space writes one line per token plus header") {
    testutil::TempDir tmp("lines");
    const EmbeddingSpace space({"x", "y"}, Eigen::MatrixXd::Zero(2, 4));
    save_space(space, tmp.path("s.vec"));
    const std::string content = testutil::read_file(tmp.path("s.vec"));
    CHECK(std::count(content.begin(), content.end(), '\n') == 3);

    const EmbeddingSpace empty({}, Eigen::MatrixXd(0, 4));
    save_space(empty, tmp.path("e.vec"));
    CHECK(testutil::read_file(tmp.path("e.vec")) == "0 4\n");
}

TEST_CASE("normalize scales rows to unit norm and preserves direction") {
    Eigen::MatrixXd m(1, 2);
    m << 3, 4;
    const EmbeddingSpace unit = normalize(EmbeddingSpace({"w"}, m));
    CHECK(unit.matrix()(0, 0) == doctest::Approx(0.6));
    CHECK(unit.matrix()(0, 1) == doctest::Approx(0.8));

    // Idempotence.
    const EmbeddingSpace twice = normalize(unit);
    CHECK((twice.matrix() - unit.matrix()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("normalize rejects zero rows by token name") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(1, 2);
    CHECK_THROWS_WITH_AS(normalize(EmbeddingSpace({"zed"}, m)), doctest::Contains("zed"), Error);
}

TEST_CASE("knn orders by cosine and excludes the query") {
    const EmbeddingSpace space = tiny_space();
    CHECK(knn(space, "a", 1) == std::vector<std::string>{"b"});
    CHECK(knn(space, "a", 2) == std::vector<std::string>{"b", "c"});
    CHECK_THROWS_AS(knn(space, "missing", 1), Error);
    CHECK_THROWS_AS(knn(space, "a", 3), Error);
}

TEST_CASE("knn matches a brute-force full-sort oracle on random spaces") {
    const int n = 50, k = 5;
    const Eigen::MatrixXd m = testutil::random_matrix(n, 8, 7);
    std::vector<std::string> vocab;
    for (int i = 0; i < n; ++i) vocab.push_back("w" + std::to_string(i));
    const EmbeddingSpace space(vocab, m);
    const EmbeddingSpace unit = normalize(space);
    for (int q = 0; q < n; ++q) {
        const std::vector<int> expected = knn_oracle(m, q, k);
        std::vector<std::string> expected_tokens;
        for (int i : expected) expected_tokens.push_back(vocab[i]);
        CHECK(knn(space, vocab[q], k) == expected_tokens);
        CHECK(knn_indices(unit.matrix(), q, k) == expected);
    }
}

TEST_CASE("knn at k1 is a prefix of knn at k2") {
    const Eigen::MatrixXd m = testutil::random_matrix(30, 6, 11);
    std::vector<std::string> vocab;
    for (int i = 0; i < 30; ++i) vocab.push_back("w" + std::to_string(i));
    const EmbeddingSpace space(vocab, m);
    const std::vector<std::string> big = knn(space, "w3", 20);
    for (int k : {1, 5, 12}) {
        const std::vector<std::string> small = knn(space, "w3", k);
        CHECK(std::equal(small.begin(), small.end(), big.begin()));
    }
}

TEST_CASE("sentence_vectors averages in-vocabulary tokens") {
    testutil::TempDir tmp("sentvec");
    Eigen::MatrixXd m(2, 2);
    m << 1, 0, 0, 1;
    const EmbeddingSpace space({"a", "b"}, m);
    testutil::write_file(tmp.path("c.tsv"),
                         "orig\ta b\ntrans\ta a a\norig\tzzz qqq\ntrans\tb\n");
    const SentenceVectors result = sentence_vectors(space, tmp.path("c.tsv"));
    CHECK(result.dropped_sentences == 1);
    CHECK(result.set.size() == 3);
    CHECK(result.set.vectors(0, 0) == doctest::Approx(0.5));
    CHECK(result.set.vectors(0, 1) == doctest::Approx(0.5));
    // Mean of identical tokens is exactly that token's vector.
    CHECK(result.set.vectors(1, 0) == 1.0);
    CHECK(result.set.vectors(1, 1) == 0.0);
    // One-token sentence equals the token vector exactly.
    CHECK(result.set.vectors(2, 1) == 1.0);
    // Sorted label names: orig < trans.
    CHECK(result.set.label_names == std::vector<std::string>{"orig", "trans"});
    CHECK(result.set.labels == std::vector<int>{0, 1, 1});
}

TEST_CASE("sentence_vectors rejects malformed lines with the line number") {
    testutil::TempDir tmp("sentbad");
    const EmbeddingSpace space({"a"}, Eigen::MatrixXd::Ones(1, 1));
    testutil::write_file(tmp.path("c.tsv"), "orig\ta\nno-tab-here\n");
    CHECK_THROWS_WITH_AS(sentence_vectors(space, tmp.path("c.tsv")), doctest::Contains("line 2"),
                         Error);
}

TEST_CASE("knn tie-breaking is by ascending vocabulary index") {
    // b and c are identical vectors; both tie on similarity to a.
    Eigen::MatrixXd m(4, 2);
    m << 1, 0, 0.5, 0.5, 0.5, 0.5, -1, 0.2;
    const EmbeddingSpace space({"a", "b", "c", "d"}, m);
    CHECK(knn(space, "a", 2) == std::vector<std::string>{"b", "c"});
}
