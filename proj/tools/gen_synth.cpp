// Generates the bundled synthetic bilingual-style corpus pair plus the gold
// similarity file used by the evaluation examples and the acceptance suite.
//
// Two "styles" share a topical vocabulary but differ in their function-word
// distribution, in a set of exclusive marker words, and in a set of shift
// words that change topic between the styles. That gives every detector in
// the toolkit something real to find: sentence classifiers see the markers
// and the function-word skew, the usage-change scorer sees the shift words,
// and origin-tagged training separates cleanly.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "detran/detran.hpp"

namespace {

constexpr int kTopics = 8;
int g_words_per_topic = 300;
constexpr int kFunctionWords = 40;
constexpr int kMarkers = 20;
constexpr int kShiftWords = 60;

std::string content_word(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "w%04d", i);
    return buf;
}

struct StyleModel {
    std::vector<double> topic_cdf;                       // cumulative topic weights
    std::vector<std::vector<std::string>> topic_words;   // per-topic pool
    std::vector<std::string> function_words;             // sampling pool with bias
    std::vector<std::string> markers;
};

StyleModel build_style(bool translationese) {
    StyleModel style;
    style.topic_words.resize(kTopics);
    for (int i = 0; i < kTopics * g_words_per_topic; ++i)
        style.topic_words[i / g_words_per_topic].push_back(content_word(i));
    // Shift words live in different topics per style.
    for (int i = 0; i < kShiftWords; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "s%02d", i);
        const int topic = translationese ? (i + kTopics / 2) % kTopics : i % kTopics;
        style.topic_words[topic].push_back(buf);
    }
    // Both styles share the topic mix; origin signal comes from markers,
    // shift words, and the function-word skew alone.
    for (int t = 0; t < kTopics; ++t)
        style.topic_cdf.push_back(static_cast<double>(t + 1) / kTopics);
    // Function words: both styles use all of them, one half twice as often.
    for (int i = 0; i < kFunctionWords; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "f%02d", i);
        style.function_words.push_back(buf);
        const bool favored = (i < kFunctionWords / 2) != translationese;
        if (favored) style.function_words.push_back(buf);
    }
    for (int i = 0; i < kMarkers; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%cm%d", translationese ? 't' : 'o', i);
        style.markers.push_back(buf);
    }
    return style;
}

std::vector<detran::Sentence> generate_corpus(const StyleModel& style, int sentences,
                                              std::uint64_t seed) {
    detran::Rng rng(seed);
    std::vector<detran::Sentence> corpus;
    corpus.reserve(sentences);
    for (int s = 0; s < sentences; ++s) {
        int topic = 0;
        const double roll = rng.uniform();
        while (topic + 1 < kTopics && roll > style.topic_cdf[topic]) ++topic;
        const int length = 8 + static_cast<int>(rng.below(9));
        detran::Sentence sent;
        sent.reserve(length);
        for (int i = 0; i < length; ++i) {
            const double kind = rng.uniform();
            if (kind < 0.25) {
                sent.push_back(style.function_words[rng.below(style.function_words.size())]);
            } else if (kind < 0.40) {
                sent.push_back(style.markers[rng.below(style.markers.size())]);
            } else {
                const auto& pool = style.topic_words[topic];
                sent.push_back(pool[rng.below(pool.size())]);
            }
        }
        corpus.push_back(std::move(sent));
    }
    return corpus;
}

void write_labeled(const std::vector<detran::Sentence>& o_corpus,
                   const std::vector<detran::Sentence>& t_corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw detran::Error("cannot open file for writing: " + path);
    auto dump = [&](const std::vector<detran::Sentence>& corpus, const char* label) {
        for (const detran::Sentence& sent : corpus) {
            out << label << '\t';
            for (std::size_t i = 0; i < sent.size(); ++i) {
                if (i > 0) out << ' ';
                out << sent[i];
            }
            out << '\n';
        }
    };
    dump(o_corpus, "original");
    dump(t_corpus, "translationese");
}

/// Gold similarity pairs scored by an independently seeded embedding of the
/// same corpora, so the gold ranking is correlated with, but not identical
/// to, any space under evaluation.
void write_gold(const std::vector<detran::Sentence>& o_corpus,
                const std::vector<detran::Sentence>& t_corpus, int pairs, std::uint64_t seed,
                const std::string& path) {
    std::vector<detran::Sentence> combined = o_corpus;
    combined.insert(combined.end(), t_corpus.begin(), t_corpus.end());
    detran::shuffle_sentences(combined, seed);
    detran::TrainConfig config;
    config.dim = 50;
    config.epochs = 5;
    config.min_count = 5;
    config.seed = seed;
    const detran::EmbeddingSpace space = detran::train_sgns(combined, config).space;

    detran::Rng rng(seed + 1);
    std::ofstream out(path);
    if (!out) throw detran::Error("cannot open file for writing: " + path);
    char buf[32];
    std::vector<std::pair<std::string, std::string>> seen;
    int written = 0;
    while (written < pairs) {
        // Alternate same-topic and cross-topic pairs so the gold scores have
        // a strong topical ordering every decent space reproduces.
        const bool same_topic = written % 2 == 0;
        const int topic_a = static_cast<int>(rng.below(kTopics));
        const int topic_b =
            same_topic ? topic_a
                       : static_cast<int>((topic_a + 1 + rng.below(kTopics - 1)) % kTopics);
        const std::string a =
            content_word(topic_a * g_words_per_topic + static_cast<int>(rng.below(g_words_per_topic)));
        const std::string b =
            content_word(topic_b * g_words_per_topic + static_cast<int>(rng.below(g_words_per_topic)));
        if (a == b) continue;
        if (space.find(a) < 0 || space.find(b) < 0) continue;
        bool duplicate = false;
        for (const auto& [pa, pb] : seen)
            if ((pa == a && pb == b) || (pa == b && pb == a)) duplicate = true;
        if (duplicate) continue;
        seen.push_back({a, b});
        const Eigen::RowVectorXd va = space.matrix().row(space.at(a));
        const Eigen::RowVectorXd vb = space.matrix().row(space.at(b));
        const double cosine = va.dot(vb) / (va.norm() * vb.norm());
        std::snprintf(buf, sizeof(buf), "%.4f", cosine);
        out << a << '\t' << b << '\t' << buf << '\n';
        ++written;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generate the bundled synthetic corpus pair and gold similarity file"};
    std::string out_dir = "data";
    int sentences = 8000;
    int gold_pairs = 50;
    std::uint64_t seed = 20240601;
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--sentences", sentences, "sentences per corpus");
    app.add_option("--words-per-topic", g_words_per_topic, "content words per topic");
    app.add_option("--gold-pairs", gold_pairs, "gold similarity pairs");
    app.add_option("--seed", seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    try {
        std::filesystem::create_directories(out_dir);
        const StyleModel style_o = build_style(false);
        const StyleModel style_t = build_style(true);
        const std::vector<detran::Sentence> o_corpus = generate_corpus(style_o, sentences, seed);
        const std::vector<detran::Sentence> t_corpus =
            generate_corpus(style_t, sentences, seed + 1);
        detran::write_corpus(o_corpus, out_dir + "/synth_o.txt");
        detran::write_corpus(t_corpus, out_dir + "/synth_t.txt");
        write_labeled(o_corpus, t_corpus, out_dir + "/synth_labeled.tsv");
        write_gold(o_corpus, t_corpus, gold_pairs, seed + 2, out_dir + "/simgold_synth.tsv");
        std::cout << "wrote synth_o.txt synth_t.txt synth_labeled.tsv simgold_synth.tsv to "
                  << out_dir << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
