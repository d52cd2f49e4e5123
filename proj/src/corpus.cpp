#include "detran/corpus.hpp"

#include <cctype>
#include <fstream>

#include "detran/common.hpp"
#include "detran/rng.hpp"

namespace detran {

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) tokens.emplace_back(line.substr(start, i - start));
    }
    return tokens;
}

std::vector<Sentence> read_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file: " + path);
    std::vector<Sentence> sentences;
    std::string line;
    while (std::getline(in, line)) {
        Sentence tokens = split_tokens(line);
        if (!tokens.empty()) sentences.push_back(std::move(tokens));
    }
    return sentences;
}

void write_corpus(const std::vector<Sentence>& sentences, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open file for writing: " + path);
    for (const Sentence& sent : sentences) {
        for (std::size_t i = 0; i < sent.size(); ++i) {
            if (i > 0) out << ' ';
            out << sent[i];
        }
        out << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

void shuffle_sentences(std::vector<Sentence>& sentences, std::uint64_t seed) {
    Rng rng(seed);
    rng.shuffle(sentences);
}

}  // namespace detran
