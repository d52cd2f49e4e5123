#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace detran {

/// One whitespace-tokenized sentence.
using Sentence = std::vector<std::string>;

/// Reads a tokenized corpus, one sentence per line. Blank lines are skipped.
std::vector<Sentence> read_corpus(const std::string& path);

void write_corpus(const std::vector<Sentence>& sentences, const std::string& path);

/// Seeded in-place sentence-level shuffle.
void shuffle_sentences(std::vector<Sentence>& sentences, std::uint64_t seed);

/// Splits a line on ASCII whitespace.
std::vector<std::string> split_tokens(const std::string& line);

}  // namespace detran
