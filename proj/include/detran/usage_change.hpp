#pragma once

#include <string>
#include <vector>

#include "detran/embedding.hpp"

namespace detran {

struct LexiconEntry {
    std::string token;
    int intersection_size = 0;  // |k-NN set in O  ∩  k-NN set in T|
    int score = 0;              // always -intersection_size
};

/// Ranked word list: most-changed first (smallest intersection), ties by
/// ascending token.
struct TranslationeseLexicon {
    std::vector<LexiconEntry> entries;
    int k = 0;
    int min_count_used = 0;
};

/// Scores neighbor-set divergence between two spaces over the tokens that
/// are in both vocabularies with count >= min_count in both corpora.
/// Neighbor sets are computed within that shared filtered vocabulary.
TranslationeseLexicon score_usage_change(const EmbeddingSpace& space_o,
                                         const EmbeddingSpace& space_t, int k, int min_count);

/// First min(size, |entries|) tokens in lexicon order.
std::vector<std::string> top_g(const TranslationeseLexicon& lexicon, int size);

/// TSV: header "#k=<k> min_count=<m>", rows "token<TAB>intersection_size<TAB>score".
void save_lexicon(const TranslationeseLexicon& lexicon, const std::string& path);
TranslationeseLexicon load_lexicon(const std::string& path);

}  // namespace detran
