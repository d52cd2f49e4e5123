#pragma once

#include <cstdint>
#include <string>

#include "detran/embedding.hpp"
#include "detran/labeled.hpp"

namespace detran {

/// Configuration and stats of an origin-tagged corpus. Tags are token
/// suffixes; raw tokens must not already end in either tag.
struct TaggedCorpus {
    std::string path;     // concatenated, shuffled tagged corpus
    std::string tag_o;
    std::string tag_t;
    std::uint64_t seed = 0;
    std::int64_t tokens_o = 0;
    std::int64_t tokens_t = 0;
};

/// Rewrites every token of the two corpora with its origin suffix, then
/// writes the concatenation (O first) sentence-shuffled under `seed`.
/// A one-line sidecar "<out>.tags" records tags and seed.
TaggedCorpus tag_corpora(const std::string& corpus_o, const std::string& corpus_t,
                         const std::string& tag_o, const std::string& tag_t, std::uint64_t seed,
                         const std::string& out_path);

/// Sidecar format: "#tag_o=<o> tag_t=<t> seed=<s>".
void save_tags(const TaggedCorpus& tags, const std::string& path);
TaggedCorpus load_tags(const std::string& path);

/// Every vocabulary token of a tagged joint space becomes one labeled row:
/// tag_o -> label 0, tag_t -> label 1. A token with neither suffix is an error.
LabeledVectorSet extract_labeled(const EmbeddingSpace& joint, const TaggedCorpus& tags,
                                 std::int64_t min_count = 0);

enum class StripPolicy { keep_o, keep_t, average };

struct StrippedSpace {
    EmbeddingSpace space;
    int fallbacks = 0;  // words served from the other origin under keep-* policies
};

/// Produces an untagged space from a tagged joint space. keep_o / keep_t
/// prefer that origin's vector and fall back to the other when missing;
/// average takes the mean when both exist.
StrippedSpace strip_tags(const EmbeddingSpace& joint, const TaggedCorpus& tags,
                         StripPolicy policy);

}  // namespace detran
