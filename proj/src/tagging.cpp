#include "detran/tagging.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "detran/common.hpp"
#include "detran/corpus.hpp"

namespace detran {

namespace {

bool ends_with(const std::string& token, const std::string& suffix) {
    return token.size() >= suffix.size() &&
           token.compare(token.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::int64_t tag_one(const std::string& path, const std::string& tag,
                     const std::string& tag_o, const std::string& tag_t,
                     std::vector<Sentence>& out) {
    std::int64_t tokens = 0;
    std::vector<Sentence> corpus = read_corpus(path);
    for (std::size_t line = 0; line < corpus.size(); ++line) {
        Sentence tagged;
        tagged.reserve(corpus[line].size());
        for (const std::string& token : corpus[line]) {
            if (ends_with(token, tag_o) || ends_with(token, tag_t))
                throw Error(path + ": line " + std::to_string(line + 1) + ": token '" + token +
                            "' already ends with an origin tag");
            tagged.push_back(token + tag);
            ++tokens;
        }
        out.push_back(std::move(tagged));
    }
    return tokens;
}

}  // namespace

TaggedCorpus tag_corpora(const std::string& corpus_o, const std::string& corpus_t,
                         const std::string& tag_o, const std::string& tag_t, std::uint64_t seed,
                         const std::string& out_path) {
    if (tag_o.empty() || tag_t.empty()) throw Error("origin tags must be non-empty");
    if (tag_o == tag_t) throw Error("origin tags must be distinct");

    TaggedCorpus tags;
    tags.path = out_path;
    tags.tag_o = tag_o;
    tags.tag_t = tag_t;
    tags.seed = seed;

    std::vector<Sentence> combined;
    tags.tokens_o = tag_one(corpus_o, tag_o, tag_o, tag_t, combined);
    tags.tokens_t = tag_one(corpus_t, tag_t, tag_o, tag_t, combined);
    shuffle_sentences(combined, seed);
    write_corpus(combined, out_path);
    save_tags(tags, out_path + ".tags");
    return tags;
}

void save_tags(const TaggedCorpus& tags, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open file for writing: " + path);
    out << "#tag_o=" << tags.tag_o << " tag_t=" << tags.tag_t << " seed=" << tags.seed << '\n';
    if (!out) throw Error("write failed: " + path);
}

TaggedCorpus load_tags(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open tag sidecar file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.empty() || line[0] != '#')
        throw Error(path + ": expected '#tag_o=<o> tag_t=<t> seed=<s>'");
    TaggedCorpus tags;
    for (const std::string& item : split_tokens(line.substr(1))) {
        if (item.rfind("tag_o=", 0) == 0) tags.tag_o = item.substr(6);
        else if (item.rfind("tag_t=", 0) == 0) tags.tag_t = item.substr(6);
        else if (item.rfind("seed=", 0) == 0) tags.seed = std::stoull(item.substr(5));
    }
    if (tags.tag_o.empty() || tags.tag_t.empty())
        throw Error(path + ": sidecar is missing tag_o or tag_t");
    return tags;
}

LabeledVectorSet extract_labeled(const EmbeddingSpace& joint, const TaggedCorpus& tags,
                                 std::int64_t min_count) {
    if (min_count > 0 && !joint.has_counts())
        throw Error("count filter requested but the joint space has no counts");
    LabeledVectorSet set;
    set.label_names = {"original", "translationese"};
    std::vector<int> rows;
    std::vector<int> labels;
    for (int i = 0; i < joint.size(); ++i) {
        if (min_count > 0 && joint.counts()[i] < min_count) continue;
        const std::string& token = joint.vocab()[i];
        if (ends_with(token, tags.tag_o)) labels.push_back(0);
        else if (ends_with(token, tags.tag_t)) labels.push_back(1);
        else throw Error("token '" + token + "' carries neither origin tag");
        rows.push_back(i);
    }
    if (rows.empty()) throw Error("no token passes the count filter");
    set.vectors.resize(static_cast<int>(rows.size()), joint.dim());
    set.ids.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        set.vectors.row(static_cast<int>(i)) = joint.matrix().row(rows[i]);
        set.ids.push_back(joint.vocab()[rows[i]]);
    }
    set.labels = std::move(labels);
    return set;
}

StrippedSpace strip_tags(const EmbeddingSpace& joint, const TaggedCorpus& tags,
                         StripPolicy policy) {
    struct Origin {
        int row_o = -1;
        int row_t = -1;
        std::int64_t count = 0;
    };
    // Base word -> tagged rows, ordered by base word for a stable output.
    std::map<std::string, Origin> words;
    for (int i = 0; i < joint.size(); ++i) {
        const std::string& token = joint.vocab()[i];
        std::string base;
        bool is_o = false;
        if (ends_with(token, tags.tag_o)) {
            base = token.substr(0, token.size() - tags.tag_o.size());
            is_o = true;
        } else if (ends_with(token, tags.tag_t)) {
            base = token.substr(0, token.size() - tags.tag_t.size());
        } else {
            throw Error("token '" + token + "' carries neither origin tag");
        }
        Origin& entry = words[base];
        (is_o ? entry.row_o : entry.row_t) = i;
        if (joint.has_counts()) entry.count += joint.counts()[i];
    }

    StrippedSpace result;
    std::vector<std::string> vocab;
    std::vector<std::int64_t> counts;
    Eigen::MatrixXd matrix(static_cast<int>(words.size()), joint.dim());
    int row = 0;
    for (const auto& [base, entry] : words) {
        const bool both = entry.row_o >= 0 && entry.row_t >= 0;
        Eigen::RowVectorXd vec;
        switch (policy) {
            case StripPolicy::average:
                if (both)
                    vec = (joint.matrix().row(entry.row_o) + joint.matrix().row(entry.row_t)) / 2.0;
                else
                    vec = joint.matrix().row(entry.row_o >= 0 ? entry.row_o : entry.row_t);
                break;
            case StripPolicy::keep_o:
                if (entry.row_o >= 0) {
                    vec = joint.matrix().row(entry.row_o);
                } else {
                    vec = joint.matrix().row(entry.row_t);
                    ++result.fallbacks;
                }
                break;
            case StripPolicy::keep_t:
                if (entry.row_t >= 0) {
                    vec = joint.matrix().row(entry.row_t);
                } else {
                    vec = joint.matrix().row(entry.row_o);
                    ++result.fallbacks;
                }
                break;
        }
        matrix.row(row++) = vec;
        vocab.push_back(base);
        if (joint.has_counts()) counts.push_back(entry.count);
    }
    result.space = EmbeddingSpace(std::move(vocab), std::move(matrix), std::move(counts));
    return result;
}

}  // namespace detran
