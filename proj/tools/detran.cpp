// detran: translationese debiasing toolkit over embedding files.
//
// Every subcommand reads and writes plain files so each pipeline stage
// stays inspectable; a sidecar <out>.manifest records flags, seeds, and
// input checksums for every run.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "detran/detran.hpp"

namespace {

using detran::Error;

/// Raised by pre-flight checks; nothing has been written yet.
class ValidationError : public Error {
public:
    using Error::Error;
};

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open input file: " + path);
    std::uint64_t hash = 1469598103934665603ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ULL;
        }
        if (!in) break;
    }
    return hash;
}

void require_input(const std::string& path, const std::string& flag) {
    if (path.empty()) throw ValidationError("missing required flag " + flag);
    if (!std::filesystem::exists(path))
        throw ValidationError(flag + ": file does not exist: " + path);
}

/// Reclassifies library errors raised during pre-flight checks, so bad flag
/// combinations exit 1 before anything is written.
template <typename F>
auto preflight(F&& check) {
    try {
        return check();
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(e.what());
    }
}

/// Collects manifest keys and the list of files written, so a failing run
/// can remove its partial outputs.
class RunContext {
public:
    RunContext(std::string subcommand, std::string primary_out)
        : primary_out_(std::move(primary_out)) {
        entries_["subcommand"] = std::move(subcommand);
        entries_["version"] = detran::kVersion;
    }

    void flag(const std::string& name, const std::string& value) {
        entries_["flag." + name] = value;
    }
    void flag(const std::string& name, double value) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%g", value);
        flag(name, std::string(buf));
    }
    void flag(const std::string& name, std::int64_t value) { flag(name, std::to_string(value)); }
    void flag(const std::string& name, std::uint64_t value) { flag(name, std::to_string(value)); }
    void flag(const std::string& name, int value) { flag(name, std::to_string(value)); }
    void flag(const std::string& name, bool value) { flag(name, std::string(value ? "true" : "false")); }

    void input(const std::string& path) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "fnv64:%016llx",
                      static_cast<unsigned long long>(fnv1a64_file(path)));
        entries_["input." + path] = buf;
    }
    void note(const std::string& key, const std::string& value) { entries_[key] = value; }

    /// Registers an output path before it is written.
    std::string out(const std::string& path) {
        outputs_.push_back(path);
        return path;
    }

    void write_manifest() {
        const std::string path = primary_out_ + ".manifest";
        outputs_.push_back(path);
        std::ofstream out(path);
        if (!out) throw Error("cannot open file for writing: " + path);
        for (const auto& [key, value] : entries_) out << key << '=' << value << '\n';
        if (!out) throw Error("write failed: " + path);
    }

    void remove_outputs() {
        for (const std::string& path : outputs_) {
            std::error_code ec;
            std::filesystem::remove(path, ec);
        }
    }

private:
    std::string primary_out_;
    std::map<std::string, std::string> entries_;  // sorted keys
    std::vector<std::string> outputs_;
};

/// EvalReport-style output: TSV block with a header plus a flat key=value
/// twin at <path>.kv.
void write_report(RunContext& ctx, const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& rows) {
    std::ofstream tsv(ctx.out(path));
    if (!tsv) throw Error("cannot open file for writing: " + path);
    tsv << "metric\tvalue\n";
    for (const auto& [key, value] : rows) tsv << key << '\t' << value << '\n';
    if (!tsv) throw Error("write failed: " + path);

    std::map<std::string, std::string> sorted(rows.begin(), rows.end());
    std::ofstream kv(ctx.out(path + ".kv"));
    if (!kv) throw Error("cannot open file for writing: " + path + ".kv");
    for (const auto& [key, value] : sorted) kv << key << '=' << value << '\n';
    if (!kv) throw Error("write failed: " + path + ".kv");
}

std::string format_fraction(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

/// token<TAB>count sidecar carrying corpus frequencies next to a .vec file.
void save_vocab_sidecar(const detran::EmbeddingSpace& space, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open file for writing: " + path);
    for (int i = 0; i < space.size(); ++i)
        out << space.vocab()[i] << '\t' << space.counts()[i] << '\n';
    if (!out) throw Error("write failed: " + path);
}

detran::EmbeddingSpace load_space_with_counts(const std::string& vec_path,
                                              const std::string& counts_path) {
    detran::EmbeddingSpace space = detran::load_space(vec_path);
    std::ifstream in(counts_path);
    if (!in) throw Error("cannot open counts sidecar: " + counts_path);
    std::vector<std::int64_t> counts(space.size(), 0);
    std::string line;
    int line_no = 0;
    int filled = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw Error(counts_path + ": line " + std::to_string(line_no) +
                        ": expected 'token<TAB>count'");
        const int idx = space.find(line.substr(0, tab));
        if (idx < 0)
            throw Error(counts_path + ": line " + std::to_string(line_no) + ": token '" +
                        line.substr(0, tab) + "' not in " + vec_path);
        counts[idx] = std::stoll(line.substr(tab + 1));
        ++filled;
    }
    if (filled != space.size())
        throw Error(counts_path + ": covers " + std::to_string(filled) + " of " +
                    std::to_string(space.size()) + " tokens");
    return detran::EmbeddingSpace(space.vocab(), space.matrix(), std::move(counts));
}

std::string default_counts_path(const std::string& vec_path) { return vec_path + ".vocab"; }

// ---------------------------------------------------------------------------
// Subcommand option blocks.

struct TrainOpts {
    std::vector<std::string> corpora;
    std::string out;
    detran::TrainConfig config;
    std::uint64_t shuffle_seed = 0;
    bool shuffle_seed_set = false;
};

void run_train(const TrainOpts& opts) {
    for (const std::string& corpus : opts.corpora) require_input(corpus, "--corpus");
    preflight([&] { opts.config.validate(); });

    RunContext ctx("train-embeddings", opts.out);
    for (std::size_t i = 0; i < opts.corpora.size(); ++i) {
        ctx.input(opts.corpora[i]);
        ctx.flag("corpus." + std::to_string(i), opts.corpora[i]);
    }
    ctx.flag("dim", opts.config.dim);
    ctx.flag("window", opts.config.window);
    ctx.flag("negatives", opts.config.negatives);
    ctx.flag("epochs", opts.config.epochs);
    ctx.flag("min-count", opts.config.min_count);
    ctx.flag("learning-rate", opts.config.learning_rate);
    ctx.flag("seed", opts.config.seed);

    try {
        std::vector<detran::Sentence> corpus;
        for (const std::string& path : opts.corpora) {
            std::vector<detran::Sentence> part = detran::read_corpus(path);
            corpus.insert(corpus.end(), std::make_move_iterator(part.begin()),
                          std::make_move_iterator(part.end()));
        }
        if (opts.corpora.size() > 1) {
            const std::uint64_t shuffle =
                opts.shuffle_seed_set ? opts.shuffle_seed : opts.config.seed;
            detran::shuffle_sentences(corpus, shuffle);
            ctx.flag("shuffle-seed", shuffle);
        }
        const detran::TrainResult result = detran::train_sgns(corpus, opts.config);
        detran::save_space(result.space, ctx.out(opts.out));
        save_vocab_sidecar(result.space, ctx.out(default_counts_path(opts.out)));
        ctx.note("result.vocab_size", std::to_string(result.space.size()));
        ctx.note("result.final_loss", format_fraction(result.epoch_loss.back()));
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

struct UsageChangeOpts {
    std::string space_o, space_t, counts_o, counts_t, out;
    int k = 1000;
    int min_count = 200;
};

void run_usage_change(const UsageChangeOpts& opts) {
    require_input(opts.space_o, "--space-o");
    require_input(opts.space_t, "--space-t");
    const std::string counts_o =
        opts.counts_o.empty() ? default_counts_path(opts.space_o) : opts.counts_o;
    const std::string counts_t =
        opts.counts_t.empty() ? default_counts_path(opts.space_t) : opts.counts_t;
    require_input(counts_o, "--counts-o");
    require_input(counts_t, "--counts-t");
    if (opts.k < 1) throw ValidationError("--k must be >= 1");
    if (opts.min_count < 1) throw ValidationError("--min-count must be >= 1");

    RunContext ctx("usage-change", opts.out);
    for (const std::string& path : {opts.space_o, opts.space_t, counts_o, counts_t})
        ctx.input(path);
    ctx.flag("k", opts.k);
    ctx.flag("min-count", opts.min_count);

    try {
        const detran::EmbeddingSpace space_o = load_space_with_counts(opts.space_o, counts_o);
        const detran::EmbeddingSpace space_t = load_space_with_counts(opts.space_t, counts_t);
        const detran::TranslationeseLexicon lexicon =
            detran::score_usage_change(space_o, space_t, opts.k, opts.min_count);
        detran::save_lexicon(lexicon, ctx.out(opts.out));
        ctx.note("result.entries", std::to_string(lexicon.entries.size()));
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

struct AlignOpts {
    std::string source, target, out_aligned, out_map, out_target_pre;
};

void run_align(const AlignOpts& opts) {
    require_input(opts.source, "--source");
    require_input(opts.target, "--target");

    RunContext ctx("align", opts.out_aligned);
    ctx.input(opts.source);
    ctx.input(opts.target);

    try {
        const detran::EmbeddingSpace source = detran::load_space(opts.source);
        const detran::EmbeddingSpace target = detran::load_space(opts.target);
        const std::vector<std::string> dictionary = detran::shared_dictionary(source, target);
        const detran::OrthogonalMap map = detran::procrustes_align(source, target, dictionary);
        detran::save_space(detran::apply_alignment(source, map), ctx.out(opts.out_aligned));
        if (!opts.out_map.empty()) detran::save_map(map, ctx.out(opts.out_map));
        if (!opts.out_target_pre.empty())
            detran::save_space(detran::preprocess_for_alignment(target),
                               ctx.out(opts.out_target_pre));
        ctx.note("result.dictionary_size", std::to_string(map.dictionary_size));
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

struct DirectionOpts {
    std::string aligned_t, aligned_o, word, lexicon, out;
    int g_size = 500;
};

void run_direction(const DirectionOpts& opts) {
    require_input(opts.aligned_t, "--aligned-t");
    require_input(opts.aligned_o, "--aligned-o");
    if (opts.word.empty() == opts.lexicon.empty())
        throw ValidationError("give exactly one of --word or --lexicon");
    if (!opts.lexicon.empty()) require_input(opts.lexicon, "--lexicon");
    if (opts.g_size < 1) throw ValidationError("--g-size must be >= 1");

    RunContext ctx("direction", opts.out);
    ctx.input(opts.aligned_t);
    ctx.input(opts.aligned_o);
    if (!opts.lexicon.empty()) {
        ctx.input(opts.lexicon);
        ctx.flag("g-size", opts.g_size);
    }
    if (!opts.word.empty()) ctx.flag("word", opts.word);

    try {
        const detran::EmbeddingSpace aligned_t = detran::load_space(opts.aligned_t);
        const detran::EmbeddingSpace aligned_o = detran::load_space(opts.aligned_o);
        detran::DirectionVector direction;
        if (!opts.word.empty()) {
            direction = detran::direction_from_word(aligned_t, aligned_o, opts.word);
        } else {
            const detran::TranslationeseLexicon lexicon = detran::load_lexicon(opts.lexicon);
            const detran::ListDirection result = detran::direction_from_list(
                aligned_t, aligned_o, detran::top_g(lexicon, opts.g_size));
            direction = result.direction;
            ctx.note("result.words_used", std::to_string(result.used));
            ctx.note("result.words_skipped", std::to_string(result.skipped.size()));
            if (!result.skipped.empty())
                std::cerr << "direction: skipped " << result.skipped.size()
                          << " words missing from an aligned space\n";
        }
        detran::save_direction(direction, ctx.out(opts.out));
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

struct SplitDirectionOpts {
    std::string joint, direction, counts, out;
    std::int64_t restrict_min_count = 0;
};

void run_split_direction(const SplitDirectionOpts& opts) {
    require_input(opts.joint, "--joint");
    require_input(opts.direction, "--direction");
    std::string counts_path;
    if (opts.restrict_min_count > 0) {
        counts_path = opts.counts.empty() ? default_counts_path(opts.joint) : opts.counts;
        require_input(counts_path, "--counts");
    }

    RunContext ctx("split-by-direction", opts.out);
    ctx.input(opts.joint);
    ctx.input(opts.direction);
    ctx.flag("restrict-min-count", opts.restrict_min_count);
    if (!counts_path.empty()) ctx.input(counts_path);

    try {
        const detran::EmbeddingSpace joint =
            counts_path.empty() ? detran::load_space(opts.joint)
                                : load_space_with_counts(opts.joint, counts_path);
        const detran::DirectionVector direction = detran::load_direction(opts.direction);
        const detran::LabeledVectorSet set =
            detran::split_by_direction(joint, direction, opts.restrict_min_count);
        detran::save_labeled(set, ctx.out(opts.out));
        ctx.note("result.rows", std::to_string(set.size()));
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

struct TagOpts {
    std::string corpus_o, corpus_t, tag_o = "_o", tag_t = "_t", out;
    std::uint64_t seed = 1;
};

void run_tag(const TagOpts& opts) {
    require_input(opts.corpus_o, "--corpus-o");
    require_input(opts.corpus_t, "--corpus-t");
    if (opts.tag_o.empty() || opts.tag_t.empty() || opts.tag_o == opts.tag_t)
        throw ValidationError("tags must be non-empty and distinct");

    RunContext ctx("tag-corpora", opts.out);
    ctx.input(opts.corpus_o);
    ctx.input(opts.corpus_t);
    ctx.flag("tag-o", opts.tag_o);
    ctx.flag("tag-t", opts.tag_t);
    ctx.flag("seed", opts.seed);

    try {
        ctx.out(opts.out);
        ctx.out(opts.out + ".tags");
        const detran::TaggedCorpus tags = detran::tag_corpora(
            opts.corpus_o, opts.corpus_t, opts.tag_o, opts.tag_t, opts.seed, opts.out);
        ctx.note("result.tokens_o", std::to_string(tags.tokens_o));
        ctx.note("result.tokens_t", std::to_string(tags.tokens_t));
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

struct ExtractOpts {
    std::string space, tags, counts, out;
    std::int64_t min_count = 0;
};

void run_extract(const ExtractOpts& opts) {
    require_input(opts.space, "--space");
    require_input(opts.tags, "--tags");
    std::string counts_path;
    if (opts.min_count > 0) {
        counts_path = opts.counts.empty() ? default_counts_path(opts.space) : opts.counts;
        require_input(counts_path, "--counts");
    }

    RunContext ctx("extract-labeled", opts.out);
    ctx.input(opts.space);
    ctx.input(opts.tags);
    ctx.flag("min-count", opts.min_count);
    if (!counts_path.empty()) ctx.input(counts_path);

    try {
        const detran::EmbeddingSpace joint =
            counts_path.empty() ? detran::load_space(opts.space)
                                : load_space_with_counts(opts.space, counts_path);
        const detran::TaggedCorpus tags = detran::load_tags(opts.tags);
        const detran::LabeledVectorSet set = detran::extract_labeled(joint, tags, opts.min_count);
        detran::save_labeled(set, ctx.out(opts.out));
        ctx.note("result.rows", std::to_string(set.size()));
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

struct StripOpts {
    std::string space, tags, policy = "average", out;
};

void run_strip(const StripOpts& opts) {
    require_input(opts.space, "--space");
    require_input(opts.tags, "--tags");
    detran::StripPolicy policy;
    if (opts.policy == "average") policy = detran::StripPolicy::average;
    else if (opts.policy == "keep-o") policy = detran::StripPolicy::keep_o;
    else if (opts.policy == "keep-t") policy = detran::StripPolicy::keep_t;
    else throw ValidationError("--policy must be average, keep-o, or keep-t");

    RunContext ctx("strip-tags", opts.out);
    ctx.input(opts.space);
    ctx.input(opts.tags);
    ctx.flag("policy", opts.policy);

    try {
        const detran::EmbeddingSpace joint = detran::load_space(opts.space);
        const detran::TaggedCorpus tags = detran::load_tags(opts.tags);
        const detran::StrippedSpace stripped = detran::strip_tags(joint, tags, policy);
        detran::save_space(stripped.space, ctx.out(opts.out));
        ctx.note("result.fallbacks", std::to_string(stripped.fallbacks));
        if (stripped.fallbacks > 0)
            std::cerr << "strip-tags: " << stripped.fallbacks
                      << " words served from the other origin\n";
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

void add_classifier_flags(CLI::App* sub, detran::ClassifierConfig& config) {
    sub->add_option("--clf-epochs", config.epochs, "classifier SGD epochs");
    sub->add_option("--clf-learning-rate", config.learning_rate, "classifier SGD step size");
    sub->add_option("--clf-l2", config.l2, "classifier L2 penalty");
}

void record_inlp_flags(RunContext& ctx, const detran::InlpConfig& config) {
    ctx.flag("mode", detran::to_string(config.mode));
    ctx.flag("max-classifiers", config.max_classifiers);
    ctx.flag("stop-epsilon", config.stop_epsilon);
    ctx.flag("warm-start", config.warm_start);
    ctx.flag("clf-epochs", config.classifier.epochs);
    ctx.flag("clf-learning-rate", config.classifier.learning_rate);
    ctx.flag("clf-l2", config.classifier.l2);
    ctx.flag("seed", config.classifier.seed);
}

struct InlpOpts {
    std::string train, dev, out;
    std::string mode = "orthogonal-basis";
    detran::InlpConfig config;
};

void run_inlp_cmd(const InlpOpts& opts) {
    require_input(opts.train, "--train");
    require_input(opts.dev, "--dev");
    detran::InlpConfig config = opts.config;
    preflight([&] {
        config.mode = detran::projection_mode_from_string(opts.mode);
        config.validate();
    });

    RunContext ctx("inlp", opts.out);
    ctx.input(opts.train);
    ctx.input(opts.dev);
    record_inlp_flags(ctx, config);

    try {
        const detran::LabeledVectorSet train = detran::load_labeled(opts.train);
        const detran::LabeledVectorSet dev = detran::load_labeled(opts.dev);
        const detran::Projection proj = detran::run_inlp(train, dev, config);
        detran::save_projection(proj, ctx.out(opts.out));
        ctx.note("result.iterations", std::to_string(proj.iterations));
        ctx.note("result.converged", proj.converged ? "true" : "false");
        ctx.note("result.final_accuracy", format_fraction(proj.accuracy_trace.back()));
        if (!proj.converged)
            std::cerr << "inlp: not converged after " << proj.iterations << " classifiers\n";
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

struct ApplyOpts {
    std::string projection, space, set, out;
};

void run_apply(const ApplyOpts& opts) {
    require_input(opts.projection, "--projection");
    if (opts.space.empty() == opts.set.empty())
        throw ValidationError("give exactly one of --space or --set");
    if (!opts.space.empty()) require_input(opts.space, "--space");
    if (!opts.set.empty()) require_input(opts.set, "--set");

    RunContext ctx("apply", opts.out);
    ctx.input(opts.projection);
    ctx.input(opts.space.empty() ? opts.set : opts.space);

    try {
        const detran::Projection proj = detran::load_projection(opts.projection);
        if (!opts.space.empty()) {
            const detran::EmbeddingSpace space = detran::load_space(opts.space);
            detran::save_space(detran::apply_projection(proj, space), ctx.out(opts.out));
        } else {
            const detran::LabeledVectorSet set = detran::load_labeled(opts.set);
            detran::save_labeled(detran::apply_projection(proj, set), ctx.out(opts.out));
        }
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

struct SentvecOpts {
    std::string space, corpus, out;
};

void run_sentvec(const SentvecOpts& opts) {
    require_input(opts.space, "--space");
    require_input(opts.corpus, "--corpus");

    RunContext ctx("sentvec", opts.out);
    ctx.input(opts.space);
    ctx.input(opts.corpus);

    try {
        const detran::EmbeddingSpace space = detran::load_space(opts.space);
        const detran::SentenceVectors result = detran::sentence_vectors(space, opts.corpus);
        detran::save_labeled(result.set, ctx.out(opts.out));
        ctx.note("result.rows", std::to_string(result.set.size()));
        ctx.note("result.dropped", std::to_string(result.dropped_sentences));
        if (result.dropped_sentences > 0)
            std::cerr << "sentvec: dropped " << result.dropped_sentences
                      << " sentences with no in-vocabulary tokens\n";
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

struct ClassifyEvalOpts {
    std::string data, out, out_proj;
    std::string mode = "orthogonal-basis";
    detran::SplitSpec split;
    detran::InlpConfig config;
};

void run_classify_eval(const ClassifyEvalOpts& opts) {
    require_input(opts.data, "--data");
    detran::InlpConfig config = opts.config;
    preflight([&] {
        config.mode = detran::projection_mode_from_string(opts.mode);
        config.classifier.seed = opts.split.seed;
        config.validate();
        opts.split.validate();
    });

    RunContext ctx("classify-eval", opts.out);
    ctx.input(opts.data);
    ctx.flag("train-frac", opts.split.train_frac);
    ctx.flag("dev-frac", opts.split.dev_frac);
    ctx.flag("test-frac", opts.split.test_frac);
    record_inlp_flags(ctx, config);

    try {
        const detran::LabeledVectorSet data = detran::load_labeled(opts.data);
        detran::Projection proj;
        const detran::EvalReport report =
            detran::classify_before_after(data, opts.split, config, &proj);
        write_report(ctx, opts.out,
                     {{"task", report.task},
                      {"accuracy_before", format_fraction(report.accuracy_before)},
                      {"accuracy_after", format_fraction(report.accuracy_after)},
                      {"majority_baseline", format_fraction(report.majority_baseline)},
                      {"n_train", std::to_string(report.n_train)},
                      {"n_dev", std::to_string(report.n_dev)},
                      {"n_test", std::to_string(report.n_test)},
                      {"iterations_used", std::to_string(report.iterations_used)},
                      {"seed", std::to_string(report.seed)}});
        if (!opts.out_proj.empty()) detran::save_projection(proj, ctx.out(opts.out_proj));
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

struct SimevalOpts {
    std::string space, gold, out;
};

void run_simeval(const SimevalOpts& opts) {
    require_input(opts.space, "--space");
    require_input(opts.gold, "--gold");

    RunContext ctx("simeval", opts.out);
    ctx.input(opts.space);
    ctx.input(opts.gold);

    try {
        const detran::EmbeddingSpace space = detran::load_space(opts.space);
        const detran::SpearmanResult result = detran::spearman_similarity(space, opts.gold);
        write_report(ctx, opts.out,
                     {{"task", "simeval"},
                      {"spearman_rho", format_fraction(result.rho)},
                      {"pairs_covered", std::to_string(result.covered)},
                      {"pairs_total", std::to_string(result.total)}});
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

struct SymAsymOpts {
    std::string orig_train, orig_test, shifted_train, shifted_test, projection, out;
    detran::ClassifierConfig classifier;
};

void run_symasym(const SymAsymOpts& opts) {
    require_input(opts.orig_train, "--orig-train");
    require_input(opts.orig_test, "--orig-test");
    require_input(opts.shifted_train, "--shifted-train");
    require_input(opts.shifted_test, "--shifted-test");
    require_input(opts.projection, "--projection");
    preflight([&] { opts.classifier.validate(); });

    RunContext ctx("symasym", opts.out);
    for (const std::string& path : {opts.orig_train, opts.orig_test, opts.shifted_train,
                                    opts.shifted_test, opts.projection})
        ctx.input(path);
    ctx.flag("clf-epochs", opts.classifier.epochs);
    ctx.flag("clf-learning-rate", opts.classifier.learning_rate);
    ctx.flag("clf-l2", opts.classifier.l2);
    ctx.flag("seed", opts.classifier.seed);

    try {
        const detran::SymAsymReport report = detran::sym_asym_eval(
            detran::load_labeled(opts.orig_train), detran::load_labeled(opts.orig_test),
            detran::load_labeled(opts.shifted_train), detran::load_labeled(opts.shifted_test),
            detran::load_projection(opts.projection), opts.classifier);
        write_report(ctx, opts.out,
                     {{"task", "symasym"},
                      {"sym.original", format_fraction(report.original_sym)},
                      {"sym.shifted", format_fraction(report.shifted_sym)},
                      {"sym.debiased", format_fraction(report.debiased_sym)},
                      {"asym.original", format_fraction(report.original_sym)},
                      {"asym.shifted", format_fraction(report.shifted_asym)},
                      {"asym.debiased", format_fraction(report.debiased_asym)},
                      {"majority_baseline", format_fraction(report.majority_baseline)},
                      {"seed", std::to_string(report.seed)}});
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

struct Export2dOpts {
    std::string set, space, out;
};

void run_export2d(const Export2dOpts& opts) {
    if (opts.set.empty() == opts.space.empty())
        throw ValidationError("give exactly one of --set or --space");
    if (!opts.set.empty()) require_input(opts.set, "--set");
    if (!opts.space.empty()) require_input(opts.space, "--space");

    RunContext ctx("export2d", opts.out);
    ctx.input(opts.set.empty() ? opts.space : opts.set);

    try {
        detran::LabeledVectorSet set;
        if (!opts.set.empty()) {
            set = detran::load_labeled(opts.set);
        } else {
            const detran::EmbeddingSpace space = detran::load_space(opts.space);
            set.ids = space.vocab();
            set.vectors = space.matrix();
            set.labels.assign(space.size(), 0);
            set.label_names = {"word"};
        }
        detran::export_2d(set, ctx.out(opts.out));
        ctx.write_manifest();
    } catch (...) {
        ctx.remove_outputs();
        throw;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"detran: translationese debiasing for word and sentence embeddings"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("detran ") + detran::kVersion);

    TrainOpts train;
    CLI::App* sub = app.add_subcommand("train-embeddings",
                                       "train SGNS word embeddings from tokenized corpora");
    sub->add_option("--corpus", train.corpora,
                    "tokenized corpus, one sentence per line (repeatable; multiple corpora are "
                    "concatenated and sentence-shuffled)")
        ->required();
    sub->add_option("--out", train.out, "output .vec file (text-vec format)")->required();
    sub->add_option("--dim", train.config.dim, "embedding size");
    sub->add_option("--window", train.config.window, "max context offset");
    sub->add_option("--negatives", train.config.negatives, "negative samples per positive");
    sub->add_option("--epochs", train.config.epochs, "training epochs");
    sub->add_option("--min-count", train.config.min_count, "frequency floor");
    sub->add_option("--learning-rate", train.config.learning_rate, "initial step size");
    sub->add_option("--seed", train.config.seed, "RNG seed");
    sub->add_option("--shuffle-seed", train.shuffle_seed, "seed for the sentence shuffle")
        ->each([&](const std::string&) { train.shuffle_seed_set = true; });
    sub->callback([&] { run_train(train); });

    UsageChangeOpts usage;
    sub = app.add_subcommand("usage-change", "rank words by neighbor-set divergence");
    sub->add_option("--space-o", usage.space_o, "original space .vec")->required();
    sub->add_option("--space-t", usage.space_t, "translationese space .vec")->required();
    sub->add_option("--counts-o", usage.counts_o, "counts sidecar (default <space>.vocab)");
    sub->add_option("--counts-t", usage.counts_t, "counts sidecar (default <space>.vocab)");
    sub->add_option("--k", usage.k, "neighborhood size");
    sub->add_option("--min-count", usage.min_count, "frequency floor in both corpora");
    sub->add_option("--out", usage.out, "output lexicon TSV")->required();
    sub->callback([&] { run_usage_change(usage); });

    AlignOpts align;
    sub = app.add_subcommand("align", "orthogonal Procrustes alignment of two spaces");
    sub->add_option("--source", align.source, "space to map")->required();
    sub->add_option("--target", align.target, "space to align to")->required();
    sub->add_option("--out-aligned", align.out_aligned, "aligned source space")->required();
    sub->add_option("--out-map", align.out_map, "also write the orthogonal map");
    sub->add_option("--out-target-pre", align.out_target_pre,
                    "also write the preprocessed target space");
    sub->callback([&] { run_align(align); });

    DirectionOpts direction;
    sub = app.add_subcommand("direction", "translationese direction from aligned spaces");
    sub->add_option("--aligned-t", direction.aligned_t, "aligned translationese space")->required();
    sub->add_option("--aligned-o", direction.aligned_o, "aligned original space")->required();
    sub->add_option("--word", direction.word, "single word (INLP.single)");
    sub->add_option("--lexicon", direction.lexicon, "ranked lexicon TSV (INLP.avg)");
    sub->add_option("--g-size", direction.g_size, "how many top lexicon words to average");
    sub->add_option("--out", direction.out, "output direction file")->required();
    sub->callback([&] { run_direction(direction); });

    SplitDirectionOpts splitdir;
    sub = app.add_subcommand("split-by-direction",
                             "label joint-space words by cosine sign along a direction");
    sub->add_option("--joint", splitdir.joint, "joint space .vec")->required();
    sub->add_option("--direction", splitdir.direction, "direction file")->required();
    sub->add_option("--counts", splitdir.counts, "counts sidecar (default <joint>.vocab)");
    sub->add_option("--restrict-min-count", splitdir.restrict_min_count,
                    "keep only words at or above this frequency (0 = all)");
    sub->add_option("--out", splitdir.out, "output labeled vector TSV")->required();
    sub->callback([&] { run_split_direction(splitdir); });

    TagOpts tag;
    sub = app.add_subcommand("tag-corpora", "suffix-tag two corpora by origin and merge them");
    sub->add_option("--corpus-o", tag.corpus_o, "original corpus")->required();
    sub->add_option("--corpus-t", tag.corpus_t, "translationese corpus")->required();
    sub->add_option("--tag-o", tag.tag_o, "suffix for original tokens");
    sub->add_option("--tag-t", tag.tag_t, "suffix for translationese tokens");
    sub->add_option("--seed", tag.seed, "sentence shuffle seed");
    sub->add_option("--out", tag.out, "output tagged corpus (sidecar <out>.tags)")->required();
    sub->callback([&] { run_tag(tag); });

    ExtractOpts extract;
    sub = app.add_subcommand("extract-labeled",
                             "origin-labeled vectors from a tagged joint space");
    sub->add_option("--space", extract.space, "tagged joint space .vec")->required();
    sub->add_option("--tags", extract.tags, "tag sidecar file")->required();
    sub->add_option("--counts", extract.counts, "counts sidecar (default <space>.vocab)");
    sub->add_option("--min-count", extract.min_count,
                    "keep only tokens at or above this frequency (0 = all)");
    sub->add_option("--out", extract.out, "output labeled vector TSV")->required();
    sub->callback([&] { run_extract(extract); });

    StripOpts strip;
    sub = app.add_subcommand("strip-tags", "collapse a tagged space back to plain tokens");
    sub->add_option("--space", strip.space, "tagged joint space .vec")->required();
    sub->add_option("--tags", strip.tags, "tag sidecar file")->required();
    sub->add_option("--policy", strip.policy, "average, keep-o, or keep-t");
    sub->add_option("--out", strip.out, "output untagged space")->required();
    sub->callback([&] { run_strip(strip); });

    InlpOpts inlp;
    inlp.config.max_classifiers = 35;
    sub = app.add_subcommand("inlp", "iterative nullspace projection on labeled vectors");
    sub->add_option("--train", inlp.train, "training labeled vector TSV")->required();
    sub->add_option("--dev", inlp.dev, "development labeled vector TSV")->required();
    sub->add_option("--mode", inlp.mode, "orthogonal-basis or product");
    sub->add_option("--max-classifiers", inlp.config.max_classifiers, "classifier budget");
    sub->add_option("--stop-epsilon", inlp.config.stop_epsilon,
                    "stop once dev accuracy <= majority + epsilon");
    sub->add_flag("--warm-start", inlp.config.warm_start, "reuse weights across iterations");
    sub->add_option("--seed", inlp.config.classifier.seed, "classifier seed");
    add_classifier_flags(sub, inlp.config.classifier);
    sub->add_option("--out", inlp.out, "output projection file")->required();
    sub->callback([&] { run_inlp_cmd(inlp); });

    ApplyOpts apply;
    sub = app.add_subcommand("apply", "apply a projection to a space or labeled set");
    sub->add_option("--projection", apply.projection, "projection file")->required();
    sub->add_option("--space", apply.space, "space .vec to project");
    sub->add_option("--set", apply.set, "labeled vector TSV to project");
    sub->add_option("--out", apply.out, "output file")->required();
    sub->callback([&] { run_apply(apply); });

    SentvecOpts sentvec;
    sub = app.add_subcommand("sentvec", "mean-pooled sentence vectors from a labeled corpus");
    sub->add_option("--space", sentvec.space, "word space .vec")->required();
    sub->add_option("--corpus", sentvec.corpus, "labeled sentence file (label<TAB>sentence)")
        ->required();
    sub->add_option("--out", sentvec.out, "output labeled vector TSV")->required();
    sub->callback([&] { run_sentvec(sentvec); });

    ClassifyEvalOpts classify;
    classify.config.max_classifiers = 45;
    sub = app.add_subcommand("classify-eval",
                             "before/after INLP classification accuracy report");
    sub->add_option("--data", classify.data, "labeled vector TSV")->required();
    sub->add_option("--train-frac", classify.split.train_frac, "train fraction");
    sub->add_option("--dev-frac", classify.split.dev_frac, "dev fraction");
    sub->add_option("--test-frac", classify.split.test_frac, "test fraction");
    sub->add_option("--seed", classify.split.seed, "split and classifier seed");
    sub->add_option("--mode", classify.mode, "orthogonal-basis or product");
    sub->add_option("--max-classifiers", classify.config.max_classifiers, "classifier budget");
    sub->add_option("--stop-epsilon", classify.config.stop_epsilon,
                    "stop once dev accuracy <= majority + epsilon");
    add_classifier_flags(sub, classify.config.classifier);
    sub->add_option("--out", classify.out, "output report TSV (twin <out>.kv)")->required();
    sub->add_option("--out-proj", classify.out_proj, "also write the fitted projection");
    sub->callback([&] { run_classify_eval(classify); });

    SimevalOpts simeval;
    sub = app.add_subcommand("simeval", "Spearman correlation against a gold similarity file");
    sub->add_option("--space", simeval.space, "space .vec")->required();
    sub->add_option("--gold", simeval.gold, "gold TSV (w1<TAB>w2<TAB>score)")->required();
    sub->add_option("--out", simeval.out, "output report TSV (twin <out>.kv)")->required();
    sub->callback([&] { run_simeval(simeval); });

    SymAsymOpts symasym;
    sub = app.add_subcommand("symasym", "Sym/Asym transfer evaluation of a projection");
    sub->add_option("--orig-train", symasym.orig_train, "original-domain training TSV")->required();
    sub->add_option("--orig-test", symasym.orig_test, "original-domain test TSV")->required();
    sub->add_option("--shifted-train", symasym.shifted_train, "shifted-domain training TSV")
        ->required();
    sub->add_option("--shifted-test", symasym.shifted_test, "shifted-domain test TSV")->required();
    sub->add_option("--projection", symasym.projection, "projection file")->required();
    sub->add_option("--seed", symasym.classifier.seed, "classifier seed");
    add_classifier_flags(sub, symasym.classifier);
    sub->add_option("--out", symasym.out, "output report TSV (twin <out>.kv)")->required();
    sub->callback([&] { run_symasym(symasym); });

    Export2dOpts export2d;
    sub = app.add_subcommand("export2d", "top-2 principal components as TSV");
    sub->add_option("--set", export2d.set, "labeled vector TSV");
    sub->add_option("--space", export2d.space, "space .vec");
    sub->add_option("--out", export2d.out, "output TSV (id, label, x, y)")->required();
    sub->callback([&] { run_export2d(export2d); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
