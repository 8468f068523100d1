#include "fundtext/cli/pipeline.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fundtext/cli/config.hpp"
#include "fundtext/cli/digest.hpp"
#include "fundtext/cli/reports.hpp"
#include "fundtext/common.hpp"
#include "fundtext/corpus/chunker.hpp"
#include "fundtext/corpus/documents.hpp"
#include "fundtext/corpus/text_normalizer.hpp"
#include "fundtext/corpus/vocabulary.hpp"
#include "fundtext/embedtm/clustering.hpp"
#include "fundtext/embedtm/embeddings.hpp"
#include "fundtext/embedtm/representation.hpp"
#include "fundtext/evalx/annotations.hpp"
#include "fundtext/evalx/coherence.hpp"
#include "fundtext/evalx/stability.hpp"
#include "fundtext/lda/lda.hpp"
#include "fundtext/lda/model_io.hpp"
#include "fundtext/sentperf/sentiment.hpp"
#include "fundtext/sentperf/statistics.hpp"

#ifndef FUNDTEXT_VERSION
#define FUNDTEXT_VERSION "0.0.0"
#endif

namespace fundtext::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

const std::vector<std::string> kModels{"lda", "cluster", "reduced"};

const std::vector<std::string> kAssignmentHeader{"chunk_id", "topic", "score"};
const std::vector<std::string> kTopicsHeader{"topic", "rank", "term", "score"};
const std::vector<std::string> kSentimentHeader{"fund_id", "topic", "month", "mean_score", "n_chunks"};
const std::vector<std::string> kFundCorrHeader{"fund_id", "topic", "n", "r"};
const std::vector<std::string> kSummaryHeader{"model", "topic_id", "annotation", "count",
                                              "mean",  "std",      "p_value",    "significant"};
const std::vector<std::string> kDisclosureHeader{"model_id", "weighting", "precision", "recall", "f1"};

class OutputLock {
public:
    explicit OutputLock(const fs::path& dir) {
        const auto path = dir / ".fundtext.lock";
        fd_ = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
        if (fd_ < 0) throw Error("cannot open lock file " + path.string());
        if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
            ::close(fd_);
            throw Error("output directory " + dir.string() + " is in use by another fundtext process");
        }
    }
    ~OutputLock() {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    OutputLock(const OutputLock&) = delete;
    OutputLock& operator=(const OutputLock&) = delete;

private:
    int fd_ = -1;
};

struct Context {
    std::string command;
    std::string model;
    PipelineConfig cfg;
    ReportFormat format = ReportFormat::csv;
    fs::path out_dir;
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;
    bool verbose = false;
    Diagnostics diag;
    std::vector<fs::path> inputs;
    std::vector<std::string> outputs;

    void info(const std::string& msg) const {
        if (verbose) *err << "[info] " << msg << "\n";
    }

    // A configured external input; must be set and exist.
    fs::path input(const std::string& value, const std::string& key) {
        if (value.empty()) throw ValidationError("config key " + key + " is not set");
        fs::path p(value);
        if (!fs::is_regular_file(p)) throw ValidationError("input file " + p.string() + " (" + key + ") does not exist");
        inputs.push_back(p);
        return p;
    }

    // An artifact written by an earlier subcommand.
    fs::path upstream(const std::string& name, const std::string& producer) {
        fs::path p = out_dir / name;
        if (!fs::is_regular_file(p))
            throw ValidationError("missing upstream artifact " + name + " (run `fundtext " + producer + "` first)");
        inputs.push_back(p);
        return p;
    }

    bool has_upstream(const std::string& name) const { return fs::is_regular_file(out_dir / name); }

    void write(const std::string& name, std::string_view content) {
        write_file_atomic(out_dir / name, content);
        outputs.push_back(name);
    }
};

std::string jsonl(const std::vector<std::string>& lines) {
    std::string s;
    for (const auto& l : lines) s += l + "\n";
    return s;
}

corpus::StopwordSet stopwords_for(Context& ctx) {
    if (ctx.cfg.paths.stopwords.empty()) return corpus::default_stopwords();
    return corpus::load_stopwords(ctx.input(ctx.cfg.paths.stopwords, "paths.stopwords"));
}

std::vector<corpus::RawDocument> read_corpus(Context& ctx) {
    corpus::IngestOptions opts;
    opts.min_date = YearMonth::parse(ctx.cfg.corpus.date_min);
    opts.max_date = YearMonth::parse(ctx.cfg.corpus.date_max);
    return corpus::ingest_documents(ctx.input(ctx.cfg.paths.corpus, "paths.corpus"), opts, &ctx.diag);
}

// Token lists re-encoded with the configured vocabulary rules.
corpus::TokenizedCorpus read_tokenized(Context& ctx) {
    auto file = corpus::load_token_lists(ctx.upstream("tokens.jsonl", "normalize"));
    return corpus::build_vocabulary(file.tokens, static_cast<std::uint32_t>(ctx.cfg.corpus.min_doc_freq),
                                    ctx.cfg.corpus.ngram_order, file.chunk_ids);
}

std::string assignments_csv(const std::vector<lda::TopicAssignment>& rows) {
    Table t{kAssignmentHeader, {}};
    for (const auto& a : rows) t.rows.push_back({a.chunk_id, std::to_string(a.topic), format_exact(a.max_prob)});
    return t.to_csv();
}

int parse_int(const std::string& s, const fs::path& where) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::logic_error&) {
    }
    throw ValidationError(where.string() + ": bad integer '" + s + "'");
}

double parse_double(const std::string& s, const fs::path& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size() && std::isfinite(v)) return v;
    } catch (const std::logic_error&) {
    }
    throw ValidationError(where.string() + ": bad number '" + s + "'");
}

std::vector<lda::TopicAssignment> read_assignments(const fs::path& path) {
    auto t = read_csv(path, kAssignmentHeader);
    std::vector<lda::TopicAssignment> out;
    for (const auto& r : t.rows) out.push_back({r[0], parse_int(r[1], path), parse_double(r[2], path)});
    return out;
}

void require_model(const Context& ctx) {
    if (std::find(kModels.begin(), kModels.end(), ctx.model) == kModels.end())
        throw ValidationError("--model must be one of lda, cluster, reduced (got '" + ctx.model + "')");
}

std::string producer_of(const std::string& model) {
    return model == "lda" ? "lda-fit" : model == "cluster" ? "cluster" : "reduce-topics";
}

fs::path model_assignments(Context& ctx, const std::string& model) {
    return ctx.upstream(model + "_assignments.csv", producer_of(model));
}

std::vector<lda::TopicAssignment> cluster_assignments(const embedtm::ClusterModel& m, const embedtm::EmbeddingSet& set) {
    std::vector<lda::TopicAssignment> out;
    for (std::size_t i = 0; i < m.chunk_ids.size(); ++i) {
        double score = 0.0;
        if (m.labels[i] != embedtm::kNoise) {
            const auto row = static_cast<Eigen::Index>(*set.find(m.chunk_ids[i]));
            score = embedtm::cosine_similarity(set.vectors().row(row).transpose(),
                                               m.centroids.row(m.labels[i]).transpose());
        }
        out.push_back({m.chunk_ids[i], m.labels[i], score});
    }
    return out;
}

// ---- subcommands -----------------------------------------------------------

void cmd_ingest(Context& ctx) {
    auto docs = read_corpus(ctx);
    std::vector<std::string> lines;
    for (const auto& d : docs) lines.push_back(corpus::to_json_line(d));
    ctx.write("documents.jsonl", jsonl(lines));
    *ctx.out << "ingested " << docs.size() << " documents\n";
}

void cmd_chunk(Context& ctx) {
    auto docs = read_corpus(ctx);
    const auto stopwords = stopwords_for(ctx);
    corpus::ChunkingRules rules;
    rules.max_len = static_cast<std::size_t>(ctx.cfg.corpus.max_words);
    rules.overlap = static_cast<std::size_t>(ctx.cfg.corpus.overlap);
    rules.min_len = static_cast<std::size_t>(ctx.cfg.corpus.min_words);
    auto chunks = corpus::chunk_documents(docs, {&stopwords, ctx.cfg.corpus.language_threshold}, rules);
    std::vector<std::string> lines;
    for (const auto& c : chunks) lines.push_back(corpus::to_json_line(c));
    ctx.write("chunks.jsonl", jsonl(lines));
    *ctx.out << "wrote " << chunks.size() << " chunks from " << docs.size() << " documents\n";
}

void cmd_normalize(Context& ctx) {
    auto chunks = corpus::load_chunks(ctx.upstream("chunks.jsonl", "chunk"));
    const auto stopwords = stopwords_for(ctx);
    corpus::NormalizerOptions opts;
    opts.stopwords = &stopwords;
    opts.min_word_len = static_cast<std::size_t>(ctx.cfg.corpus.min_word_len);
    std::vector<std::string> lines;
    std::size_t total = 0;
    for (const auto& c : chunks) {
        ordered_json j;
        j["chunk_id"] = c.chunk_id;
        auto tokens = corpus::normalize_for_lda(c.raw_text, opts);
        total += tokens.size();
        j["tokens"] = tokens;
        lines.push_back(j.dump());
    }
    ctx.write("tokens.jsonl", jsonl(lines));
    *ctx.out << "normalized " << chunks.size() << " chunks into " << total << " tokens\n";
}

void cmd_lda_fit(Context& ctx) {
    auto full = read_tokenized(ctx);
    // Chunks emptied by the vocabulary filter cannot be sampled; they are
    // reported as outliers.
    corpus::TokenizedCorpus fit = full;
    fit.chunk_ids.clear();
    fit.docs.clear();
    for (std::size_t d = 0; d < full.docs.size(); ++d) {
        if (full.docs[d].empty()) continue;
        fit.chunk_ids.push_back(full.chunk_ids[d]);
        fit.docs.push_back(full.docs[d]);
    }
    const std::size_t dropped = full.docs.size() - fit.docs.size();
    if (dropped) ctx.diag.warn(std::to_string(dropped) + " chunks have no in-vocabulary tokens and stay unassigned");

    lda::LdaConfig lc;
    lc.num_topics = ctx.cfg.lda.num_topics;
    lc.alpha = ctx.cfg.lda.alpha;
    lc.beta = ctx.cfg.lda.beta;
    lc.iterations = ctx.cfg.lda.iterations;
    lc.burn_in = ctx.cfg.lda.burn_in;
    lc.seed = ctx.cfg.seed;
    lc.tau = ctx.cfg.lda.tau;
    auto model = lda::fit_lda(fit, lc);
    ctx.info("fitted LDA with " + std::to_string(model.num_topics()) + " topics over " +
             std::to_string(model.vocab_size()) + " terms");

    lda::save_model(model, ctx.out_dir / "lda_model.bin");
    ctx.outputs.push_back("lda_model.bin");

    auto assigned = lda::assign_chunks(model, ctx.cfg.lda.tau);
    std::map<std::string, lda::TopicAssignment> by_id;
    for (auto& a : assigned) by_id.emplace(a.chunk_id, a);
    std::vector<lda::TopicAssignment> rows;
    for (const auto& id : full.chunk_ids) {
        auto it = by_id.find(id);
        rows.push_back(it != by_id.end() ? it->second : lda::TopicAssignment{id, kOutlier, 0.0});
    }
    ctx.write("lda_assignments.csv", assignments_csv(rows));

    Table ll{{"sweep", "log_likelihood"}, {}};
    for (std::size_t i = 0; i < model.log_likelihood.size(); ++i)
        ll.rows.push_back({std::to_string(i + 1), format_exact(model.log_likelihood[i])});
    ctx.write("lda_log_likelihood.csv", ll.to_csv());
    *ctx.out << "lda: " << model.num_topics() << " topics, " << fit.docs.size() << " chunks, "
             << model.vocab_size() << " terms\n";
}

void cmd_embed_load(Context& ctx) {
    auto chunks = embedtm::load_embeddings(ctx.input(ctx.cfg.paths.embeddings, "paths.embeddings"),
                                           embedtm::EmbeddingKind::chunk);
    const bool pca = ctx.cfg.embedtm.reduction == "pca";
    const auto method = pca ? embedtm::ReductionMethod::pca : embedtm::ReductionMethod::none;
    const std::size_t d = pca ? static_cast<std::size_t>(ctx.cfg.embedtm.d_target) : chunks.dim();
    auto reduction = embedtm::fit_reduction(chunks, d, method);
    auto reduced = reduction.apply(chunks);
    embedtm::save_embeddings(reduced, ctx.out_dir / "chunk_embeddings_reduced.jsonl");
    ctx.outputs.push_back("chunk_embeddings_reduced.jsonl");

    ordered_json summary;
    summary["model"] = chunks.model();
    summary["chunks"] = chunks.size();
    summary["dim"] = chunks.dim();
    summary["reduction"] = ctx.cfg.embedtm.reduction;
    summary["reduced_dim"] = reduced.dim();
    summary["explained_variance"] = std::vector<double>(reduction.eigenvalues.data(),
                                                        reduction.eigenvalues.data() + reduction.eigenvalues.size());
    if (!ctx.cfg.paths.word_embeddings.empty()) {
        auto words = embedtm::load_embeddings(ctx.input(ctx.cfg.paths.word_embeddings, "paths.word_embeddings"),
                                              embedtm::EmbeddingKind::word);
        // Words share the chunk space so centroid proximity is meaningful.
        embedtm::save_embeddings(reduction.apply(words), ctx.out_dir / "word_embeddings_reduced.jsonl");
        ctx.outputs.push_back("word_embeddings_reduced.jsonl");
        summary["words"] = words.size();
    }
    ctx.write("embeddings_summary.json", summary.dump(2) + "\n");
    *ctx.out << "embeddings: " << chunks.size() << " chunks, dim " << chunks.dim() << " -> " << reduced.dim() << "\n";
}

void cmd_cluster(Context& ctx) {
    auto set = embedtm::load_embeddings(ctx.upstream("chunk_embeddings_reduced.jsonl", "embed-load"),
                                        embedtm::EmbeddingKind::chunk);
    auto model = embedtm::cluster_embeddings(set, static_cast<std::size_t>(ctx.cfg.embedtm.min_topic_size),
                                             ctx.cfg.embedtm.linkage_threshold);
    model = embedtm::finalize_mode(model, set, embedtm::parse_cluster_mode(ctx.cfg.embedtm.mode));
    embedtm::save_cluster_model(model, ctx.out_dir / "cluster_model.json");
    ctx.outputs.push_back("cluster_model.json");
    ctx.write("cluster_assignments.csv", assignments_csv(cluster_assignments(model, set)));
    *ctx.out << "cluster: " << model.num_topics() << " topics, " << model.noise_count() << " noise points\n";
}

void cmd_reduce_topics(Context& ctx) {
    if (ctx.cfg.embedtm.target_topics < 1) throw ValidationError("config key embedtm.target_topics must be set (>= 1)");
    auto set = embedtm::load_embeddings(ctx.upstream("chunk_embeddings_reduced.jsonl", "embed-load"),
                                        embedtm::EmbeddingKind::chunk);
    auto model = embedtm::load_cluster_model(ctx.upstream("cluster_model.json", "cluster"));
    auto reduced = embedtm::hierarchical_reduce(model, set, static_cast<std::size_t>(ctx.cfg.embedtm.target_topics));
    embedtm::save_cluster_model(reduced, ctx.out_dir / "reduced_model.json");
    ctx.outputs.push_back("reduced_model.json");
    ctx.write("reduced_assignments.csv", assignments_csv(cluster_assignments(reduced, set)));
    *ctx.out << "reduce-topics: " << model.num_topics() << " -> " << reduced.num_topics() << " topics\n";
}

void cmd_topics(Context& ctx) {
    require_model(ctx);
    const auto n = static_cast<std::size_t>(ctx.cfg.eval.top_n);
    Table t{kTopicsHeader, {}};
    std::string method;
    if (ctx.model == "lda") {
        auto m = lda::load_model(ctx.upstream("lda_model.bin", "lda-fit"));
        method = "phi";
        for (std::size_t k = 0; k < m.num_topics(); ++k) {
            auto words = lda::top_words(m, k, n);
            for (std::size_t r = 0; r < words.size(); ++r)
                t.rows.push_back({std::to_string(k), std::to_string(r + 1), words[r].term, format_exact(words[r].weight)});
        }
    } else {
        auto m = embedtm::load_cluster_model(
            ctx.upstream(ctx.model == "cluster" ? "cluster_model.json" : "reduced_model.json", producer_of(ctx.model)));
        std::vector<embedtm::TopicRepresentation> reps;
        if (m.mode == embedtm::ClusterMode::top2vec) {
            method = "centroid_proximity";
            auto words = embedtm::load_embeddings(ctx.upstream("word_embeddings_reduced.jsonl", "embed-load"),
                                                  embedtm::EmbeddingKind::word);
            reps = embedtm::centroid_topic_words(m, words, n);
        } else {
            method = "ctfidf_mmr";
            auto corpus = read_tokenized(ctx);
            std::optional<embedtm::EmbeddingSet> words;
            if (ctx.has_upstream("word_embeddings_reduced.jsonl"))
                words = embedtm::load_embeddings(ctx.upstream("word_embeddings_reduced.jsonl", "embed-load"),
                                                 embedtm::EmbeddingKind::word);
            reps = embedtm::ctfidf_mmr_words(m, corpus, n, ctx.cfg.embedtm.mmr_lambda, words ? &*words : nullptr);
        }
        for (const auto& rep : reps)
            for (std::size_t r = 0; r < rep.terms.size(); ++r)
                t.rows.push_back({std::to_string(rep.topic), std::to_string(r + 1), rep.terms[r].term,
                                  format_exact(rep.terms[r].score)});
    }
    ctx.write("topics_" + ctx.model + ".csv", t.to_csv());
    *ctx.out << "topics (" << ctx.model << ", " << method << "): " << t.rows.size() << " ranked terms\n";
}

evalx::TopWords read_top_words(Context& ctx) {
    const auto path = ctx.upstream("topics_" + ctx.model + ".csv", "topics --model " + ctx.model);
    auto t = read_csv(path, kTopicsHeader);
    std::map<int, std::vector<std::pair<int, std::string>>> by_topic;
    for (const auto& r : t.rows) by_topic[parse_int(r[0], path)].emplace_back(parse_int(r[1], path), r[2]);
    evalx::TopWords out;
    for (auto& [topic, ranked] : by_topic) {
        std::sort(ranked.begin(), ranked.end());
        std::vector<std::string> words;
        for (auto& [rank, w] : ranked) words.push_back(w);
        out.push_back(std::move(words));
    }
    return out;
}

ordered_json coherence_json(const evalx::CoherenceResult& r) {
    ordered_json j;
    j["per_topic"] = r.per_topic;
    j["aggregate"] = r.aggregate;
    j["top_n"] = r.top_n;
    if (r.metric == evalx::CoherenceMetric::c_v) j["window"] = r.window;
    j["epsilon"] = r.epsilon;
    return j;
}

void cmd_coherence(Context& ctx) {
    require_model(ctx);
    auto topics = read_top_words(ctx);
    auto corpus = read_tokenized(ctx);
    std::vector<std::vector<std::string>> streams;
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) streams.push_back(corpus.decode(d));
    const auto n = static_cast<std::size_t>(ctx.cfg.eval.top_n);
    auto umass = evalx::coherence_umass(topics, corpus, n, ctx.cfg.eval.umass_epsilon);
    auto cv = evalx::coherence_cv(topics, streams, n, static_cast<std::size_t>(ctx.cfg.eval.window),
                                  ctx.cfg.eval.cv_epsilon);
    ordered_json j;
    j["model"] = ctx.model;
    j["c_v"] = coherence_json(cv);
    j["c_umass"] = coherence_json(umass);
    ctx.write("coherence_" + ctx.model + ".json", j.dump(2) + "\n");
    *ctx.out << "coherence (" << ctx.model << "): C_V " << format_number(cv.aggregate) << ", C_UMass "
             << format_number(umass.aggregate) << "\n";
}

void cmd_classify_eval(Context& ctx) {
    auto table = evalx::load_annotations(ctx.input(ctx.cfg.paths.annotations, "paths.annotations"));
    Table cls{{"model_id", "topic_id", "predicted_category", "accuracy", "n_samples", "n_members"}, {}};
    for (const auto& r : table.rows) {
        auto p = evalx::topic_predicted_class(r);
        cls.rows.push_back({r.model_id, std::to_string(r.topic_id), p.category, format_number(p.accuracy),
                            std::to_string(r.n_samples), std::to_string(r.n_members)});
    }
    Table metrics{kDisclosureHeader, {}};
    for (const auto& id : table.model_ids()) {
        for (auto w : {evalx::Weighting::doc_weighted, evalx::Weighting::equal_weighted}) {
            evalx::ClassMetrics m;
            try {
                m = evalx::disclosure_prf(table.for_model(id), w);
            } catch (const ValidationError& e) {
                throw ValidationError("classify-eval: model " + id + ": " + e.what());
            }
            metrics.rows.push_back({id, std::string(evalx::to_string(w)), format_number(m.precision),
                                    format_number(m.recall), format_number(m.f1)});
        }
    }
    ctx.write("classification.csv", cls.to_csv());
    ctx.write("disclosure_metrics.csv", metrics.to_csv());
    *ctx.out << "classify-eval: " << table.rows.size() << " topics over " << table.model_ids().size() << " models\n";
}

std::vector<lda::TopicAssignment> stability_side(Context& ctx, const std::string& spec) {
    if (std::find(kModels.begin(), kModels.end(), spec) != kModels.end())
        return read_assignments(model_assignments(ctx, spec));
    return read_assignments(ctx.input(spec, "eval.stability_*"));
}

void cmd_stability(Context& ctx) {
    auto a = stability_side(ctx, ctx.cfg.eval.stability_a);
    auto b = stability_side(ctx, ctx.cfg.eval.stability_b);
    auto m = evalx::stability_matrix(a, b, static_cast<std::size_t>(ctx.cfg.eval.stability_top_rows),
                                     static_cast<std::size_t>(ctx.cfg.eval.stability_top_cols),
                                     ctx.cfg.eval.stability_floor);
    Table counts{{"topic_a"}, {}};
    for (std::size_t j = 0; j < m.topics_b; ++j) counts.header.push_back(std::to_string(j));
    for (std::size_t i = 0; i < m.topics_a; ++i) {
        std::vector<std::string> row{std::to_string(i)};
        for (std::size_t j = 0; j < m.topics_b; ++j) row.push_back(std::to_string(m.counts[i][j]));
        counts.rows.push_back(std::move(row));
    }
    ctx.write("stability_counts.csv", counts.to_csv());
    ctx.write("stability_heatmap.json",
              stability_heatmap(m, ctx.cfg.eval.stability_a, ctx.cfg.eval.stability_b).dump(2) + "\n");
    *ctx.out << "stability: " << m.total << " co-assigned chunks, nonzero fraction "
             << format_number(m.nonzero_fraction) << "\n";
}

void cmd_senti_aggregate(Context& ctx) {
    require_model(ctx);
    auto records = sentperf::load_sentiment(ctx.input(ctx.cfg.paths.sentiment, "paths.sentiment"));
    auto chunks = corpus::load_chunks(ctx.upstream("chunks.jsonl", "chunk"));
    auto assigned = read_assignments(model_assignments(ctx, ctx.model));
    std::unordered_map<std::string, sentperf::ChunkMeta> meta;
    for (const auto& c : chunks) meta.emplace(c.chunk_id, sentperf::ChunkMeta{c.fund_id, c.date});
    std::unordered_map<std::string, int> topics;
    for (const auto& a : assigned) topics.emplace(a.chunk_id, a.topic);
    for (const auto& r : records) {
        if (!meta.contains(r.chunk_id)) throw ValidationError("sentiment record for unknown chunk " + r.chunk_id);
        if (!topics.contains(r.chunk_id))
            throw ValidationError("chunk " + r.chunk_id + " has no " + ctx.model + " assignment");
    }
    auto agg = sentperf::aggregate_sentiment(records, topics, meta, ctx.cfg.sentperf.sentiment_model);
    if (agg.skipped_no_fund)
        ctx.diag.warn(std::to_string(agg.skipped_no_fund) + " sentiment records skipped: chunk has no fund_id");
    Table t{kSentimentHeader, {}};
    for (const auto& r : agg.rows)
        t.rows.push_back({r.fund_id, std::to_string(r.topic), r.month.str(), format_exact(r.mean_score),
                          std::to_string(r.n_chunks)});
    ctx.write("sentiment_" + ctx.model + ".csv", t.to_csv());
    *ctx.out << "senti-aggregate (" << ctx.model << "): " << agg.rows.size() << " fund/topic/month rows\n";
}

std::map<int, std::string> annotation_labels(Context& ctx, const std::string& model_id) {
    std::map<int, std::string> out;
    if (ctx.cfg.paths.annotations.empty()) return out;
    auto table = evalx::load_annotations(ctx.input(ctx.cfg.paths.annotations, "paths.annotations")).for_model(model_id);
    for (const auto& r : table.rows) out[r.topic_id] = evalx::topic_predicted_class(r).category;
    return out;
}

void cmd_correlate(Context& ctx) {
    require_model(ctx);
    const auto spath = ctx.upstream("sentiment_" + ctx.model + ".csv", "senti-aggregate --model " + ctx.model);
    auto st = read_csv(spath, kSentimentHeader);
    std::vector<sentperf::TopicMonthSentiment> sentiments;
    for (const auto& r : st.rows)
        sentiments.push_back({r[0], parse_int(r[1], spath), YearMonth::parse(r[2]), parse_double(r[3], spath),
                              static_cast<std::size_t>(parse_int(r[4], spath))});
    auto returns = sentperf::load_returns(ctx.input(ctx.cfg.paths.returns, "paths.returns"));
    auto series = sentperf::lag_join(sentiments, returns);
    auto fund = sentperf::fund_correlations(series, static_cast<std::size_t>(ctx.cfg.sentperf.n_min));

    Table ft{kFundCorrHeader, {}};
    std::map<int, std::vector<double>> by_topic;
    for (const auto& f : fund) {
        ft.rows.push_back({f.fund_id, std::to_string(f.topic), std::to_string(f.n), format_exact(f.r)});
        by_topic[f.topic].push_back(f.r);
    }
    auto summaries = sentperf::summarize_topics(by_topic, ctx.cfg.sentperf.significance, annotation_labels(ctx, ctx.model));
    std::vector<CorrelationRow> rows;
    for (const auto& s : summaries) rows.push_back({ctx.model, s});
    ctx.write("fund_correlations_" + ctx.model + ".csv", ft.to_csv());
    ctx.write("correlation_summary_" + ctx.model + ".csv", correlation_table(rows).to_csv());
    *ctx.out << "correlate (" << ctx.model << "): " << fund.size() << " fund/topic correlations over "
             << summaries.size() << " topics\n";
}

std::optional<embedtm::TopicSizeStats> size_stats_for(Context& ctx, const std::string& model) {
    if (model == "lda") {
        if (!ctx.has_upstream("lda_model.bin") || !ctx.has_upstream("lda_assignments.csv")) return std::nullopt;
        const auto k = lda::load_model(ctx.upstream("lda_model.bin", "lda-fit")).num_topics();
        std::vector<std::size_t> sizes(k, 0);
        std::size_t outliers = 0;
        for (const auto& a : read_assignments(model_assignments(ctx, model))) {
            if (a.topic == kOutlier) ++outliers;
            else sizes.at(static_cast<std::size_t>(a.topic)) += 1;
        }
        return embedtm::topic_size_stats(sizes, outliers);
    }
    const std::string file = model == "cluster" ? "cluster_model.json" : "reduced_model.json";
    if (!ctx.has_upstream(file)) return std::nullopt;
    auto m = embedtm::load_cluster_model(ctx.upstream(file, producer_of(model)));
    if (m.num_topics() == 0) return std::nullopt;
    return embedtm::topic_size_stats(m);
}

void cmd_report(Context& ctx) {
    ReportBundle bundle;
    std::map<std::string, evalx::ClassMetrics> disclosure;
    if (ctx.has_upstream("disclosure_metrics.csv")) {
        const auto path = ctx.upstream("disclosure_metrics.csv", "classify-eval");
        for (const auto& r : read_csv(path, kDisclosureHeader).rows) {
            if (r[1] != ctx.cfg.eval.weighting) continue;
            disclosure[r[0]] = {parse_double(r[2], path), parse_double(r[3], path), parse_double(r[4], path)};
        }
    }
    for (const auto& model : kModels) {
        if (auto s = size_stats_for(ctx, model)) bundle.topic_sizes.emplace_back(model, *s);

        MetricsRow row{model, {}, {}, {}, {}, {}};
        bool any = false;
        if (auto it = disclosure.find(model); it != disclosure.end()) {
            row.precision = it->second.precision;
            row.recall = it->second.recall;
            row.f1 = it->second.f1;
            any = true;
        }
        if (ctx.has_upstream("coherence_" + model + ".json")) {
            std::ifstream in(ctx.upstream("coherence_" + model + ".json", "coherence"));
            auto j = nlohmann::json::parse(in);
            row.c_v = j.at("c_v").at("aggregate").get<double>();
            row.c_umass = j.at("c_umass").at("aggregate").get<double>();
            any = true;
        }
        if (any) bundle.metrics.push_back(row);

        const std::string summary = "correlation_summary_" + model + ".csv";
        const std::string fund = "fund_correlations_" + model + ".csv";
        if (ctx.has_upstream(summary) && ctx.has_upstream(fund)) {
            const auto spath = ctx.upstream(summary, "correlate");
            const auto fpath = ctx.upstream(fund, "correlate");
            std::map<int, std::vector<double>> by_topic;
            for (const auto& r : read_csv(fpath, kFundCorrHeader).rows)
                by_topic[parse_int(r[1], fpath)].push_back(parse_double(r[3], fpath));
            std::vector<BoxplotTopic> box;
            for (const auto& r : read_csv(spath, kSummaryHeader).rows) {
                sentperf::TopicCorrelationSummary s;
                s.topic = parse_int(r[1], spath);
                s.annotation = r[2];
                s.count = static_cast<std::size_t>(parse_int(r[3], spath));
                s.mean = parse_double(r[4], spath);
                s.std = parse_double(r[5], spath);
                if (!r[6].empty()) s.p_value = parse_double(r[6], spath);
                s.significant = r[7] == "true";
                bundle.correlations.push_back({model, s});
                box.push_back({s.topic, sentperf::boxplot_stats(by_topic.at(s.topic)), s.significant, s.annotation});
            }
            bundle.boxplots[model] = std::move(box);
        }
    }
    if (ctx.has_upstream("stability_heatmap.json")) {
        std::ifstream in(ctx.upstream("stability_heatmap.json", "stability"));
        bundle.stability = ordered_json::parse(in);
    }
    if (bundle.topic_sizes.empty() && bundle.metrics.empty() && bundle.correlations.empty() && bundle.boxplots.empty() &&
        !bundle.stability)
        throw ValidationError("missing upstream artifact: no model, coherence, metrics, correlation or stability "
                              "outputs found in " + ctx.out_dir.string());
    for (const auto& [name, content] : render_report(bundle, ctx.format)) ctx.write(name, content);
    *ctx.out << "report: " << ctx.outputs.size() << " files\n";
}

using Handler = void (*)(Context&);

struct Subcommand {
    std::string name;
    Handler handler;
    std::string help;
};

const std::vector<Subcommand>& handlers() {
    static const std::vector<Subcommand> h{
        {"ingest", cmd_ingest, "Validate the corpus and write documents.jsonl"},
        {"chunk", cmd_chunk, "Split documents into overlapping word windows"},
        {"normalize", cmd_normalize, "Tokenize, filter and stem chunks for LDA"},
        {"lda-fit", cmd_lda_fit, "Fit LDA and assign chunks to topics"},
        {"embed-load", cmd_embed_load, "Load chunk/word embeddings and reduce dimension"},
        {"cluster", cmd_cluster, "Cluster reduced chunk embeddings into topics"},
        {"reduce-topics", cmd_reduce_topics, "Merge cluster topics down to a target count"},
        {"topics", cmd_topics, "Write top words per topic for --model"},
        {"coherence", cmd_coherence, "Score C_V and UMass coherence for --model"},
        {"classify-eval", cmd_classify_eval, "Disclosure precision/recall/F1 from annotations"},
        {"stability", cmd_stability, "Contingency matrix between two topic models"},
        {"senti-aggregate", cmd_senti_aggregate, "Average sentiment per fund, topic and month"},
        {"correlate", cmd_correlate, "Correlate lagged sentiment with fund returns"},
        {"report", cmd_report, "Render summary tables and plot payloads"}};
    return h;
}

bool model_scoped(const std::string& cmd) {
    return cmd == "topics" || cmd == "coherence" || cmd == "senti-aggregate" || cmd == "correlate";
}

void write_manifest(Context& ctx, double seconds) {
    ordered_json j;
    j["command"] = ctx.command;
    if (model_scoped(ctx.command)) j["model"] = ctx.model;
    j["version"] = FUNDTEXT_VERSION;
    j["config_hash"] = config_hash(ctx.cfg);
    ordered_json inputs = ordered_json::array();
    std::set<std::string> seen;
    for (const auto& p : ctx.inputs) {
        const auto abs = fs::absolute(p).lexically_normal().string();
        if (!seen.insert(abs).second) continue;
        inputs.push_back({{"path", abs}, {"sha256", sha256_file(p)}});
    }
    j["inputs"] = std::move(inputs);
    ordered_json outputs = ordered_json::array();
    for (const auto& name : ctx.outputs) outputs.push_back({{"path", name}, {"sha256", sha256_file(ctx.out_dir / name)}});
    j["outputs"] = std::move(outputs);
    j["warnings"] = ctx.diag.warnings;
    j["wall_time_seconds"] = seconds;
    std::string name = "manifest_" + ctx.command + (model_scoped(ctx.command) ? "_" + ctx.model : "") + ".json";
    write_file_atomic(ctx.out_dir / name, j.dump(2) + "\n");
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& c : handlers()) n.push_back(c.name);
        return n;
    }();
    return names;
}

std::vector<std::string> verify_manifest(const fs::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw ValidationError("cannot open manifest " + manifest_path.string());
    auto j = nlohmann::json::parse(in);
    std::vector<std::string> bad;
    const auto dir = manifest_path.parent_path();
    for (const auto& o : j.at("outputs")) {
        const auto name = o.at("path").get<std::string>();
        const auto p = dir / name;
        if (!fs::is_regular_file(p) || sha256_file(p) != o.at("sha256").get<std::string>()) bad.push_back(name);
    }
    for (const auto& i : j.at("inputs")) {
        const auto p = i.at("path").get<std::string>();
        if (!fs::is_regular_file(p) || sha256_file(p) != i.at("sha256").get<std::string>()) bad.push_back(p);
    }
    return bad;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"fundtext: topic modeling and sentiment analytics for hedge-fund documents", "fundtext"};
    app.set_version_flag("--version", FUNDTEXT_VERSION);
    ConfigOverrides ov;
    std::string config_path, output_dir, format = "csv", model = "lda";
    std::uint64_t seed = 0;
    bool verbose = false;
    app.add_option("--config", config_path, "JSON configuration file");
    auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides config)");
    auto* out_opt = app.add_option("--output", output_dir, "Output directory (overrides config)");
    app.add_option("--format", format, "Report table format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--model", model, "Topic model for model-scoped commands")
        ->check(CLI::IsMember({"lda", "cluster", "reduced"}));
    app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

    for (const auto& c : handlers()) app.add_subcommand(c.name, c.help)->fallthrough();
    auto* config_cmd = app.add_subcommand("config", "Print the resolved configuration")->fallthrough();
    bool print_defaults = false;
    config_cmd->add_flag("--print-defaults", print_defaults, "Print built-in defaults");
    app.require_subcommand(1);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << FUNDTEXT_VERSION << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitValidation;
    }

    try {
        if (!config_path.empty()) ov.config_path = config_path;
        if (seed_opt->count()) ov.seed = seed;
        if (out_opt->count()) ov.output_dir = output_dir;

        if (config_cmd->parsed()) {
            out << (print_defaults ? to_json(PipelineConfig{}) : to_json(resolve_config(ov, fundtext_environment())))
                       .dump(2)
                << "\n";
            return kExitOk;
        }

        Context ctx;
        ctx.command = app.get_subcommands().front()->get_name();
        ctx.model = model;
        ctx.cfg = resolve_config(ov, fundtext_environment());
        ctx.format = parse_report_format(format);
        ctx.out_dir = ctx.cfg.paths.output_dir;
        ctx.out = &out;
        ctx.err = &err;
        ctx.verbose = verbose;
        fs::create_directories(ctx.out_dir);
        OutputLock lock(ctx.out_dir);

        const auto start = std::chrono::steady_clock::now();
        for (const auto& c : handlers())
            if (c.name == ctx.command) c.handler(ctx);
        for (const auto& w : ctx.diag.warnings) err << "[warn] " << w << "\n";
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_manifest(ctx, seconds);
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace fundtext::cli
