#include "fundtext/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "fundtext/cli/digest.hpp"
#include "fundtext/common.hpp"

extern char** environ;

namespace fundtext::cli {

using nlohmann::json;

namespace {

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

// Overlays `patch` onto `base`; every key in patch must already exist in base.
void merge_known(json& base, const json& patch, const std::string& where) {
    if (!patch.is_object()) throw ValidationError("config: " + where + " must be an object");
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        const std::string key = where.empty() ? it.key() : where + "." + it.key();
        if (!base.contains(it.key())) throw ValidationError("config: unknown key '" + key + "'");
        if (base[it.key()].is_object()) merge_known(base[it.key()], it.value(), key);
        else base[it.key()] = it.value();
    }
}

json parse_env_value(const json& current, const std::string& text, const std::string& name) {
    try {
        if (current.is_string()) return text;
        if (text == "null") return nullptr;
        std::size_t pos = 0;
        if (current.is_number_integer() || current.is_number_unsigned()) {
            const long long v = std::stoll(text, &pos);
            if (pos != text.size()) throw std::invalid_argument(text);
            return v;
        }
        const double v = std::stod(text, &pos);
        if (pos != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::logic_error&) {
        throw ValidationError("environment variable " + name + ": cannot parse '" + text + "'");
    }
}

template <class T>
T get(const json& j, const char* section, const char* key) {
    try {
        return j.at(section).at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("config: ") + section + "." + key + " has the wrong type");
    }
}

template <class T>
std::optional<T> get_opt(const json& j, const char* section, const char* key) {
    const auto& v = j.at(section).at(key);
    if (v.is_null()) return std::nullopt;
    return get<T>(j, section, key);
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError("config: " + message);
}

}  // namespace

void PipelineConfig::validate() const {
    require(corpus.max_words >= 1, "corpus.max_words must be >= 1");
    require(corpus.overlap >= 0 && corpus.overlap < corpus.max_words, "corpus.overlap must be in [0, max_words)");
    require(corpus.min_words >= 1 && corpus.min_words <= corpus.max_words, "corpus.min_words must be in [1, max_words]");
    require(corpus.language_threshold >= 0 && corpus.language_threshold <= 1, "corpus.language_threshold must be in [0, 1]");
    require(corpus.min_word_len >= 0, "corpus.min_word_len must be >= 0");
    require(corpus.ngram_order == 1 || corpus.ngram_order == 3, "corpus.ngram_order must be 1 or 3");
    require(corpus.min_doc_freq >= 1, "corpus.min_doc_freq must be >= 1");
    YearMonth::parse(corpus.date_min);
    YearMonth::parse(corpus.date_max);
    require(lda.num_topics >= 1, "lda.num_topics must be >= 1");
    require(lda.iterations >= 1, "lda.iterations must be >= 1");
    require(!lda.alpha || *lda.alpha > 0, "lda.alpha must be > 0");
    require(!lda.beta || *lda.beta > 0, "lda.beta must be > 0");
    require(lda.tau >= 0 && lda.tau < 1, "lda.tau must be in [0, 1)");
    require(embedtm.reduction == "pca" || embedtm.reduction == "none", "embedtm.reduction must be pca or none");
    require(embedtm.d_target >= 1, "embedtm.d_target must be >= 1");
    require(embedtm.min_topic_size >= 2, "embedtm.min_topic_size must be >= 2");
    require(embedtm.linkage_threshold >= 0 && embedtm.linkage_threshold <= 2, "embedtm.linkage_threshold must be in [0, 2]");
    require(embedtm.mode == "bertopic" || embedtm.mode == "top2vec", "embedtm.mode must be bertopic or top2vec");
    require(embedtm.target_topics >= 0, "embedtm.target_topics must be >= 0");
    require(embedtm.mmr_lambda >= 0 && embedtm.mmr_lambda <= 1, "embedtm.mmr_lambda must be in [0, 1]");
    require(eval.top_n >= 2, "eval.top_n must be >= 2");
    require(eval.window >= 1, "eval.window must be >= 1");
    require(eval.umass_epsilon > 0, "eval.umass_epsilon must be > 0");
    require(eval.cv_epsilon > 0, "eval.cv_epsilon must be > 0");
    require(eval.weighting == "doc_weighted" || eval.weighting == "equal_weighted",
            "eval.weighting must be doc_weighted or equal_weighted");
    require(eval.stability_top_rows >= 0 && eval.stability_top_cols >= 0, "eval.stability_top_* must be >= 0");
    require(eval.stability_floor >= 0 && eval.stability_floor <= 1, "eval.stability_floor must be in [0, 1]");
    require(sentperf.n_min >= 3, "sentperf.n_min must be >= 3");
    require(sentperf.significance > 0 && sentperf.significance < 1, "sentperf.significance must be in (0, 1)");
}

json to_json(const PipelineConfig& c) {
    json j;
    j["paths"] = {{"corpus", c.paths.corpus},
                  {"embeddings", c.paths.embeddings},
                  {"word_embeddings", c.paths.word_embeddings},
                  {"sentiment", c.paths.sentiment},
                  {"returns", c.paths.returns},
                  {"annotations", c.paths.annotations},
                  {"stopwords", c.paths.stopwords},
                  {"output_dir", c.paths.output_dir}};
    j["seed"] = c.seed;
    j["corpus"] = {{"max_words", c.corpus.max_words},
                   {"overlap", c.corpus.overlap},
                   {"min_words", c.corpus.min_words},
                   {"language_threshold", c.corpus.language_threshold},
                   {"min_word_len", c.corpus.min_word_len},
                   {"ngram_order", c.corpus.ngram_order},
                   {"min_doc_freq", c.corpus.min_doc_freq},
                   {"date_min", c.corpus.date_min},
                   {"date_max", c.corpus.date_max}};
    j["lda"] = {{"num_topics", c.lda.num_topics}, {"alpha", opt(c.lda.alpha)},   {"beta", opt(c.lda.beta)},
                {"iterations", c.lda.iterations}, {"burn_in", opt(c.lda.burn_in)}, {"tau", c.lda.tau}};
    j["embedtm"] = {{"reduction", c.embedtm.reduction},
                    {"d_target", c.embedtm.d_target},
                    {"min_topic_size", c.embedtm.min_topic_size},
                    {"linkage_threshold", c.embedtm.linkage_threshold},
                    {"mode", c.embedtm.mode},
                    {"target_topics", c.embedtm.target_topics},
                    {"mmr_lambda", c.embedtm.mmr_lambda}};
    j["eval"] = {{"top_n", c.eval.top_n},
                 {"window", c.eval.window},
                 {"umass_epsilon", c.eval.umass_epsilon},
                 {"cv_epsilon", c.eval.cv_epsilon},
                 {"weighting", c.eval.weighting},
                 {"stability_a", c.eval.stability_a},
                 {"stability_b", c.eval.stability_b},
                 {"stability_top_rows", c.eval.stability_top_rows},
                 {"stability_top_cols", c.eval.stability_top_cols},
                 {"stability_floor", c.eval.stability_floor}};
    j["sentperf"] = {{"sentiment_model", c.sentperf.sentiment_model},
                     {"n_min", c.sentperf.n_min},
                     {"significance", c.sentperf.significance}};
    return j;
}

PipelineConfig from_json(const json& patch) {
    json j = to_json(PipelineConfig{});
    merge_known(j, patch, "");
    PipelineConfig c;
    auto s = [&](const char* key) { return get<std::string>(j, "paths", key); };
    c.paths = {s("corpus"),  s("embeddings"),  s("word_embeddings"), s("sentiment"),
               s("returns"), s("annotations"), s("stopwords"),       s("output_dir")};
    try {
        c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception&) {
        throw ValidationError("config: seed must be a non-negative integer");
    }
    c.corpus.max_words = get<int>(j, "corpus", "max_words");
    c.corpus.overlap = get<int>(j, "corpus", "overlap");
    c.corpus.min_words = get<int>(j, "corpus", "min_words");
    c.corpus.language_threshold = get<double>(j, "corpus", "language_threshold");
    c.corpus.min_word_len = get<int>(j, "corpus", "min_word_len");
    c.corpus.ngram_order = get<int>(j, "corpus", "ngram_order");
    c.corpus.min_doc_freq = get<int>(j, "corpus", "min_doc_freq");
    c.corpus.date_min = get<std::string>(j, "corpus", "date_min");
    c.corpus.date_max = get<std::string>(j, "corpus", "date_max");
    c.lda.num_topics = get<int>(j, "lda", "num_topics");
    c.lda.alpha = get_opt<double>(j, "lda", "alpha");
    c.lda.beta = get_opt<double>(j, "lda", "beta");
    c.lda.iterations = get<int>(j, "lda", "iterations");
    c.lda.burn_in = get_opt<int>(j, "lda", "burn_in");
    c.lda.tau = get<double>(j, "lda", "tau");
    c.embedtm.reduction = get<std::string>(j, "embedtm", "reduction");
    c.embedtm.d_target = get<int>(j, "embedtm", "d_target");
    c.embedtm.min_topic_size = get<int>(j, "embedtm", "min_topic_size");
    c.embedtm.linkage_threshold = get<double>(j, "embedtm", "linkage_threshold");
    c.embedtm.mode = get<std::string>(j, "embedtm", "mode");
    c.embedtm.target_topics = get<int>(j, "embedtm", "target_topics");
    c.embedtm.mmr_lambda = get<double>(j, "embedtm", "mmr_lambda");
    c.eval.top_n = get<int>(j, "eval", "top_n");
    c.eval.window = get<int>(j, "eval", "window");
    c.eval.umass_epsilon = get<double>(j, "eval", "umass_epsilon");
    c.eval.cv_epsilon = get<double>(j, "eval", "cv_epsilon");
    c.eval.weighting = get<std::string>(j, "eval", "weighting");
    c.eval.stability_a = get<std::string>(j, "eval", "stability_a");
    c.eval.stability_b = get<std::string>(j, "eval", "stability_b");
    c.eval.stability_top_rows = get<int>(j, "eval", "stability_top_rows");
    c.eval.stability_top_cols = get<int>(j, "eval", "stability_top_cols");
    c.eval.stability_floor = get<double>(j, "eval", "stability_floor");
    c.sentperf.sentiment_model = get<std::string>(j, "sentperf", "sentiment_model");
    c.sentperf.n_min = get<int>(j, "sentperf", "n_min");
    c.sentperf.significance = get<double>(j, "sentperf", "significance");
    c.validate();
    return c;
}

PipelineConfig resolve_config(const ConfigOverrides& overrides, const std::map<std::string, std::string>& environment) {
    json merged = to_json(PipelineConfig{});
    if (overrides.config_path) {
        std::ifstream in(*overrides.config_path);
        if (!in) throw ValidationError("cannot open config file " + *overrides.config_path);
        json file;
        try {
            file = json::parse(in);
        } catch (const json::exception& e) {
            throw ValidationError("config file " + *overrides.config_path + ": " + e.what());
        }
        merge_known(merged, file, "");
    }
    for (auto& [section, body] : merged.items()) {
        if (!body.is_object()) {
            const std::string name = "FUNDTEXT_" + upper(section);
            if (auto it = environment.find(name); it != environment.end())
                body = parse_env_value(body, it->second, name);
            continue;
        }
        for (auto& [key, value] : body.items()) {
            const std::string name = "FUNDTEXT_" + upper(section) + "_" + upper(key);
            auto it = environment.find(name);
            if (it == environment.end()) continue;
            // Optional keys default to null; burn_in is the only integer among them.
            const json probe = !value.is_null() ? value : key == "burn_in" ? json(0) : json(0.0);
            value = parse_env_value(probe, it->second, name);
        }
    }
    if (overrides.seed) merged["seed"] = *overrides.seed;
    if (overrides.output_dir) merged["paths"]["output_dir"] = *overrides.output_dir;
    return from_json(merged);
}

std::map<std::string, std::string> fundtext_environment() {
    std::map<std::string, std::string> out;
    for (char** e = environ; e && *e; ++e) {
        std::string_view kv(*e);
        if (!kv.starts_with("FUNDTEXT_")) continue;
        const auto eq = kv.find('=');
        if (eq == std::string_view::npos) continue;
        out.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
    }
    return out;
}

std::string config_hash(const PipelineConfig& config) { return sha256_hex(to_json(config).dump()); }

}  // namespace fundtext::cli
