#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

namespace fundtext::cli {

/// Every tunable of the pipeline. Paths are used as given (relative paths
/// resolve against the working directory).
struct PipelineConfig {
    struct Paths {
        std::string corpus;
        std::string embeddings;
        std::string word_embeddings;
        std::string sentiment;
        std::string returns;
        std::string annotations;
        std::string stopwords;
        std::string output_dir = "fundtext_out";
    } paths;

    std::uint64_t seed = 42;

    struct Corpus {
        int max_words = 400;
        int overlap = 50;
        int min_words = 50;
        double language_threshold = 0.15;
        int min_word_len = 3;
        int ngram_order = 1;
        int min_doc_freq = 5;
        std::string date_min = "1990-01";
        std::string date_max = "2100-12";
    } corpus;

    struct Lda {
        int num_topics = 20;
        std::optional<double> alpha;
        std::optional<double> beta;
        int iterations = 50;
        std::optional<int> burn_in;
        double tau = 0.25;
    } lda;

    struct Embedtm {
        std::string reduction = "pca";
        int d_target = 5;
        int min_topic_size = 10;
        double linkage_threshold = 0.35;
        std::string mode = "bertopic";
        int target_topics = 0;  // reduce-topics requires a positive value
        double mmr_lambda = 0.5;
    } embedtm;

    struct Eval {
        int top_n = 10;
        int window = 110;
        double umass_epsilon = 1.0;
        double cv_epsilon = 1e-12;
        std::string weighting = "doc_weighted";
        std::string stability_a = "lda";
        std::string stability_b = "reduced";
        int stability_top_rows = 20;
        int stability_top_cols = 20;
        double stability_floor = 0.05;
    } eval;

    struct Sentperf {
        std::string sentiment_model;  // empty keeps every record
        int n_min = 6;
        double significance = 0.05;
    } sentperf;

    /// Checks ranges and enum names; throws ValidationError.
    void validate() const;
};

nlohmann::json to_json(const PipelineConfig& config);
PipelineConfig from_json(const nlohmann::json& j);

/// Command-line overrides; the highest-precedence layer.
struct ConfigOverrides {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
};

/// Layers defaults < file < environment < flags. Environment keys are
/// FUNDTEXT_<SECTION>_<KEY> (e.g. FUNDTEXT_LDA_NUM_TOPICS) plus FUNDTEXT_SEED.
PipelineConfig resolve_config(const ConfigOverrides& overrides,
                              const std::map<std::string, std::string>& environment);

/// The process environment filtered to FUNDTEXT_ keys.
std::map<std::string, std::string> fundtext_environment();

/// SHA-256 of the canonical JSON serialization.
std::string config_hash(const PipelineConfig& config);

}  // namespace fundtext::cli
