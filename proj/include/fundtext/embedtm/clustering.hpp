#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fundtext/embedtm/embeddings.hpp"

namespace fundtext::embedtm {

/// Cluster label for points outside every topic.
inline constexpr int kNoise = -1;

enum class ClusterMode { top2vec, bertopic };

struct ClusterModel {
    std::vector<std::string> chunk_ids;
    std::vector<int> labels;          // aligned with chunk_ids; kNoise allowed
    Eigen::MatrixXd centroids;        // one row per topic, clustering space
    ClusterMode mode = ClusterMode::bertopic;
    std::size_t min_topic_size = 10;
    double linkage_threshold = 0.35;

    [[nodiscard]] std::size_t num_topics() const { return static_cast<std::size_t>(centroids.rows()); }
    [[nodiscard]] std::vector<std::size_t> topic_sizes() const;
    [[nodiscard]] std::size_t noise_count() const;
};

/// Deterministic average-linkage agglomerative clustering on cosine distance,
/// cut at `linkage_threshold`. Clusters smaller than min_topic_size become
/// noise; topics are numbered by descending size.
ClusterModel cluster_embeddings(const EmbeddingSet& set, std::size_t min_topic_size = 10,
                                double linkage_threshold = 0.35);

/// top2vec: reassigns noise points to the most cosine-similar centroid and
/// recomputes centroids. bertopic: returns the model unchanged.
ClusterModel finalize_mode(const ClusterModel& model, const EmbeddingSet& set, ClusterMode mode);

/// Repeatedly merges the smallest topic into the topic with the most similar
/// centroid until `target_k` topics remain, then renumbers by descending size.
ClusterModel hierarchical_reduce(const ClusterModel& model, const EmbeddingSet& set, std::size_t target_k);

/// Member means per topic; rows for empty topics are zero.
Eigen::MatrixXd compute_centroids(const EmbeddingSet& set, const std::vector<std::string>& chunk_ids,
                                  const std::vector<int>& labels, std::size_t num_topics);

struct TopicSizeStats {
    std::size_t n_topics = 0;
    std::size_t n_outliers = 0;
    std::size_t max = 0;
    double median = 0.0;
    double mean = 0.0;
    std::size_t min = 0;
};

TopicSizeStats topic_size_stats(const std::vector<std::size_t>& sizes, std::size_t n_outliers);
TopicSizeStats topic_size_stats(const ClusterModel& model);

void save_cluster_model(const ClusterModel& model, const std::filesystem::path& path);
ClusterModel load_cluster_model(const std::filesystem::path& path);

std::string_view to_string(ClusterMode mode);
ClusterMode parse_cluster_mode(std::string_view name);

}  // namespace fundtext::embedtm
