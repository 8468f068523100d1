#pragma once

#include <string>
#include <vector>

#include "fundtext/corpus/vocabulary.hpp"
#include "fundtext/embedtm/clustering.hpp"

namespace fundtext::embedtm {

enum class RepresentationMethod { centroid_proximity, ctfidf_mmr };

struct ScoredTerm {
    std::string term;
    double score = 0.0;
};

struct TopicRepresentation {
    int topic = 0;
    RepresentationMethod method = RepresentationMethod::centroid_proximity;
    std::vector<ScoredTerm> terms;  // non-increasing score
};

/// Per topic, the n words whose vectors are most cosine-similar to the
/// centroid. Word vectors must live in the clustering space.
std::vector<TopicRepresentation> centroid_topic_words(const ClusterModel& model, const EmbeddingSet& word_embeddings,
                                                      std::size_t n);

/// c-TF-IDF matrix: rows are topics, columns vocabulary ids.
/// score(w, c) = tf(w, c) * log(1 + A / tf(w)), A = mean tokens per class.
Eigen::MatrixXd ctfidf_scores(const ClusterModel& model, const corpus::TokenizedCorpus& corpus);

/// c-TF-IDF candidates (top 2n per topic) re-ranked by maximal marginal
/// relevance. Similarity between terms comes from `word_embeddings`; terms
/// without a vector count as dissimilar to everything.
std::vector<TopicRepresentation> ctfidf_mmr_words(const ClusterModel& model, const corpus::TokenizedCorpus& corpus,
                                                  std::size_t n, double lambda,
                                                  const EmbeddingSet* word_embeddings = nullptr);

/// Greedy MMR over candidates with relevance in [0,1] and a pairwise similarity
/// matrix. Returns (candidate index, mmr score) in selection order.
std::vector<std::pair<std::size_t, double>> mmr_select(const std::vector<double>& relevance,
                                                       const Eigen::MatrixXd& similarity, std::size_t n,
                                                       double lambda);

}  // namespace fundtext::embedtm
