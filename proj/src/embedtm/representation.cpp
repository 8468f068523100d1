#include "fundtext/embedtm/representation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace fundtext::embedtm {

std::vector<TopicRepresentation> centroid_topic_words(const ClusterModel& model, const EmbeddingSet& word_embeddings,
                                                      std::size_t n) {
    if (word_embeddings.size() == 0) throw ValidationError("centroid_topic_words: empty word embedding set");
    if (static_cast<Eigen::Index>(word_embeddings.dim()) != model.centroids.cols())
        throw ValidationError("centroid_topic_words: word vectors have dim " + std::to_string(word_embeddings.dim()) +
                              ", clustering space has dim " + std::to_string(model.centroids.cols()));
    const auto& words = word_embeddings.ids();
    std::vector<TopicRepresentation> out;
    for (std::size_t t = 0; t < model.num_topics(); ++t) {
        const Eigen::VectorXd c = model.centroids.row(static_cast<Eigen::Index>(t)).transpose();
        std::vector<double> sim(words.size());
        for (std::size_t w = 0; w < words.size(); ++w)
            sim[w] = cosine_similarity(word_embeddings.vectors().row(static_cast<Eigen::Index>(w)).transpose(), c);
        std::vector<std::size_t> order(words.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (sim[a] != sim[b]) return sim[a] > sim[b];
            return words[a] < words[b];
        });
        TopicRepresentation rep;
        rep.topic = static_cast<int>(t);
        rep.method = RepresentationMethod::centroid_proximity;
        for (std::size_t i = 0; i < std::min(n, order.size()); ++i) rep.terms.push_back({words[order[i]], sim[order[i]]});
        out.push_back(std::move(rep));
    }
    return out;
}

Eigen::MatrixXd ctfidf_scores(const ClusterModel& model, const corpus::TokenizedCorpus& corpus) {
    std::unordered_map<std::string, std::size_t> doc_index;
    for (std::size_t d = 0; d < corpus.chunk_ids.size(); ++d) doc_index.emplace(corpus.chunk_ids[d], d);

    const auto K = static_cast<Eigen::Index>(model.num_topics());
    const auto V = static_cast<Eigen::Index>(corpus.vocabulary.size());
    Eigen::MatrixXd tf = Eigen::MatrixXd::Zero(K, V);
    std::vector<double> class_tokens(static_cast<std::size_t>(K), 0.0);
    for (std::size_t i = 0; i < model.chunk_ids.size(); ++i) {
        if (model.labels[i] == kNoise) continue;
        auto it = doc_index.find(model.chunk_ids[i]);
        if (it == doc_index.end()) throw ValidationError("c-TF-IDF: chunk " + model.chunk_ids[i] + " missing from corpus");
        for (auto w : corpus.docs[it->second]) tf(model.labels[i], static_cast<Eigen::Index>(w)) += 1.0;
        class_tokens[static_cast<std::size_t>(model.labels[i])] += static_cast<double>(corpus.docs[it->second].size());
    }
    for (Eigen::Index t = 0; t < K; ++t)
        if (class_tokens[static_cast<std::size_t>(t)] == 0.0)
            throw ValidationError("c-TF-IDF: topic " + std::to_string(t) + " has no tokens");

    const double avg = std::accumulate(class_tokens.begin(), class_tokens.end(), 0.0) / static_cast<double>(K);
    const Eigen::RowVectorXd tf_w = tf.colwise().sum();
    Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(K, V);
    for (Eigen::Index w = 0; w < V; ++w) {
        if (tf_w(w) == 0.0) continue;
        const double idf = std::log(1.0 + avg / tf_w(w));
        for (Eigen::Index t = 0; t < K; ++t) scores(t, w) = tf(t, w) * idf;
    }
    return scores;
}

std::vector<std::pair<std::size_t, double>> mmr_select(const std::vector<double>& relevance,
                                                       const Eigen::MatrixXd& similarity, std::size_t n,
                                                       double lambda) {
    if (lambda < 0.0 || lambda > 1.0) throw ValidationError("mmr: lambda must be in [0, 1]");
    const std::size_t m = relevance.size();
    std::vector<std::pair<std::size_t, double>> picked;
    std::vector<bool> used(m, false);
    std::vector<double> max_sim(m, 0.0);
    while (picked.size() < std::min(n, m)) {
        std::size_t best = m;
        double best_score = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (used[i]) continue;
            const double penalty = max_sim[i];  // max(0, similarities to picked)
            const double score = lambda * relevance[i] - (1.0 - lambda) * penalty;
            if (best == m || score > best_score) {
                best = i;
                best_score = score;
            }
        }
        used[best] = true;
        picked.emplace_back(best, best_score);
        for (std::size_t i = 0; i < m; ++i) {
            const double s = similarity(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(best));
            if (s > max_sim[i]) max_sim[i] = s;
        }
    }
    return picked;
}

std::vector<TopicRepresentation> ctfidf_mmr_words(const ClusterModel& model, const corpus::TokenizedCorpus& corpus,
                                                  std::size_t n, double lambda, const EmbeddingSet* word_embeddings) {
    if (lambda < 0.0 || lambda > 1.0) throw ValidationError("ctfidf_mmr_words: lambda must be in [0, 1]");
    const Eigen::MatrixXd scores = ctfidf_scores(model, corpus);
    const auto V = static_cast<std::size_t>(scores.cols());

    std::vector<TopicRepresentation> out;
    for (Eigen::Index t = 0; t < scores.rows(); ++t) {
        std::vector<std::uint32_t> ids;
        for (std::uint32_t w = 0; w < V; ++w)
            if (scores(t, w) > 0.0) ids.push_back(w);
        std::sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (scores(t, a) != scores(t, b)) return scores(t, a) > scores(t, b);
            return a < b;
        });
        if (ids.size() > 2 * n) ids.resize(2 * n);

        std::vector<double> relevance(ids.size());
        const double top = ids.empty() ? 1.0 : scores(t, ids.front());
        for (std::size_t i = 0; i < ids.size(); ++i) relevance[i] = scores(t, ids[i]) / top;

        const auto m = static_cast<Eigen::Index>(ids.size());
        Eigen::MatrixXd sim = Eigen::MatrixXd::Identity(m, m);
        if (word_embeddings) {
            std::vector<std::optional<std::size_t>> rows(ids.size());
            for (std::size_t i = 0; i < ids.size(); ++i) rows[i] = word_embeddings->find(corpus.vocabulary.term(ids[i]));
            for (Eigen::Index i = 0; i < m; ++i)
                for (Eigen::Index j = i + 1; j < m; ++j) {
                    const auto& ri = rows[static_cast<std::size_t>(i)];
                    const auto& rj = rows[static_cast<std::size_t>(j)];
                    double s = 0.0;
                    if (ri && rj)
                        s = cosine_similarity(word_embeddings->vectors().row(static_cast<Eigen::Index>(*ri)).transpose(),
                                              word_embeddings->vectors().row(static_cast<Eigen::Index>(*rj)).transpose());
                    sim(i, j) = sim(j, i) = s;
                }
        }

        TopicRepresentation rep;
        rep.topic = static_cast<int>(t);
        rep.method = RepresentationMethod::ctfidf_mmr;
        for (const auto& [idx, score] : mmr_select(relevance, sim, n, lambda))
            rep.terms.push_back({corpus.vocabulary.term(ids[idx]), score});
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace fundtext::embedtm
