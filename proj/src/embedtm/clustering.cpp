#include "fundtext/embedtm/clustering.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace fundtext::embedtm {
namespace {

// Condensed symmetric distance matrix over n items.
class CondensedMatrix {
public:
    explicit CondensedMatrix(std::size_t n) : n_(n), data_(n * (n - 1) / 2 + 1, 0.0) {}
    double& at(std::size_t i, std::size_t j) {
        if (i > j) std::swap(i, j);
        return data_[i * n_ - i * (i + 1) / 2 + (j - i - 1)];
    }

private:
    std::size_t n_;
    std::vector<double> data_;
};

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

// Relabels so topic 0 is the largest; ties keep the lower old label first.
std::vector<int> renumber_by_size(const std::vector<int>& labels, std::size_t num_topics,
                                  std::size_t* out_topics = nullptr) {
    std::vector<std::size_t> sizes(num_topics, 0);
    for (int l : labels)
        if (l != kNoise) ++sizes[static_cast<std::size_t>(l)];
    std::vector<std::size_t> order;
    for (std::size_t t = 0; t < num_topics; ++t)
        if (sizes[t] > 0) order.push_back(t);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
    std::vector<int> remap(num_topics, kNoise);
    for (std::size_t i = 0; i < order.size(); ++i) remap[order[i]] = static_cast<int>(i);
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        out[i] = labels[i] == kNoise ? kNoise : remap[static_cast<std::size_t>(labels[i])];
    if (out_topics) *out_topics = order.size();
    return out;
}

std::vector<std::size_t> rows_for(const EmbeddingSet& set, const std::vector<std::string>& chunk_ids) {
    std::vector<std::size_t> rows(chunk_ids.size());
    for (std::size_t i = 0; i < chunk_ids.size(); ++i) {
        auto r = set.find(chunk_ids[i]);
        if (!r) throw ValidationError("no embedding for chunk " + chunk_ids[i]);
        rows[i] = *r;
    }
    return rows;
}

}  // namespace

std::vector<std::size_t> ClusterModel::topic_sizes() const {
    std::vector<std::size_t> sizes(num_topics(), 0);
    for (int l : labels)
        if (l != kNoise) ++sizes.at(static_cast<std::size_t>(l));
    return sizes;
}

std::size_t ClusterModel::noise_count() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

Eigen::MatrixXd compute_centroids(const EmbeddingSet& set, const std::vector<std::string>& chunk_ids,
                                  const std::vector<int>& labels, std::size_t num_topics) {
    const auto rows = rows_for(set, chunk_ids);
    Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(num_topics),
                                                      static_cast<Eigen::Index>(set.dim()));
    std::vector<double> counts(num_topics, 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == kNoise) continue;
        const auto t = static_cast<Eigen::Index>(labels[i]);
        centroids.row(t) += set.vectors().row(static_cast<Eigen::Index>(rows[i]));
        counts[static_cast<std::size_t>(labels[i])] += 1.0;
    }
    for (std::size_t t = 0; t < num_topics; ++t)
        if (counts[t] > 0) centroids.row(static_cast<Eigen::Index>(t)) /= counts[t];
    return centroids;
}

ClusterModel cluster_embeddings(const EmbeddingSet& set, std::size_t min_topic_size, double linkage_threshold) {
    if (set.size() == 0) throw ValidationError("cluster_embeddings: empty embedding set");
    if (min_topic_size < 2) throw ValidationError("cluster_embeddings: min_topic_size must be >= 2");
    const std::size_t n = set.size();

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);

    if (n > 1) {
        Eigen::MatrixXd unit = set.vectors();
        std::vector<bool> zero(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            const double norm = unit.row(static_cast<Eigen::Index>(i)).norm();
            if (norm == 0.0) zero[i] = true;
            else unit.row(static_cast<Eigen::Index>(i)) /= norm;
        }
        CondensedMatrix dist(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double d = 1.0;
                if (!zero[i] && !zero[j])
                    d = std::clamp(1.0 - unit.row(static_cast<Eigen::Index>(i)).dot(unit.row(static_cast<Eigen::Index>(j))),
                                   0.0, 2.0);
                dist.at(i, j) = d;
            }

        // Nearest-neighbour chain; average linkage is reducible, so the
        // merges match the greedy algorithm and the cut can be read off the
        // merge heights directly.
        std::vector<std::size_t> size(n, 1);
        std::vector<bool> active(n, true);
        std::vector<std::size_t> chain;
        std::size_t remaining = n;
        std::size_t next_start = 0;
        while (remaining > 1) {
            if (chain.empty()) {
                while (!active[next_start]) ++next_start;
                chain.push_back(next_start);
            }
            const std::size_t a = chain.back();
            const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : n;
            std::size_t best = n;
            double best_d = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (!active[k] || k == a) continue;
                const double d = dist.at(a, k);
                if (best == n || d < best_d) {
                    best = k;
                    best_d = d;
                }
            }
            if (prev != n && dist.at(a, prev) <= best_d) best = prev, best_d = dist.at(a, prev);

            if (best == prev) {
                chain.pop_back();
                chain.pop_back();
                const std::size_t keep = std::min(a, best);
                const std::size_t drop = std::max(a, best);
                if (best_d <= linkage_threshold) parent[find_root(parent, drop)] = find_root(parent, keep);
                const double sa = static_cast<double>(size[keep]);
                const double sb = static_cast<double>(size[drop]);
                for (std::size_t k = 0; k < n; ++k) {
                    if (!active[k] || k == keep || k == drop) continue;
                    dist.at(keep, k) = (sa * dist.at(keep, k) + sb * dist.at(drop, k)) / (sa + sb);
                }
                size[keep] += size[drop];
                active[drop] = false;
                --remaining;
            } else {
                chain.push_back(best);
            }
        }
    }

    // Components → provisional labels in order of first member.
    std::vector<int> comp_label(n, -2);
    std::vector<int> labels(n);
    std::vector<std::size_t> comp_size;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find_root(parent, i);
        if (comp_label[r] == -2) {
            comp_label[r] = static_cast<int>(comp_size.size());
            comp_size.push_back(0);
        }
        labels[i] = comp_label[r];
        ++comp_size[static_cast<std::size_t>(labels[i])];
    }
    for (int& l : labels)
        if (comp_size[static_cast<std::size_t>(l)] < min_topic_size) l = kNoise;

    ClusterModel model;
    model.chunk_ids = set.ids();
    std::size_t topics = 0;
    model.labels = renumber_by_size(labels, comp_size.size(), &topics);
    model.centroids = compute_centroids(set, model.chunk_ids, model.labels, topics);
    model.mode = ClusterMode::bertopic;
    model.min_topic_size = min_topic_size;
    model.linkage_threshold = linkage_threshold;
    return model;
}

ClusterModel finalize_mode(const ClusterModel& model, const EmbeddingSet& set, ClusterMode mode) {
    ClusterModel out = model;
    out.mode = mode;
    if (mode == ClusterMode::bertopic) return out;
    if (model.num_topics() == 0) throw ValidationError("finalize_mode: top2vec mode needs at least one topic");
    if (model.noise_count() == 0) return out;

    const auto rows = rows_for(set, model.chunk_ids);
    for (std::size_t i = 0; i < out.labels.size(); ++i) {
        if (out.labels[i] != kNoise) continue;
        const Eigen::VectorXd v = set.vectors().row(static_cast<Eigen::Index>(rows[i])).transpose();
        int best = 0;
        double best_sim = 0.0;
        for (std::size_t t = 0; t < model.num_topics(); ++t) {
            const double s = cosine_similarity(v, model.centroids.row(static_cast<Eigen::Index>(t)).transpose());
            if (t == 0 || s > best_sim) {
                best = static_cast<int>(t);
                best_sim = s;
            }
        }
        out.labels[i] = best;
    }
    out.centroids = compute_centroids(set, out.chunk_ids, out.labels, out.num_topics());
    return out;
}

ClusterModel hierarchical_reduce(const ClusterModel& model, const EmbeddingSet& set, std::size_t target_k) {
    auto sizes = model.topic_sizes();
    std::vector<bool> alive(sizes.size());
    std::size_t count = 0;
    for (std::size_t t = 0; t < sizes.size(); ++t) {
        alive[t] = sizes[t] > 0;
        count += alive[t] ? 1 : 0;
    }
    if (target_k < 1) throw ValidationError("hierarchical_reduce: target must be >= 1");
    if (target_k > count)
        throw ValidationError("hierarchical_reduce: target " + std::to_string(target_k) + " exceeds current topic count " +
                              std::to_string(count));

    ClusterModel out = model;
    const auto rows = rows_for(set, model.chunk_ids);
    Eigen::MatrixXd centroids = model.centroids;
    while (count > target_k) {
        std::size_t smallest = sizes.size();
        for (std::size_t t = 0; t < sizes.size(); ++t)
            if (alive[t] && (smallest == sizes.size() || sizes[t] < sizes[smallest])) smallest = t;
        std::size_t into = sizes.size();
        double best_sim = 0.0;
        for (std::size_t t = 0; t < sizes.size(); ++t) {
            if (!alive[t] || t == smallest) continue;
            const double s = cosine_similarity(centroids.row(static_cast<Eigen::Index>(smallest)).transpose(),
                                               centroids.row(static_cast<Eigen::Index>(t)).transpose());
            if (into == sizes.size() || s > best_sim) {
                into = t;
                best_sim = s;
            }
        }
        Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(set.dim()));
        for (std::size_t i = 0; i < out.labels.size(); ++i) {
            if (out.labels[i] == static_cast<int>(smallest)) out.labels[i] = static_cast<int>(into);
            if (out.labels[i] == static_cast<int>(into)) sum += set.vectors().row(static_cast<Eigen::Index>(rows[i]));
        }
        sizes[into] += sizes[smallest];
        sizes[smallest] = 0;
        alive[smallest] = false;
        centroids.row(static_cast<Eigen::Index>(into)) = sum / static_cast<double>(sizes[into]);
        --count;
    }
    std::size_t topics = 0;
    out.labels = renumber_by_size(out.labels, sizes.size(), &topics);
    out.centroids = compute_centroids(set, out.chunk_ids, out.labels, topics);
    return out;
}

TopicSizeStats topic_size_stats(const std::vector<std::size_t>& sizes, std::size_t n_outliers) {
    if (sizes.empty()) throw ValidationError("topic_size_stats: model has no topics");
    std::vector<std::size_t> sorted = sizes;
    std::sort(sorted.begin(), sorted.end());
    TopicSizeStats s;
    s.n_topics = sorted.size();
    s.n_outliers = n_outliers;
    s.min = sorted.front();
    s.max = sorted.back();
    const std::size_t m = sorted.size();
    s.median = m % 2 ? static_cast<double>(sorted[m / 2])
                     : (static_cast<double>(sorted[m / 2 - 1]) + static_cast<double>(sorted[m / 2])) / 2.0;
    s.mean = static_cast<double>(std::accumulate(sorted.begin(), sorted.end(), std::size_t{0})) /
             static_cast<double>(m);
    return s;
}

TopicSizeStats topic_size_stats(const ClusterModel& model) {
    return topic_size_stats(model.topic_sizes(), model.noise_count());
}

std::string_view to_string(ClusterMode mode) { return mode == ClusterMode::top2vec ? "top2vec" : "bertopic"; }

ClusterMode parse_cluster_mode(std::string_view name) {
    if (name == "top2vec") return ClusterMode::top2vec;
    if (name == "bertopic") return ClusterMode::bertopic;
    throw ValidationError("unknown cluster mode '" + std::string(name) + "'");
}

void save_cluster_model(const ClusterModel& model, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["mode"] = std::string(to_string(model.mode));
    j["min_topic_size"] = model.min_topic_size;
    j["linkage_threshold"] = model.linkage_threshold;
    j["num_topics"] = model.num_topics();
    j["dim"] = model.centroids.cols();
    j["chunk_ids"] = model.chunk_ids;
    j["labels"] = model.labels;
    auto cents = nlohmann::ordered_json::array();
    for (Eigen::Index t = 0; t < model.centroids.rows(); ++t) {
        std::vector<double> row(static_cast<std::size_t>(model.centroids.cols()));
        for (Eigen::Index c = 0; c < model.centroids.cols(); ++c) row[static_cast<std::size_t>(c)] = model.centroids(t, c);
        cents.push_back(row);
    }
    j["centroids"] = cents;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump() << '\n';
}

ClusterModel load_cluster_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open cluster model " + path.string());
    try {
        auto j = nlohmann::json::parse(in);
        ClusterModel m;
        m.mode = parse_cluster_mode(j.at("mode").get<std::string>());
        m.min_topic_size = j.at("min_topic_size").get<std::size_t>();
        m.linkage_threshold = j.at("linkage_threshold").get<double>();
        m.chunk_ids = j.at("chunk_ids").get<std::vector<std::string>>();
        m.labels = j.at("labels").get<std::vector<int>>();
        const auto k = j.at("num_topics").get<Eigen::Index>();
        const auto dim = j.at("dim").get<Eigen::Index>();
        m.centroids.resize(k, dim);
        const auto& cents = j.at("centroids");
        for (Eigen::Index t = 0; t < k; ++t)
            for (Eigen::Index c = 0; c < dim; ++c)
                m.centroids(t, c) = cents.at(static_cast<std::size_t>(t)).at(static_cast<std::size_t>(c)).get<double>();
        if (m.labels.size() != m.chunk_ids.size()) throw ValidationError("cluster model: labels/chunk_ids mismatch");
        for (int l : m.labels)
            if (l != kNoise && (l < 0 || l >= k)) throw ValidationError("cluster model: label out of range");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("cluster model " + path.string() + ": " + e.what());
    }
}

}  // namespace fundtext::embedtm
