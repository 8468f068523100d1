#include "fundtext/evalx/stability.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace fundtext::evalx {
namespace {

std::vector<int> top_labels(const std::vector<std::uint64_t>& totals, std::size_t keep) {
    std::vector<int> order(totals.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return totals[static_cast<std::size_t>(x)] > totals[static_cast<std::size_t>(y)];
    });
    if (keep > 0 && order.size() > keep) order.resize(keep);
    return order;
}

std::size_t topic_count(const std::vector<lda::TopicAssignment>& xs) {
    int max_label = -1;
    for (const auto& a : xs) max_label = std::max(max_label, a.topic);
    return static_cast<std::size_t>(max_label + 1);
}

}  // namespace

StabilityMatrix stability_matrix(const std::vector<lda::TopicAssignment>& a, const std::vector<lda::TopicAssignment>& b,
                                 std::size_t top_rows, std::size_t top_cols, double floor) {
    std::unordered_map<std::string, int> b_topic;
    for (const auto& x : b)
        if (!b_topic.emplace(x.chunk_id, x.topic).second)
            throw ValidationError("stability: duplicate chunk id " + x.chunk_id + " in second assignment set");
    if (a.size() != b.size()) throw ValidationError("stability: assignment sets cover different chunk ids");

    StabilityMatrix m;
    m.topics_a = topic_count(a);
    m.topics_b = topic_count(b);
    m.counts.assign(m.topics_a, std::vector<std::uint64_t>(m.topics_b, 0));
    std::unordered_map<std::string, bool> seen_a;
    for (const auto& x : a) {
        auto it = b_topic.find(x.chunk_id);
        if (it == b_topic.end())
            throw ValidationError("stability: chunk " + x.chunk_id + " missing from second assignment set");
        if (!seen_a.emplace(x.chunk_id, true).second)
            throw ValidationError("stability: duplicate chunk id " + x.chunk_id + " in first assignment set");
        if (x.topic == kOutlier || it->second == kOutlier) continue;
        ++m.counts[static_cast<std::size_t>(x.topic)][static_cast<std::size_t>(it->second)];
        ++m.total;
    }

    std::vector<std::uint64_t> row_tot(m.topics_a, 0), col_tot(m.topics_b, 0);
    m.normalized.assign(m.topics_a, std::vector<double>(m.topics_b, 0.0));
    for (std::size_t i = 0; i < m.topics_a; ++i)
        for (std::size_t j = 0; j < m.topics_b; ++j) {
            row_tot[i] += m.counts[i][j];
            col_tot[j] += m.counts[i][j];
        }
    for (std::size_t i = 0; i < m.topics_a; ++i)
        if (row_tot[i] > 0)
            for (std::size_t j = 0; j < m.topics_b; ++j)
                m.normalized[i][j] = static_cast<double>(m.counts[i][j]) / static_cast<double>(row_tot[i]);

    m.row_labels = top_labels(row_tot, top_rows);
    m.col_labels = top_labels(col_tot, top_cols);
    std::size_t hits = 0;
    for (int r : m.row_labels)
        for (int c : m.col_labels)
            if (m.normalized[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] >= floor) ++hits;
    const std::size_t cells = m.row_labels.size() * m.col_labels.size();
    m.nonzero_fraction = cells ? static_cast<double>(hits) / static_cast<double>(cells) : 0.0;
    return m;
}

}  // namespace fundtext::evalx
