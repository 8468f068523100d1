#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fundtext/lda/lda.hpp"

namespace fundtext::evalx {

struct StabilityMatrix {
    std::size_t topics_a = 0;
    std::size_t topics_b = 0;
    std::vector<std::vector<std::uint64_t>> counts;  // topics_a x topics_b
    std::vector<std::vector<double>> normalized;     // row-normalized counts
    std::vector<int> row_labels;                     // truncated view, by descending row total
    std::vector<int> col_labels;                     // truncated view, by descending column total
    double nonzero_fraction = 0.0;                   // over the truncated view
    std::uint64_t total = 0;
};

inline constexpr double kStabilityFloor = 0.05;

/// Contingency of co-assigned chunks. Outliers on either side are excluded.
/// top_rows/top_cols of 0 keep every topic.
StabilityMatrix stability_matrix(const std::vector<lda::TopicAssignment>& a, const std::vector<lda::TopicAssignment>& b,
                                 std::size_t top_rows = 20, std::size_t top_cols = 20, double floor = kStabilityFloor);

}  // namespace fundtext::evalx
