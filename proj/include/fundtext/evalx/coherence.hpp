#pragma once

#include <string>
#include <vector>

#include "fundtext/corpus/vocabulary.hpp"

namespace fundtext::evalx {

enum class CoherenceMetric { c_v, c_umass };

struct CoherenceResult {
    CoherenceMetric metric = CoherenceMetric::c_v;
    std::vector<double> per_topic;
    double aggregate = 0.0;
    std::size_t top_n = 10;
    std::size_t window = 0;  // c_v only
    double epsilon = 0.0;
};

using TopWords = std::vector<std::vector<std::string>>;

/// Mimno et al. document co-occurrence coherence over chunk-level document
/// frequencies: mean over i > j of log((D(w_i, w_j) + ε) / D(w_j)).
CoherenceResult coherence_umass(const TopWords& topics, const corpus::TokenizedCorpus& corpus, std::size_t top_n = 10,
                                double epsilon = 1.0);

/// C_V: boolean sliding windows (stride 1; a stream shorter than the window
/// is one window), NPMI context vectors and indirect cosine confirmation
/// against the sum vector of the topic.
CoherenceResult coherence_cv(const TopWords& topics, const std::vector<std::vector<std::string>>& streams,
                             std::size_t top_n = 10, std::size_t window = 110, double epsilon = 1e-12);

/// NPMI from window probabilities, with ε added to the joint probability.
double npmi(double p_ij, double p_i, double p_j, double epsilon = 1e-12);

}  // namespace fundtext::evalx
