#include "fundtext/evalx/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "fundtext/common.hpp"

namespace fundtext::evalx {
namespace {

std::vector<std::string> truncate_topic(const std::vector<std::string>& words, std::size_t top_n, std::size_t index) {
    std::vector<std::string> out(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(std::min(top_n, words.size())));
    if (out.size() < 2)
        throw ValidationError("coherence: topic " + std::to_string(index) + " needs at least 2 words");
    std::unordered_set<std::string> seen;
    for (const auto& w : out)
        if (!seen.insert(w).second)
            throw ValidationError("coherence: topic " + std::to_string(index) + " repeats word '" + w + "'");
    return out;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

std::size_t intersection_size(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::size_t i = 0, j = 0, n = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (b[j] < a[i]) ++j;
        else ++n, ++i, ++j;
    }
    return n;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace

double npmi(double p_ij, double p_i, double p_j, double epsilon) {
    const double joint = p_ij + epsilon;
    const double denom = -std::log(joint);
    if (denom <= 0.0) return 1.0;
    return std::log(joint / (p_i * p_j)) / denom;
}

CoherenceResult coherence_umass(const TopWords& topics, const corpus::TokenizedCorpus& corpus, std::size_t top_n,
                                double epsilon) {
    CoherenceResult result;
    result.metric = CoherenceMetric::c_umass;
    result.top_n = top_n;
    result.epsilon = epsilon;

    // Document lists for every term that appears in some topic.
    std::unordered_map<std::string, std::vector<std::uint32_t>> postings;
    std::vector<std::vector<std::string>> truncated;
    for (std::size_t t = 0; t < topics.size(); ++t) {
        truncated.push_back(truncate_topic(topics[t], top_n, t));
        for (const auto& w : truncated.back()) {
            if (!corpus.vocabulary.find(w)) throw ValidationError("coherence: term '" + w + "' not in corpus");
            postings.try_emplace(w);
        }
    }
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>*> by_id;
    for (auto& [w, list] : postings) by_id.emplace(*corpus.vocabulary.find(w), &list);
    for (std::uint32_t d = 0; d < corpus.docs.size(); ++d) {
        std::unordered_set<std::uint32_t> seen;
        for (auto id : corpus.docs[d]) {
            auto it = by_id.find(id);
            if (it != by_id.end() && seen.insert(id).second) it->second->push_back(d);
        }
    }
    for (const auto& [w, list] : postings)
        if (list.empty()) throw ValidationError("coherence: term '" + w + "' not in corpus");

    for (const auto& words : truncated) {
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 1; i < words.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                const auto& di = postings.at(words[i]);
                const auto& dj = postings.at(words[j]);
                sum += std::log((static_cast<double>(intersection_size(di, dj)) + epsilon) / static_cast<double>(dj.size()));
                ++pairs;
            }
        }
        result.per_topic.push_back(sum / static_cast<double>(pairs));
    }
    result.aggregate = mean_of(result.per_topic);
    return result;
}

CoherenceResult coherence_cv(const TopWords& topics, const std::vector<std::vector<std::string>>& streams,
                             std::size_t top_n, std::size_t window, double epsilon) {
    if (window < 1) throw ValidationError("coherence_cv: window must be >= 1");
    CoherenceResult result;
    result.metric = CoherenceMetric::c_v;
    result.top_n = top_n;
    result.window = window;
    result.epsilon = epsilon;

    std::vector<std::vector<std::string>> truncated;
    std::unordered_map<std::string, std::size_t> local;
    std::vector<std::string> local_words;
    for (std::size_t t = 0; t < topics.size(); ++t) {
        truncated.push_back(truncate_topic(topics[t], top_n, t));
        for (const auto& w : truncated.back())
            if (local.emplace(w, local_words.size()).second) local_words.push_back(w);
    }
    const std::size_t R = local_words.size();

    std::vector<std::uint64_t> single(R, 0);
    std::vector<std::uint64_t> joint(R * R, 0);
    std::uint64_t num_windows = 0;

    std::vector<std::uint32_t> in_window(R, 0);
    std::vector<std::size_t> present;
    auto tally = [&] {
        present.clear();
        for (std::size_t r = 0; r < R; ++r)
            if (in_window[r] > 0) present.push_back(r);
        for (std::size_t a = 0; a < present.size(); ++a) {
            ++single[present[a]];
            for (std::size_t b = a + 1; b < present.size(); ++b) {
                ++joint[present[a] * R + present[b]];
                ++joint[present[b] * R + present[a]];
            }
        }
        ++num_windows;
    };

    for (const auto& stream : streams) {
        if (stream.empty()) continue;
        std::vector<long> ids(stream.size(), -1);
        for (std::size_t i = 0; i < stream.size(); ++i)
            if (auto it = local.find(stream[i]); it != local.end()) ids[i] = static_cast<long>(it->second);
        std::fill(in_window.begin(), in_window.end(), 0);
        const std::size_t width = std::min(window, stream.size());
        for (std::size_t i = 0; i < width; ++i)
            if (ids[i] >= 0) ++in_window[static_cast<std::size_t>(ids[i])];
        tally();
        for (std::size_t start = 1; start + width <= stream.size(); ++start) {
            if (ids[start - 1] >= 0) --in_window[static_cast<std::size_t>(ids[start - 1])];
            if (ids[start + width - 1] >= 0) ++in_window[static_cast<std::size_t>(ids[start + width - 1])];
            tally();
        }
    }
    for (std::size_t r = 0; r < R; ++r)
        if (single[r] == 0) throw ValidationError("coherence: term '" + local_words[r] + "' not in corpus");

    const double nw = static_cast<double>(num_windows);
    for (const auto& words : truncated) {
        const std::size_t n = words.size();
        std::vector<std::vector<double>> vec(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t ri = local.at(words[i]);
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t rj = local.at(words[j]);
                const double p_i = static_cast<double>(single[ri]) / nw;
                const double p_j = static_cast<double>(single[rj]) / nw;
                const double p_ij = (ri == rj ? static_cast<double>(single[ri]) : static_cast<double>(joint[ri * R + rj])) / nw;
                vec[i][j] = npmi(p_ij, p_i, p_j, epsilon);
            }
        }
        std::vector<double> total(n, 0.0);
        for (const auto& v : vec)
            for (std::size_t j = 0; j < n; ++j) total[j] += v[j];
        double sum = 0.0;
        for (const auto& v : vec) sum += cosine(v, total);
        result.per_topic.push_back(sum / static_cast<double>(n));
    }
    result.aggregate = mean_of(result.per_topic);
    return result;
}

}  // namespace fundtext::evalx
