#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fundtext/common.hpp"
#include "fundtext/sentperf/statistics.hpp"

namespace fundtext::sentperf {

struct SentimentRecord {
    std::string chunk_id;
    std::string model_id;
    std::optional<double> score;  // in [-1, 1] when present
};

struct FundReturn {
    std::string fund_id;
    YearMonth month;
    double ret = 0.0;
};

struct ChunkMeta {
    std::optional<std::string> fund_id;
    YearMonth month;
};

struct TopicMonthSentiment {
    std::string fund_id;
    int topic = 0;
    YearMonth month;
    double mean_score = 0.0;
    std::size_t n_chunks = 0;
};

/// {"chunk_id":str,"model":str,"score":float|null} per line.
std::vector<SentimentRecord> load_sentiment(const std::filesystem::path& path);
/// CSV with header fund_id,month,ret.
std::vector<FundReturn> load_returns(const std::filesystem::path& path);
std::vector<FundReturn> parse_returns(std::string_view csv_text);

struct AggregateResult {
    std::vector<TopicMonthSentiment> rows;  // sorted by (fund, topic, month)
    std::size_t skipped_no_fund = 0;
};

/// Groups present scores by (fund, topic, month). Outlier chunks and chunks
/// without a fund are left out. `model_id` filters records when non-empty.
AggregateResult aggregate_sentiment(const std::vector<SentimentRecord>& records,
                                    const std::unordered_map<std::string, int>& assignments,
                                    const std::unordered_map<std::string, ChunkMeta>& chunks,
                                    const std::string& model_id = {});

struct PairedSeries {
    std::vector<YearMonth> months;  // sentiment months
    std::vector<double> sentiment;
    std::vector<double> next_return;
};

using SeriesKey = std::pair<std::string, int>;  // (fund, topic)

/// Pairs sentiment at month m with the fund's return at m + 1.
std::map<SeriesKey, PairedSeries> lag_join(const std::vector<TopicMonthSentiment>& sentiments,
                                           const std::vector<FundReturn>& returns);

struct FundCorrelation {
    std::string fund_id;
    int topic = 0;
    std::size_t n = 0;
    double r = 0.0;
};

/// Pearson r per (fund, topic); series failing n_min or variance checks are dropped.
std::vector<FundCorrelation> fund_correlations(const std::map<SeriesKey, PairedSeries>& series, std::size_t n_min = 6);

struct TopicCorrelationSummary {
    int topic = 0;
    std::size_t count = 0;
    double mean = 0.0;
    double std = 0.0;
    std::optional<double> p_value;
    bool significant = false;
    std::string annotation;
};

std::vector<TopicCorrelationSummary> summarize_topics(const std::map<int, std::vector<double>>& correlations_by_topic,
                                                      double alpha = 0.05,
                                                      const std::map<int, std::string>& annotations = {});

}  // namespace fundtext::sentperf
