#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fundtext/embedtm/clustering.hpp"
#include "fundtext/evalx/stability.hpp"
#include "fundtext/sentperf/sentiment.hpp"
#include "fundtext/sentperf/statistics.hpp"

namespace fundtext::cli {

enum class ReportFormat { csv, json };
ReportFormat parse_report_format(std::string_view name);

/// Shortest "%.10g" rendering; used for every human-facing number.
std::string format_number(double value);
/// Round-trip rendering for values read back by later stages.
std::string format_exact(double value);

std::string csv_escape(std::string_view field);
std::vector<std::string> parse_csv_line(std::string_view line);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::string to_csv() const;
    /// Array of objects; cells that parse as numbers are emitted as numbers,
    /// empty cells as null.
    [[nodiscard]] std::string to_json() const;
};

/// Reads a CSV with a header row; throws ValidationError when the header
/// differs from `expected_header`.
Table read_csv(const std::filesystem::path& path, const std::vector<std::string>& expected_header);

struct MetricsRow {
    std::string model;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> c_v;
    std::optional<double> c_umass;
};

struct CorrelationRow {
    std::string model;
    sentperf::TopicCorrelationSummary summary;
};

struct BoxplotTopic {
    int topic = 0;
    sentperf::FiveNumber stats;
    bool significant = false;
    std::string annotation;
};

struct ReportBundle {
    std::vector<std::pair<std::string, embedtm::TopicSizeStats>> topic_sizes;
    std::vector<MetricsRow> metrics;
    std::vector<CorrelationRow> correlations;
    std::optional<nlohmann::ordered_json> stability;
    std::map<std::string, std::vector<BoxplotTopic>> boxplots;
};

Table topic_size_table(const std::vector<std::pair<std::string, embedtm::TopicSizeStats>>& rows);
Table metrics_table(const std::vector<MetricsRow>& rows);
Table correlation_table(const std::vector<CorrelationRow>& rows);

nlohmann::ordered_json stability_heatmap(const evalx::StabilityMatrix& matrix, std::string_view model_a,
                                         std::string_view model_b);
nlohmann::ordered_json boxplot_payload(std::string_view model, const std::vector<BoxplotTopic>& topics);

/// File name -> content for every report artifact the bundle supports.
std::vector<std::pair<std::string, std::string>> render_report(const ReportBundle& bundle, ReportFormat format);

}  // namespace fundtext::cli
