#include "fundtext/cli/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fundtext/common.hpp"

namespace fundtext::cli {

using nlohmann::ordered_json;

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw ValidationError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

namespace {

std::string printf_double(const char* fmt, double v) {
    if (!std::isfinite(v)) throw Error("non-finite value in report");
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    std::string s(buf);
    return s == "-0" ? "0" : s;
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

std::string format_number(double value) { return printf_double("%.10g", value); }
std::string format_exact(double value) { return printf_double("%.17g", value); }

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<std::string> parse_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    if (quoted) throw ValidationError("unterminated quote in CSV line");
    out.push_back(std::move(cur));
    return out;
}

std::string Table::to_csv() const {
    std::string out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out.push_back(',');
            out += csv_escape(cells[i]);
        }
        out.push_back('\n');
    };
    emit(header);
    for (const auto& r : rows) emit(r);
    return out;
}

std::string Table::to_json() const {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json obj;
        for (std::size_t i = 0; i < header.size(); ++i) {
            const std::string& cell = i < r.size() ? r[i] : std::string();
            if (cell.empty()) {
                obj[header[i]] = nullptr;
                continue;
            }
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end && *end == '\0' && std::isfinite(v)) obj[header[i]] = v;
            else if (cell == "true" || cell == "false") obj[header[i]] = cell == "true";
            else obj[header[i]] = cell;
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

Table read_csv(const std::filesystem::path& path, const std::vector<std::string>& expected_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    Table t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = parse_csv_line(line);
        if (t.header.empty()) {
            if (cells != expected_header) throw ValidationError(path.string() + ": unexpected header");
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size())
            throw ValidationError(path.string() + " line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(t.header.size()) + " fields");
        t.rows.push_back(std::move(cells));
    }
    if (t.header.empty()) throw ValidationError(path.string() + ": missing header");
    return t;
}

Table topic_size_table(const std::vector<std::pair<std::string, embedtm::TopicSizeStats>>& rows) {
    Table t{{"model", "n_topics", "n_outliers", "max", "median", "mean", "min"}, {}};
    for (const auto& [model, s] : rows)
        t.rows.push_back({model, std::to_string(s.n_topics), std::to_string(s.n_outliers), std::to_string(s.max),
                          format_number(s.median), format_number(s.mean), std::to_string(s.min)});
    return t;
}

Table metrics_table(const std::vector<MetricsRow>& rows) {
    Table t{{"model", "precision", "recall", "f1", "c_v", "c_umass"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({r.model, opt_number(r.precision), opt_number(r.recall), opt_number(r.f1), opt_number(r.c_v),
                          opt_number(r.c_umass)});
    return t;
}

Table correlation_table(const std::vector<CorrelationRow>& rows) {
    Table t{{"model", "topic_id", "annotation", "count", "mean", "std", "p_value", "significant"}, {}};
    for (const auto& [model, s] : rows)
        t.rows.push_back({model, std::to_string(s.topic), s.annotation, std::to_string(s.count), format_number(s.mean),
                          format_number(s.std), opt_number(s.p_value), s.significant ? "true" : "false"});
    return t;
}

ordered_json stability_heatmap(const evalx::StabilityMatrix& m, std::string_view model_a, std::string_view model_b) {
    ordered_json j;
    j["model_a"] = model_a;
    j["model_b"] = model_b;
    j["row_labels"] = m.row_labels;
    j["col_labels"] = m.col_labels;
    ordered_json values = ordered_json::array();
    for (int r : m.row_labels) {
        ordered_json row = ordered_json::array();
        for (int c : m.col_labels) row.push_back(m.normalized[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
        values.push_back(std::move(row));
    }
    j["values"] = std::move(values);
    j["nonzero_fraction"] = m.nonzero_fraction;
    j["total"] = m.total;
    return j;
}

ordered_json boxplot_payload(std::string_view model, const std::vector<BoxplotTopic>& topics) {
    ordered_json j;
    j["model"] = model;
    ordered_json arr = ordered_json::array();
    for (const auto& t : topics) {
        ordered_json o;
        o["topic"] = t.topic;
        o["min"] = t.stats.min;
        o["q25"] = t.stats.q25;
        o["median"] = t.stats.median;
        o["q75"] = t.stats.q75;
        o["max"] = t.stats.max;
        o["significant"] = t.significant;
        o["annotation"] = t.annotation;
        if (t.annotation.empty()) o["non_disclosure"] = nullptr;
        else o["non_disclosure"] = t.annotation != "Disclosure";
        arr.push_back(std::move(o));
    }
    j["topics"] = std::move(arr);
    return j;
}

std::vector<std::pair<std::string, std::string>> render_report(const ReportBundle& bundle, ReportFormat format) {
    std::vector<std::pair<std::string, std::string>> files;
    const std::string ext = format == ReportFormat::csv ? ".csv" : ".json";
    auto table = [&](const std::string& stem, const Table& t) {
        files.emplace_back(stem + ext, format == ReportFormat::csv ? t.to_csv() : t.to_json());
    };
    if (!bundle.topic_sizes.empty()) table("table_topic_sizes", topic_size_table(bundle.topic_sizes));
    if (!bundle.metrics.empty()) table("table_metrics", metrics_table(bundle.metrics));
    table("table_correlations", correlation_table(bundle.correlations));
    if (bundle.stability) files.emplace_back("plot_stability_heatmap.json", bundle.stability->dump(2) + "\n");
    for (const auto& [model, topics] : bundle.boxplots)
        files.emplace_back("plot_boxplot_" + model + ".json", boxplot_payload(model, topics).dump(2) + "\n");
    return files;
}

}  // namespace fundtext::cli
