#include "fundtext/evalx/annotations.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fundtext/common.hpp"

namespace fundtext::evalx {
namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') cur.push_back('"'), ++i;
            else if (c == '"') quoted = false;
            else cur.push_back(c);
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::size_t category_index(std::string_view name) {
    for (std::size_t i = 0; i < kCategories.size(); ++i)
        if (kCategories[i] == name) return i;
    throw ValidationError("unknown annotation category '" + std::string(name) + "'");
}

double parse_double(const std::string& s, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("annotations line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
}

std::size_t parse_count(const std::string& s, std::size_t line_no) {
    double v = parse_double(s, line_no);
    if (v < 0 || v != std::floor(v))
        throw ValidationError("annotations line " + std::to_string(line_no) + ": bad count '" + s + "'");
    return static_cast<std::size_t>(v);
}

}  // namespace

AnnotationTable AnnotationTable::for_model(std::string_view model_id) const {
    AnnotationTable out;
    for (const auto& r : rows)
        if (r.model_id == model_id) out.rows.push_back(r);
    return out;
}

std::vector<std::string> AnnotationTable::model_ids() const {
    std::vector<std::string> ids;
    for (const auto& r : rows)
        if (ids.empty() || ids.back() != r.model_id) ids.push_back(r.model_id);
    return ids;
}

AnnotationTable parse_annotations(std::string_view csv_text) {
    std::istringstream in{std::string(csv_text)};
    std::string line;
    std::size_t line_no = 0;
    std::map<std::pair<std::string, int>, AnnotationRow> rows;
    std::map<std::pair<std::string, int>, std::array<bool, 7>> seen;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto f = split_csv_line(line);
        if (header) {
            header = false;
            if (f.size() != 6 || f[0] != "model_id" || f[1] != "topic_id" || f[2] != "category" || f[3] != "percent" ||
                f[4] != "n_samples" || f[5] != "n_members")
                throw ValidationError("annotations: header must be model_id,topic_id,category,percent,n_samples,n_members");
            continue;
        }
        if (f.size() != 6)
            throw ValidationError("annotations line " + std::to_string(line_no) + ": expected 6 fields");
        const int topic = static_cast<int>(parse_count(f[1], line_no));
        const auto key = std::make_pair(f[0], topic);
        const std::size_t cat = category_index(f[2]);
        auto& row = rows[key];
        auto& flags = seen[key];
        const std::size_t samples = parse_count(f[4], line_no);
        const std::size_t members = parse_count(f[5], line_no);
        if (row.model_id.empty()) {
            row.model_id = f[0];
            row.topic_id = topic;
            row.n_samples = samples;
            row.n_members = members;
        } else if (row.n_samples != samples || row.n_members != members) {
            throw ValidationError("annotations line " + std::to_string(line_no) +
                                  ": n_samples/n_members differ from earlier rows of the topic");
        }
        if (flags[cat])
            throw ValidationError("annotations line " + std::to_string(line_no) + ": duplicate category " + f[2]);
        flags[cat] = true;
        row.percent[cat] = parse_double(f[3], line_no);
        if (row.percent[cat] < 0.0 || row.percent[cat] > 100.0)
            throw ValidationError("annotations line " + std::to_string(line_no) + ": percent out of range");
    }
    AnnotationTable table;
    for (auto& [key, row] : rows) {
        double sum = 0.0;
        for (double p : row.percent) sum += p;
        if (std::abs(sum - 100.0) > 0.1)
            throw ValidationError("annotations: percentages of " + key.first + " topic " + std::to_string(key.second) +
                                  " sum to " + std::to_string(sum));
        if (row.n_samples < 1)
            throw ValidationError("annotations: " + key.first + " topic " + std::to_string(key.second) + " has no samples");
        table.rows.push_back(row);
    }
    return table;
}

AnnotationTable load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open annotation file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_annotations(buf.str());
}

PredictedClass topic_predicted_class(const AnnotationRow& row) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < kCategories.size(); ++i)
        if (row.percent[i] > row.percent[best]) best = i;
    return {std::string(kCategories[best]), row.percent[best]};
}

double f1_from_pr(double precision, double recall) {
    if (precision + recall <= 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

ClassMetrics disclosure_prf(const AnnotationTable& annotations, Weighting weighting) {
    double tp = 0.0, fp = 0.0, fn = 0.0;
    bool any_positive = false;
    for (const auto& row : annotations.rows) {
        const double weight = weighting == Weighting::doc_weighted ? static_cast<double>(row.n_members) : 1.0;
        const double disclosure = row.disclosure_percent();
        const double informative = (100.0 - disclosure) * weight / 100.0;
        const double boilerplate = disclosure * weight / 100.0;
        if (disclosure < 50.0) {
            any_positive = true;
            tp += informative;
            fp += boilerplate;
        } else {
            fn += informative;
        }
    }
    if (!any_positive || tp + fp <= 0.0) throw ValidationError("no positive topics");
    ClassMetrics m;
    m.weighting = weighting;
    m.precision = tp / (tp + fp);
    m.recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
    m.f1 = 2.0 * tp + fp + fn > 0.0 ? 2.0 * tp / (2.0 * tp + fp + fn) : 0.0;
    return m;
}

std::string_view to_string(Weighting w) { return w == Weighting::doc_weighted ? "doc_weighted" : "equal_weighted"; }

Weighting parse_weighting(std::string_view name) {
    if (name == "doc_weighted") return Weighting::doc_weighted;
    if (name == "equal_weighted") return Weighting::equal_weighted;
    throw ValidationError("unknown weighting '" + std::string(name) + "'");
}

}  // namespace fundtext::evalx
