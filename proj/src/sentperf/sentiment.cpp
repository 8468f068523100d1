#include "fundtext/sentperf/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fundtext::sentperf {

std::vector<SentimentRecord> load_sentiment(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open sentiment file " + path.string());
    std::vector<SentimentRecord> out;
    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto where = path.string() + " line " + std::to_string(line_no);
        SentimentRecord r;
        try {
            auto obj = nlohmann::json::parse(line);
            r.chunk_id = obj.at("chunk_id").get<std::string>();
            r.model_id = obj.at("model").get<std::string>();
            const auto& s = obj.at("score");
            if (!s.is_null()) {
                if (!s.is_number()) throw ValidationError(where + ": score must be a number or null");
                r.score = s.get<double>();
            }
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(where + ": " + e.what());
        }
        if (r.score && (!std::isfinite(*r.score) || *r.score < -1.0 || *r.score > 1.0))
            throw ValidationError(where + ": score outside [-1, 1]");
        if (!seen.emplace(r.chunk_id, r.model_id).second)
            throw ValidationError(where + ": duplicate record for chunk " + r.chunk_id + " model " + r.model_id);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<FundReturn> parse_returns(std::string_view csv_text) {
    std::istringstream in{std::string(csv_text)};
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    std::vector<FundReturn> out;
    std::set<std::pair<std::string, int>> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (header) {
            header = false;
            if (f.size() != 3 || f[0] != "fund_id" || f[1] != "month" || f[2] != "ret")
                throw ValidationError("returns: header must be fund_id,month,ret");
            continue;
        }
        const auto where = "returns line " + std::to_string(line_no);
        if (f.size() != 3) throw ValidationError(where + ": expected 3 fields");
        FundReturn r;
        r.fund_id = f[0];
        r.month = YearMonth::parse(f[1]);
        try {
            std::size_t pos = 0;
            r.ret = std::stod(f[2], &pos);
            if (pos != f[2].size()) throw std::invalid_argument(f[2]);
        } catch (const std::exception&) {
            throw ValidationError(where + ": bad return '" + f[2] + "'");
        }
        if (!std::isfinite(r.ret)) throw ValidationError(where + ": return must be finite");
        if (!seen.emplace(r.fund_id, r.month.index()).second)
            throw ValidationError(where + ": duplicate (fund, month) " + r.fund_id + " " + r.month.str());
        out.push_back(std::move(r));
    }
    if (header) throw ValidationError("returns: missing header");
    return out;
}

std::vector<FundReturn> load_returns(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open returns file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_returns(buf.str());
}

AggregateResult aggregate_sentiment(const std::vector<SentimentRecord>& records,
                                    const std::unordered_map<std::string, int>& assignments,
                                    const std::unordered_map<std::string, ChunkMeta>& chunks,
                                    const std::string& model_id) {
    struct Acc {
        double sum = 0.0;
        std::size_t n = 0;
    };
    std::map<std::tuple<std::string, int, int>, Acc> groups;
    std::map<std::tuple<std::string, int, int>, YearMonth> months;
    AggregateResult result;
    for (const auto& r : records) {
        if (!model_id.empty() && r.model_id != model_id) continue;
        auto meta = chunks.find(r.chunk_id);
        if (meta == chunks.end()) throw ValidationError("sentiment record for unknown chunk " + r.chunk_id);
        auto topic = assignments.find(r.chunk_id);
        if (topic == assignments.end()) throw ValidationError("no topic assignment for chunk " + r.chunk_id);
        if (topic->second == kOutlier) continue;
        if (!meta->second.fund_id) {
            ++result.skipped_no_fund;
            continue;
        }
        if (!r.score) continue;
        auto key = std::make_tuple(*meta->second.fund_id, topic->second, meta->second.month.index());
        auto& acc = groups[key];
        acc.sum += *r.score;
        ++acc.n;
        months[key] = meta->second.month;
    }
    for (const auto& [key, acc] : groups) {
        result.rows.push_back({std::get<0>(key), std::get<1>(key), months.at(key),
                               acc.sum / static_cast<double>(acc.n), acc.n});
    }
    return result;
}

std::map<SeriesKey, PairedSeries> lag_join(const std::vector<TopicMonthSentiment>& sentiments,
                                           const std::vector<FundReturn>& returns) {
    std::map<std::pair<std::string, int>, double> ret;
    for (const auto& r : returns) ret[{r.fund_id, r.month.index()}] = r.ret;

    std::vector<const TopicMonthSentiment*> sorted;
    for (const auto& s : sentiments) sorted.push_back(&s);
    std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
        return std::tie(a->fund_id, a->topic, a->month) < std::tie(b->fund_id, b->topic, b->month);
    });

    std::map<SeriesKey, PairedSeries> out;
    for (const auto* s : sorted) {
        auto it = ret.find({s->fund_id, s->month.next().index()});
        if (it == ret.end()) continue;
        auto& series = out[{s->fund_id, s->topic}];
        series.months.push_back(s->month);
        series.sentiment.push_back(s->mean_score);
        series.next_return.push_back(it->second);
    }
    return out;
}

std::vector<FundCorrelation> fund_correlations(const std::map<SeriesKey, PairedSeries>& series, std::size_t n_min) {
    std::vector<FundCorrelation> out;
    for (const auto& [key, s] : series) {
        auto r = pearson_r(s.sentiment, s.next_return, n_min);
        if (!r) continue;
        out.push_back({key.first, key.second, s.sentiment.size(), *r});
    }
    return out;
}

std::vector<TopicCorrelationSummary> summarize_topics(const std::map<int, std::vector<double>>& correlations_by_topic,
                                                      double alpha, const std::map<int, std::string>& annotations) {
    std::vector<TopicCorrelationSummary> out;
    for (const auto& [topic, values] : correlations_by_topic) {
        if (values.empty()) continue;
        TopicCorrelationSummary s;
        s.topic = topic;
        s.count = values.size();
        s.mean = sample_mean(values);
        s.std = sample_std(values);
        s.p_value = t_test_one_sample(values).p_value;
        s.significant = s.p_value && *s.p_value < alpha;
        if (auto it = annotations.find(topic); it != annotations.end()) s.annotation = it->second;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace fundtext::sentperf
