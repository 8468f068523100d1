#pragma once

// Generates a small but complete pipeline workspace: documents, chunk and
// word embeddings, sentiment, returns, annotations and a config file. The
// three themes are planted so every stage has structure to find.

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

namespace fundtext::synthetic {

inline const std::array<std::vector<std::string>, 3> kThemeWords{{
    {"bond", "credit", "yield", "rate", "inflation", "macro", "spread", "curve", "duration", "central"},
    {"manager", "partner", "analyst", "team", "hire", "founder", "chief", "officer", "research", "talent"},
    {"regulator", "authority", "offer", "solicitation", "investor", "risk", "loss", "capital", "warranty", "advice"},
}};
inline const std::vector<std::string> kFiller{"the", "and", "of", "to", "in"};

inline constexpr int kFunds = 6;
inline constexpr int kMonths = 12;
inline constexpr int kDim = 8;

inline std::string chunk_id(int fund, int month, int theme) {
    return "d" + std::to_string(fund) + "_" + std::to_string(month) + ":" + std::to_string(theme) + ":0";
}

struct Workspace {
    std::filesystem::path config;
    std::filesystem::path output_dir;
};

inline Workspace write_workspace(const std::filesystem::path& dir, std::uint64_t seed = 7) {
    namespace fs = std::filesystem;
    using nlohmann::ordered_json;
    fs::create_directories(dir);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    std::ofstream docs(dir / "documents.jsonl");
    std::ofstream emb(dir / "chunk_embeddings.jsonl");
    std::ofstream sent(dir / "sentiment.jsonl");
    emb << R"({"dim":8,"kind":"chunk","model":"synthetic-encoder"})" << "\n";

    // Theme-0 sentiment drives next-month returns.
    std::vector<std::vector<double>> signal(kFunds, std::vector<double>(kMonths + 1, 0.0));
    for (int f = 0; f < kFunds; ++f) {
        for (int m = 0; m < kMonths; ++m) {
            ordered_json d;
            d["doc_id"] = "d" + std::to_string(f) + "_" + std::to_string(m);
            d["manager_id"] = "mgr" + std::to_string(f / 2);
            d["fund_id"] = "F" + std::to_string(f);
            d["doc_type"] = m % 3 == 0 ? "quarterly_report" : "monthly_report";
            char date[8];
            std::snprintf(date, sizeof date, "2023-%02d", m + 1);
            d["date"] = date;
            std::vector<std::string> blocks;
            for (int t = 0; t < 3; ++t) {
                std::string text;
                for (int i = 0; i < 120; ++i) {
                    std::string w;
                    if (i % 3 == 0) w = kFiller[rng() % kFiller.size()];
                    else if (rng() % 10 == 0) w = kThemeWords[(t + 1) % 3][rng() % 10];
                    else w = kThemeWords[t][rng() % 10];
                    text += (i ? " " : "") + w;
                }
                blocks.push_back(text);

                ordered_json e;
                e["id"] = chunk_id(f, m, t);
                std::vector<double> v(kDim);
                for (auto& x : v) x = noise(rng);
                v[static_cast<std::size_t>(t)] += 1.0;
                e["v"] = v;
                emb << e.dump() << "\n";

                const double s = std::round(unif(rng) * 1e6) / 1e6;
                if (t == 0) signal[static_cast<std::size_t>(f)][static_cast<std::size_t>(m)] = s;
                ordered_json r;
                r["chunk_id"] = chunk_id(f, m, t);
                r["model"] = "finbert";
                if ((f + m + t) % 17 == 5) r["score"] = nullptr;
                else r["score"] = s;
                sent << r.dump() << "\n";
            }
            d["blocks"] = blocks;
            docs << d.dump() << "\n";
        }
    }

    std::ofstream words(dir / "word_embeddings.jsonl");
    words << R"({"dim":8,"kind":"word","model":"synthetic-encoder"})" << "\n";
    for (int t = 0; t < 3; ++t)
        for (const auto& w : kThemeWords[static_cast<std::size_t>(t)]) {
            ordered_json e;
            e["id"] = w;
            std::vector<double> v(kDim);
            for (auto& x : v) x = noise(rng);
            v[static_cast<std::size_t>(t)] += 1.0;
            e["v"] = v;
            words << e.dump() << "\n";
        }

    std::ofstream ret(dir / "returns.csv");
    ret << "fund_id,month,ret\n";
    for (int f = 0; f < kFunds; ++f)
        for (int m = 0; m <= kMonths; ++m) {
            const double prev = m > 0 ? signal[static_cast<std::size_t>(f)][static_cast<std::size_t>(m - 1)] : 0.0;
            const double r = 0.5 * prev + 0.02 * noise(rng);
            char month[8];
            std::snprintf(month, sizeof month, "%04d-%02d", 2023 + m / 12, m % 12 + 1);
            ret << "F" << f << "," << month << "," << std::round(r * 1e8) / 1e8 << "\n";
        }

    std::ofstream ann(dir / "annotations.csv");
    ann << "model_id,topic_id,category,percent,n_samples,n_members\n";
    for (const std::string model : {"lda", "cluster", "reduced"})
        for (int t = 0; t < 3; ++t) {
            if (model == "reduced" && t == 2) continue;
            const double disclosure = t == 2 ? 95.0 : 10.0 + 5.0 * t;
            ann << model << "," << t << ",Disclosure," << disclosure << ",20,72\n";
            ann << model << "," << t << ",Market Update," << 100.0 - disclosure << ",20,72\n";
        }

    Workspace ws;
    ws.output_dir = dir / "out";
    ordered_json cfg;
    cfg["paths"] = {{"corpus", (dir / "documents.jsonl").string()},
                    {"embeddings", (dir / "chunk_embeddings.jsonl").string()},
                    {"word_embeddings", (dir / "word_embeddings.jsonl").string()},
                    {"sentiment", (dir / "sentiment.jsonl").string()},
                    {"returns", (dir / "returns.csv").string()},
                    {"annotations", (dir / "annotations.csv").string()},
                    {"output_dir", ws.output_dir.string()}};
    cfg["seed"] = seed;
    cfg["corpus"] = {{"min_doc_freq", 2}};
    cfg["lda"] = {{"num_topics", 3}, {"iterations", 30}};
    cfg["embedtm"] = {{"d_target", 3}, {"target_topics", 2}};
    cfg["eval"] = {{"top_n", 5}, {"window", 20}, {"stability_a", "lda"}, {"stability_b", "cluster"}};
    ws.config = dir / "config.json";
    std::ofstream(ws.config) << cfg.dump(2) << "\n";
    return ws;
}

/// The full subcommand sequence with the model flags each step needs.
inline std::vector<std::vector<std::string>> pipeline_steps() {
    std::vector<std::vector<std::string>> steps{{"ingest"},     {"chunk"},         {"normalize"},
                                                {"lda-fit"},    {"embed-load"},    {"cluster"},
                                                {"reduce-topics"}};
    for (const std::string m : {"lda", "cluster", "reduced"}) {
        steps.push_back({"topics", "--model", m});
        steps.push_back({"coherence", "--model", m});
        steps.push_back({"senti-aggregate", "--model", m});
        steps.push_back({"correlate", "--model", m});
    }
    steps.push_back({"classify-eval"});
    steps.push_back({"stability"});
    steps.push_back({"report"});
    return steps;
}

}  // namespace fundtext::synthetic
