// Acceptance gate. Each criterion prints one PASS/FAIL line; the process
// exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "../support/oracles.hpp"
#include "../support/synthetic.hpp"
#include "../support/temp_dir.hpp"
#include "fundtext/cli/digest.hpp"
#include "fundtext/cli/pipeline.hpp"
#include "fundtext/corpus/chunker.hpp"
#include "fundtext/embedtm/clustering.hpp"
#include "fundtext/embedtm/representation.hpp"
#include "fundtext/evalx/annotations.hpp"
#include "fundtext/evalx/coherence.hpp"
#include "fundtext/evalx/stability.hpp"
#include "fundtext/lda/lda.hpp"
#include "fundtext/sentperf/sentiment.hpp"
#include "fundtext/sentperf/statistics.hpp"

using namespace fundtext;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;

    void expect(bool ok, const std::string& what) {
        if (ok) return;
        if (pass) detail.clear();
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(double v, int prec = 4) {
    std::ostringstream ss;
    ss.precision(prec);
    ss << v;
    return ss.str();
}

// ---------------------------------------------------------------------------

Outcome chunker_fuzz() {
    Outcome o;
    std::mt19937_64 rng(20240601);
    const corpus::ChunkingRules rules;
    const auto t0 = Clock::now();
    std::size_t bad = 0;
    for (int i = 0; i < 10000; ++i) {
        const std::size_t n = rng() % 2001;
        const auto w = corpus::chunk_paragraph(n, rules);
        bool ok = true;
        if (n < rules.min_len) {
            ok = w.empty();
        } else {
            ok = !w.empty() && w.front().begin == 0 && w.back().end == n;
            for (std::size_t k = 0; ok && k < w.size(); ++k) {
                ok = w[k].size() >= rules.min_len && w[k].size() <= rules.max_len;
                if (ok && k + 1 < w.size()) ok = w[k].end - w[k + 1].begin == rules.overlap;
            }
        }
        bad += ok ? 0 : 1;
    }
    const double secs = seconds_since(t0);
    o.expect(bad == 0, std::to_string(bad) + " of 10000 cases violate bounds/overlap/coverage");
    o.expect(secs < 1.0, "took " + fmt(secs) + " s");
    if (o.pass) o.detail = "10000 lengths in [0, 2000], " + fmt(secs * 1000, 3) + " ms";
    return o;
}

Outcome lda_planted() {
    Outcome o;
    std::string accs;
    double worst_time = 0;
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        auto pc = oracle::planted_two_topics(seed, 200, 60);
        auto c = corpus::build_vocabulary(pc.docs, 1, 1);
        lda::LdaConfig cfg;
        cfg.num_topics = 2;
        cfg.iterations = 50;
        cfg.seed = seed;
        const auto t0 = Clock::now();
        auto m = lda::fit_lda(c, cfg);
        const double secs = seconds_since(t0);
        worst_time = std::max(worst_time, secs);
        std::vector<int> found;
        for (const auto& a : lda::assign_chunks(m, 0.0)) found.push_back(a.topic);
        const double acc = oracle::matched_accuracy_2(pc.labels, found);
        accs += (accs.empty() ? "" : ",") + fmt(acc, 3);
        o.expect(acc >= 0.95, "seed " + std::to_string(seed) + " accuracy " + fmt(acc));
        o.expect(secs < 10.0, "seed " + std::to_string(seed) + " took " + fmt(secs) + " s");
    }
    // K = 1: phi equals the beta-smoothed unigram distribution.
    auto c = corpus::build_vocabulary({{"a", "b", "a", "c"}, {"a", "d"}, {"b", "b", "e"}}, 1, 1);
    lda::LdaConfig one;
    one.num_topics = 1;
    one.iterations = 10;
    auto m = lda::fit_lda(c, one);
    const double beta = one.beta_value(), N = 9, V = 5;
    const double counts[] = {3, 3, 1, 1, 1};
    double max_err = 0;
    for (std::size_t w = 0; w < 5; ++w) max_err = std::max(max_err, std::abs(m.phi(0, w) - (counts[w] + beta) / (N + V * beta)));
    o.expect(max_err < 1e-12, "K=1 phi error " + fmt(max_err));
    if (o.pass) o.detail = "accuracy " + accs + "; slowest seed " + fmt(worst_time, 3) + " s; K=1 phi error " + fmt(max_err, 2);
    return o;
}

Outcome coherence_oracles() {
    Outcome o;
    double worst_umass = 0, worst_cv = 0;
    for (std::uint64_t corpus_seed = 1; corpus_seed <= 5; ++corpus_seed) {
        std::mt19937_64 rng(corpus_seed * 7919);
        const std::size_t vocab = 8 + corpus_seed * 2;
        std::vector<std::vector<std::string>> docs(10 + corpus_seed * 3);
        for (auto& d : docs) {
            const std::size_t len = 2 + rng() % 25;
            for (std::size_t i = 0; i < len; ++i) d.push_back("v" + std::to_string(rng() % vocab));
        }
        // Guarantee every term occurs.
        for (std::size_t v = 0; v < vocab; ++v) docs[v % docs.size()].push_back("v" + std::to_string(v));
        auto c = corpus::build_vocabulary(docs, 1, 1);
        evalx::TopWords topics;
        for (std::size_t t = 0; t < 3; ++t) {
            std::vector<std::string> words;
            for (std::size_t k = 0; k < 4 + t; ++k) words.push_back("v" + std::to_string((t * 3 + k * 2) % vocab));
            std::sort(words.begin(), words.end());
            words.erase(std::unique(words.begin(), words.end()), words.end());
            topics.push_back(words);
        }
        const std::size_t window = 3 + corpus_seed;
        auto um = evalx::coherence_umass(topics, c, 10, 1.0);
        auto cv = evalx::coherence_cv(topics, docs, 10, window, 1e-12);
        for (std::size_t t = 0; t < topics.size(); ++t) {
            worst_umass = std::max(worst_umass, std::abs(um.per_topic[t] - oracle::umass_topic(topics[t], docs, 1.0)));
            worst_cv = std::max(worst_cv, std::abs(cv.per_topic[t] - oracle::cv_topic(topics[t], docs, window, 1e-12)));
            o.expect(cv.per_topic[t] >= -1.0 && cv.per_topic[t] <= 1.0, "C_V out of [-1, 1]");
        }
    }
    o.expect(worst_umass < 1e-9, "UMass deviation " + fmt(worst_umass));
    o.expect(worst_cv < 1e-9, "C_V deviation " + fmt(worst_cv));
    double worst_npmi = 0;
    for (double p : {0.01, 0.2, 0.5, 0.99}) worst_npmi = std::max(worst_npmi, std::abs(evalx::npmi(p, p, p, 0.0) - 1.0));
    o.expect(worst_npmi < 1e-12, "NPMI(w,w) deviation " + fmt(worst_npmi));
    if (o.pass)
        o.detail = "5 corpora; max |UMass - oracle| " + fmt(worst_umass, 2) + ", max |C_V - oracle| " + fmt(worst_cv, 2);
    return o;
}

Outcome metrics_fixture() {
    Outcome o;
    const double f1 = evalx::f1_from_pr(0.9237, 0.7331);
    o.expect(std::abs(f1 - 0.8174) <= 1e-4, "f1_from_pr gave " + fmt(f1, 6));
    evalx::AnnotationTable t;
    for (int k = 0; k < 2; ++k) {
        evalx::AnnotationRow r;
        r.model_id = "m";
        r.topic_id = k;
        r.n_samples = 100;
        r.n_members = 100;
        r.percent[0] = k == 0 ? 10.0 : 90.0;
        r.percent[3] = 100.0 - r.percent[0];
        t.rows.push_back(r);
    }
    auto m = evalx::disclosure_prf(t, evalx::Weighting::doc_weighted);
    o.expect(m.precision == 0.9 && m.recall == 0.9 && m.f1 == 0.9,
             "P/R/F1 = " + fmt(m.precision, 17) + "/" + fmt(m.recall, 17) + "/" + fmt(m.f1, 17));
    if (o.pass) o.detail = "f1(0.9237, 0.7331) = " + fmt(f1, 6) + "; two-topic example P = R = F1 = 0.9";
    return o;
}

std::vector<lda::TopicAssignment> as_assignments(const std::vector<int>& topics) {
    std::vector<lda::TopicAssignment> out;
    for (std::size_t i = 0; i < topics.size(); ++i) out.push_back({"c" + std::to_string(i), topics[i], 1.0});
    return out;
}

Outcome stability() {
    Outcome o;
    const int K = 6;
    std::vector<int> self;
    for (int i = 0; i < 300; ++i) self.push_back(i % K);
    auto s = evalx::stability_matrix(as_assignments(self), as_assignments(self), 0, 0);
    bool diagonal = true;
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) diagonal &= (s.counts[i][j] > 0) == (i == j);
    o.expect(diagonal, "self-comparison not diagonal");
    o.expect(std::abs(s.nonzero_fraction - 1.0 / K) < 1e-15, "nonzero_fraction " + fmt(s.nonzero_fraction));

    std::mt19937_64 rng(424242);
    std::vector<int> a, b;
    for (int i = 0; i < 1000; ++i) {
        a.push_back(static_cast<int>(rng() % 13) - 1);
        b.push_back(static_cast<int>(rng() % 9) - 1);
    }
    auto m = evalx::stability_matrix(as_assignments(a), as_assignments(b), 0, 0);
    auto tally = oracle::tally(a, b);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < m.topics_a; ++i)
        for (std::size_t j = 0; j < m.topics_b; ++j) {
            auto it = tally.find({static_cast<int>(i), static_cast<int>(j)});
            mismatches += m.counts[i][j] != (it == tally.end() ? 0 : it->second);
        }
    o.expect(mismatches == 0, std::to_string(mismatches) + " cells differ from the tally");
    if (o.pass) o.detail = "diagonal with nonzero_fraction 1/" + std::to_string(K) + "; 1000-chunk tally exact";
    return o;
}

embedtm::EmbeddingSet blobs(std::size_t n_blobs, std::size_t per_blob, std::vector<int>& truth) {
    std::mt19937_64 rng(5150);
    std::normal_distribution<double> noise(0.0, 0.04);
    const std::size_t dim = 12;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n_blobs * per_blob), static_cast<Eigen::Index>(dim));
    std::vector<std::string> ids;
    for (std::size_t b = 0; b < n_blobs; ++b)
        for (std::size_t i = 0; i < per_blob; ++i) {
            const auto r = static_cast<Eigen::Index>(b * per_blob + i);
            for (std::size_t d = 0; d < dim; ++d) m(r, static_cast<Eigen::Index>(d)) = noise(rng);
            m(r, static_cast<Eigen::Index>(b)) += 1.0;
            ids.push_back("blob" + std::to_string(b) + "_" + std::to_string(i));
            truth.push_back(static_cast<int>(b));
        }
    return {embedtm::EmbeddingKind::chunk, "planted", ids, m};
}

Outcome clustering() {
    Outcome o;
    std::vector<int> truth;
    // Unequal sizes so every merge order is determined.
    const std::size_t per_blob = 20;
    auto set = blobs(5, per_blob, truth);
    auto model = embedtm::cluster_embeddings(set, 10, 0.35);
    o.expect(model.num_topics() == 5, "found " + std::to_string(model.num_topics()) + " topics");
    std::map<int, std::set<int>> found_per_truth, truth_per_found;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        found_per_truth[truth[i]].insert(model.labels[i]);
        truth_per_found[model.labels[i]].insert(truth[i]);
    }
    bool exact = model.noise_count() == 0;
    for (auto& [k, v] : found_per_truth) exact &= v.size() == 1;
    for (auto& [k, v] : truth_per_found) exact &= v.size() == 1;
    o.expect(exact, "partition differs from planted blobs");

    auto reduced = embedtm::hierarchical_reduce(model, set, 3);
    std::size_t members = reduced.noise_count();
    for (auto s : reduced.topic_sizes()) members += s;
    o.expect(reduced.num_topics() == 3, "reduced to " + std::to_string(reduced.num_topics()) + " topics");
    o.expect(members == set.size(), "membership " + std::to_string(members) + " != " + std::to_string(set.size()));

    // Centroid words at hand-computed angles: cos 1, cos 20°, cos 45°, cos 70°, cos 90°.
    embedtm::ClusterModel single;
    single.centroids = Eigen::MatrixXd(1, 2);
    single.centroids << 3.0, 0.0;
    const double pi = std::acos(-1.0);
    const std::vector<std::pair<std::string, double>> words{
        {"w70", 70.0}, {"w0", 0.0}, {"w90", 90.0}, {"w20", 20.0}, {"w45", 45.0}};
    Eigen::MatrixXd wv(5, 2);
    std::vector<std::string> ids;
    for (int i = 0; i < 5; ++i) {
        const double a = words[static_cast<std::size_t>(i)].second * pi / 180.0;
        wv.row(i) << 0.5 * (i + 1) * std::cos(a), 0.5 * (i + 1) * std::sin(a);
        ids.push_back(words[static_cast<std::size_t>(i)].first);
    }
    auto rep = embedtm::centroid_topic_words(single, {embedtm::EmbeddingKind::word, "w", ids, wv}, 5);
    const std::vector<std::pair<std::string, double>> expected{{"w0", 1.0},
                                                               {"w20", std::cos(20 * pi / 180)},
                                                               {"w45", std::cos(45 * pi / 180)},
                                                               {"w70", std::cos(70 * pi / 180)},
                                                               {"w90", 0.0}};
    bool ranking = rep.size() == 1 && rep[0].terms.size() == 5;
    for (std::size_t i = 0; ranking && i < 5; ++i)
        ranking = rep[0].terms[i].term == expected[i].first && std::abs(rep[0].terms[i].score - expected[i].second) < 1e-12;
    o.expect(ranking, "centroid word ranking differs from hand-computed cosines");
    if (o.pass) o.detail = "5 blobs recovered exactly; reduced to 3 with " + std::to_string(members) + " members kept; ranking exact";
    return o;
}

// One trial of the synthetic sentiment experiment. Topics 0 and 1 carry the
// signal; 2 and 3 are independent noise. Returns per-topic "flagged" flags.
std::vector<bool> sentiment_trial(std::uint64_t seed, std::vector<double>& means) {
    const int funds = 30, months = 36, topics = 4;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-0.8, 0.8);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<sentperf::SentimentRecord> records;
    std::unordered_map<std::string, int> assignment;
    std::unordered_map<std::string, sentperf::ChunkMeta> meta;
    std::vector<sentperf::FundReturn> returns;
    std::vector<std::vector<double>> signal(funds, std::vector<double>(months));
    for (int f = 0; f < funds; ++f) {
        const std::string fund = "F" + std::to_string(f);
        YearMonth ym{2019, 1};
        for (int m = 0; m < months; ++m, ym = ym.next()) {
            double sig = 0;
            for (int t = 0; t < topics; ++t) {
                const double s = unif(rng);
                if (t < 2) sig += s / 2.0;
                // Two chunks whose mean is s; one extra chunk has a missing score.
                const double d = 0.1 * unif(rng);
                for (int c = 0; c < 3; ++c) {
                    const std::string id = fund + "_" + std::to_string(m) + "_" + std::to_string(t) + "_" + std::to_string(c);
                    assignment[id] = t;
                    meta[id] = {fund, ym};
                    std::optional<double> score;
                    if (c == 0) score = s + d;
                    if (c == 1) score = s - d;
                    records.push_back({id, "finance", score});
                }
            }
            signal[static_cast<std::size_t>(f)][static_cast<std::size_t>(m)] = 0.5 * sig;
        }
        // sigma: standard deviation of the signal component for this fund.
        const double sigma = sentperf::sample_std(signal[static_cast<std::size_t>(f)]);
        YearMonth rm{2019, 2};
        for (int m = 0; m < months; ++m, rm = rm.next())
            returns.push_back({fund, rm, signal[static_cast<std::size_t>(f)][static_cast<std::size_t>(m)] + 0.1 * sigma * gauss(rng)});
    }
    auto agg = sentperf::aggregate_sentiment(records, assignment, meta);
    auto series = sentperf::lag_join(agg.rows, returns);
    std::map<int, std::vector<double>> by_topic;
    for (const auto& c : sentperf::fund_correlations(series, 6)) by_topic[c.topic].push_back(c.r);
    auto summary = sentperf::summarize_topics(by_topic, 0.05);
    std::vector<bool> flagged(topics, false);
    means.assign(topics, 0.0);
    for (const auto& s : summary) {
        flagged[static_cast<std::size_t>(s.topic)] = s.significant && s.mean > 0;
        means[static_cast<std::size_t>(s.topic)] = s.mean;
    }
    return flagged;
}

Outcome sentiment_pipeline() {
    Outcome o;
    const auto t0 = Clock::now();
    const int trials = 20;
    std::vector<int> correct(4, 0);
    std::vector<double> mean_sum(4, 0.0);
    // Trial seeds come from one master generator rather than consecutive integers.
    std::mt19937_64 master(0x5EED5EED);
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> means;
        auto flagged = sentiment_trial(master(), means);
        for (int t = 0; t < 4; ++t) {
            const bool signal = t < 2;
            correct[static_cast<std::size_t>(t)] += flagged[static_cast<std::size_t>(t)] == signal ? 1 : 0;
            mean_sum[static_cast<std::size_t>(t)] += means[static_cast<std::size_t>(t)];
        }
    }
    const double secs = seconds_since(t0);
    std::string rates;
    for (int t = 0; t < 4; ++t) {
        const double rate = correct[static_cast<std::size_t>(t)] / static_cast<double>(trials);
        rates += (t ? ", " : "") + std::string(t < 2 ? "signal" : "noise") + std::to_string(t) + " " +
                 std::to_string(correct[static_cast<std::size_t>(t)]) + "/" + std::to_string(trials);
        o.expect(rate >= 0.9, "topic " + std::to_string(t) + " correct in " + fmt(rate * 100, 3) + "% of trials");
    }
    o.expect(secs < 30.0, "took " + fmt(secs) + " s");

    // A longer run guards against a lucky seed block: the per-topic error
    // rate over 200 further trials must also stay within 10%.
    std::vector<int> wrong(4, 0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> means;
        auto flagged = sentiment_trial(master(), means);
        for (int t = 0; t < 4; ++t) wrong[static_cast<std::size_t>(t)] += flagged[static_cast<std::size_t>(t)] != (t < 2);
    }
    const int worst = *std::max_element(wrong.begin(), wrong.end());
    o.expect(worst <= 20, "200-trial error count " + std::to_string(worst) + " exceeds 10%");
    if (o.pass)
        o.detail = "30 funds x 36 months, 20 trials: " + rates + "; " + fmt(secs, 3) + " s; worst topic wrong in " +
                   std::to_string(worst) + "/200 extra trials";
    return o;
}

// Independent Pearson: centered cross products accumulated in long double.
double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

Outcome statistics_oracles() {
    Outcome o;
    std::mt19937_64 rng(31337);
    std::normal_distribution<double> g;
    double worst_r = 0, worst_p = 0;
    for (int c = 0; c < 100; ++c) {
        const std::size_t n = 6 + rng() % 60;
        std::vector<double> x(n), y(n);
        const double rho = unit_interval(rng()) * 1.6 - 0.8;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = g(rng);
            y[i] = rho * x[i] + g(rng);
        }
        worst_r = std::max(worst_r, std::abs(*sentperf::pearson_r(x, y) - pearson_oracle(x, y)));

        auto tt = sentperf::t_test_one_sample(y);
        boost::math::students_t dist(static_cast<double>(n - 1));
        const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(tt.t)));
        worst_p = std::max(worst_p, std::abs(*tt.p_value - p));
    }
    o.expect(worst_r < 1e-9, "Pearson deviation " + fmt(worst_r));
    o.expect(worst_p < 1e-9, "p-value deviation " + fmt(worst_p));
    auto fixture = sentperf::t_test_one_sample(std::vector<double>{1, 2, 3, 4});
    o.expect(std::abs(fixture.t - 3.872983346207417) < 1e-9 && std::abs(*fixture.p_value - 0.030466291662170977) < 1e-9,
             "[1,2,3,4] gave t " + fmt(fixture.t, 10) + ", p " + fmt(*fixture.p_value, 10));
    if (o.pass)
        o.detail = "100 cases: max |r - oracle| " + fmt(worst_r, 2) + ", max |p - oracle| " + fmt(worst_p, 2) +
                   "; [1,2,3,4] t " + fmt(fixture.t, 6) + " p " + fmt(*fixture.p_value, 6);
    return o;
}

std::map<std::string, std::string> digests(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (name.starts_with("manifest_") || name.starts_with(".")) continue;
        out[name] = cli::sha256_file(e.path());
    }
    return out;
}

Outcome determinism() {
    Outcome o;
    fundtext::testing::TempDir dir;
    auto ws = synthetic::write_workspace(dir.path() / "ws");
    const auto second_out = dir.path() / "rerun";
    std::size_t steps = 0;
    for (const auto& step : synthetic::pipeline_steps()) {
        std::ostringstream out, err;
        std::vector<std::string> args{"--config", ws.config.string()};
        args.insert(args.end(), step.begin(), step.end());
        const int code1 = cli::run_command(args, out, err);
        const auto after_first = digests(ws.output_dir);
        // Rerun in place, then in a fresh directory.
        const int code2 = cli::run_command(args, out, err);
        const auto after_rerun = digests(ws.output_dir);
        args.insert(args.end(), {"--output", second_out.string()});
        const int code3 = cli::run_command(args, out, err);
        if (code1 != 0 || code2 != 0 || code3 != 0) {
            o.expect(false, step[0] + " failed: " + err.str());
            break;
        }
        o.expect(after_first == after_rerun, step[0] + " rerun changed artifacts");
        ++steps;
    }
    if (o.pass) o.expect(digests(ws.output_dir) == digests(second_out), "fresh-directory run differs");
    if (o.pass)
        o.detail = std::to_string(steps) + " subcommand runs, " + std::to_string(digests(ws.output_dir).size()) +
                   " artifacts byte-identical across reruns and directories";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"chunker fuzz", chunker_fuzz},
        {"lda planted recovery", lda_planted},
        {"coherence oracles", coherence_oracles},
        {"metrics formula fixture", metrics_fixture},
        {"stability matrix", stability},
        {"reduction and clustering", clustering},
        {"sentiment synthetic signal", sentiment_pipeline},
        {"statistics oracles", statistics_oracles},
        {"pipeline determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << std::endl;
        failed += o.pass ? 0 : 1;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
    return failed ? 1 : 0;
}
