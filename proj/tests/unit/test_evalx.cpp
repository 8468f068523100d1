#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "../support/temp_dir.hpp"
#include "fundtext/evalx/annotations.hpp"
#include "fundtext/evalx/coherence.hpp"
#include "fundtext/evalx/stability.hpp"

using namespace fundtext;
using namespace fundtext::evalx;

namespace {

corpus::TokenizedCorpus docs_corpus(const std::vector<std::vector<std::string>>& docs) {
    return corpus::build_vocabulary(docs, 1, 1);
}

std::vector<lda::TopicAssignment> assignments(const std::vector<int>& topics) {
    std::vector<lda::TopicAssignment> out;
    for (std::size_t i = 0; i < topics.size(); ++i) out.push_back({"c" + std::to_string(i), topics[i], 1.0});
    return out;
}

AnnotationRow row_with(std::string_view category, double pct, std::size_t members = 100) {
    AnnotationRow r;
    r.model_id = "m";
    r.n_samples = 20;
    r.n_members = members;
    for (std::size_t i = 0; i < kCategories.size(); ++i) {
        if (kCategories[i] == category) r.percent[i] = pct;
    }
    // Remainder goes to "Other" unless Other is the category itself.
    const std::size_t rest = category == "Other" ? 3 : 4;
    r.percent[rest] += 100.0 - pct;
    return r;
}

}  // namespace

TEST_CASE("UMass hand examples") {
    auto c = docs_corpus({{"a", "b"}, {"a"}, {"b", "c"}});
    auto r = coherence_umass({{"a", "b"}}, c);
    CHECK(std::abs(r.per_topic[0]) < 1e-15);

    auto never = docs_corpus({{"a"}, {"a"}, {"a"}, {"a"}, {"b"}});
    CHECK(coherence_umass({{"a", "b"}}, never).per_topic[0] == doctest::Approx(std::log(0.25)).epsilon(1e-12));

    auto always = docs_corpus({{"a", "b"}, {"a", "b"}, {"a", "b"}});
    CHECK(coherence_umass({{"a", "b"}}, always).per_topic[0] > 0.0);

    CHECK_THROWS_WITH_AS(coherence_umass({{"a", "zz"}}, c), doctest::Contains("zz"), ValidationError);
    CHECK_THROWS_AS(coherence_umass({{"a"}}, c), ValidationError);
}

TEST_CASE("UMass matches the set-counting oracle") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        std::vector<std::vector<std::string>> docs(30);
        for (auto& d : docs)
            for (int i = 0; i < 8; ++i) d.push_back("w" + std::to_string(rng() % 12));
        auto c = docs_corpus(docs);
        TopWords topics;
        std::vector<std::string> words;
        for (int i = 0; i < 5; ++i) words.push_back(c.vocabulary.term(static_cast<std::uint32_t>(i * 2)));
        topics.push_back(words);
        auto r = coherence_umass(topics, c, 10, 1.0);
        CHECK(std::abs(r.per_topic[0] - oracle::umass_topic(words, docs, 1.0)) < 1e-12);
        CHECK(r.aggregate == r.per_topic[0]);
    }
}

TEST_CASE("UMass ordering survives chunk duplication") {
    std::vector<std::vector<std::string>> docs{{"a", "b"}, {"a", "c"}, {"b", "c", "d"}, {"d"}, {"a", "b", "d"}};
    TopWords topics{{"a", "b"}, {"c", "d"}, {"a", "d"}};
    auto base = coherence_umass(topics, docs_corpus(docs), 10, 1.0);
    auto doubled_docs = docs;
    doubled_docs.insert(doubled_docs.end(), docs.begin(), docs.end());
    auto doubled = coherence_umass(topics, docs_corpus(doubled_docs), 10, 2.0);
    for (std::size_t i = 0; i < topics.size(); ++i) CHECK(doubled.per_topic[i] == doctest::Approx(base.per_topic[i]));
}

TEST_CASE("NPMI and C_V") {
    CHECK(npmi(0.3, 0.3, 0.3, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(npmi(0.3, 0.3, 0.3) == doctest::Approx(1.0).epsilon(1e-9));

    SUBCASE("words with identical NPMI vectors score 1") {
        std::vector<std::vector<std::string>> streams{{"a", "b"}, {"a", "b"}, {"c"}};
        auto r = coherence_cv({{"a", "b"}}, streams, 10, 2);
        CHECK(r.per_topic[0] == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("12-token stream against the brute-force oracle") {
        std::vector<std::vector<std::string>> streams{
            {"x", "y", "z", "q", "x", "q", "q", "y", "z", "x", "q", "z"}};
        std::vector<std::string> words{"x", "y", "z"};
        auto r = coherence_cv({words}, streams, 3, 3);
        CHECK(std::abs(r.per_topic[0] - oracle::cv_topic(words, streams, 3, 1e-12)) < 1e-9);
    }
    SUBCASE("random streams against the oracle, bounds and order invariance") {
        std::mt19937_64 rng(12);
        std::vector<std::vector<std::string>> streams(15);
        for (auto& s : streams) {
            const std::size_t len = 3 + rng() % 40;
            for (std::size_t i = 0; i < len; ++i) s.push_back("t" + std::to_string(rng() % 15));
        }
        TopWords topics{{"t0", "t1", "t2", "t3"}, {"t4", "t9", "t11"}, {"t5", "t6", "t7", "t8", "t12"}};
        auto r = coherence_cv(topics, streams, 10, 10);
        double mean = 0;
        for (std::size_t i = 0; i < topics.size(); ++i) {
            CHECK(std::abs(r.per_topic[i] - oracle::cv_topic(topics[i], streams, 10, 1e-12)) < 1e-9);
            CHECK(r.per_topic[i] >= -1.0);
            CHECK(r.per_topic[i] <= 1.0);
            mean += r.per_topic[i] / 3;
        }
        CHECK(std::abs(r.aggregate - mean) < 1e-12);
        TopWords reversed(topics.rbegin(), topics.rend());
        auto rr = coherence_cv(reversed, streams, 10, 10);
        CHECK(std::abs(rr.aggregate - r.aggregate) < 1e-12);
    }
    CHECK_THROWS_AS(coherence_cv({{"a", "b"}}, {{"a", "b"}}, 10, 0), ValidationError);
    CHECK_THROWS_WITH_AS(coherence_cv({{"a", "nope"}}, {{"a", "b"}}, 10, 3), doctest::Contains("nope"),
                         ValidationError);
}

TEST_CASE("topic_predicted_class") {
    auto p = topic_predicted_class(row_with("Disclosure", 99.92));
    CHECK(p.category == "Disclosure");
    CHECK(p.accuracy == doctest::Approx(99.92));
    auto q = topic_predicted_class(row_with("Investment Team", 87.95));
    CHECK(q.category == "Investment Team");
    CHECK(q.accuracy == doctest::Approx(87.95));
    AnnotationRow uniform;
    uniform.percent.fill(100.0 / 7);
    CHECK(topic_predicted_class(uniform).category == "Disclosure");
}

TEST_CASE("disclosure_prf") {
    AnnotationTable t;
    t.rows = {row_with("Disclosure", 10), row_with("Disclosure", 90)};
    t.rows[1].topic_id = 1;
    auto m = disclosure_prf(t, Weighting::doc_weighted);
    CHECK(m.precision == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(m.recall == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(m.f1 == doctest::Approx(0.9).epsilon(1e-12));

    auto extra = t;
    extra.rows.push_back(row_with("Disclosure", 100, 500));
    extra.rows.back().topic_id = 2;
    auto e = disclosure_prf(extra, Weighting::doc_weighted);
    CHECK(e.precision == doctest::Approx(m.precision).epsilon(1e-12));
    CHECK(e.recall <= m.recall + 1e-12);

    SUBCASE("equal weighting ignores member counts") {
        auto w = t;
        w.rows[0].n_members = 1000;
        auto eq = disclosure_prf(w, Weighting::equal_weighted);
        CHECK(eq.f1 == doctest::Approx(0.9).epsilon(1e-12));
        CHECK(eq.weighting == Weighting::equal_weighted);
    }
    AnnotationTable all;
    all.rows = {row_with("Disclosure", 100)};
    CHECK_THROWS_WITH_AS(disclosure_prf(all, Weighting::doc_weighted), "no positive topics", ValidationError);

    CHECK(std::abs(f1_from_pr(0.9237, 0.7331) - 0.8174) < 1e-4);
    CHECK(f1_from_pr(0.0, 0.0) == 0.0);
}

TEST_CASE("annotation CSV parsing") {
    const std::string ok =
        "model_id,topic_id,category,percent,n_samples,n_members\n"
        "lda20,0,Disclosure,99.92,50,1200\n"
        "lda20,0,Other,0.08,50,1200\n"
        "lda20,1,Investment Team,87.95,40,900\n"
        "lda20,1,Fund Terms,12.05,40,900\n"
        "bt,0,Market Update,100,10,30\n";
    auto t = parse_annotations(ok);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.model_ids() == std::vector<std::string>{"bt", "lda20"});
    auto l = t.for_model("lda20");
    REQUIRE(l.rows.size() == 2);
    CHECK(l.rows[0].disclosure_percent() == doctest::Approx(99.92));
    CHECK(l.rows[1].n_members == 900);

    CHECK_THROWS_AS(parse_annotations("a,b\n"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_annotations("model_id,topic_id,category,percent,n_samples,n_members\n"
                                           "m,0,Disclosure,60,5,5\n"),
                         doctest::Contains("percentages"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_annotations("model_id,topic_id,category,percent,n_samples,n_members\n"
                                           "m,0,Gossip,100,5,5\n"),
                         doctest::Contains("Gossip"), ValidationError);

    fundtext::testing::TempDir dir;
    CHECK(load_annotations(dir.write("a.csv", ok)).rows.size() == 3);
}

TEST_CASE("stability_matrix") {
    SUBCASE("self comparison is diagonal") {
        auto a = assignments({0, 1, 2, 2, 1, 0, 3});
        auto s = stability_matrix(a, a, 0, 0);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) CHECK((s.normalized[i][j] > 0) == (i == j));
        CHECK(s.nonzero_fraction == doctest::Approx(4.0 / 16));
        CHECK(s.total == 7);
    }
    SUBCASE("50/50 split") {
        auto s = stability_matrix(assignments({0, 0, 0, 0}), assignments({0, 1, 0, 1}), 0, 0);
        CHECK(s.normalized[0][0] == 0.5);
        CHECK(s.normalized[0][1] == 0.5);
    }
    SUBCASE("outliers are excluded") {
        auto s = stability_matrix(assignments({0, kOutlier, 1}), assignments({0, 0, kOutlier}), 0, 0);
        CHECK(s.total == 1);
    }
    SUBCASE("random assignments match the tally oracle; transpose property") {
        std::mt19937_64 rng(99);
        std::vector<int> ta, tb;
        for (int i = 0; i < 1000; ++i) {
            ta.push_back(static_cast<int>(rng() % 21) - 1);
            tb.push_back(static_cast<int>(rng() % 31) - 1);
        }
        auto s = stability_matrix(assignments(ta), assignments(tb), 0, 0);
        auto expect = oracle::tally(ta, tb);
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < s.topics_a; ++i)
            for (std::size_t j = 0; j < s.topics_b; ++j) {
                auto it = expect.find({static_cast<int>(i), static_cast<int>(j)});
                CHECK(s.counts[i][j] == (it == expect.end() ? 0 : it->second));
                total += s.counts[i][j];
            }
        CHECK(total == s.total);
        for (const auto& row : s.normalized) {
            double sum = 0;
            for (double v : row) sum += v;
            if (sum > 0) CHECK(sum == doctest::Approx(1.0));
        }
        auto t = stability_matrix(assignments(tb), assignments(ta), 0, 0);
        for (std::size_t i = 0; i < s.topics_a; ++i)
            for (std::size_t j = 0; j < s.topics_b; ++j) CHECK(t.counts[j][i] == s.counts[i][j]);
        auto view = stability_matrix(assignments(ta), assignments(tb), 5, 7);
        CHECK(view.row_labels.size() == 5);
        CHECK(view.col_labels.size() == 7);
    }
    SUBCASE("id mismatch") {
        auto a = assignments({0, 1});
        auto b = assignments({0, 1});
        b[1].chunk_id = "other";
        CHECK_THROWS_AS(stability_matrix(a, b), ValidationError);
    }
}
