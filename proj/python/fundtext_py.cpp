#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "fundtext/cli/pipeline.hpp"
#include "fundtext/common.hpp"
#include "fundtext/corpus/chunker.hpp"
#include "fundtext/corpus/text_normalizer.hpp"
#include "fundtext/corpus/vocabulary.hpp"
#include "fundtext/evalx/annotations.hpp"
#include "fundtext/evalx/coherence.hpp"
#include "fundtext/evalx/stability.hpp"
#include "fundtext/lda/lda.hpp"
#include "fundtext/sentperf/statistics.hpp"

namespace py = pybind11;
using namespace fundtext;

namespace {

py::list matrix_rows(const lda::Matrix& m) {
    py::list out;
    for (std::size_t r = 0; r < m.rows; ++r) {
        auto row = m.row(r);
        out.append(std::vector<double>(row.begin(), row.end()));
    }
    return out;
}

std::vector<lda::TopicAssignment> to_assignments(const std::vector<std::string>& ids, const std::vector<int>& topics) {
    if (ids.size() != topics.size()) throw ValidationError("chunk_ids and topics differ in length");
    std::vector<lda::TopicAssignment> out(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) out[i] = {ids[i], topics[i], 1.0};
    return out;
}

py::dict coherence_dict(const evalx::CoherenceResult& r) {
    py::dict d;
    d["metric"] = r.metric == evalx::CoherenceMetric::c_v ? "c_v" : "c_umass";
    d["per_topic"] = r.per_topic;
    d["aggregate"] = r.aggregate;
    return d;
}

}  // namespace

PYBIND11_MODULE(_fundtext, m) {
    m.doc() = "Topic modeling and sentiment evaluation for fund documents";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
    m.attr("OUTLIER") = kOutlier;

    m.def(
        "chunk_paragraph",
        [](std::size_t n_words, std::size_t max_len, std::size_t overlap, std::size_t min_len) {
            std::vector<std::pair<std::size_t, std::size_t>> out;
            for (const auto& w : corpus::chunk_paragraph(n_words, {max_len, overlap, min_len}))
                out.emplace_back(w.begin, w.end);
            return out;
        },
        py::arg("n_words"), py::arg("max_len") = 400, py::arg("overlap") = 50, py::arg("min_len") = 50,
        "Half-open word windows [begin, end) for a paragraph of n_words.");

    m.def("filter_language",
          [](const std::string& block, double threshold) {
              return corpus::filter_language(block, corpus::default_stopwords(), threshold);
          },
          py::arg("block"), py::arg("threshold") = 0.15);

    m.def("stem_word", [](const std::string& w) { return corpus::stem_word(w); });

    m.def(
        "normalize_for_lda",
        [](const std::string& text, std::size_t min_word_len) {
            corpus::NormalizerOptions opts;
            opts.min_word_len = min_word_len;
            return corpus::normalize_for_lda(text, opts);
        },
        py::arg("text"), py::arg("min_word_len") = 3);

    m.def(
        "fit_lda",
        [](const std::vector<std::vector<std::string>>& token_lists, int num_topics, int iterations,
           std::uint64_t seed, std::uint32_t min_doc_freq, double tau) {
            auto corp = corpus::build_vocabulary(token_lists, min_doc_freq);
            lda::LdaConfig cfg;
            cfg.num_topics = num_topics;
            cfg.iterations = iterations;
            cfg.seed = seed;
            cfg.tau = tau;
            lda::LdaModel model;
            {
                py::gil_scoped_release release;
                model = lda::fit_lda(corp, cfg);
            }
            py::dict d;
            d["terms"] = model.terms;
            d["phi"] = matrix_rows(model.phi);
            d["theta"] = matrix_rows(model.theta);
            d["log_likelihood"] = model.log_likelihood;
            std::vector<int> topics;
            for (const auto& a : lda::assign_chunks(model, tau)) topics.push_back(a.topic);
            d["assignments"] = topics;
            std::vector<std::vector<std::string>> top;
            for (std::size_t k = 0; k < model.num_topics(); ++k) {
                auto& words = top.emplace_back();
                for (const auto& t : lda::top_words(model, k, 10)) words.push_back(t.term);
            }
            d["top_words"] = top;
            return d;
        },
        py::arg("token_lists"), py::arg("num_topics") = 20, py::arg("iterations") = 50, py::arg("seed") = 42,
        py::arg("min_doc_freq") = 5, py::arg("tau") = 0.25,
        "Collapsed Gibbs LDA. Returns terms, phi (K x V), theta (D x K), per-sweep log likelihood, "
        "assignments (-1 for outliers) and the top 10 words per topic.");

    m.def(
        "coherence_umass",
        [](const evalx::TopWords& topics, const std::vector<std::vector<std::string>>& token_lists,
           std::size_t top_n, double epsilon) {
            auto corp = corpus::build_vocabulary(token_lists, 1);
            return coherence_dict(evalx::coherence_umass(topics, corp, top_n, epsilon));
        },
        py::arg("topics"), py::arg("token_lists"), py::arg("top_n") = 10, py::arg("epsilon") = 1.0);

    m.def(
        "coherence_cv",
        [](const evalx::TopWords& topics, const std::vector<std::vector<std::string>>& streams, std::size_t top_n,
           std::size_t window, double epsilon) {
            return coherence_dict(evalx::coherence_cv(topics, streams, top_n, window, epsilon));
        },
        py::arg("topics"), py::arg("streams"), py::arg("top_n") = 10, py::arg("window") = 110,
        py::arg("epsilon") = 1e-12);

    m.def("f1_from_pr", &evalx::f1_from_pr, py::arg("precision"), py::arg("recall"));

    m.def(
        "disclosure_prf",
        [](const std::string& csv_text, const std::string& model_id, const std::string& weighting) {
            auto table = evalx::parse_annotations(csv_text).for_model(model_id);
            auto r = evalx::disclosure_prf(table, evalx::parse_weighting(weighting));
            py::dict d;
            d["precision"] = r.precision;
            d["recall"] = r.recall;
            d["f1"] = r.f1;
            return d;
        },
        py::arg("csv_text"), py::arg("model_id"), py::arg("weighting") = "doc_weighted",
        "Disclosure precision/recall/F1 from annotation CSV text.");

    m.def(
        "stability_counts",
        [](const std::vector<std::string>& ids_a, const std::vector<int>& topics_a, const std::vector<std::string>& ids_b,
           const std::vector<int>& topics_b) {
            auto s = evalx::stability_matrix(to_assignments(ids_a, topics_a), to_assignments(ids_b, topics_b), 0, 0);
            return s.counts;
        },
        py::arg("ids_a"), py::arg("topics_a"), py::arg("ids_b"), py::arg("topics_b"),
        "Co-assignment counts between two topic models, outliers excluded.");

    m.def(
        "pearson_r",
        [](const std::vector<double>& x, const std::vector<double>& y, std::size_t n_min) {
            return sentperf::pearson_r(x, y, n_min);
        },
        py::arg("x"), py::arg("y"), py::arg("n_min") = 6, "Pearson correlation, or None below n_min pairs.");

    m.def(
        "t_test",
        [](const std::vector<double>& values, double mu0) {
            auto r = sentperf::t_test_one_sample(values, mu0);
            py::dict d;
            d["t"] = r.t;
            d["df"] = r.df;
            d["p_value"] = r.p_value;
            return d;
        },
        py::arg("values"), py::arg("mu0") = 0.0, "One-sample two-sided t-test.");

    m.def("student_t_two_sided_p", &sentperf::student_t_two_sided_p, py::arg("t"), py::arg("df"));

    m.def(
        "boxplot_stats",
        [](const std::vector<double>& values) {
            auto f = sentperf::boxplot_stats(values);
            return std::vector<double>{f.min, f.q25, f.median, f.q75, f.max};
        },
        py::arg("values"), "min, q25, median, q75, max (type-7 quantiles).");

    m.def(
        "run_command",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run_command(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs a CLI subcommand in-process. Returns (exit_code, stdout, stderr).");

    m.def("subcommands", &cli::subcommand_names);
}
