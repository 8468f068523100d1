#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fundtext/common.hpp"
#include "fundtext/corpus/vocabulary.hpp"

namespace fundtext::lda {

struct LdaConfig {
    int num_topics = 20;
    std::optional<double> alpha;       // defaults to 1/K
    std::optional<double> beta;        // defaults to 1/K
    int iterations = 50;
    std::optional<int> burn_in;        // defaults to iterations/2
    std::uint64_t seed = 42;
    double tau = 0.25;                 // outlier threshold on max theta

    [[nodiscard]] double alpha_value() const { return alpha.value_or(1.0 / num_topics); }
    [[nodiscard]] double beta_value() const { return beta.value_or(1.0 / num_topics); }
    [[nodiscard]] int burn_in_value() const { return burn_in.value_or(iterations / 2); }
    /// Throws ValidationError when a field is out of range.
    void validate() const;
};

/// Dense row-major matrix; rows are topics (phi) or chunks (theta).
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    [[nodiscard]] std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

struct LdaModel {
    LdaConfig config;
    std::vector<std::string> terms;      // vocabulary, id order
    std::vector<std::string> chunk_ids;  // training chunks, theta row order
    Matrix phi;                          // K x V
    Matrix theta;                        // D x K
    // Final-sweep count state.
    std::vector<std::vector<std::uint32_t>> n_dk;  // D x K
    std::vector<std::vector<std::uint32_t>> n_kw;  // K x V
    std::vector<std::uint32_t> n_k;
    std::vector<double> log_likelihood;  // log p(w | z) after every sweep

    [[nodiscard]] std::size_t num_topics() const { return phi.rows; }
    [[nodiscard]] std::size_t vocab_size() const { return phi.cols; }
};

/// Collapsed Gibbs full conditional for one token, excluding its own count:
/// p(z = k) ∝ (n_dk + α) (n_kw + β) / (n_k + Vβ). Returned normalized.
std::vector<double> conditional_distribution(std::span<const double> n_dk, std::span<const double> n_kw,
                                             std::span<const double> n_k, std::size_t vocab_size, double alpha,
                                             double beta);

/// Runs `iterations` Gibbs sweeps from a seeded random initialization.
/// phi and theta come from counts averaged over the sweeps after burn-in.
LdaModel fit_lda(const corpus::TokenizedCorpus& corpus, const LdaConfig& config);

struct RankedTerm {
    std::uint32_t term_id = 0;
    std::string term;
    double weight = 0.0;
};

/// Terms by descending phi; ties go to the lower term id.
std::vector<RankedTerm> top_words(const LdaModel& model, std::size_t topic, std::size_t n);
std::vector<RankedTerm> top_words(std::span<const double> phi_row, std::span<const std::string> terms, std::size_t n);

struct TopicAssignment {
    std::string chunk_id;
    int topic = kOutlier;
    double max_prob = 0.0;
};

/// argmax theta per chunk (lowest index on ties); kOutlier when max < tau.
std::vector<TopicAssignment> assign_chunks(const LdaModel& model, double tau);
TopicAssignment assign_row(std::string chunk_id, std::span<const double> theta_row, double tau);

/// exp(-Σ log p(w|d) / N) with p(w|d) = Σ_k theta_dk phi_kw for given theta.
double perplexity_given_theta(const Matrix& theta, const Matrix& phi,
                              const std::vector<std::vector<std::uint32_t>>& docs);

/// Held-out perplexity. theta is inferred by fold-in Gibbs sampling with phi
/// fixed. Held-out terms are matched to the model vocabulary by string; an
/// unseen term throws ValidationError naming it.
double perplexity(const LdaModel& model, const corpus::TokenizedCorpus& heldout);

/// Sampler state checks used by tests: Σ_k n_dk = |d| and Σ_w n_kw = n_k.
bool counts_consistent(const LdaModel& model, const corpus::TokenizedCorpus& corpus);

}  // namespace fundtext::lda
