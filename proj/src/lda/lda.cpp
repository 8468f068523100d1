#include "fundtext/lda/lda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace fundtext::lda {

void LdaConfig::validate() const {
    if (num_topics < 1) throw ValidationError("lda: K must be >= 1");
    if (alpha_value() <= 0.0) throw ValidationError("lda: alpha must be > 0");
    if (beta_value() <= 0.0) throw ValidationError("lda: beta must be > 0");
    if (iterations < 1) throw ValidationError("lda: iterations must be >= 1");
    if (burn_in_value() < 0) throw ValidationError("lda: burn_in must be >= 0");
    if (tau < 0.0 || tau >= 1.0) throw ValidationError("lda: tau must be in [0, 1)");
}

std::vector<double> conditional_distribution(std::span<const double> n_dk, std::span<const double> n_kw,
                                             std::span<const double> n_k, std::size_t vocab_size, double alpha,
                                             double beta) {
    const std::size_t K = n_dk.size();
    if (n_kw.size() != K || n_k.size() != K) throw ValidationError("conditional_distribution: size mismatch");
    const double vbeta = static_cast<double>(vocab_size) * beta;
    std::vector<double> p(K);
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        if (n_dk[k] < 0 || n_kw[k] < 0 || n_k[k] < 0)
            throw ValidationError("conditional_distribution: negative count");
        p[k] = (n_dk[k] + alpha) * (n_kw[k] + beta) / (n_k[k] + vbeta);
        total += p[k];
    }
    for (double& v : p) v /= total;
    return p;
}

namespace {

class GibbsSampler {
public:
    GibbsSampler(const corpus::TokenizedCorpus& corpus, const LdaConfig& config)
        : docs_(corpus.docs),
          K_(static_cast<std::size_t>(config.num_topics)),
          V_(corpus.vocabulary.size()),
          alpha_(config.alpha_value()),
          beta_(config.beta_value()),
          rng_(config.seed),
          n_dk_(docs_.size(), std::vector<std::uint32_t>(K_, 0)),
          n_kw_(K_, std::vector<std::uint32_t>(V_, 0)),
          n_k_(K_, 0),
          weights_(K_) {
        z_.resize(docs_.size());
        for (std::size_t d = 0; d < docs_.size(); ++d) {
            z_[d].resize(docs_[d].size());
            for (std::size_t i = 0; i < docs_[d].size(); ++i) {
                auto k = static_cast<std::uint32_t>(unit_interval(rng_()) * static_cast<double>(K_));
                k = std::min<std::uint32_t>(k, static_cast<std::uint32_t>(K_ - 1));
                z_[d][i] = k;
                add(d, docs_[d][i], k);
            }
        }
    }

    void sweep() {
        const double vbeta = static_cast<double>(V_) * beta_;
        for (std::size_t d = 0; d < docs_.size(); ++d) {
            auto& nd = n_dk_[d];
            for (std::size_t i = 0; i < docs_[d].size(); ++i) {
                const std::uint32_t w = docs_[d][i];
                const std::uint32_t old = z_[d][i];
                remove(d, w, old);
                double total = 0.0;
                for (std::size_t k = 0; k < K_; ++k) {
                    total += (nd[k] + alpha_) * (n_kw_[k][w] + beta_) / (n_k_[k] + vbeta);
                    weights_[k] = total;
                }
                const double u = unit_interval(rng_()) * total;
                std::size_t k = 0;
                while (k + 1 < K_ && weights_[k] <= u) ++k;
                z_[d][i] = static_cast<std::uint32_t>(k);
                add(d, w, static_cast<std::uint32_t>(k));
            }
        }
    }

    double log_likelihood() const {
        const double vbeta = static_cast<double>(V_) * beta_;
        double ll = static_cast<double>(K_) * (std::lgamma(vbeta) - static_cast<double>(V_) * std::lgamma(beta_));
        for (std::size_t k = 0; k < K_; ++k) {
            for (std::size_t w = 0; w < V_; ++w) ll += std::lgamma(n_kw_[k][w] + beta_);
            ll -= std::lgamma(n_k_[k] + vbeta);
        }
        return ll;
    }

    void accumulate(std::vector<double>& sum_dk, std::vector<double>& sum_kw) const {
        for (std::size_t d = 0; d < docs_.size(); ++d)
            for (std::size_t k = 0; k < K_; ++k) sum_dk[d * K_ + k] += n_dk_[d][k];
        for (std::size_t k = 0; k < K_; ++k)
            for (std::size_t w = 0; w < V_; ++w) sum_kw[k * V_ + w] += n_kw_[k][w];
    }

    const auto& n_dk() const { return n_dk_; }
    const auto& n_kw() const { return n_kw_; }
    const auto& n_k() const { return n_k_; }

private:
    void add(std::size_t d, std::uint32_t w, std::uint32_t k) {
        ++n_dk_[d][k];
        ++n_kw_[k][w];
        ++n_k_[k];
    }
    void remove(std::size_t d, std::uint32_t w, std::uint32_t k) {
        --n_dk_[d][k];
        --n_kw_[k][w];
        --n_k_[k];
    }

    const std::vector<std::vector<std::uint32_t>>& docs_;
    std::size_t K_;
    std::size_t V_;
    double alpha_;
    double beta_;
    std::mt19937_64 rng_;
    std::vector<std::vector<std::uint32_t>> z_;
    std::vector<std::vector<std::uint32_t>> n_dk_;
    std::vector<std::vector<std::uint32_t>> n_kw_;
    std::vector<std::uint32_t> n_k_;
    std::vector<double> weights_;
};

}  // namespace

LdaModel fit_lda(const corpus::TokenizedCorpus& corpus, const LdaConfig& config) {
    config.validate();
    if (corpus.docs.empty() || corpus.total_tokens == 0) throw ValidationError("empty corpus");
    for (std::size_t d = 0; d < corpus.docs.size(); ++d)
        if (corpus.docs[d].empty())
            throw ValidationError("lda: chunk " + corpus.chunk_ids.at(d) + " has no tokens");

    const std::size_t D = corpus.docs.size();
    const std::size_t K = static_cast<std::size_t>(config.num_topics);
    const std::size_t V = corpus.vocabulary.size();
    const int burn_in = std::min(config.burn_in_value(), config.iterations - 1);

    GibbsSampler sampler(corpus, config);
    LdaModel model;
    model.config = config;
    model.terms = corpus.vocabulary.terms();
    model.chunk_ids = corpus.chunk_ids;

    std::vector<double> sum_dk(D * K, 0.0), sum_kw(K * V, 0.0);
    int samples = 0;
    for (int sweep = 1; sweep <= config.iterations; ++sweep) {
        sampler.sweep();
        model.log_likelihood.push_back(sampler.log_likelihood());
        if (sweep > burn_in) {
            sampler.accumulate(sum_dk, sum_kw);
            ++samples;
        }
    }

    const double alpha = config.alpha_value();
    const double beta = config.beta_value();
    model.phi = Matrix(K, V);
    for (std::size_t k = 0; k < K; ++k) {
        double row_total = 0.0;
        for (std::size_t w = 0; w < V; ++w) row_total += sum_kw[k * V + w] / samples;
        const double denom = row_total + static_cast<double>(V) * beta;
        for (std::size_t w = 0; w < V; ++w) model.phi(k, w) = (sum_kw[k * V + w] / samples + beta) / denom;
    }
    model.theta = Matrix(D, K);
    for (std::size_t d = 0; d < D; ++d) {
        const double denom = static_cast<double>(corpus.docs[d].size()) + static_cast<double>(K) * alpha;
        for (std::size_t k = 0; k < K; ++k) model.theta(d, k) = (sum_dk[d * K + k] / samples + alpha) / denom;
    }
    model.n_dk = sampler.n_dk();
    model.n_kw = sampler.n_kw();
    model.n_k = sampler.n_k();
    return model;
}

std::vector<RankedTerm> top_words(std::span<const double> phi_row, std::span<const std::string> terms,
                                  std::size_t n) {
    if (n < 1) throw ValidationError("top_words: n must be >= 1");
    std::vector<std::uint32_t> ids(phi_row.size());
    std::iota(ids.begin(), ids.end(), 0u);
    const std::size_t take = std::min(n, ids.size());
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(take), ids.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                          if (phi_row[a] != phi_row[b]) return phi_row[a] > phi_row[b];
                          return a < b;
                      });
    std::vector<RankedTerm> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i)
        out.push_back({ids[i], ids[i] < terms.size() ? terms[ids[i]] : std::to_string(ids[i]), phi_row[ids[i]]});
    return out;
}

std::vector<RankedTerm> top_words(const LdaModel& model, std::size_t topic, std::size_t n) {
    if (topic >= model.num_topics())
        throw ValidationError("top_words: topic " + std::to_string(topic) + " out of range");
    return top_words(model.phi.row(topic), model.terms, n);
}

TopicAssignment assign_row(std::string chunk_id, std::span<const double> theta_row, double tau) {
    TopicAssignment a;
    a.chunk_id = std::move(chunk_id);
    std::size_t best = 0;
    for (std::size_t k = 1; k < theta_row.size(); ++k)
        if (theta_row[k] > theta_row[best]) best = k;
    a.max_prob = theta_row.empty() ? 0.0 : theta_row[best];
    a.topic = (theta_row.empty() || a.max_prob < tau) ? kOutlier : static_cast<int>(best);
    return a;
}

std::vector<TopicAssignment> assign_chunks(const LdaModel& model, double tau) {
    std::vector<TopicAssignment> out;
    out.reserve(model.theta.rows);
    for (std::size_t d = 0; d < model.theta.rows; ++d) {
        std::string id = d < model.chunk_ids.size() ? model.chunk_ids[d] : std::to_string(d);
        out.push_back(assign_row(std::move(id), model.theta.row(d), tau));
    }
    return out;
}

double perplexity_given_theta(const Matrix& theta, const Matrix& phi,
                              const std::vector<std::vector<std::uint32_t>>& docs) {
    if (theta.rows != docs.size() || theta.cols != phi.rows)
        throw ValidationError("perplexity: theta/phi/docs shapes disagree");
    double log_sum = 0.0;
    std::size_t n = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (auto w : docs[d]) {
            if (w >= phi.cols) throw ValidationError("perplexity: term id out of range");
            double p = 0.0;
            for (std::size_t k = 0; k < phi.rows; ++k) p += theta(d, k) * phi(k, w);
            log_sum += std::log(p);
            ++n;
        }
    }
    if (n == 0) throw ValidationError("perplexity: held-out corpus has no tokens");
    return std::exp(-log_sum / static_cast<double>(n));
}

double perplexity(const LdaModel& model, const corpus::TokenizedCorpus& heldout) {
    // Map held-out ids onto model ids.
    corpus::Vocabulary model_vocab;
    {
        std::vector<std::uint32_t> df(model.terms.size(), 1);
        model_vocab = corpus::Vocabulary(model.terms, df);
    }
    std::vector<std::vector<std::uint32_t>> docs;
    docs.reserve(heldout.docs.size());
    for (const auto& doc : heldout.docs) {
        std::vector<std::uint32_t> ids;
        ids.reserve(doc.size());
        for (auto w : doc) {
            const std::string& term = heldout.vocabulary.term(w);
            auto id = model_vocab.find(term);
            if (!id) throw ValidationError("perplexity: unseen term '" + term + "'");
            ids.push_back(*id);
        }
        docs.push_back(std::move(ids));
    }

    const std::size_t K = model.num_topics();
    const double alpha = model.config.alpha_value();
    const int iterations = model.config.iterations;
    const int burn_in = std::min(model.config.burn_in_value(), iterations - 1);
    std::mt19937_64 rng(model.config.seed ^ 0x9e3779b97f4a7c15ULL);

    Matrix theta(docs.size(), K);
    std::vector<double> weights(K);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        std::vector<std::uint32_t> z(docs[d].size());
        std::vector<double> n_dk(K, 0.0), sum(K, 0.0);
        for (auto& zk : z) {
            zk = std::min<std::uint32_t>(static_cast<std::uint32_t>(unit_interval(rng()) * static_cast<double>(K)),
                                         static_cast<std::uint32_t>(K - 1));
            n_dk[zk] += 1.0;
        }
        int samples = 0;
        for (int sweep = 1; sweep <= iterations; ++sweep) {
            for (std::size_t i = 0; i < z.size(); ++i) {
                n_dk[z[i]] -= 1.0;
                double total = 0.0;
                for (std::size_t k = 0; k < K; ++k) {
                    total += (n_dk[k] + alpha) * model.phi(k, docs[d][i]);
                    weights[k] = total;
                }
                const double u = unit_interval(rng()) * total;
                std::size_t k = 0;
                while (k + 1 < K && weights[k] <= u) ++k;
                z[i] = static_cast<std::uint32_t>(k);
                n_dk[k] += 1.0;
            }
            if (sweep > burn_in) {
                for (std::size_t k = 0; k < K; ++k) sum[k] += n_dk[k];
                ++samples;
            }
        }
        const double denom = static_cast<double>(z.size()) + static_cast<double>(K) * alpha;
        for (std::size_t k = 0; k < K; ++k) theta(d, k) = (sum[k] / samples + alpha) / denom;
    }
    return perplexity_given_theta(theta, model.phi, docs);
}

bool counts_consistent(const LdaModel& model, const corpus::TokenizedCorpus& corpus) {
    const std::size_t K = model.n_k.size();
    if (model.n_dk.size() != corpus.docs.size()) return false;
    std::vector<std::uint64_t> by_doc_sum(K, 0);
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
        std::uint64_t total = 0;
        for (std::size_t k = 0; k < K; ++k) {
            total += model.n_dk[d][k];
            by_doc_sum[k] += model.n_dk[d][k];
        }
        if (total != corpus.docs[d].size()) return false;
    }
    for (std::size_t k = 0; k < K; ++k) {
        std::uint64_t row = 0;
        for (auto c : model.n_kw[k]) row += c;
        if (row != model.n_k[k] || by_doc_sum[k] != row) return false;
    }
    return true;
}

}  // namespace fundtext::lda
