#include "fundtext/corpus/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_set>

#include <json.hpp>

#include "fundtext/common.hpp"

namespace fundtext::corpus {

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_freq)
    : terms_(std::move(terms)), doc_freq_(std::move(doc_freq)) {
    if (terms_.size() != doc_freq_.size()) throw ValidationError("vocabulary: terms and doc_freq differ in length");
    index_.reserve(terms_.size());
    for (std::uint32_t id = 0; id < terms_.size(); ++id) {
        if (id > 0 && !(terms_[id - 1] < terms_[id]))
            throw ValidationError("vocabulary: terms must be sorted and distinct");
        index_.emplace(terms_[id], id);
    }
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> TokenizedCorpus::decode(std::size_t doc) const {
    std::vector<std::string> out;
    out.reserve(docs.at(doc).size());
    for (auto id : docs[doc]) out.push_back(vocabulary.term(id));
    return out;
}

std::vector<std::string> expand_ngrams(const std::vector<std::string>& tokens, int ngram_order) {
    if (ngram_order != 1 && ngram_order != 3) throw ValidationError("ngram_order must be 1 or 3");
    if (ngram_order == 1) return tokens;
    std::vector<std::string> out;
    out.reserve(tokens.size() * 3);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        out.push_back(tokens[i]);
        std::string gram = tokens[i];
        for (std::size_t n = 1; n < 3 && i + n < tokens.size(); ++n) {
            gram += kNgramSeparator;
            gram += tokens[i + n];
            out.push_back(gram);
        }
    }
    return out;
}

namespace {

std::vector<std::string> default_ids(std::size_t n, std::vector<std::string> ids) {
    if (ids.empty()) {
        ids.reserve(n);
        for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
    }
    if (ids.size() != n) throw ValidationError("chunk id count does not match token list count");
    return ids;
}

}  // namespace

TokenizedCorpus build_vocabulary(const std::vector<std::vector<std::string>>& token_lists,
                                 std::uint32_t min_doc_freq, int ngram_order, std::vector<std::string> chunk_ids) {
    bool any = std::any_of(token_lists.begin(), token_lists.end(), [](const auto& t) { return !t.empty(); });
    if (!any) throw ValidationError("empty corpus");

    std::vector<std::vector<std::string>> expanded;
    expanded.reserve(token_lists.size());
    for (const auto& tokens : token_lists) expanded.push_back(expand_ngrams(tokens, ngram_order));

    std::map<std::string, std::uint32_t> df;
    for (const auto& terms : expanded) {
        std::unordered_set<std::string_view> seen;
        for (const auto& t : terms)
            if (seen.insert(t).second) ++df[t];
    }

    std::vector<std::string> terms;
    std::vector<std::uint32_t> freqs;
    for (auto& [term, count] : df) {
        if (count >= min_doc_freq) {
            terms.push_back(term);
            freqs.push_back(count);
        }
    }

    TokenizedCorpus corpus;
    corpus.chunk_ids = default_ids(token_lists.size(), std::move(chunk_ids));
    corpus.vocabulary = Vocabulary(std::move(terms), std::move(freqs));
    corpus.ngram_order = ngram_order;
    corpus.docs.reserve(expanded.size());
    for (const auto& doc_terms : expanded) {
        std::vector<std::uint32_t> ids;
        ids.reserve(doc_terms.size());
        for (const auto& t : doc_terms)
            if (auto id = corpus.vocabulary.find(t)) ids.push_back(*id);
        corpus.total_tokens += ids.size();
        corpus.docs.push_back(std::move(ids));
    }
    return corpus;
}

TokenizedCorpus encode_with(const Vocabulary& vocabulary, const std::vector<std::vector<std::string>>& token_lists,
                            int ngram_order, std::vector<std::string> chunk_ids) {
    TokenizedCorpus corpus;
    corpus.chunk_ids = default_ids(token_lists.size(), std::move(chunk_ids));
    corpus.vocabulary = vocabulary;
    corpus.ngram_order = ngram_order;
    for (const auto& tokens : token_lists) {
        std::vector<std::uint32_t> ids;
        for (const auto& t : expand_ngrams(tokens, ngram_order)) {
            auto id = vocabulary.find(t);
            if (!id) throw ValidationError("term not in vocabulary: " + t);
            ids.push_back(*id);
        }
        corpus.total_tokens += ids.size();
        corpus.docs.push_back(std::move(ids));
    }
    return corpus;
}

TokenListFile load_token_lists(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open token file " + path.string());
    TokenListFile out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto obj = nlohmann::json::parse(line);
            out.chunk_ids.push_back(obj.at("chunk_id").get<std::string>());
            out.tokens.push_back(obj.at("tokens").get<std::vector<std::string>>());
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace fundtext::corpus
