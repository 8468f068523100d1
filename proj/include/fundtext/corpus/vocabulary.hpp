#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fundtext::corpus {

/// Joins the words of an n-gram term.
inline constexpr char kNgramSeparator = ' ';

class Vocabulary {
public:
    Vocabulary() = default;
    /// Terms must be sorted and distinct; doc_freq aligned with terms.
    Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_freq);

    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] const std::string& term(std::uint32_t id) const { return terms_.at(id); }
    [[nodiscard]] std::optional<std::uint32_t> find(std::string_view term) const;
    [[nodiscard]] std::uint32_t doc_freq(std::uint32_t id) const { return doc_freq_.at(id); }
    [[nodiscard]] const std::vector<std::string>& terms() const { return terms_; }
    [[nodiscard]] const std::vector<std::uint32_t>& doc_freqs() const { return doc_freq_; }

private:
    std::vector<std::string> terms_;
    std::vector<std::uint32_t> doc_freq_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

struct TokenizedCorpus {
    std::vector<std::string> chunk_ids;
    std::vector<std::vector<std::uint32_t>> docs;
    Vocabulary vocabulary;
    int ngram_order = 1;  // 1 or 3
    std::size_t total_tokens = 0;

    [[nodiscard]] std::vector<std::string> decode(std::size_t doc) const;
};

/// Expands a token list into terms. For order 3 each position emits its
/// unigram, bigram and trigram (when they fit), in that order.
std::vector<std::string> expand_ngrams(const std::vector<std::string>& tokens, int ngram_order);

/// Counts document frequencies, keeps terms with doc_freq >= min_doc_freq,
/// assigns ids in lexicographic term order and re-encodes every chunk.
/// `chunk_ids` may be empty, in which case ids "0", "1", ... are generated.
TokenizedCorpus build_vocabulary(const std::vector<std::vector<std::string>>& token_lists,
                                 std::uint32_t min_doc_freq = 5, int ngram_order = 1,
                                 std::vector<std::string> chunk_ids = {});

/// Encodes token lists against an existing vocabulary. Unknown terms throw
/// ValidationError naming the term.
TokenizedCorpus encode_with(const Vocabulary& vocabulary, const std::vector<std::vector<std::string>>& token_lists,
                            int ngram_order = 1, std::vector<std::string> chunk_ids = {});

/// {"chunk_id":..,"tokens":[..]} per line.
struct TokenListFile {
    std::vector<std::string> chunk_ids;
    std::vector<std::vector<std::string>> tokens;
};
TokenListFile load_token_lists(const std::filesystem::path& path);

}  // namespace fundtext::corpus
