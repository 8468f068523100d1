#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "fundtext/common.hpp"
#include "fundtext/corpus/documents.hpp"

namespace fundtext::corpus {

struct ChunkingRules {
    std::size_t max_len = 400;
    std::size_t overlap = 50;
    std::size_t min_len = 50;
};

/// Half-open word range [begin, end) inside a paragraph.
struct WordWindow {
    std::size_t begin = 0;
    std::size_t end = 0;

    [[nodiscard]] std::size_t size() const { return end - begin; }
    bool operator==(const WordWindow&) const = default;
};

/// Splits a paragraph of `n_words` into overlapping windows. Paragraphs
/// shorter than min_len yield nothing; longer than max_len are cut with
/// stride max_len - overlap and a final window ending at the last word.
std::vector<WordWindow> chunk_paragraph(std::size_t n_words, const ChunkingRules& rules = {});

struct Chunk {
    std::string chunk_id;  // "<doc_id>:<block>:<window>"
    std::string doc_id;
    std::optional<std::string> fund_id;
    YearMonth date;
    std::size_t word_count = 0;
    std::vector<std::string> words;
    std::string raw_text;
};

using StopwordSet = std::unordered_set<std::string>;

struct LanguageFilter {
    const StopwordSet* stopwords = nullptr;
    double threshold = 0.15;
};

/// Keep iff the share of whitespace tokens (lowercased, edge punctuation
/// stripped) found in the stopword list reaches the threshold.
bool filter_language(std::string_view block, const StopwordSet& stopwords, double threshold = 0.15);

/// Language-filters each block of each document, then chunks the survivors.
std::vector<Chunk> chunk_documents(const std::vector<RawDocument>& docs, const LanguageFilter& filter,
                                   const ChunkingRules& rules = {});

std::string to_json_line(const Chunk& chunk);
/// Reads the chunk JSONL format; `words` is re-derived from `text`.
std::vector<Chunk> load_chunks(const std::filesystem::path& path);

}  // namespace fundtext::corpus
