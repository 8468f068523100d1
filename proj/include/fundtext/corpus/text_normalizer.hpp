#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fundtext/corpus/chunker.hpp"

namespace fundtext::corpus {

/// The shipped English function-word list.
const StopwordSet& default_stopwords();
/// Plain text, one lowercase term per line; blank lines and '#' comments ignored.
StopwordSet load_stopwords(const std::filesystem::path& path);

/// Removes leading and trailing bytes that are not letters. Bytes >= 0x80
/// count as letters so UTF-8 words survive intact.
std::string_view strip_edges(std::string_view token);

/// Rule-based suffix stemmer with an exception table. Applied to a fixpoint,
/// so stem(stem(w)) == stem(w).
std::string stem_word(std::string_view word);

/// Lemmatizer plug-in point; the default is stem_word.
using Lemmatizer = std::function<std::string(std::string_view)>;

struct NormalizerOptions {
    const StopwordSet* stopwords = nullptr;  // null → default_stopwords()
    std::size_t min_word_len = 3;
    Lemmatizer lemmatizer;                   // empty → stem_word
};

/// lowercase → strip edges → drop stopwords → lemmatize → drop short tokens.
/// Stopwords are also checked on the lemmatized form, which keeps the
/// function idempotent on its own output.
std::vector<std::string> normalize_for_lda(std::string_view text, const NormalizerOptions& options = {});

}  // namespace fundtext::corpus
