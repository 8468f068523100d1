#include "fundtext/corpus/text_normalizer.hpp"

#include <fstream>
#include <unordered_map>

namespace fundtext::corpus {
namespace {

bool is_letter(char c) {
    auto u = static_cast<unsigned char>(c);
    return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || u >= 0x80;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; }

bool has_vowel(std::string_view s) {
    for (char c : s)
        if (is_vowel(c)) return true;
    return false;
}

bool ends_with(std::string_view s, std::string_view suffix) { return s.ends_with(suffix); }

// Irregular forms and words the suffix rules would damage. Targets are
// never keys, so the fixpoint loop terminates.
const std::unordered_map<std::string_view, std::string_view>& exceptions() {
    static const std::unordered_map<std::string_view, std::string_view> table{
        {"children", "child"},   {"men", "man"},           {"women", "woman"},
        {"people", "person"},    {"feet", "foot"},         {"teeth", "tooth"},
        {"mice", "mouse"},       {"geese", "goose"},       {"indices", "index"},
        {"matrices", "matrix"},  {"analyses", "analysis"}, {"bases", "basis"},
        {"crises", "crisis"},    {"theses", "thesis"},     {"criteria", "criterion"},
        {"phenomena", "phenomenon"}, {"was", "be"},        {"were", "be"},
        {"better", "good"},      {"best", "good"},         {"worse", "bad"},
        {"worst", "bad"},        {"news", "news"},         {"series", "series"},
        {"species", "species"},  {"sales", "sale"},        {"losses", "loss"},
        {"gains", "gain"},       {"bonds", "bond"},        {"equities", "equity"},
        {"securities", "security"}, {"strategies", "strategy"},
    };
    return table;
}

bool is_fixed_point(std::string_view word) {
    for (const auto& [from, to] : exceptions())
        if (to == word) return true;
    return false;
}

std::string undouble(std::string stem) {
    std::size_t n = stem.size();
    if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && stem[n - 1] != 'l' &&
        stem[n - 1] != 's' && stem[n - 1] != 'z')
        stem.pop_back();
    return stem;
}

// One rewrite step; returns the input unchanged when no rule applies.
std::string stem_step(const std::string& w) {
    if (auto it = exceptions().find(w); it != exceptions().end()) return std::string(it->second);
    if (is_fixed_point(w)) return w;
    const std::size_t n = w.size();

    if (ends_with(w, "'s")) return w.substr(0, n - 2);
    if (ends_with(w, "'")) return w.substr(0, n - 1);

    if (ends_with(w, "sses")) return w.substr(0, n - 2);
    if (ends_with(w, "ies") && n > 4) return w.substr(0, n - 3) + "y";
    if (ends_with(w, "s") && n >= 4) {
        char prev = w[n - 2];
        if (prev != 's' && prev != 'u' && prev != 'i' && prev != 'a') return w.substr(0, n - 1);
    }

    if (ends_with(w, "ied") && n > 4) return w.substr(0, n - 3) + "y";
    if (ends_with(w, "ed") && !ends_with(w, "eed")) {
        std::string stem = w.substr(0, n - 2);
        if (stem.size() >= 3 && has_vowel(stem)) return undouble(std::move(stem));
    }
    if (ends_with(w, "ing")) {
        std::string stem = w.substr(0, n - 3);
        if (stem.size() >= 3 && has_vowel(stem)) return undouble(std::move(stem));
    }
    if (ends_with(w, "ly") && n - 2 >= 5) return w.substr(0, n - 2);
    return w;
}

}  // namespace

StopwordSet load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open stopword file " + path.string());
    StopwordSet set;
    std::string line;
    while (std::getline(in, line)) {
        auto words = split_whitespace(line);
        if (words.empty() || words[0].starts_with('#')) continue;
        set.insert(to_lower_ascii(words[0]));
    }
    return set;
}

std::string_view strip_edges(std::string_view token) {
    std::size_t b = 0, e = token.size();
    while (b < e && !is_letter(token[b])) ++b;
    while (e > b && !is_letter(token[e - 1])) --e;
    return token.substr(b, e - b);
}

std::string stem_word(std::string_view word) {
    std::string current(word);
    for (int guard = 0; guard < 64; ++guard) {
        std::string next = stem_step(current);
        if (next == current) break;
        current = std::move(next);
    }
    return current;
}

std::vector<std::string> normalize_for_lda(std::string_view text, const NormalizerOptions& options) {
    const StopwordSet& stopwords = options.stopwords ? *options.stopwords : default_stopwords();
    std::vector<std::string> out;
    for (const auto& raw : split_whitespace(text)) {
        std::string token = to_lower_ascii(strip_edges(raw));
        if (token.empty() || stopwords.contains(token)) continue;
        std::string lemma = token;
        for (int guard = 0; guard < 16; ++guard) {
            std::string next(strip_edges(options.lemmatizer ? options.lemmatizer(lemma) : stem_word(lemma)));
            if (next == lemma) break;
            lemma = std::move(next);
        }
        if (lemma.empty() || lemma.size() < options.min_word_len || stopwords.contains(lemma)) continue;
        out.push_back(std::move(lemma));
    }
    return out;
}

}  // namespace fundtext::corpus
