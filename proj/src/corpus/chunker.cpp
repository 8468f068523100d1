#include "fundtext/corpus/chunker.hpp"

#include <fstream>

#include <json.hpp>

#include "fundtext/corpus/text_normalizer.hpp"

namespace fundtext::corpus {

std::vector<WordWindow> chunk_paragraph(std::size_t n_words, const ChunkingRules& rules) {
    if (rules.max_len <= rules.overlap) throw ValidationError("chunking: max_len must exceed overlap");
    if (rules.min_len > rules.max_len) throw ValidationError("chunking: min_len must not exceed max_len");

    std::vector<WordWindow> windows;
    if (n_words < rules.min_len || n_words == 0) return windows;
    if (n_words <= rules.max_len) {
        windows.push_back({0, n_words});
        return windows;
    }
    const std::size_t stride = rules.max_len - rules.overlap;
    for (std::size_t start = 0;; start += stride) {
        if (start + rules.max_len >= n_words) {
            windows.push_back({start, n_words});
            break;
        }
        windows.push_back({start, start + rules.max_len});
    }
    return windows;
}

bool filter_language(std::string_view block, const StopwordSet& stopwords, double threshold) {
    auto tokens = split_whitespace(block);
    if (tokens.empty()) return false;
    std::size_t hits = 0;
    for (const auto& tok : tokens) {
        std::string lowered = to_lower_ascii(strip_edges(tok));
        if (stopwords.contains(lowered)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(tokens.size()) >= threshold;
}

std::vector<Chunk> chunk_documents(const std::vector<RawDocument>& docs, const LanguageFilter& filter,
                                   const ChunkingRules& rules) {
    const StopwordSet& stopwords = filter.stopwords ? *filter.stopwords : default_stopwords();
    std::vector<Chunk> chunks;
    for (const auto& doc : docs) {
        for (std::size_t b = 0; b < doc.blocks.size(); ++b) {
            if (!filter_language(doc.blocks[b], stopwords, filter.threshold)) continue;
            auto words = split_whitespace(doc.blocks[b]);
            auto windows = chunk_paragraph(words.size(), rules);
            for (std::size_t w = 0; w < windows.size(); ++w) {
                Chunk c;
                c.chunk_id = doc.doc_id + ":" + std::to_string(b) + ":" + std::to_string(w);
                c.doc_id = doc.doc_id;
                c.fund_id = doc.fund_id;
                c.date = doc.date;
                c.words.assign(words.begin() + static_cast<std::ptrdiff_t>(windows[w].begin),
                               words.begin() + static_cast<std::ptrdiff_t>(windows[w].end));
                c.word_count = c.words.size();
                for (std::size_t i = 0; i < c.words.size(); ++i) {
                    if (i) c.raw_text.push_back(' ');
                    c.raw_text += c.words[i];
                }
                chunks.push_back(std::move(c));
            }
        }
    }
    return chunks;
}

std::string to_json_line(const Chunk& chunk) {
    nlohmann::ordered_json obj;
    obj["chunk_id"] = chunk.chunk_id;
    obj["doc_id"] = chunk.doc_id;
    obj["fund_id"] = chunk.fund_id ? nlohmann::ordered_json(*chunk.fund_id) : nlohmann::ordered_json(nullptr);
    obj["date"] = chunk.date.str();
    obj["word_count"] = chunk.word_count;
    obj["text"] = chunk.raw_text;
    return obj.dump();
}

std::vector<Chunk> load_chunks(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open chunk file " + path.string());
    std::vector<Chunk> chunks;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto obj = nlohmann::json::parse(line);
            Chunk c;
            c.chunk_id = obj.at("chunk_id").get<std::string>();
            c.doc_id = obj.at("doc_id").get<std::string>();
            if (auto it = obj.find("fund_id"); it != obj.end() && !it->is_null()) c.fund_id = it->get<std::string>();
            c.date = YearMonth::parse(obj.at("date").get<std::string>());
            c.raw_text = obj.at("text").get<std::string>();
            c.words = split_whitespace(c.raw_text);
            c.word_count = obj.at("word_count").get<std::size_t>();
            if (c.word_count != c.words.size())
                throw ValidationError("word_count " + std::to_string(c.word_count) + " does not match text");
            chunks.push_back(std::move(c));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return chunks;
}

}  // namespace fundtext::corpus
