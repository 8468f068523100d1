#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fundtext/common.hpp"

namespace fundtext::corpus {

enum class DocType { factsheet, presentation, quarterly_report, monthly_report, investor_letter, other };

std::string_view to_string(DocType type);
/// Unknown names map to DocType::other.
std::optional<DocType> parse_doc_type(std::string_view name);

struct RawDocument {
    std::string doc_id;
    std::string manager_id;
    std::optional<std::string> fund_id;
    DocType doc_type = DocType::other;
    YearMonth date;
    std::vector<std::string> blocks;
};

struct IngestOptions {
    YearMonth min_date{1990, 1};
    YearMonth max_date{2100, 12};
};

/// Parses one document from a single JSONL line. `line_no` is used in messages.
RawDocument parse_document_line(std::string_view line, std::size_t line_no,
                                const IngestOptions& options, Diagnostics* diag = nullptr);

/// Reads a JSONL document file. Blank lines are skipped; whitespace-only
/// blocks are dropped, and a document left without blocks is skipped with a warning.
std::vector<RawDocument> ingest_documents(const std::filesystem::path& path,
                                          const IngestOptions& options = {},
                                          Diagnostics* diag = nullptr);

/// Serializes a document in the wire format (keys in fixed order).
std::string to_json_line(const RawDocument& doc);

}  // namespace fundtext::corpus
