#include "fundtext/corpus/documents.hpp"

#include <array>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

namespace fundtext::corpus {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<DocType, std::string_view>, 6> kDocTypeNames{{
    {DocType::factsheet, "factsheet"},
    {DocType::presentation, "presentation"},
    {DocType::quarterly_report, "quarterly_report"},
    {DocType::monthly_report, "monthly_report"},
    {DocType::investor_letter, "investor_letter"},
    {DocType::other, "other"},
}};

std::string where(std::size_t line_no) { return "line " + std::to_string(line_no); }

const json& require(const json& obj, const char* key, std::size_t line_no) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null())
        throw ValidationError(where(line_no) + ": missing field '" + key + "'");
    return *it;
}

std::string require_string(const json& obj, const char* key, std::size_t line_no) {
    const json& v = require(obj, key, line_no);
    if (!v.is_string()) throw ValidationError(where(line_no) + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

bool is_blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n\f\v") == std::string::npos;
}

}  // namespace

std::string_view to_string(DocType type) {
    for (const auto& [t, name] : kDocTypeNames)
        if (t == type) return name;
    return "other";
}

std::optional<DocType> parse_doc_type(std::string_view name) {
    for (const auto& [t, n] : kDocTypeNames)
        if (n == name) return t;
    return std::nullopt;
}

RawDocument parse_document_line(std::string_view line, std::size_t line_no, const IngestOptions& options,
                                Diagnostics* diag) {
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ValidationError(where(line_no) + ": malformed JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) throw ValidationError(where(line_no) + ": expected a JSON object");

    RawDocument doc;
    doc.doc_id = require_string(obj, "doc_id", line_no);
    if (doc.doc_id.empty()) throw ValidationError(where(line_no) + ": empty doc_id");
    doc.manager_id = require_string(obj, "manager_id", line_no);

    if (auto it = obj.find("fund_id"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) throw ValidationError(where(line_no) + ": field 'fund_id' must be a string or null");
        doc.fund_id = it->get<std::string>();
    }

    std::string type_name = require_string(obj, "doc_type", line_no);
    if (auto t = parse_doc_type(type_name)) {
        doc.doc_type = *t;
    } else {
        doc.doc_type = DocType::other;
        if (diag) diag->warn(where(line_no) + ": unknown doc_type '" + type_name + "' mapped to other");
    }

    doc.date = YearMonth::parse(require_string(obj, "date", line_no));
    if (doc.date < options.min_date || doc.date > options.max_date)
        throw ValidationError(where(line_no) + ": date " + doc.date.str() + " outside valid range " +
                              options.min_date.str() + ".." + options.max_date.str());

    const json& blocks = require(obj, "blocks", line_no);
    if (!blocks.is_array()) throw ValidationError(where(line_no) + ": field 'blocks' must be an array");
    for (const auto& b : blocks) {
        if (!b.is_string()) throw ValidationError(where(line_no) + ": every block must be a string");
        auto text = b.get<std::string>();
        if (!is_blank(text)) doc.blocks.push_back(std::move(text));
    }
    return doc;
}

std::vector<RawDocument> ingest_documents(const std::filesystem::path& path, const IngestOptions& options,
                                          Diagnostics* diag) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open document file " + path.string());

    std::vector<RawDocument> docs;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        RawDocument doc = parse_document_line(line, line_no, options, diag);
        if (!seen.insert(doc.doc_id).second)
            throw ValidationError("duplicate doc_id " + doc.doc_id + " at line " + std::to_string(line_no));
        if (doc.blocks.empty()) {
            if (diag) diag->warn(where(line_no) + ": document " + doc.doc_id + " has no text blocks, skipped");
            continue;
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::string to_json_line(const RawDocument& doc) {
    nlohmann::ordered_json obj;
    obj["doc_id"] = doc.doc_id;
    obj["manager_id"] = doc.manager_id;
    obj["fund_id"] = doc.fund_id ? nlohmann::ordered_json(*doc.fund_id) : nlohmann::ordered_json(nullptr);
    obj["doc_type"] = std::string(to_string(doc.doc_type));
    obj["date"] = doc.date.str();
    obj["blocks"] = doc.blocks;
    return obj.dump();
}

}  // namespace fundtext::corpus
