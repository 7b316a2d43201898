#include "hetrag/document.hpp"

#include "hetrag/errors.hpp"

#include <cstdio>

namespace hetrag {

void validate(const Document& doc) {
    if (doc.doc_id.empty()) throw ValidationError("document with empty doc_id");
    if (doc.passages.empty() && doc.tables.empty()) {
        throw ValidationError("document " + doc.doc_id + " has neither passages nor tables");
    }
}

std::string_view to_string(ChunkKind kind) {
    switch (kind) {
        case ChunkKind::sentence: return "sentence";
        case ChunkKind::row_summary: return "row_summary";
        case ChunkKind::col_summary: return "col_summary";
        case ChunkKind::table_summary: return "table_summary";
    }
    return "sentence";
}

ChunkKind chunk_kind_from_string(std::string_view s) {
    if (s == "sentence") return ChunkKind::sentence;
    if (s == "row_summary") return ChunkKind::row_summary;
    if (s == "col_summary") return ChunkKind::col_summary;
    if (s == "table_summary") return ChunkKind::table_summary;
    throw ValidationError("unknown chunk kind '" + std::string(s) + "'");
}

std::string make_chunk_id(std::string_view doc_id, int order) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%05d", order);
    return std::string(doc_id) + buf;
}

std::string_view to_string(TableStrategy s) {
    switch (s) {
        case TableStrategy::table_level: return "table_level";
        case TableStrategy::general_rcl: return "general_rcl";
        case TableStrategy::hrcl: return "hrcl";
    }
    return "hrcl";
}

TableStrategy table_strategy_from_string(std::string_view s) {
    if (s == "table_level") return TableStrategy::table_level;
    if (s == "general_rcl") return TableStrategy::general_rcl;
    if (s == "hrcl") return TableStrategy::hrcl;
    throw ConfigError("unknown table strategy '" + std::string(s) + "'");
}

}  // namespace hetrag
