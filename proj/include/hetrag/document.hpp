#pragma once

#include "hetrag/table.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hetrag {

/// Narrative passages plus hierarchical tables.
struct Document {
    std::string doc_id;
    std::vector<std::string> passages;
    std::vector<HierarchicalTable> tables;
};

/// Throws ValidationError on an empty id or a document with neither passages nor tables.
void validate(const Document& doc);

enum class ChunkKind { sentence, row_summary, col_summary, table_summary };

[[nodiscard]] std::string_view to_string(ChunkKind kind);
[[nodiscard]] ChunkKind chunk_kind_from_string(std::string_view s);

/// Atomic retrieval unit. `order` is the position inside its document and is
/// shared across kinds; chunk_id is unique within a corpus.
struct Chunk {
    std::string chunk_id;
    std::string doc_id;
    std::string text;
    ChunkKind kind = ChunkKind::sentence;
    std::optional<std::string> table_id;
    std::optional<int> level;
    int order = 0;

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

/// `<doc_id>#<order, zero-padded to 5>` so lexical order follows document order.
[[nodiscard]] std::string make_chunk_id(std::string_view doc_id, int order);

enum class TableStrategy { table_level, general_rcl, hrcl };

[[nodiscard]] std::string_view to_string(TableStrategy s);
[[nodiscard]] TableStrategy table_strategy_from_string(std::string_view s);

}  // namespace hetrag
