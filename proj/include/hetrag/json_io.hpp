#pragma once

#include "hetrag/clients.hpp"
#include "hetrag/document.hpp"
#include "hetrag/qa.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace hetrag::io {

using nlohmann::json;

/// `{"table_id", "title"?, "top": [node], "left": [node], "data": [[str]]}`,
/// node = `{"label", "children": [node]}`. Throws ValidationError.
[[nodiscard]] HierarchicalTable table_from_json(const json& j);
[[nodiscard]] json table_to_json(const HierarchicalTable& table);

/// `{"doc_id", "passages": [str], "tables": [table]}`.
[[nodiscard]] Document document_from_json(const json& j);
[[nodiscard]] json document_to_json(const Document& doc);

/// Every `*.json` file in `dir`, in filename order. Duplicate ids are rejected.
[[nodiscard]] std::vector<Document> load_documents(const std::filesystem::path& dir);

/// One QAPair JSON object per line; blank lines are skipped.
[[nodiscard]] std::vector<QAPair> load_qa(const std::filesystem::path& file);
[[nodiscard]] QAPair qa_from_json(const json& j);

/// Chunk records carry exactly the Chunk fields; absent optionals are null.
[[nodiscard]] json chunk_to_json(const Chunk& chunk);
[[nodiscard]] Chunk chunk_from_json(const json& j);
void write_chunks_jsonl(const std::filesystem::path& file, const std::vector<Chunk>& chunks);
[[nodiscard]] std::vector<Chunk> read_chunks_jsonl(const std::filesystem::path& file);

/// Ordered `[{"match": str | [str], "response": str}]`.
[[nodiscard]] std::vector<MockRule> mock_script_from_json(const json& j);
[[nodiscard]] std::vector<MockRule> load_mock_script(const std::filesystem::path& file);

[[nodiscard]] json read_json_file(const std::filesystem::path& file);
void write_text_file(const std::filesystem::path& file, const std::string& content);
[[nodiscard]] std::string read_text_file(const std::filesystem::path& file);

}  // namespace hetrag::io
