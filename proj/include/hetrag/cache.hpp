#pragma once

#include "hetrag/bm25.hpp"
#include "hetrag/config.hpp"
#include "hetrag/embedding_index.hpp"
#include "hetrag/prompts.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hetrag {

/// The two chunk corpora: one feeding BM25, one feeding the embedding index.
struct Corpora {
    std::vector<Chunk> bm25;
    std::vector<Chunk> embedding;
    std::size_t build_tokens = 0;  // summarizer tokens spent building both
};

inline constexpr int kCacheFormatVersion = 1;

/// Hash over the documents and every setting that changes the chunk text.
[[nodiscard]] std::string corpus_key(const std::vector<Document>& docs, const PipelineConfig& config,
                                     const PromptTemplates& templates);
[[nodiscard]] std::string chunks_hash(const std::vector<Chunk>& chunks);

[[nodiscard]] Corpora build_corpora(const std::vector<Document>& docs, const PipelineConfig& config,
                                    std::shared_ptr<const CompletionClient> client,
                                    const PromptTemplates& templates);

void save_corpora(const std::filesystem::path& dir, const std::string& key, const Corpora& corpora);
/// nullopt when missing, unreadable or built under a different key.
[[nodiscard]] std::optional<Corpora> load_corpora(const std::filesystem::path& dir, const std::string& key);

[[nodiscard]] Corpora load_or_build_corpora(const std::filesystem::path& dir, const std::vector<Document>& docs,
                                            const PipelineConfig& config,
                                            std::shared_ptr<const CompletionClient> client,
                                            const PromptTemplates& templates, bool* from_cache = nullptr);

// Line-based index files. The first line holds a magic word, the format
// version and the key; a mismatch on any of them reads as a stale file.
void save_bm25_index(const std::filesystem::path& file, const Bm25Index& index, const std::string& key);
[[nodiscard]] std::optional<Bm25Index> load_bm25_index(const std::filesystem::path& file, const std::string& key);

void save_embedding_index(const std::filesystem::path& file, const EmbeddingIndex& index, const std::string& key);
[[nodiscard]] std::optional<EmbeddingIndex> load_embedding_index(const std::filesystem::path& file,
                                                                 const std::string& key);

}  // namespace hetrag
