#pragma once

#include "hetrag/clients.hpp"
#include "hetrag/document.hpp"
#include "hetrag/prompts.hpp"
#include "hetrag/ranking.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hetrag {

/// A top-k candidate with the chunks it contributes to the selection pool.
struct CandidateDoc {
    std::string doc_id;
    std::vector<Chunk> chunks;
};

/// S: the θ chunks most similar to the question across all candidates.
struct ChunkSelection {
    std::vector<std::string> selected;  // chunk ids, similarity order
    std::size_t theta = 0;
    std::size_t total_tokens = 0;
};

/// D'_i: the chunks of one candidate surviving the selection, in document order.
struct FilteredDocument {
    std::string doc_id;
    std::vector<Chunk> chunks;
};

using ChunkScorer = std::function<double(std::string_view query, const Chunk& chunk)>;

/// Pools every candidate chunk, sorts by similarity desc (chunk_id asc on ties)
/// and keeps the longest prefix whose token sum fits the budget. Throws
/// EmptySelectionError when not even the first chunk fits.
[[nodiscard]] ChunkSelection select_top(std::string_view query, const std::vector<CandidateDoc>& candidates,
                                        TokenBudget budget, const ChunkScorer& scorer,
                                        const TokenCounter& counter = default_token_counter());

[[nodiscard]] FilteredDocument recombine(const ChunkSelection& selection, const CandidateDoc& doc);

enum class RerankIssue { none, rerank_parse, client_error };

[[nodiscard]] std::string_view to_string(RerankIssue issue);

struct RerankOutcome {
    RankedDocs ranking;  // source = reranked
    std::string chosen;
    std::string raw_model_text;
    bool fallback_used = false;
    RerankIssue issue = RerankIssue::none;
    std::size_t prompt_tokens = 0;
    std::size_t output_tokens = 0;
};

[[nodiscard]] std::string build_rerank_prompt(std::string_view query,
                                              const std::vector<FilteredDocument>& filtered,
                                              const PromptTemplates& templates = {});

/// Ids from `model_text` that match `candidates` exactly, deduplicated, in order.
[[nodiscard]] std::vector<std::string> parse_rerank_ids(std::string_view model_text,
                                                        const std::vector<std::string>& candidates);

/// Ranking = parsed ids followed by the remaining candidates in ensemble order.
/// No usable id, or a client failure after retries, falls back to ensemble order.
[[nodiscard]] RerankOutcome llm_rerank(std::string_view query, const std::vector<FilteredDocument>& filtered,
                                       const CompletionClient& client, const RankedDocs& ensemble_order,
                                       const PromptTemplates& templates = {},
                                       const TokenCounter& counter = default_token_counter(),
                                       int max_retries = 2);

/// Ranking used when the model cannot be consulted.
[[nodiscard]] RerankOutcome fallback_outcome(const RankedDocs& ensemble_order, RerankIssue issue);

}  // namespace hetrag
