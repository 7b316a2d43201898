#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hetrag {

enum class RankSource { bm25, embedding, merged, reranked };

[[nodiscard]] std::string_view to_string(RankSource s);

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;

    friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

/// Documents by non-increasing score, ids unique.
struct RankedDocs {
    std::vector<ScoredDoc> docs;
    RankSource source = RankSource::merged;

    [[nodiscard]] std::size_t size() const { return docs.size(); }
    [[nodiscard]] bool empty() const { return docs.empty(); }
    [[nodiscard]] std::vector<std::string> ids() const;
    /// 1-based rank, 0 when absent.
    [[nodiscard]] std::size_t rank_of(std::string_view doc_id) const;
};

/// Relative gap below which two document scores count as tied.
inline constexpr double kScoreTieTolerance = 1e-12;

/// Aggregates chunk scores to documents (max over chunks), drops documents whose
/// best score is not positive, and keeps the top `limit` by score desc, doc_id asc.
/// Scores within kScoreTieTolerance of a group's highest score are ordered by doc_id.
[[nodiscard]] RankedDocs rank_documents(std::span<const double> chunk_scores,
                                        std::span<const std::string> chunk_doc_ids,
                                        std::size_t limit, RankSource source);

/// Deduplicated union ordered by best 1-based rank across the two lists; on a
/// tie the document holding its best rank in the embedding list goes first, then
/// doc_id. Merged score = 1 / best_rank.
[[nodiscard]] RankedDocs ensemble_merge(const RankedDocs& bm25, const RankedDocs& emb);

}  // namespace hetrag
