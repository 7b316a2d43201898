#pragma once

#include "hetrag/cache.hpp"
#include "hetrag/config.hpp"
#include "hetrag/qa.hpp"
#include "hetrag/ranking.hpp"
#include "hetrag/recap.hpp"
#include "hetrag/rerank.hpp"

#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <string>
#include <vector>

namespace hetrag {

enum class FailureReason { none, retrieval_empty, rerank_parse, reasoning_parse, client_error };

[[nodiscard]] std::string_view to_string(FailureReason r);

/// Everything observed while answering one question.
struct QuestionRecord {
    QAPair qa;
    RankedDocs merged;
    RankedDocs ranking;  // the final (reranked or fallback) order
    std::string chosen_doc;
    std::size_t theta = 0;
    bool rerank_fallback = false;
    RerankIssue rerank_issue = RerankIssue::none;
    std::string rerank_output;
    std::vector<std::string> recap_outputs;
    std::optional<RecapTrace> trace;
    std::string answer;
    bool exact_match = false;
    std::size_t rerank_tokens = 0;
    std::size_t reasoning_tokens = 0;
    FailureReason failure = FailureReason::none;
    std::string failure_detail;
    double seconds = 0.0;

    [[nodiscard]] std::size_t generation_tokens() const { return rerank_tokens + reasoning_tokens; }
    [[nodiscard]] bool gold_contained() const { return merged.rank_of(qa.gold_doc_id) > 0; }
};

/// Both corpora, both indices and the model clients.
class Engine {
public:
    Engine(PipelineConfig config, std::set<std::string> doc_ids, Corpora corpora,
           std::shared_ptr<const CompletionClient> completion, std::shared_ptr<const Embedder> embedder,
           PromptTemplates templates, std::optional<Bm25Index> bm25 = std::nullopt,
           std::optional<EmbeddingIndex> embedding = std::nullopt);

    [[nodiscard]] const PipelineConfig& config() const { return config_; }
    [[nodiscard]] const Corpora& corpora() const { return corpora_; }
    [[nodiscard]] const Bm25Index& bm25_index() const { return bm25_; }
    [[nodiscard]] const EmbeddingIndex& embedding_index() const { return embedding_; }
    [[nodiscard]] const Embedder& embedder() const { return *embedder_; }
    [[nodiscard]] const std::set<std::string>& doc_ids() const { return doc_ids_; }

    /// Stage one. n or m equal to 0 disables that retriever.
    [[nodiscard]] RankedDocs ensemble(std::string_view question, std::size_t n, std::size_t m) const;
    [[nodiscard]] RankedDocs ensemble(std::string_view question) const {
        return ensemble(question, config_.n, config_.m);
    }

    /// Full pipeline for one question. Never throws for per-question failures.
    [[nodiscard]] QuestionRecord answer(const QAPair& qa) const;

    /// Throws ValidationError if a gold document was never ingested.
    void check_questions(const std::vector<QAPair>& qa) const;

private:
    PipelineConfig config_;
    std::set<std::string> doc_ids_;
    Corpora corpora_;
    std::shared_ptr<const CompletionClient> completion_;
    std::shared_ptr<const Embedder> embedder_;
    PromptTemplates templates_;
    Bm25Index bm25_;
    EmbeddingIndex embedding_;
    std::unordered_map<std::string, std::vector<std::size_t>> embedding_chunks_by_doc_;
};

[[nodiscard]] std::shared_ptr<const CompletionClient> make_completion_client(const PipelineConfig& config);
[[nodiscard]] std::shared_ptr<const Embedder> make_embedder(const PipelineConfig& config, const Corpora& corpora);

[[nodiscard]] PromptTemplates load_templates(const PipelineConfig& config);

struct EngineBuildInfo {
    bool corpora_from_cache = false;
    bool bm25_from_cache = false;
    bool embedding_from_cache = false;
};

/// Loads documents, then corpora and indices through the cache in config.cache_dir.
[[nodiscard]] Engine open_engine(const PipelineConfig& config, EngineBuildInfo* info = nullptr);

struct Aggregates {
    std::size_t questions = 0;
    std::vector<std::pair<std::size_t, double>> hit_at_k;
    double exact_match = 0.0;
    double gold_containment = 0.0;
    std::size_t corpus_build_tokens = 0;
    double mean_preprocessing_tokens = 0.0;
    double mean_generation_tokens = 0.0;
    double mean_seconds = 0.0;
    double p95_seconds = 0.0;
    std::vector<std::pair<std::string, std::size_t>> failures;

    friend bool operator==(const Aggregates&, const Aggregates&) = default;
};

[[nodiscard]] Aggregates compute_aggregates(const std::vector<QuestionRecord>& records,
                                            const std::vector<std::size_t>& k_list,
                                            std::size_t corpus_build_tokens);

struct ExperimentReport {
    PipelineConfig config;
    std::vector<QuestionRecord> records;  // sorted by question_id
    Aggregates aggregates;
};

/// Bounded worker pool (config.workers); records come back sorted by question_id.
[[nodiscard]] ExperimentReport run_pipeline(const Engine& engine, const std::vector<QAPair>& qa);

[[nodiscard]] std::vector<QAPair> select_split(const std::vector<QAPair>& qa, const std::optional<std::string>& split);

struct GridRow {
    std::size_t n = 0;
    std::size_t m = 0;
    double mean_k = 0.0;
    double containment = 0.0;

    friend bool operator==(const GridRow&, const GridRow&) = default;
};

/// Ensemble stage only, per (n, m) combo. Throws ValidationError on an empty combo list.
[[nodiscard]] std::vector<GridRow> grid_search(const Engine& engine, const std::vector<QAPair>& qa,
                                               const std::vector<std::pair<std::size_t, std::size_t>>& combos);

}  // namespace hetrag
