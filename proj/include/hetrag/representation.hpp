#pragma once

#include "hetrag/clients.hpp"
#include "hetrag/document.hpp"
#include "hetrag/prompts.hpp"

#include <atomic>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hetrag {

enum class SummarizerMode { template_text, model };

struct SummarizerSpec {
    SummarizerMode mode = SummarizerMode::template_text;
    std::string prompt_name = "summarize_refine";
};

/// Non-leaf H-RCL summaries list at most this many covered cells before eliding.
inline constexpr std::size_t kMaxSummaryCells = 20;

/// The summary operator. Template mode emits the aggregated path/cell text as is;
/// model mode sends it to the completion client for refinement (counted as
/// preprocessing tokens).
class Summarizer {
public:
    Summarizer() = default;
    Summarizer(SummarizerSpec spec, std::shared_ptr<const CompletionClient> client,
               PromptTemplates templates = {},
               const TokenCounter& counter = default_token_counter());

    [[nodiscard]] std::string summarize(ChunkKind kind, const HierarchicalTable& table,
                                        std::string aggregated) const;

    [[nodiscard]] const SummarizerSpec& spec() const { return spec_; }
    [[nodiscard]] std::size_t tokens_used() const { return tokens_.load(); }

private:
    SummarizerSpec spec_;
    std::shared_ptr<const CompletionClient> client_;
    PromptTemplates templates_;
    const TokenCounter* counter_ = &default_token_counter();
    mutable std::atomic<std::size_t> tokens_{0};
};

// The summary functions return chunks without identity: chunk_id, doc_id and
// order are assigned by build_corpus.

/// One table_summary chunk: "Table: <title> | columns: ... | rows: ...".
[[nodiscard]] Chunk table_level_summary(const HierarchicalTable& table,
                                        const Summarizer& summarizer = {});

/// m row summaries then n column summaries over the flattened table, level 1.
[[nodiscard]] std::vector<Chunk> general_rcl_summary(const HierarchicalTable& table,
                                                     const Summarizer& summarizer = {});

/// One row summary per left-header node and one column summary per top-header
/// node at every level (level-major, DFS within a level). A non-leaf node covers
/// every cell under its subtree.
[[nodiscard]] std::vector<Chunk> hrcl_summary(const HierarchicalTable& table,
                                              const Summarizer& summarizer = {});

/// Coreference-resolution contract applied to each passage before splitting.
class CorefResolver {
public:
    virtual ~CorefResolver() = default;
    [[nodiscard]] virtual std::string resolve(std::string_view passage) const = 0;
};

class IdentityResolver final : public CorefResolver {
public:
    [[nodiscard]] std::string resolve(std::string_view passage) const override {
        return std::string(passage);
    }
};

[[nodiscard]] std::vector<std::string> split_sentences(std::string_view passage);

/// Whitespace tokens that still contain something after stripping punctuation.
[[nodiscard]] std::size_t word_count(std::string_view sentence);

inline constexpr std::size_t kMinSentenceWords = 5;

/// Sentence chunks (kind=sentence) of sentences with at least five words.
/// A throwing resolver degrades to identity with a warning.
[[nodiscard]] std::vector<Chunk> process_passages(const Document& doc,
                                                  const CorefResolver& resolver = IdentityResolver{});

/// Per document: sentence chunks, then each table's chunks in table order.
/// Throws ValidationError on duplicate doc_id.
[[nodiscard]] std::vector<Chunk> build_corpus(const std::vector<Document>& docs,
                                              TableStrategy strategy,
                                              const Summarizer& summarizer = {},
                                              const CorefResolver& resolver = IdentityResolver{});

}  // namespace hetrag
