#include "hetrag/rerank.hpp"

#include "hetrag/errors.hpp"
#include "hetrag/text.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace hetrag {

ChunkSelection select_top(std::string_view query, const std::vector<CandidateDoc>& candidates,
                          TokenBudget budget, const ChunkScorer& scorer, const TokenCounter& counter) {
    struct Pooled {
        const Chunk* chunk;
        double similarity;
    };
    std::vector<Pooled> pool;
    for (const auto& doc : candidates) {
        for (const auto& c : doc.chunks) pool.push_back(Pooled{&c, scorer(query, c)});
    }
    std::sort(pool.begin(), pool.end(), [](const Pooled& a, const Pooled& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.chunk->chunk_id < b.chunk->chunk_id;
    });
    ChunkSelection sel;
    for (const auto& p : pool) {
        const std::size_t t = counter.count(p.chunk->text);
        if (sel.total_tokens + t > budget.max_tokens) break;
        sel.total_tokens += t;
        sel.selected.push_back(p.chunk->chunk_id);
    }
    sel.theta = sel.selected.size();
    if (sel.theta == 0 && !pool.empty()) {
        throw EmptySelectionError("token budget " + std::to_string(budget.max_tokens) +
                                  " cannot hold the most similar chunk");
    }
    return sel;
}

FilteredDocument recombine(const ChunkSelection& selection, const CandidateDoc& doc) {
    const std::unordered_set<std::string> keep(selection.selected.begin(), selection.selected.end());
    FilteredDocument out{doc.doc_id, {}};
    for (const auto& c : doc.chunks) {
        if (keep.contains(c.chunk_id)) out.chunks.push_back(c);
    }
    std::stable_sort(out.chunks.begin(), out.chunks.end(),
                     [](const Chunk& a, const Chunk& b) { return a.order < b.order; });
    return out;
}

std::string_view to_string(RerankIssue issue) {
    switch (issue) {
        case RerankIssue::none: return "none";
        case RerankIssue::rerank_parse: return "rerank_parse";
        case RerankIssue::client_error: return "client_error";
    }
    return "none";
}

std::string build_rerank_prompt(std::string_view query, const std::vector<FilteredDocument>& filtered,
                                const PromptTemplates& templates) {
    std::string documents;
    std::size_t number = 0;
    for (const auto& d : filtered) {
        if (d.chunks.empty()) continue;
        documents += "[Document " + std::to_string(++number) + "] id: " + d.doc_id + "\n";
        for (const auto& c : d.chunks) documents += c.text + "\n";
        documents += "\n";
    }
    return templates.render("rerank", {{"question", std::string(query)},
                                       {"documents", documents},
                                       {"example_ids", "<id>, <id>, <id>"}});
}

std::vector<std::string> parse_rerank_ids(std::string_view model_text,
                                          const std::vector<std::string>& candidates) {
    const std::unordered_set<std::string_view> known(candidates.begin(), candidates.end());
    auto is_sep = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0 || c == ',' || c == ';'; };
    auto is_wrap = [](char c) {
        return std::string_view("[](){}<>\"'`.:*").find(c) != std::string_view::npos;
    };
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    std::size_t i = 0;
    while (i < model_text.size()) {
        while (i < model_text.size() && is_sep(model_text[i])) ++i;
        std::size_t j = i;
        while (j < model_text.size() && !is_sep(model_text[j])) ++j;
        std::string_view tok = model_text.substr(i, j - i);
        while (!tok.empty() && is_wrap(tok.front())) tok.remove_prefix(1);
        while (!tok.empty() && is_wrap(tok.back())) tok.remove_suffix(1);
        if (!tok.empty() && known.contains(tok) && seen.emplace(tok).second) out.emplace_back(tok);
        i = j;
    }
    return out;
}

RerankOutcome fallback_outcome(const RankedDocs& ensemble_order, RerankIssue issue) {
    RerankOutcome out;
    out.ranking = ensemble_order;
    out.ranking.source = RankSource::reranked;
    out.fallback_used = true;
    out.issue = issue;
    if (!out.ranking.empty()) out.chosen = out.ranking.docs.front().doc_id;
    return out;
}

RerankOutcome llm_rerank(std::string_view query, const std::vector<FilteredDocument>& filtered,
                         const CompletionClient& client, const RankedDocs& ensemble_order,
                         const PromptTemplates& templates, const TokenCounter& counter, int max_retries) {
    const std::string prompt = build_rerank_prompt(query, filtered, templates);
    const std::size_t prompt_tokens = counter.count(prompt);
    std::string reply;
    try {
        reply = complete_with_retry(client, CompletionRequest{prompt, 256, true}, max_retries);
    } catch (const ClientError& e) {
        spdlog::warn("rerank call failed ({}); keeping ensemble order", e.what());
        auto out = fallback_outcome(ensemble_order, RerankIssue::client_error);
        out.prompt_tokens = prompt_tokens;
        return out;
    }

    const auto candidates = ensemble_order.ids();
    auto ranked = parse_rerank_ids(reply, candidates);
    RerankOutcome out;
    if (ranked.empty()) {
        out = fallback_outcome(ensemble_order, RerankIssue::rerank_parse);
    } else {
        std::unordered_set<std::string> placed(ranked.begin(), ranked.end());
        for (const auto& id : candidates) {
            if (!placed.contains(id)) ranked.push_back(id);
        }
        out.ranking.source = RankSource::reranked;
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            out.ranking.docs.push_back(ScoredDoc{ranked[i], 1.0 / static_cast<double>(i + 1)});
        }
        out.chosen = ranked.front();
    }
    out.raw_model_text = reply;
    out.prompt_tokens = prompt_tokens;
    out.output_tokens = counter.count(reply);
    return out;
}

}  // namespace hetrag
