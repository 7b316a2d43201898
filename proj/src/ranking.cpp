#include "hetrag/ranking.hpp"

#include <algorithm>
#include <unordered_map>

namespace hetrag {

std::string_view to_string(RankSource s) {
    switch (s) {
        case RankSource::bm25: return "bm25";
        case RankSource::embedding: return "embedding";
        case RankSource::merged: return "merged";
        case RankSource::reranked: return "reranked";
    }
    return "merged";
}

std::vector<std::string> RankedDocs::ids() const {
    std::vector<std::string> out;
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back(d.doc_id);
    return out;
}

std::size_t RankedDocs::rank_of(std::string_view doc_id) const {
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (docs[i].doc_id == doc_id) return i + 1;
    }
    return 0;
}

RankedDocs rank_documents(std::span<const double> chunk_scores, std::span<const std::string> chunk_doc_ids,
                          std::size_t limit, RankSource source) {
    std::unordered_map<std::string_view, double> best;
    for (std::size_t i = 0; i < chunk_scores.size(); ++i) {
        const double s = chunk_scores[i];
        if (!(s > 0.0)) continue;
        auto [it, inserted] = best.try_emplace(chunk_doc_ids[i], s);
        if (!inserted && s > it->second) it->second = s;
    }
    RankedDocs out;
    out.source = source;
    out.docs.reserve(best.size());
    for (const auto& [doc, score] : best) out.docs.push_back(ScoredDoc{std::string(doc), score});
    std::sort(out.docs.begin(), out.docs.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    for (auto first = out.docs.begin(); first != out.docs.end();) {
        const double floor = first->score * (1.0 - kScoreTieTolerance);
        auto last = std::find_if(first, out.docs.end(), [floor](const ScoredDoc& d) { return d.score < floor; });
        std::sort(first, last, [](const ScoredDoc& a, const ScoredDoc& b) { return a.doc_id < b.doc_id; });
        first = last;
    }
    if (out.docs.size() > limit) out.docs.resize(limit);
    return out;
}

RankedDocs ensemble_merge(const RankedDocs& bm25, const RankedDocs& emb) {
    struct Entry {
        std::size_t best_rank;
        bool from_embedding;
    };
    std::unordered_map<std::string, Entry> entries;
    for (std::size_t i = 0; i < emb.docs.size(); ++i) {
        entries.try_emplace(emb.docs[i].doc_id, Entry{i + 1, true});
    }
    for (std::size_t i = 0; i < bm25.docs.size(); ++i) {
        auto [it, inserted] = entries.try_emplace(bm25.docs[i].doc_id, Entry{i + 1, false});
        if (!inserted && i + 1 < it->second.best_rank) it->second = Entry{i + 1, false};
    }
    std::vector<std::pair<std::string, Entry>> sorted(entries.begin(), entries.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second.best_rank != b.second.best_rank) return a.second.best_rank < b.second.best_rank;
        if (a.second.from_embedding != b.second.from_embedding) return a.second.from_embedding;
        return a.first < b.first;
    });
    RankedDocs out;
    out.source = RankSource::merged;
    out.docs.reserve(sorted.size());
    for (auto& [doc, e] : sorted) {
        out.docs.push_back(ScoredDoc{doc, 1.0 / static_cast<double>(e.best_rank)});
    }
    return out;
}

}  // namespace hetrag
