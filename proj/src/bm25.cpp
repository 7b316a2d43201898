#include "hetrag/bm25.hpp"

#include "hetrag/errors.hpp"
#include "hetrag/text.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace hetrag {

Bm25Index::Bm25Index(Bm25Params params, std::vector<std::string> chunk_ids,
                     std::vector<std::string> doc_ids, std::vector<std::uint32_t> lengths,
                     std::map<std::string, std::vector<Posting>> postings)
    : params_(params),
      chunk_ids_(std::move(chunk_ids)),
      doc_ids_(std::move(doc_ids)),
      lengths_(std::move(lengths)),
      postings_(std::move(postings)) {
    if (!(params_.k1 > 0.0)) throw ValidationError("BM25 k1 must be positive");
    if (!(params_.b >= 0.0 && params_.b <= 1.0)) throw ValidationError("BM25 b must lie in [0, 1]");
    if (chunk_ids_.empty()) throw ValidationError("cannot build a BM25 index over an empty corpus");
    if (doc_ids_.size() != chunk_ids_.size() || lengths_.size() != chunk_ids_.size()) {
        throw ValidationError("BM25 index arrays disagree in length");
    }
    const double total = std::accumulate(lengths_.begin(), lengths_.end(), 0.0);
    avgdl_ = total / static_cast<double>(lengths_.size());
    if (!(avgdl_ > 0.0)) throw ValidationError("BM25 corpus contains no tokens");
    for (const auto& [term, list] : postings_) {
        for (const auto& p : list) {
            if (p.chunk >= chunk_ids_.size() || p.tf == 0) {
                throw ValidationError("BM25 posting for '" + term + "' is out of range");
            }
        }
    }
}

std::size_t Bm25Index::df(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? 0 : it->second.size();
}

std::uint32_t Bm25Index::tf(const std::string& term, std::size_t chunk) const {
    auto it = postings_.find(term);
    if (it == postings_.end()) return 0;
    auto p = std::lower_bound(it->second.begin(), it->second.end(), chunk,
                              [](const Posting& a, std::size_t c) { return a.chunk < c; });
    return p != it->second.end() && p->chunk == chunk ? p->tf : 0;
}

double Bm25Index::idf(const std::string& term) const {
    const auto n = static_cast<double>(chunk_count());
    const auto d = static_cast<double>(df(term));
    return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

std::vector<double> Bm25Index::score_chunks(std::string_view query) const {
    std::vector<double> scores(chunk_count(), 0.0);
    std::unordered_set<std::string> seen;
    for (const auto& term : text::tokenize(query)) {
        if (!seen.insert(term).second) continue;
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        const double w = idf(term);
        for (const auto& p : it->second) {
            const double tf = p.tf;
            const double norm = 1.0 - params_.b + params_.b * lengths_[p.chunk] / avgdl_;
            scores[p.chunk] += w * tf / (tf + params_.k1 * norm);
        }
    }
    return scores;
}

Bm25Index bm25_build(const std::vector<Chunk>& chunks, double k1, double b) {
    if (chunks.empty()) throw ValidationError("cannot build a BM25 index over an empty corpus");
    std::vector<std::string> ids;
    std::vector<std::string> docs;
    std::vector<std::uint32_t> lengths;
    std::map<std::string, std::vector<Posting>> postings;
    ids.reserve(chunks.size());
    docs.reserve(chunks.size());
    lengths.reserve(chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        const auto tokens = text::tokenize(chunks[i].text);
        std::map<std::string, std::uint32_t> counts;
        for (const auto& t : tokens) ++counts[t];
        for (const auto& [term, tf] : counts) {
            postings[term].push_back(Posting{static_cast<std::uint32_t>(i), tf});
        }
        ids.push_back(chunks[i].chunk_id);
        docs.push_back(chunks[i].doc_id);
        lengths.push_back(static_cast<std::uint32_t>(tokens.size()));
    }
    return Bm25Index(Bm25Params{k1, b}, std::move(ids), std::move(docs), std::move(lengths),
                     std::move(postings));
}

RankedDocs bm25_retrieve(std::string_view query, const Bm25Index& index, std::size_t n) {
    if (n == 0) throw ValidationError("bm25_retrieve requires n >= 1");
    const auto scores = index.score_chunks(query);
    return rank_documents(scores, index.doc_ids(), n, RankSource::bm25);
}

}  // namespace hetrag
