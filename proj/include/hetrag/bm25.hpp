#pragma once

#include "hetrag/document.hpp"
#include "hetrag/ranking.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hetrag {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct Posting {
    std::uint32_t chunk = 0;
    std::uint32_t tf = 0;

    friend bool operator==(const Posting&, const Posting&) = default;
};

/// Okapi BM25 over chunks:
///   score(q, c) = sum_{t in q} idf(t) * tf / (tf + k1 * (1 - b + b * |c| / avgdl))
///   idf(t)      = ln(1 + (N - df + 0.5) / (df + 0.5))
/// Query terms are deduplicated; postings are sorted by chunk.
class Bm25Index {
public:
    Bm25Index(Bm25Params params, std::vector<std::string> chunk_ids, std::vector<std::string> doc_ids,
              std::vector<std::uint32_t> lengths, std::map<std::string, std::vector<Posting>> postings);

    [[nodiscard]] const Bm25Params& params() const { return params_; }
    [[nodiscard]] std::size_t chunk_count() const { return chunk_ids_.size(); }
    [[nodiscard]] double average_length() const { return avgdl_; }
    [[nodiscard]] std::uint32_t length(std::size_t chunk) const { return lengths_[chunk]; }
    [[nodiscard]] const std::vector<std::string>& chunk_ids() const { return chunk_ids_; }
    [[nodiscard]] const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    [[nodiscard]] const std::vector<std::uint32_t>& lengths() const { return lengths_; }
    [[nodiscard]] const std::map<std::string, std::vector<Posting>>& postings() const { return postings_; }

    [[nodiscard]] std::size_t df(const std::string& term) const;
    [[nodiscard]] std::uint32_t tf(const std::string& term, std::size_t chunk) const;
    [[nodiscard]] double idf(const std::string& term) const;

    /// Score of every chunk, indexed like chunk_ids().
    [[nodiscard]] std::vector<double> score_chunks(std::string_view query) const;

private:
    Bm25Params params_;
    std::vector<std::string> chunk_ids_;
    std::vector<std::string> doc_ids_;
    std::vector<std::uint32_t> lengths_;
    std::map<std::string, std::vector<Posting>> postings_;
    double avgdl_ = 0.0;
};

/// Throws ValidationError on an empty corpus or out-of-range parameters.
[[nodiscard]] Bm25Index bm25_build(const std::vector<Chunk>& chunks, double k1 = 1.2, double b = 0.75);

/// Top-n documents, max chunk score per document, ties by doc_id; zero-score
/// documents are never returned.
[[nodiscard]] RankedDocs bm25_retrieve(std::string_view query, const Bm25Index& index, std::size_t n);

}  // namespace hetrag
