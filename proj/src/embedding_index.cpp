#include "hetrag/embedding_index.hpp"

#include "hetrag/errors.hpp"

namespace hetrag {

EmbeddingIndex::EmbeddingIndex(std::vector<std::string> chunk_ids, std::vector<std::string> doc_ids,
                               Matrix vectors)
    : chunk_ids_(std::move(chunk_ids)), doc_ids_(std::move(doc_ids)), vectors_(std::move(vectors)) {
    if (doc_ids_.size() != chunk_ids_.size() || static_cast<std::size_t>(vectors_.rows()) != chunk_ids_.size()) {
        throw ValidationError("embedding index arrays disagree in length");
    }
    if (!chunk_ids_.empty() && vectors_.cols() == 0) throw ConfigError("embedding dimension is 0");
    if (!vectors_.allFinite()) throw ConfigError("embedding index holds non-finite values");
    norms_ = vectors_.rowwise().norm();
    for (std::size_t i = 0; i < chunk_ids_.size(); ++i) {
        if (!rows_.emplace(chunk_ids_[i], i).second) {
            throw ValidationError("duplicate chunk_id '" + chunk_ids_[i] + "' in embedding index");
        }
    }
}

EmbeddingIndex EmbeddingIndex::build(const std::vector<Chunk>& chunks, const Embedder& embedder) {
    Matrix vectors(static_cast<Eigen::Index>(chunks.size()), embedder.dim());
    std::vector<std::string> ids;
    std::vector<std::string> docs;
    ids.reserve(chunks.size());
    docs.reserve(chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        EmbeddingVector v = embedder.embed(chunks[i].text);
        if (v.size() != embedder.dim()) {
            throw ConfigError("embedder returned dimension " + std::to_string(v.size()) + ", expected " +
                              std::to_string(embedder.dim()));
        }
        vectors.row(static_cast<Eigen::Index>(i)) = v.transpose();
        ids.push_back(chunks[i].chunk_id);
        docs.push_back(chunks[i].doc_id);
    }
    return EmbeddingIndex(std::move(ids), std::move(docs), std::move(vectors));
}

std::optional<std::size_t> EmbeddingIndex::row_of(const std::string& chunk_id) const {
    auto it = rows_.find(chunk_id);
    if (it == rows_.end()) return std::nullopt;
    return it->second;
}

Eigen::VectorXd EmbeddingIndex::similarities(const EmbeddingVector& query) const {
    if (query.size() != dim()) {
        throw ConfigError("query embedding has dimension " + std::to_string(query.size()) +
                          ", index has " + std::to_string(dim()));
    }
    const double qn = query.norm();
    Eigen::VectorXd sims = Eigen::VectorXd::Zero(vectors_.rows());
    if (qn == 0.0) return sims;
    const Eigen::VectorXd dots = vectors_ * query;
    for (Eigen::Index i = 0; i < sims.size(); ++i) {
        if (norms_[i] > 0.0) sims[i] = dots[i] / (norms_[i] * qn);
    }
    return sims;
}

RankedDocs embed_retrieve(std::string_view query, const EmbeddingIndex& index, std::size_t m,
                          const Embedder& embedder) {
    if (m == 0) throw ValidationError("embed_retrieve requires m >= 1");
    if (embedder.dim() != index.dim()) {
        throw ConfigError("embedder dimension " + std::to_string(embedder.dim()) +
                          " does not match index dimension " + std::to_string(index.dim()));
    }
    const Eigen::VectorXd sims = index.similarities(embedder.embed(query));
    return rank_documents(std::span<const double>(sims.data(), static_cast<std::size_t>(sims.size())),
                          index.doc_ids(), m, RankSource::embedding);
}

}  // namespace hetrag
