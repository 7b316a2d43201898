#pragma once

#include "hetrag/clients.hpp"
#include "hetrag/document.hpp"
#include "hetrag/ranking.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hetrag {

/// Dense chunk vectors, one row per chunk, all sharing one dimension.
class EmbeddingIndex {
public:
    using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    EmbeddingIndex(std::vector<std::string> chunk_ids, std::vector<std::string> doc_ids, Matrix vectors);

    [[nodiscard]] static EmbeddingIndex build(const std::vector<Chunk>& chunks, const Embedder& embedder);

    [[nodiscard]] Eigen::Index dim() const { return vectors_.cols(); }
    [[nodiscard]] std::size_t size() const { return chunk_ids_.size(); }
    [[nodiscard]] const Matrix& vectors() const { return vectors_; }
    [[nodiscard]] const std::vector<std::string>& chunk_ids() const { return chunk_ids_; }
    [[nodiscard]] const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    [[nodiscard]] std::optional<std::size_t> row_of(const std::string& chunk_id) const;

    /// Cosine similarity of `query` with every chunk (0 for zero vectors).
    /// Throws ConfigError on a dimension mismatch.
    [[nodiscard]] Eigen::VectorXd similarities(const EmbeddingVector& query) const;

private:
    std::vector<std::string> chunk_ids_;
    std::vector<std::string> doc_ids_;
    Matrix vectors_;
    Eigen::VectorXd norms_;
    std::unordered_map<std::string, std::size_t> rows_;
};

[[nodiscard]] RankedDocs embed_retrieve(std::string_view query, const EmbeddingIndex& index,
                                        std::size_t m, const Embedder& embedder);

}  // namespace hetrag
