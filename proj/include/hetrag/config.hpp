#pragma once

#include "hetrag/bm25.hpp"
#include "hetrag/clients.hpp"
#include "hetrag/document.hpp"
#include "hetrag/recap.hpp"
#include "hetrag/representation.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hetrag {

enum class CompletionBackend { mock, http };
enum class EmbedderBackend { bow, http };

/// Everything a run needs. Relative paths in the config file resolve against
/// the file's directory.
struct PipelineConfig {
    std::filesystem::path docs_dir;
    std::filesystem::path qa_file;
    std::filesystem::path cache_dir;
    std::filesystem::path run_dir;
    std::optional<std::filesystem::path> templates_dir;

    std::size_t n = 40;
    std::size_t m = 60;
    Bm25Params bm25;

    TableStrategy bm25_strategy = TableStrategy::table_level;
    TableStrategy embedding_strategy = TableStrategy::hrcl;
    SummarizerSpec summarizer;

    TokenBudget rerank_budget;
    double agreement_tolerance = kDefaultAgreementTolerance;
    int max_retries = 2;

    CompletionBackend completion = CompletionBackend::mock;
    std::filesystem::path mock_script;
    std::string completion_model = "gpt-4o";
    EmbedderBackend embedder = EmbedderBackend::bow;
    std::string embedding_model = "text-embedding-3-small";

    std::vector<std::size_t> k_list{1, 3, 5, 10};
    std::size_t workers = 1;
    std::optional<std::string> split;

    /// Throws ConfigError.
    void validate() const;
};

[[nodiscard]] PipelineConfig config_from_json(const nlohmann::json& j,
                                              const std::filesystem::path& base_dir = {});
[[nodiscard]] nlohmann::json config_to_json(const PipelineConfig& config);
[[nodiscard]] PipelineConfig load_config(const std::filesystem::path& file);

}  // namespace hetrag
