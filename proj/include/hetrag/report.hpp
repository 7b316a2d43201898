#pragma once

#include "hetrag/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace hetrag {

/// Per-question fields whose values depend on wall-clock time.
inline constexpr const char* kTimingFields[] = {"seconds", "mean_seconds", "p95_seconds"};

[[nodiscard]] nlohmann::json trace_to_json(const RecapTrace& trace);
[[nodiscard]] nlohmann::json record_to_json(const QuestionRecord& record);
[[nodiscard]] nlohmann::json aggregates_to_json(const Aggregates& aggregates);
[[nodiscard]] nlohmann::json report_to_json(const ExperimentReport& report);

/// Rebuilds the metric-relevant part of each record from a report document.
[[nodiscard]] std::vector<QuestionRecord> records_from_json(const nlohmann::json& report);
/// Aggregates recomputed from the per-question records of a report document.
[[nodiscard]] Aggregates recompute_aggregates(const nlohmann::json& report);
[[nodiscard]] Aggregates aggregates_from_json(const nlohmann::json& aggregates);

/// Copy of `j` with every timing field removed, at any depth.
[[nodiscard]] nlohmann::json strip_timing(const nlohmann::json& j);

[[nodiscard]] std::string format_report_table(const ExperimentReport& report);

/// report.json, report.txt and traces.jsonl inside `dir`.
void write_report(const std::filesystem::path& dir, const ExperimentReport& report);

[[nodiscard]] nlohmann::json grid_to_json(const std::vector<GridRow>& rows);
[[nodiscard]] std::string format_grid_table(const std::vector<GridRow>& rows);

}  // namespace hetrag
