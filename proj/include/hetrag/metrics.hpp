#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hetrag {

struct HitRecord {
    std::vector<std::string> ranking;
    std::string gold_doc_id;
};

/// (1/N) * #{records whose gold doc is within the first K of the ranking}.
/// Throws MetricError on an empty record list, ValidationError for K < 1.
[[nodiscard]] double hit_at_k(const std::vector<HitRecord>& records, std::size_t k);

/// Trim, casefold, collapse whitespace, drop "$" and ",". When both sides are
/// numbers (percent marker on both or neither) the prediction is rounded to the
/// gold's decimal places and compared numerically.
[[nodiscard]] std::string normalize_answer(std::string_view s);
[[nodiscard]] bool exact_match(std::string_view pred, std::string_view gold);

}  // namespace hetrag
