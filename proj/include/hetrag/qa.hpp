#pragma once

#include <string>
#include <string_view>

namespace hetrag {

enum class Split { train, dev, test };

[[nodiscard]] std::string_view to_string(Split s);
[[nodiscard]] Split split_from_string(std::string_view s);

/// A question whose answer lives in exactly one gold document.
struct QAPair {
    std::string question_id;
    std::string question;
    std::string gold_doc_id;
    std::string gold_answer;
    Split split = Split::test;
};

}  // namespace hetrag
