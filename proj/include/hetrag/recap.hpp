#pragma once

#include "hetrag/decimal.hpp"
#include "hetrag/document.hpp"
#include "hetrag/prompts.hpp"
#include "hetrag/rerank.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hetrag {

enum class QuestionType { numerical, fact, multi_hop, other };
enum class SelectionReason { calculator, llm, llm_no_formula };

[[nodiscard]] std::string_view to_string(QuestionType t);
[[nodiscard]] std::string_view to_string(SelectionReason r);

/// Parsed Restate / Extract / Compute / Answer / Present record plus the
/// calculator outcome and the rule-based final choice.
struct RecapTrace {
    std::string restatement;
    QuestionType question_type = QuestionType::other;
    std::vector<std::string> evidence;
    std::optional<std::string> formula;
    std::string llm_answer;
    std::optional<Decimal> calc_answer;
    std::optional<std::string> calc_error;
    std::string selected_answer;
    SelectionReason selection_reason = SelectionReason::llm_no_formula;
};

/// Step headings, each emitted exactly once at the end of the RECAP prompt.
inline constexpr std::string_view kRecapSteps[] = {"Restate", "Extract", "Compute", "Answer", "Present"};

/// Worked example, document chunks, question, then the five step headings with
/// the "FORMULA:" / "FORMULA: none" convention.
[[nodiscard]] std::string build_recap_prompt(std::string_view query, const FilteredDocument& doc,
                                             const PromptTemplates& templates = {});
/// Full document, represented by its sentence chunks and H-RCL table summaries.
[[nodiscard]] std::string build_recap_prompt(std::string_view query, const Document& doc,
                                             const PromptTemplates& templates = {});

/// Sections are located by their headings. Throws ParseError when both the
/// Answer and Present sections are missing. selected_answer is left empty.
[[nodiscard]] RecapTrace parse_recap_output(std::string_view text);

/// Calculator front end for model-written formulas: drops a trailing "= result",
/// currency signs and digit-group commas, then evaluates.
[[nodiscard]] Decimal run_calculator(std::string_view formula);

[[nodiscard]] std::string format_calculator_value(const Decimal& value);

struct AnswerChoice {
    std::string answer;
    SelectionReason reason = SelectionReason::llm;
};

inline constexpr double kDefaultAgreementTolerance = 1e-3;

/// (a) no calculator value: llm answer (llm_no_formula when no formula was given);
/// (b) llm answer numerically agrees with the calculator within `tolerance`
///     (relative): llm answer verbatim;
/// (c) otherwise, unless the question is a fact question: calculator value.
[[nodiscard]] AnswerChoice select_answer(std::string_view llm_answer, const std::optional<Decimal>& calc_answer,
                                         QuestionType question_type = QuestionType::numerical,
                                         bool formula_present = false,
                                         double tolerance = kDefaultAgreementTolerance);

/// Runs the calculator on trace.formula and fills calc_*, selected_answer and selection_reason.
void finalize_trace(RecapTrace& trace, double tolerance = kDefaultAgreementTolerance);

}  // namespace hetrag
