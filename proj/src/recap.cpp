#include "hetrag/recap.hpp"

#include "hetrag/errors.hpp"
#include "hetrag/formula.hpp"
#include "hetrag/representation.hpp"
#include "hetrag/text.hpp"

#include <array>
#include <cctype>
#include <cmath>

namespace hetrag {

std::string_view to_string(QuestionType t) {
    switch (t) {
        case QuestionType::numerical: return "numerical";
        case QuestionType::fact: return "fact";
        case QuestionType::multi_hop: return "multi_hop";
        case QuestionType::other: return "other";
    }
    return "other";
}

std::string_view to_string(SelectionReason r) {
    switch (r) {
        case SelectionReason::calculator: return "calculator";
        case SelectionReason::llm: return "llm";
        case SelectionReason::llm_no_formula: return "llm_no_formula";
    }
    return "llm";
}

std::string build_recap_prompt(std::string_view query, const FilteredDocument& doc,
                               const PromptTemplates& templates) {
    std::string body;
    for (const auto& c : doc.chunks) body += c.text + "\n";
    return templates.render("recap", {{"example", text::trim(templates.get("recap_example"))},
                                      {"doc_id", doc.doc_id},
                                      {"document", text::trim(body)},
                                      {"question", std::string(query)}});
}

std::string build_recap_prompt(std::string_view query, const Document& doc, const PromptTemplates& templates) {
    FilteredDocument full{doc.doc_id, build_corpus({doc}, TableStrategy::hrcl)};
    return build_recap_prompt(query, full, templates);
}

// ---- parsing ----------------------------------------------------------------------------

namespace {

enum Section { kRestate, kExtract, kCompute, kAnswer, kPresent, kSectionCount };

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Strips list markers, "Step N" prefixes and markdown emphasis from a line start.
std::string_view strip_decoration(std::string_view line) {
    auto drop = [&](auto pred) {
        while (!line.empty() && pred(line.front())) line.remove_prefix(1);
    };
    drop([](char c) { return is_space(c) || c == '#' || c == '*' || c == '>' || c == '-'; });
    std::size_t i = 0;
    while (i < line.size() && is_digit(line[i])) ++i;
    if (i > 0 && i < line.size() && (line[i] == '.' || line[i] == ')')) line.remove_prefix(i + 1);
    if (text::starts_with_icase(line, "step")) {
        std::size_t j = 4;
        while (j < line.size() && (is_space(line[j]) || is_digit(line[j]) || line[j] == ':' ||
                                   line[j] == '-' || line[j] == '.'))
            ++j;
        if (j > 4) line.remove_prefix(j);
    }
    drop([](char c) { return is_space(c) || c == '*'; });
    return line;
}

std::string strip_emphasis(std::string_view s) {
    std::string t = text::trim(s);
    while (!t.empty() && (t.front() == '*' || t.front() == '`')) t.erase(t.begin());
    while (!t.empty() && (t.back() == '*' || t.back() == '`')) t.pop_back();
    return text::trim(t);
}

// "<Label>:" possibly decorated; yields the section and the text after the colon.
std::optional<std::pair<Section, std::string>> heading(std::string_view raw) {
    std::string_view line = strip_decoration(raw);
    for (int s = 0; s < kSectionCount; ++s) {
        std::string_view label = kRecapSteps[s];
        if (!text::starts_with_icase(line, label)) continue;
        std::string_view rest = line.substr(label.size());
        while (!rest.empty() && (rest.front() == '*' || rest.front() == ' ')) rest.remove_prefix(1);
        if (rest.empty() || rest.front() != ':') continue;
        rest.remove_prefix(1);
        return std::pair{static_cast<Section>(s), strip_emphasis(rest)};
    }
    return std::nullopt;
}

std::vector<std::string> lines_of(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string line(text.substr(start, nl - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(std::move(line));
        start = nl + 1;
    }
    return out;
}

std::optional<std::string> formula_in(const std::string& line) {
    std::string t = strip_emphasis(strip_decoration(line));
    if (!text::starts_with_icase(t, "formula:")) return std::nullopt;
    return strip_emphasis(std::string_view(t).substr(8));
}

std::string first_nonempty(const std::vector<std::string>& lines) {
    for (const auto& l : lines) {
        if (formula_in(l)) continue;
        if (auto t = strip_emphasis(l); !t.empty()) return t;
    }
    return {};
}

QuestionType classify(const std::string& restatement) {
    const std::string s = text::to_lower(restatement);
    auto has = [&](std::string_view w) { return s.find(w) != std::string::npos; };
    if (has("multi_hop") || has("multi-hop") || has("multi hop")) return QuestionType::multi_hop;
    if (has("numerical") || has("numeric")) return QuestionType::numerical;
    if (has("fact")) return QuestionType::fact;
    return QuestionType::other;
}

std::string strip_bullet(const std::string& line) {
    std::string_view v = line;
    while (!v.empty() && (is_space(v.front()) || v.front() == '-' || v.front() == '*' || v.front() == '+'))
        v.remove_prefix(1);
    std::size_t i = 0;
    while (i < v.size() && is_digit(v[i])) ++i;
    if (i > 0 && i < v.size() && (v[i] == '.' || v[i] == ')')) v.remove_prefix(i + 1);
    return text::trim(v);
}

}  // namespace

RecapTrace parse_recap_output(std::string_view output) {
    std::array<std::vector<std::string>, kSectionCount> sections;
    std::array<bool, kSectionCount> seen{};
    std::optional<std::string> formula_anywhere;
    std::optional<std::string> formula_compute;
    int current = -1;
    for (const auto& line : lines_of(output)) {
        if (auto h = heading(line)) {
            current = h->first;
            seen[current] = true;
            if (!h->second.empty()) sections[current].push_back(h->second);
            if (auto f = formula_in(h->second); f && current == kCompute && !formula_compute) formula_compute = f;
            continue;
        }
        if (auto f = formula_in(line)) {
            if (!formula_anywhere) formula_anywhere = f;
            if (current == kCompute && !formula_compute) formula_compute = f;
        }
        if (current >= 0) sections[current].push_back(line);
    }
    if (!seen[kAnswer] && !seen[kPresent]) {
        throw ParseError("model output has neither an Answer nor a Present section");
    }

    RecapTrace trace;
    trace.restatement = text::trim(text::join(sections[kRestate], "\n"));
    trace.question_type = classify(trace.restatement);
    for (const auto& l : sections[kExtract]) {
        if (auto item = strip_bullet(l); !item.empty()) trace.evidence.push_back(std::move(item));
    }
    auto formula = formula_compute ? formula_compute : formula_anywhere;
    if (formula && !formula->empty() && text::to_lower(*formula) != "none") trace.formula = *formula;

    trace.llm_answer = first_nonempty(sections[kPresent]);
    if (trace.llm_answer.empty()) trace.llm_answer = first_nonempty(sections[kAnswer]);
    if (trace.llm_answer.empty()) throw ParseError("Answer and Present sections are empty");
    return trace;
}

// ---- calculator + selection ------------------------------------------------------------------

Decimal run_calculator(std::string_view formula) {
    std::string f(formula.substr(0, formula.find('=')));
    std::string cleaned;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const char c = f[i];
        if (c == '$') continue;
        if (c == ',' && i > 0 && i + 1 < f.size() && is_digit(f[i - 1]) && is_digit(f[i + 1])) continue;
        cleaned.push_back(c);
    }
    return evaluate_formula(cleaned);
}

std::string format_calculator_value(const Decimal& value) { return value.to_string(); }

namespace {

bool agrees(double llm, double calc, double tolerance) {
    if (calc == 0.0) return llm == 0.0;
    return std::abs(llm - calc) <= tolerance * std::abs(calc);
}

}  // namespace

AnswerChoice select_answer(std::string_view llm_answer, const std::optional<Decimal>& calc_answer,
                           QuestionType question_type, bool formula_present, double tolerance) {
    const std::string llm = text::trim(llm_answer);
    if (!calc_answer) {
        return {llm, formula_present ? SelectionReason::llm : SelectionReason::llm_no_formula};
    }
    std::string_view numeric_part = llm;
    if (!numeric_part.empty() && numeric_part.back() == '.') numeric_part.remove_suffix(1);
    bool percent = false;
    if (auto parsed = parse_numeric(numeric_part)) {
        const double l = parsed->value.to_double();
        const double c = calc_answer->to_double();
        percent = parsed->unit_hint && parsed->unit_hint->find('%') != std::string::npos;
        if (agrees(l, c, tolerance) || (percent && agrees(l * 0.01, c, tolerance))) {
            return {llm, SelectionReason::llm};
        }
    }
    if (question_type == QuestionType::fact) return {llm, SelectionReason::llm};
    // A percent answer keeps its marker when the calculator value replaces it.
    return {format_calculator_value(*calc_answer) + (percent ? "%" : ""), SelectionReason::calculator};
}

void finalize_trace(RecapTrace& trace, double tolerance) {
    trace.calc_answer.reset();
    trace.calc_error.reset();
    if (trace.formula) {
        try {
            trace.calc_answer = run_calculator(*trace.formula);
        } catch (const CalcError& e) {
            trace.calc_error = e.what();
        }
    }
    auto choice = select_answer(trace.llm_answer, trace.calc_answer, trace.question_type,
                                trace.formula.has_value(), tolerance);
    trace.selected_answer = std::move(choice.answer);
    trace.selection_reason = choice.reason;
}

}  // namespace hetrag
