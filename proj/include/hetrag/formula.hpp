#pragma once

#include "hetrag/decimal.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hetrag {

/// Expression tree over decimal literals. Parentheses are not nodes.
struct FormulaAst {
    enum class Kind { literal, negate, add, subtract, multiply, divide };

    Kind kind = Kind::literal;
    Decimal value;                     // literal only
    std::vector<FormulaAst> operands;  // 1 for negate, 2 for binary operators

    [[nodiscard]] static FormulaAst literal(Decimal v) { return {Kind::literal, std::move(v), {}}; }
    [[nodiscard]] static FormulaAst unary_minus(FormulaAst a) {
        FormulaAst n{Kind::negate, {}, {}};
        n.operands.push_back(std::move(a));
        return n;
    }
    [[nodiscard]] static FormulaAst binary(Kind k, FormulaAst a, FormulaAst b) {
        FormulaAst n{k, {}, {}};
        n.operands.push_back(std::move(a));
        n.operands.push_back(std::move(b));
        return n;
    }

    friend bool operator==(const FormulaAst&, const FormulaAst&) = default;
};

/// Grammar: decimal literals with optional sign and optional "%" suffix (x0.01),
/// + - * / (also the Unicode minus, times and division signs), parentheses.
/// A sign directly attached to digits belongs to the literal. Throws CalcError
/// on syntax errors and on division by a zero-valued subexpression.
[[nodiscard]] FormulaAst parse_formula(std::string_view formula);

/// Fully parenthesized text that parses back to the same tree.
[[nodiscard]] std::string format_formula(const FormulaAst& ast);

/// Exact rational value. Throws CalcError on division by zero.
[[nodiscard]] Rational evaluate_exact(const FormulaAst& ast);

/// Exact where the result terminates in decimal, otherwise rounded half-even
/// to 12 significant digits.
[[nodiscard]] Decimal evaluate_formula(std::string_view formula);

inline constexpr int kCalculatorSignificantDigits = 12;

}  // namespace hetrag
