#include "hetrag/formula.hpp"

#include "hetrag/errors.hpp"

#include <cctype>

namespace hetrag {

namespace {

constexpr int kMaxNesting = 200;

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    FormulaAst parse() {
        FormulaAst ast = expression(0);
        skip_space();
        if (pos_ != src_.size()) fail("unexpected character");
        return ast;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw CalcError(what + " at offset " + std::to_string(pos_) + " in formula \"" +
                        std::string(src_) + "\"");
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])) != 0) ++pos_;
    }

    bool accept(std::string_view token) {
        if (src_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    // Returns the operator at the cursor (consuming it) or nullopt.
    std::optional<FormulaAst::Kind> additive() {
        skip_space();
        if (accept("+")) return FormulaAst::Kind::add;
        if (accept("-") || accept("\xE2\x88\x92")) return FormulaAst::Kind::subtract;
        return std::nullopt;
    }

    std::optional<FormulaAst::Kind> multiplicative() {
        skip_space();
        if (accept("*") || accept("\xC3\x97")) return FormulaAst::Kind::multiply;
        if (accept("/") || accept("\xC3\xB7")) return FormulaAst::Kind::divide;
        return std::nullopt;
    }

    FormulaAst expression(int depth) {
        FormulaAst lhs = term(depth);
        while (auto op = additive()) lhs = FormulaAst::binary(*op, std::move(lhs), term(depth));
        return lhs;
    }

    FormulaAst term(int depth) {
        FormulaAst lhs = unary(depth);
        while (auto op = multiplicative()) lhs = FormulaAst::binary(*op, std::move(lhs), unary(depth));
        return lhs;
    }

    bool digit_at(std::size_t p) const {
        return p < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[p])) != 0 || src_[p] == '.');
    }

    FormulaAst unary(int depth) {
        if (depth > kMaxNesting) fail("formula nested too deeply");
        skip_space();
        if (pos_ >= src_.size()) fail("unexpected end");
        const std::size_t start = pos_;
        if (accept("-") || accept("\xE2\x88\x92")) {
            if (digit_at(pos_)) return number(start, true);
            return FormulaAst::unary_minus(unary(depth + 1));
        }
        if (accept("+")) {
            if (digit_at(pos_)) return number(start, false);
            return unary(depth + 1);
        }
        if (accept("(")) {
            FormulaAst inner = expression(depth + 1);
            skip_space();
            if (!accept(")")) fail("expected ')'");
            return inner;
        }
        if (digit_at(pos_)) return number(start, false);
        fail("expected a number or '('");
    }

    FormulaAst number(std::size_t start, bool negative) {
        const std::size_t digits_from = pos_;
        while (digit_at(pos_)) ++pos_;
        auto value = Decimal::parse(src_.substr(digits_from, pos_ - digits_from));
        if (!value) {
            pos_ = start;
            fail("malformed number");
        }
        if (negative) value = -*value;
        if (accept("%")) value = Decimal::from_rational(value->to_rational() / 100);
        return FormulaAst::literal(*value);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace

FormulaAst parse_formula(std::string_view formula) {
    FormulaAst ast = Parser(formula).parse();
    (void)evaluate_exact(ast);  // rejects division by zero-valued subexpressions
    return ast;
}

std::string format_formula(const FormulaAst& ast) {
    using K = FormulaAst::Kind;
    switch (ast.kind) {
        case K::literal: return ast.value.to_string();
        case K::negate: return "-(" + format_formula(ast.operands[0]) + ")";
        default: break;
    }
    const char* op = ast.kind == K::add ? " + " : ast.kind == K::subtract ? " - " : ast.kind == K::multiply ? " * " : " / ";
    return "(" + format_formula(ast.operands[0]) + op + format_formula(ast.operands[1]) + ")";
}

Rational evaluate_exact(const FormulaAst& ast) {
    using K = FormulaAst::Kind;
    switch (ast.kind) {
        case K::literal: return ast.value.to_rational();
        case K::negate: return -evaluate_exact(ast.operands[0]);
        case K::add: return evaluate_exact(ast.operands[0]) + evaluate_exact(ast.operands[1]);
        case K::subtract: return evaluate_exact(ast.operands[0]) - evaluate_exact(ast.operands[1]);
        case K::multiply: return evaluate_exact(ast.operands[0]) * evaluate_exact(ast.operands[1]);
        case K::divide: {
            Rational divisor = evaluate_exact(ast.operands[1]);
            if (divisor == 0) throw CalcError("division by zero");
            return evaluate_exact(ast.operands[0]) / divisor;
        }
    }
    throw CalcError("corrupt formula tree");
}

Decimal evaluate_formula(std::string_view formula) {
    return Decimal::from_rational(evaluate_exact(parse_formula(formula)), kCalculatorSignificantDigits);
}

}  // namespace hetrag
