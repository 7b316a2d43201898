#include "hetrag/errors.hpp"
#include "hetrag/formula.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hetrag;

namespace {

Decimal dec(const char* s) { return *Decimal::parse(s); }

mpq_class to_mpq(const Rational& r) {
    mpq_class q(boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str());
    q.canonicalize();
    return q;
}

}  // namespace

TEST(Formula, Examples) {
    EXPECT_EQ(evaluate_formula("(4-2)/2"), Decimal(1));
    EXPECT_EQ(evaluate_formula("2+3*4"), Decimal(14));
    EXPECT_EQ(evaluate_formula("100*(252.18-230.74)/230.74").to_string(), "9.29184363353");
}

TEST(Formula, PercentChangeAgreesWithRationalOracle) {
    const mpq_class want = mpq_class(100) * (mpq_class("25218/100") - mpq_class("23074/100")) / mpq_class("23074/100");
    EXPECT_EQ(to_mpq(evaluate_exact(parse_formula("100*(252.18-230.74)/230.74"))), want);
    EXPECT_TRUE(oracle::agrees_relative(evaluate_formula("100*(252.18-230.74)/230.74").to_double(), want, 1e-12));
}

TEST(Formula, ExactWhenTerminating) {
    EXPECT_EQ(evaluate_formula("1/8").to_string(), "0.125");
    EXPECT_EQ(evaluate_formula("0.1+0.2").to_string(), "0.3");
    EXPECT_EQ(evaluate_formula("123456789*1000").to_string(), "123456789000");
    EXPECT_EQ(evaluate_formula("1/3").to_string(), "0.333333333333");
    EXPECT_EQ(evaluate_formula("2/3").to_string(), "0.666666666667");
}

TEST(Formula, UnarySignsPercentAndUnicodeOperators) {
    EXPECT_EQ(evaluate_formula("-3 + 5"), Decimal(2));
    EXPECT_EQ(evaluate_formula("-(2 - 7)"), Decimal(5));
    EXPECT_EQ(evaluate_formula("3 - -2"), Decimal(5));
    EXPECT_EQ(evaluate_formula("50% * 8"), Decimal(4));
    EXPECT_EQ(evaluate_formula("6 \xC3\x97 7"), Decimal(42));
    EXPECT_EQ(evaluate_formula("9 \xC3\xB7 3"), Decimal(3));
    EXPECT_EQ(evaluate_formula("9 \xE2\x88\x92 3"), Decimal(6));
    EXPECT_EQ(evaluate_formula("  ( ( 1 ) )  "), Decimal(1));
    EXPECT_EQ(evaluate_formula(".5 + 5."), dec("5.5"));
}

TEST(Formula, Errors) {
    EXPECT_THROW((void)evaluate_formula("1/0"), CalcError);
    EXPECT_THROW((void)evaluate_formula("1/(2-2)"), CalcError);
    EXPECT_THROW((void)evaluate_formula(""), CalcError);
    EXPECT_THROW((void)evaluate_formula("2 +"), CalcError);
    EXPECT_THROW((void)evaluate_formula("(1 + 2"), CalcError);
    EXPECT_THROW((void)evaluate_formula("1 + 2)"), CalcError);
    EXPECT_THROW((void)evaluate_formula("abc"), CalcError);
    EXPECT_THROW((void)evaluate_formula("1 2"), CalcError);
}

TEST(FormulaProperty, AgreesWithRationalOracleOnRandomExpressions) {
    std::mt19937_64 rng(1234);
    int checked = 0;
    while (checked < 1000) {
        const auto e = oracle::random_expression(rng, 5);
        const Rational exact = evaluate_exact(parse_formula(e.text));
        ASSERT_EQ(to_mpq(exact), e.value) << e.text;
        const Decimal rounded = evaluate_formula(e.text);
        ASSERT_TRUE(oracle::agrees_relative(rounded.to_double(), e.value, 1e-9)) << e.text;
        ++checked;
    }
}

TEST(FormulaProperty, FormatThenParseIsIdentity) {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 500; ++i) {
        const auto e = oracle::random_expression(rng, 5);
        const auto ast = parse_formula(e.text);
        const auto text = format_formula(ast);
        EXPECT_EQ(parse_formula(text), ast) << e.text << " -> " << text;
        EXPECT_EQ(format_formula(parse_formula(text)), text);
    }
}

TEST(Formula, PrecedenceAndAssociativity) {
    EXPECT_EQ(evaluate_formula("8-3-2"), Decimal(3));
    EXPECT_EQ(evaluate_formula("16/4/2"), Decimal(2));
    EXPECT_EQ(evaluate_formula("2*3+4*5"), Decimal(26));
    using K = FormulaAst::Kind;
    const auto ast = parse_formula("1-2-3");
    ASSERT_EQ(ast.kind, K::subtract);
    EXPECT_EQ(ast.operands[0].kind, K::subtract);
    EXPECT_EQ(ast.operands[1].kind, K::literal);
}
