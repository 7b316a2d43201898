#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace hetrag {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Arbitrary-precision decimal value = coefficient * 10^exponent.
///
/// Kept normalized: the coefficient carries no trailing decimal zeros and
/// zero is stored as (0, 0), so structural equality is value equality.
class Decimal {
public:
    Decimal() = default;
    Decimal(long long value);  // NOLINT(google-explicit-constructor)

    static Decimal from_parts(BigInt coefficient, int exponent);

    /// Parses `[+-]digits[.digits]` (also `.5`, `5.`). No exponent form, no separators.
    static std::optional<Decimal> parse(std::string_view text);

    /// Exact when `value` has a terminating decimal expansion, otherwise rounded
    /// half-even to `significant_digits`.
    static Decimal from_rational(const Rational& value, int significant_digits = 12);

    [[nodiscard]] Rational to_rational() const;
    [[nodiscard]] double to_double() const;
    [[nodiscard]] bool is_zero() const { return coefficient_ == 0; }
    [[nodiscard]] int sign() const { return coefficient_.sign(); }

    /// Number of digits after the decimal point in plain notation.
    [[nodiscard]] int decimal_places() const { return exponent_ < 0 ? -exponent_ : 0; }

    /// Round half-even to `places` digits after the decimal point.
    [[nodiscard]] Decimal round_places(int places) const;
    [[nodiscard]] Decimal round_significant(int digits) const;

    /// Plain notation, never scientific; trailing zeros trimmed.
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] const BigInt& coefficient() const { return coefficient_; }
    [[nodiscard]] int exponent() const { return exponent_; }

    friend bool operator==(const Decimal& a, const Decimal& b) {
        return a.coefficient_ == b.coefficient_ && a.exponent_ == b.exponent_;
    }
    friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);

    friend Decimal operator-(const Decimal& d) { return from_parts(-d.coefficient_, d.exponent_); }

private:
    void normalize();

    BigInt coefficient_ = 0;
    int exponent_ = 0;
};

}  // namespace hetrag
