#include "hetrag/decimal.hpp"

#include <cstdlib>

namespace hetrag {

namespace {

BigInt pow10(unsigned n) {
    BigInt r = 1;
    static const BigInt ten = 10;
    for (unsigned i = 0; i < n; ++i) r *= ten;
    return r;
}

std::size_t digit_count(const BigInt& v) {
    if (v == 0) return 1;
    return BigInt(boost::multiprecision::abs(v)).str().size();
}

// Divide a non-negative numerator by a positive denominator, rounding half-even.
BigInt div_round_half_even(const BigInt& num, const BigInt& den) {
    BigInt q;
    BigInt r;
    boost::multiprecision::divide_qr(num, den, q, r);
    BigInt twice = r * 2;
    if (twice > den || (twice == den && (q & 1) != 0)) ++q;
    return q;
}

}  // namespace

Decimal::Decimal(long long value) : coefficient_(value) { normalize(); }

Decimal Decimal::from_parts(BigInt coefficient, int exponent) {
    Decimal d;
    d.coefficient_ = std::move(coefficient);
    d.exponent_ = exponent;
    d.normalize();
    return d;
}

void Decimal::normalize() {
    if (coefficient_ == 0) {
        exponent_ = 0;
        return;
    }
    static const BigInt ten = 10;
    BigInt q;
    BigInt r;
    for (;;) {
        boost::multiprecision::divide_qr(coefficient_, ten, q, r);
        if (r != 0) break;
        coefficient_ = q;
        ++exponent_;
    }
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;
    int fraction = 0;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_point) ++fraction;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            return std::nullopt;
        }
    }
    if (digits.empty()) return std::nullopt;
    // A leading zero would select octal in the string constructor.
    const auto nz = digits.find_first_not_of('0');
    BigInt coefficient(nz == std::string::npos ? std::string("0") : digits.substr(nz));
    if (negative) coefficient = -coefficient;
    return from_parts(std::move(coefficient), -fraction);
}

Decimal Decimal::from_rational(const Rational& value, int significant_digits) {
    BigInt num = boost::multiprecision::numerator(value);
    BigInt den = boost::multiprecision::denominator(value);
    if (num == 0) return Decimal{};

    BigInt rest = den;
    unsigned twos = 0;
    unsigned fives = 0;
    while ((rest & 1) == 0) {
        rest >>= 1;
        ++twos;
    }
    while (rest % 5 == 0) {
        rest /= 5;
        ++fives;
    }
    if (rest == 1) {
        unsigned k = std::max(twos, fives);
        return from_parts(num * (pow10(k) / den), -static_cast<int>(k));
    }

    const bool negative = num < 0;
    BigInt mag = boost::multiprecision::abs(num);
    // Choose scale t so that floor(mag * 10^t / den) has exactly `significant_digits` digits.
    int t = significant_digits - 1 -
            (static_cast<int>(digit_count(mag)) - static_cast<int>(digit_count(den)));
    const BigInt lower = pow10(significant_digits - 1);
    const BigInt upper = pow10(significant_digits);
    auto scaled_floor = [&](int scale) {
        return scale >= 0 ? BigInt(mag * pow10(scale) / den) : BigInt(mag / (den * pow10(-scale)));
    };
    for (;;) {
        BigInt f = scaled_floor(t);
        if (f < lower) {
            ++t;
        } else if (f >= upper) {
            --t;
        } else {
            break;
        }
    }
    BigInt rounded = t >= 0 ? div_round_half_even(mag * pow10(t), den)
                            : div_round_half_even(mag, den * pow10(-t));
    if (negative) rounded = -rounded;
    return from_parts(std::move(rounded), -t);
}

Rational Decimal::to_rational() const {
    if (exponent_ >= 0) return Rational(coefficient_ * pow10(exponent_));
    return Rational(coefficient_, pow10(-exponent_));
}

double Decimal::to_double() const { return std::strtod(to_string().c_str(), nullptr); }

Decimal Decimal::round_places(int places) const {
    if (decimal_places() <= places) return *this;
    const unsigned shift = static_cast<unsigned>(-exponent_ - places);
    BigInt q = div_round_half_even(boost::multiprecision::abs(coefficient_), pow10(shift));
    if (coefficient_ < 0) q = -q;
    return from_parts(std::move(q), -places);
}

Decimal Decimal::round_significant(int digits) const {
    const int have = static_cast<int>(digit_count(coefficient_));
    if (have <= digits) return *this;
    const int drop = have - digits;
    BigInt q = div_round_half_even(boost::multiprecision::abs(coefficient_), pow10(drop));
    if (coefficient_ < 0) q = -q;
    return from_parts(std::move(q), exponent_ + drop);
}

std::string Decimal::to_string() const {
    std::string digits = BigInt(boost::multiprecision::abs(coefficient_)).str();
    std::string out = coefficient_ < 0 ? "-" : "";
    if (exponent_ >= 0) {
        out += digits;
        if (coefficient_ != 0) out.append(static_cast<std::size_t>(exponent_), '0');
        return out;
    }
    const auto places = static_cast<std::size_t>(-exponent_);
    if (digits.size() > places) {
        out += digits.substr(0, digits.size() - places);
        out += '.';
        out += digits.substr(digits.size() - places);
    } else {
        out += "0.";
        out.append(places - digits.size(), '0');
        out += digits;
    }
    return out;
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
    const int common = std::min(a.exponent_, b.exponent_);
    BigInt lhs = a.coefficient_ * pow10(static_cast<unsigned>(a.exponent_ - common));
    BigInt rhs = b.coefficient_ * pow10(static_cast<unsigned>(b.exponent_ - common));
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace hetrag
