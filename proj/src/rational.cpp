#include "pslab/rational.hpp"

#include "pslab/error.hpp"

#include <cctype>
#include <cmath>

namespace pslab {

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
    if (digits.empty()) fail(ErrorKind::Parse, "expected digits in '" + std::string(whole) + "'");
    BigInt v = 0;
    for (char ch : digits) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            fail(ErrorKind::Parse, "bad number '" + std::string(whole) + "'");
        v = v * 10 + (ch - '0');
    }
    return v;
}

} // namespace

Rational parse_rational(std::string_view text) {
    const std::string_view whole = text;
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) fail(ErrorKind::Parse, "empty number");

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const Rational num = parse_rational(text.substr(0, slash));
        const Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) fail(ErrorKind::Parse, "zero denominator in '" + std::string(whole) + "'");
        return num / den;
    }

    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }

    long exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = text.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        const BigInt ev = parse_integer(exp_text, whole);
        if (ev > 4000) fail(ErrorKind::Parse, "exponent too large in '" + std::string(whole) + "'");
        exponent = exp_negative ? -ev.convert_to<long>() : ev.convert_to<long>();
        text = text.substr(0, e);
    }

    std::string digits;
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const std::string_view int_part = text.substr(0, dot);
        const std::string_view frac_part = text.substr(dot + 1);
        if (int_part.empty() && frac_part.empty()) fail(ErrorKind::Parse, "bad number '" + std::string(whole) + "'");
        digits = std::string(int_part) + std::string(frac_part);
        exponent -= static_cast<long>(frac_part.size());
    } else {
        digits = std::string(text);
    }

    Rational q(parse_integer(digits, whole));
    const BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(exponent)));
    if (exponent >= 0)
        q *= scale;
    else
        q /= scale;
    return negative ? Rational(-q) : q;
}

Rational rational_from_double(double v) {
    require(std::isfinite(v), ErrorKind::Domain, "non-finite double has no rational value");
    if (v == 0.0) return Rational(0);
    int e = 0;
    const double m = std::frexp(v, &e); // v = m * 2^e, 0.5 <= |m| < 1
    const auto mant = static_cast<long long>(std::ldexp(m, 53));
    Rational q{BigInt(mant)};
    e -= 53;
    const BigInt scale = BigInt(1) << std::abs(e);
    if (e >= 0)
        q *= scale;
    else
        q /= scale;
    return q;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string to_string(const Rational& q) {
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

} // namespace pslab
