#include "rse/common.hpp"

#include <algorithm>

namespace rse {

BigInt binomial(std::int64_t n, std::int64_t r) {
    if (n < 0 || r < 0 || r > n) return 0;
    if (r > n - r) r = n - r;
    BigInt out = 1;
    for (std::int64_t i = 1; i <= r; ++i) {
        out *= n - r + i;
        out /= i;
    }
    return out;
}

BigInt falling(std::int64_t n, std::int64_t j) {
    BigInt out = 1;
    for (std::int64_t i = 0; i < j; ++i) out *= (n - i);
    return out;
}

std::string to_string(const Rational& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

Rational parse_rational(const std::string& s) {
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            Rational den = parse_rational(s.substr(slash + 1));
            if (den == 0) throw SpecError("zero denominator: '" + s + "'");
            return parse_rational(s.substr(0, slash)) / den;
        }
        // cpp_int reads a leading 0 as an octal prefix, so strip it.
        bool negative = !s.empty() && s[0] == '-';
        std::string body = negative ? s.substr(1) : s;
        auto dot = body.find('.');
        std::string digits = dot == std::string::npos ? body : body.substr(0, dot) + body.substr(dot + 1);
        std::size_t frac = dot == std::string::npos ? 0 : body.size() - dot - 1;
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw SpecError("not a rational number: '" + s + "'");
        digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
        BigInt den = 1;
        for (std::size_t i = 0; i < frac; ++i) den *= 10;
        BigInt num(digits);
        return Rational(negative ? BigInt(-num) : num, den);
    } catch (const std::exception&) {
        throw SpecError("not a rational number: '" + s + "'");
    }
}

double to_double(const Rational& q) {
    return q.convert_to<double>();
}

}  // namespace rse
