#ifndef HHM_RATIONAL_HPP
#define HHM_RATIONAL_HPP

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hhm {

/// Exact rational number. GMP keeps it canonical (positive denominator,
/// reduced fraction) after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

/// p/q in canonical form.
inline Rational ratio(long p, long q)
{
    if (q == 0)
        throw std::domain_error("zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& q)
{
    return q.get_str();
}

inline double to_double(const Rational& q)
{
    return q.get_d();
}

inline bool is_integer(const Rational& q)
{
    return q.get_den() == 1;
}

/// Parses "7", "-3/8", "0.25", "1e-3", "-2.5E+2" exactly.
inline Rational parse_rational(std::string_view text)
{
    auto fail = [&]() -> Rational {
        throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
    };
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    s = s.substr(b);
    if (s.empty())
        return fail();

    if (auto slash = s.find('/'); slash != std::string::npos) {
        Rational num = parse_rational(s.substr(0, slash));
        Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0)
            throw std::domain_error("zero denominator in '" + s + "'");
        Rational r = num / den;
        r.canonicalize();
        return r;
    }

    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') {
        negative = s[i] == '-';
        ++i;
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_point = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_point)
                ++frac_digits;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (digits.empty())
        return fail();
    long exponent = 0;
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E')
            return fail();
        std::string tail = s.substr(i + 1);
        if (tail.empty())
            return fail();
        std::size_t used = 0;
        try {
            exponent = std::stol(tail, &used);
        } catch (const std::exception&) {
            return fail();
        }
        if (used != tail.size())
            return fail();
    }
    Integer mantissa(digits, 10);
    long shift = exponent - frac_digits;
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    Rational r = shift < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

/// Exact binary value of a finite double.
inline Rational from_double(double v)
{
    if (!std::isfinite(v))
        throw std::domain_error("cannot convert non-finite double to a rational");
    return Rational(v);
}

} // namespace hhm

#endif
