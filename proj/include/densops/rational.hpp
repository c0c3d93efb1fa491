#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace densops {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "p" or "p/q", sign on the numerator.
inline std::string to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += '/';
        s += denominator(r).str();
    }
    return s;
}

/// Parses "p", "-p", "p/q" or a plain decimal "1.25"; nullopt on anything else.
inline std::optional<Rational> parse_rational(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool neg = false;
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+') {
        neg = text[0] == '-';
        ++i;
    }
    auto digits = [&](std::size_t from, std::size_t& to) {
        to = from;
        while (to < text.size() && text[to] >= '0' && text[to] <= '9') ++to;
        return to > from;
    };
    std::size_t end = 0;
    if (!digits(i, end)) return std::nullopt;
    Integer num(std::string(text.substr(i, end - i)));
    Integer den = 1;
    if (end < text.size() && text[end] == '.') {
        std::size_t frac_end = 0;
        if (!digits(end + 1, frac_end)) return std::nullopt;
        for (std::size_t k = end + 1; k < frac_end; ++k) {
            num = num * 10 + (text[k] - '0');
            den *= 10;
        }
        end = frac_end;
    } else if (end < text.size() && text[end] == '/') {
        std::size_t den_end = 0;
        if (!digits(end + 1, den_end)) return std::nullopt;
        den = Integer(std::string(text.substr(end + 1, den_end - end - 1)));
        if (den == 0) return std::nullopt;
        end = den_end;
    }
    if (end != text.size()) return std::nullopt;
    Rational r(num, den);
    return neg ? Rational(-r) : r;
}

namespace detail {

// Floor of the k-th root of a non-negative integer (Newton iteration).
inline Integer iroot(const Integer& n, unsigned k) {
    if (n < 2 || k == 1) return n;
    Integer x = Integer(1) << (static_cast<unsigned>(msb(n)) / k + 1);
    while (true) {
        Integer y = ((k - 1) * x + n / boost::multiprecision::pow(x, k - 1)) / k;
        if (y >= x) break;
        x = y;
    }
    while (boost::multiprecision::pow(x + 1, k) <= n) ++x;
    while (boost::multiprecision::pow(x, k) > n) --x;
    return x;
}

}  // namespace detail

/// Exact base^(n/d) when the result is rational (base > 0, or base == 0 with n > 0).
inline std::optional<Rational> exact_power(const Rational& base, const Rational& exponent) {
    const Integer en = numerator(exponent);
    const Integer ed = denominator(exponent);
    if (base == 0) {
        if (en > 0) return Rational(0);
        return std::nullopt;
    }
    if (ed != 1 && base < 0) return std::nullopt;
    if (ed > 64 || abs(en) > 4096) return std::nullopt;

    Rational root = base;
    if (ed != 1) {
        const unsigned k = ed.convert_to<unsigned>();
        const Integer p = numerator(base), q = denominator(base);
        const Integer rp = detail::iroot(p, k), rq = detail::iroot(q, k);
        if (boost::multiprecision::pow(rp, k) != p || boost::multiprecision::pow(rq, k) != q)
            return std::nullopt;
        root = Rational(rp, rq);
    }
    const long e = en.convert_to<long>();
    Rational result = 1;
    const Rational factor = e < 0 ? Rational(1 / root) : root;
    for (long i = 0; i < (e < 0 ? -e : e); ++i) result *= factor;
    return result;
}

inline Rational binomial(unsigned n, unsigned k) {
    Rational r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline Rational rational_pow(const Rational& base, unsigned n) {
    Rational r = 1;
    for (unsigned i = 0; i < n; ++i) r *= base;
    return r;
}

}  // namespace densops
