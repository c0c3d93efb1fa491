#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "densops/simplify.hpp"

namespace densops {

namespace detail {

/// Dense polynomial in x, lowest degree first, no trailing zeros.
using Poly = std::vector<Rational>;

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

inline Poly poly_scale(const Poly& a, const Rational& c) {
    if (c == 0) return {};
    Poly r(a);
    for (auto& v : r) v *= c;
    return r;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

inline Poly poly_rem(Poly a, const Poly& b) {
    while (a.size() >= b.size()) {
        const Rational f = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

inline Poly poly_quo(Poly a, const Poly& b) {
    if (a.size() < b.size()) return {};
    Poly q(a.size() - b.size() + 1);
    while (a.size() >= b.size()) {
        const Rational f = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    trim(q);
    return q;
}

inline Poly monic(const Poly& p) { return poly_scale(p, Rational(1) / p.back()); }

inline Poly poly_gcd(Poly a, Poly b) {
    while (!b.empty()) {
        Poly r = poly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

/// num/den with den monic and coprime to num.
struct RatFun {
    Poly num, den;
};

inline RatFun reduce(Poly num, Poly den) {
    if (num.empty()) return {{}, {Rational(1)}};
    const Poly g = poly_gcd(num, den);
    if (g.size() > 1) {
        num = poly_quo(num, g);
        den = poly_quo(den, g);
    }
    const Rational lead = den.back();
    return {poly_scale(num, Rational(1) / lead), monic(den)};
}

inline std::optional<RatFun> to_ratfun(const Expr& e) {
    switch (e.kind()) {
    case Kind::Constant: return RatFun{e.is_zero() ? Poly{} : Poly{e.number()}, {Rational(1)}};
    case Kind::Variable: return RatFun{{Rational(0), Rational(1)}, {Rational(1)}};
    case Kind::Neg: {
        auto a = to_ratfun(e.arg());
        if (a) a->num = poly_scale(a->num, -1);
        return a;
    }
    case Kind::Sum: {
        RatFun acc{{}, {Rational(1)}};
        for (const auto& t : e.args()) {
            auto a = to_ratfun(t);
            if (!a) return std::nullopt;
            acc = reduce(poly_add(poly_mul(acc.num, a->den), poly_mul(a->num, acc.den)), poly_mul(acc.den, a->den));
        }
        return acc;
    }
    case Kind::Product: {
        RatFun acc{{Rational(1)}, {Rational(1)}};
        for (const auto& f : e.args()) {
            auto a = to_ratfun(f);
            if (!a) return std::nullopt;
            acc = reduce(poly_mul(acc.num, a->num), poly_mul(acc.den, a->den));
        }
        return acc;
    }
    case Kind::Quotient: {
        auto a = to_ratfun(e.arg(0)), b = to_ratfun(e.arg(1));
        if (!a || !b || b->num.empty()) return std::nullopt;
        return reduce(poly_mul(a->num, b->den), poly_mul(a->den, b->num));
    }
    case Kind::Power: {
        if (!is_integer(e.number())) return std::nullopt;
        auto a = to_ratfun(e.arg());
        if (!a) return std::nullopt;
        Integer n = numerator(e.number());
        if (n < 0) {
            if (a->num.empty()) return std::nullopt;
            std::swap(a->num, a->den);
            n = -n;
        }
        RatFun r{{Rational(1)}, {Rational(1)}};
        for (Integer i = 0; i < n; ++i) r = {poly_mul(r.num, a->num), poly_mul(r.den, a->den)};
        return reduce(r.num, r.den);
    }
    default: return std::nullopt;
    }
}

inline Expr poly_expr(const Poly& p) {
    std::vector<Expr> terms;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k] != 0) terms.push_back(Expr(p[k]) * pow(x_var, static_cast<long>(k)));
    return simplify(Expr::sum(terms));
}

}  // namespace detail

/// Reduced num/den form when e is a rational function of x; e itself otherwise.
inline Expr normalize_rational(const Expr& e) {
    const auto r = detail::to_ratfun(e);
    if (!r) return simplify(e);
    const Expr num = detail::poly_expr(r->num);
    if (r->den.size() == 1) return num;
    return simplify(num * pow(detail::poly_expr(r->den), -1));
}

}  // namespace densops
