#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "densops/expr.hpp"
#include "densops/simplify.hpp"

namespace densops {

namespace detail {

inline Expr derive_raw(const Expr& e) {
    switch (e.kind()) {
    case Kind::Constant:
    case Kind::Symbol:
        return Expr(0);
    case Kind::Variable:
        return Expr(1);
    case Kind::Sum: {
        std::vector<Expr> t;
        for (const auto& a : e.args()) t.push_back(derive_raw(a));
        return Expr::sum(std::move(t));
    }
    case Kind::Product: {
        // Leibniz over n factors.
        const auto f = e.args();
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (!depends_on_x(f[i])) continue;
            std::vector<Expr> p(f.begin(), f.end());
            p[i] = derive_raw(f[i]);
            terms.push_back(Expr::product(std::move(p)));
        }
        return Expr::sum(std::move(terms));
    }
    case Kind::Quotient: {
        const Expr& a = e.arg(0);
        const Expr& b = e.arg(1);
        return (derive_raw(a) * b - a * derive_raw(b)) / pow(b, 2);
    }
    case Kind::Power: {
        const Rational& r = e.number();
        return Expr(r) * pow(e.arg(), r - 1) * derive_raw(e.arg());
    }
    case Kind::Ln:
        return derive_raw(e.arg()) / e.arg();
    case Kind::Exp:
        return e * derive_raw(e.arg());
    case Kind::Neg:
        return -derive_raw(e.arg());
    }
    return Expr(0);
}

}  // namespace detail

/// d/dx, simplified.
inline Expr differentiate(const Expr& e) {
    if (!depends_on_x(e)) return Expr(0);
    return simplify(detail::derive_raw(e));
}

/// The n-th derivative.
inline Expr differentiate(const Expr& e, unsigned n) {
    Expr d = e;
    for (unsigned i = 0; i < n; ++i) d = differentiate(d);
    return d;
}

/// Replaces every x with `replacement`, then simplifies.
/// Replaces x without simplifying.
inline Expr substitute_raw(const Expr& e, const Expr& replacement) {
    std::function<Expr(const Expr&)> go = [&](const Expr& n) -> Expr {
        switch (n.kind()) {
        case Kind::Variable: return replacement;
        case Kind::Constant:
        case Kind::Symbol: return n;
        case Kind::Sum:
        case Kind::Product: {
            std::vector<Expr> a;
            for (const auto& c : n.args()) a.push_back(go(c));
            return n.kind() == Kind::Sum ? Expr::sum(std::move(a)) : Expr::product(std::move(a));
        }
        case Kind::Quotient: return Expr::quotient(go(n.arg(0)), go(n.arg(1)));
        case Kind::Power: return Expr::power(go(n.arg()), n.number());
        case Kind::Ln: return Expr::ln(go(n.arg()));
        case Kind::Exp: return Expr::exp(go(n.arg()));
        case Kind::Neg: return Expr::neg(go(n.arg()));
        }
        return n;
    };
    return go(e);
}

inline Expr substitute(const Expr& e, const Expr& replacement) { return simplify(substitute_raw(e, replacement)); }

/// Values for the opaque symbols of an expression.
using Bindings = std::map<std::string, double, std::less<>>;

/// Floating-point value at x = x0; nullopt (Undefined) on division by zero,
/// ln of a non-positive value, a non-integer power of a negative base, or any
/// non-finite intermediate. Throws std::invalid_argument for unbound symbols.
inline std::optional<double> evaluate(const Expr& e, double x0, const Bindings& symbols = {}) {
    using R = std::optional<double>;
    auto finite = [](double v) -> R { return std::isfinite(v) ? R(v) : std::nullopt; };
    switch (e.kind()) {
    case Kind::Constant: return to_double(e.number());
    case Kind::Variable: return x0;
    case Kind::Symbol: {
        auto it = symbols.find(e.name());
        if (it == symbols.end()) throw std::invalid_argument("unbound symbol '" + e.name() + "'");
        return it->second;
    }
    case Kind::Sum: {
        double s = 0;
        for (const auto& a : e.args()) {
            auto v = evaluate(a, x0, symbols);
            if (!v) return std::nullopt;
            s += *v;
        }
        return finite(s);
    }
    case Kind::Product: {
        double p = 1;
        for (const auto& a : e.args()) {
            auto v = evaluate(a, x0, symbols);
            if (!v) return std::nullopt;
            p *= *v;
        }
        return finite(p);
    }
    case Kind::Quotient: {
        auto a = evaluate(e.arg(0), x0, symbols);
        auto b = evaluate(e.arg(1), x0, symbols);
        if (!a || !b || *b == 0.0) return std::nullopt;
        return finite(*a / *b);
    }
    case Kind::Power: {
        auto b = evaluate(e.arg(), x0, symbols);
        if (!b) return std::nullopt;
        const Rational& r = e.number();
        if (is_integer(r)) {
            if (*b == 0.0 && r < 0) return std::nullopt;
            return finite(std::pow(*b, to_double(r)));
        }
        if (*b < 0) return std::nullopt;
        if (*b == 0.0) return r > 0 ? R(0.0) : std::nullopt;
        return finite(std::pow(*b, to_double(r)));
    }
    case Kind::Ln: {
        auto a = evaluate(e.arg(), x0, symbols);
        if (!a || *a <= 0) return std::nullopt;
        return std::log(*a);
    }
    case Kind::Exp: {
        auto a = evaluate(e.arg(), x0, symbols);
        if (!a) return std::nullopt;
        return finite(std::exp(*a));
    }
    case Kind::Neg: {
        auto a = evaluate(e.arg(), x0, symbols);
        if (!a) return std::nullopt;
        return -*a;
    }
    }
    return std::nullopt;
}

}  // namespace densops
