#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "densops/expr.hpp"

namespace densops {

namespace detail {

// Distributing products over sums stops once a single product would produce
// more terms than this.
inline constexpr std::size_t kMaxExpandedTerms = 2048;

inline Expr make_sum(const std::vector<Expr>& terms);
inline Expr make_product(const std::vector<Expr>& factors);
inline Expr make_power(const Expr& base, const Rational& exponent);
inline Expr make_exp(const Expr& a);

// Heuristic x-degree, used only to order the terms of a sum for printing.
inline Rational degree(const Expr& e) {
    switch (e.kind()) {
    case Kind::Variable: return 1;
    case Kind::Power: return degree(e.arg()) * e.number();
    case Kind::Product: {
        Rational d = 0;
        for (const auto& f : e.args()) d += degree(f);
        return d;
    }
    default: return 0;
    }
}

inline std::pair<Rational, Expr> split_coefficient(const Expr& t) {
    if (t.kind() == Kind::Product && t.arg(0).is_constant()) {
        std::vector<Expr> rest(t.args().begin() + 1, t.args().end());
        return {t.arg(0).number(), Expr::product(std::move(rest))};
    }
    return {Rational(1), t};
}

inline Expr with_coefficient(const Rational& c, const Expr& rest) {
    if (c == 1) return rest;
    std::vector<Expr> f{Expr(c)};
    if (rest.kind() == Kind::Product)
        f.insert(f.end(), rest.args().begin(), rest.args().end());
    else
        f.push_back(rest);
    return Expr::product(std::move(f));
}

inline Expr make_sum(const std::vector<Expr>& terms) {
    std::map<Expr, Rational, ExprLess> acc;
    Rational constant = 0;
    std::vector<const Expr*> stack;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) stack.push_back(&*it);
    while (!stack.empty()) {
        const Expr& t = *stack.back();
        stack.pop_back();
        if (t.kind() == Kind::Sum) {
            for (auto it = t.args().rbegin(); it != t.args().rend(); ++it) stack.push_back(&*it);
        } else if (t.is_constant()) {
            constant += t.number();
        } else {
            auto [c, rest] = split_coefficient(t);
            acc[rest] += c;
        }
    }
    std::vector<std::pair<Rational, Expr>> ordered;
    for (const auto& [rest, c] : acc)
        if (c != 0) ordered.emplace_back(degree(rest), with_coefficient(c, rest));
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<Expr> out;
    out.reserve(ordered.size() + 1);
    for (auto& [d, t] : ordered) out.push_back(std::move(t));
    if (constant != 0 || out.empty()) out.emplace_back(constant);
    return Expr::sum(std::move(out));
}

// Multiplies out every sum factor, provided the result stays small.
inline std::optional<Expr> distribute(const Rational& coef, const std::vector<Expr>& factors) {
    std::size_t count = 1;
    bool any_sum = false;
    for (const auto& f : factors) {
        if (f.kind() == Kind::Sum) {
            any_sum = true;
            count *= f.args().size();
            if (count > kMaxExpandedTerms) return std::nullopt;
        }
    }
    if (!any_sum) return std::nullopt;
    std::vector<Expr> partial{Expr(coef)};
    for (const auto& f : factors) {
        std::vector<Expr> next;
        if (f.kind() == Kind::Sum) {
            for (const auto& p : partial)
                for (const auto& t : f.args()) next.push_back(Expr::product({p, t}));
        } else {
            for (const auto& p : partial) next.push_back(Expr::product({p, f}));
        }
        partial = std::move(next);
    }
    std::vector<Expr> terms;
    terms.reserve(partial.size());
    for (const auto& p : partial) terms.push_back(make_product({p}));
    return make_sum(terms);
}

inline Expr make_product(const std::vector<Expr>& factors) {
    Rational coef = 1;
    std::map<Expr, Rational, ExprLess> powers;
    std::vector<Expr> exp_args;  // exp(a) exp(b) = exp(a + b)
    std::vector<const Expr*> stack;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) stack.push_back(&*it);
    while (!stack.empty()) {
        const Expr& f = *stack.back();
        stack.pop_back();
        switch (f.kind()) {
        case Kind::Product:
            for (auto it = f.args().rbegin(); it != f.args().rend(); ++it) stack.push_back(&*it);
            break;
        case Kind::Constant:
            coef *= f.number();
            break;
        case Kind::Exp:
            exp_args.push_back(f.arg());
            break;
        case Kind::Power:
            if (f.arg().kind() == Kind::Exp)
                exp_args.push_back(make_product({Expr(f.number()), f.arg().arg()}));
            else
                powers[f.arg()] += f.number();
            break;
        default:
            powers[f] += 1;
        }
    }
    if (coef == 0) return Expr(0);

    std::vector<Expr> out;
    bool refold = false;
    for (const auto& [base, r] : powers) {
        if (r == 0) continue;
        Expr p = make_power(base, r);
        const bool kept = p.kind() == Kind::Power ? identical(p.arg(), base) : identical(p, base);
        if (!kept) refold = true;
        out.push_back(std::move(p));
    }
    if (!exp_args.empty()) {
        Expr e = make_exp(make_sum(exp_args));
        if (e.kind() != Kind::Exp) refold = true;
        if (!e.is_one()) out.push_back(std::move(e));
    }
    if (refold) {
        out.emplace_back(coef);
        return make_product(out);
    }
    if (auto expanded = distribute(coef, out)) return *expanded;
    std::sort(out.begin(), out.end(), ExprLess{});
    if (out.empty()) return Expr(coef);
    if (coef != 1) out.insert(out.begin(), Expr(coef));
    return Expr::product(std::move(out));
}

inline Expr make_exp(const Expr& a) {
    if (a.is_zero()) return Expr(1);
    if (a.kind() == Kind::Ln) return a.arg();
    return Expr::exp(a);
}

inline Expr make_ln(const Expr& a) {
    if (a.is_one()) return Expr(0);
    if (a.kind() == Kind::Exp) return a.arg();
    return Expr::ln(a);
}

inline Expr make_power(const Expr& base, const Rational& r) {
    if (r == 0) return Expr(1);
    if (r == 1) return base;
    switch (base.kind()) {
    case Kind::Constant:
        if (base.is_one()) return Expr(1);
        if (auto v = exact_power(base.number(), r)) return Expr(*v);
        return Expr::power(base, r);
    case Kind::Power:
        // (b^s)^r = b^(s r) on the real branch unless an integer s hides the sign of b.
        if (is_integer(r) || !is_integer(base.number()))
            return make_power(base.arg(), base.number() * r);
        return Expr::power(base, r);
    case Kind::Product: {
        if (is_integer(r)) {
            std::vector<Expr> f;
            for (const auto& a : base.args()) f.push_back(make_power(a, r));
            return make_product(f);
        }
        auto [c, rest] = split_coefficient(base);
        if (c > 0 && c != 1) return make_product({make_power(Expr(c), r), Expr::power(rest, r)});
        return Expr::power(base, r);
    }
    case Kind::Sum:
        if (is_integer(r) && r > 1 && r <= 8) {
            Expr acc = base;
            const int n = r.convert_to<int>();
            for (int i = 1; i < n; ++i) {
                auto next = distribute(Rational(1), {acc, base});
                if (!next) return Expr::power(base, r);
                acc = *next;
            }
            return acc;
        }
        return Expr::power(base, r);
    case Kind::Exp:
        return make_exp(make_product({Expr(r), base.arg()}));
    default:
        return Expr::power(base, r);
    }
}

}  // namespace detail

/// Best-effort normal form: flattens sums and products, folds constants,
/// collects like terms, merges powers of a common base and multiplies out
/// products of sums. Not canonical; value-preserving wherever both sides are
/// defined on the real branch.
inline Expr simplify(const Expr& e) {
    using namespace detail;
    switch (e.kind()) {
    case Kind::Constant:
    case Kind::Variable:
    case Kind::Symbol:
        return e;
    case Kind::Sum: {
        std::vector<Expr> t;
        t.reserve(e.args().size());
        for (const auto& a : e.args()) t.push_back(simplify(a));
        return make_sum(t);
    }
    case Kind::Product: {
        std::vector<Expr> f;
        f.reserve(e.args().size());
        for (const auto& a : e.args()) f.push_back(simplify(a));
        return make_product(f);
    }
    case Kind::Quotient:
        return make_product({simplify(e.arg(0)), make_power(simplify(e.arg(1)), -1)});
    case Kind::Power:
        return make_power(simplify(e.arg()), e.number());
    case Kind::Neg:
        return make_product({Expr(-1), simplify(e.arg())});
    case Kind::Ln:
        return make_ln(simplify(e.arg()));
    case Kind::Exp:
        return make_exp(simplify(e.arg()));
    }
    return e;
}

/// True when simplify() reduces the expression to the constant 0.
inline bool simplifies_to_zero(const Expr& e) { return simplify(e).is_zero(); }

}  // namespace densops
