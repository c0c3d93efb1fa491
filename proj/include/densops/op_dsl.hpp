#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "densops/densop.hpp"
#include "densops/parser.hpp"

namespace densops {

/// A possibly inhomogeneous operator: homogeneous components keyed by weight.
/// Components are never zero.
using OpSum = std::map<Rational, DensOp>;

namespace detail {

inline void op_sum_add(OpSum& acc, const DensOp& op) {
    if (op.is_zero()) return;
    auto it = acc.find(op.weight());
    if (it == acc.end()) {
        acc.emplace(op.weight(), op);
        return;
    }
    it->second = add(it->second, op);
    if (it->second.is_zero()) acc.erase(it);
}

inline OpSum op_sum_compose(const OpSum& a, const OpSum& b) {
    OpSum r;
    for (const auto& [wa, oa] : a)
        for (const auto& [wb, ob] : b) op_sum_add(r, multiply(oa, ob));
    return r;
}

inline OpSum op_sum_of(const DensOp& op) {
    OpSum r;
    op_sum_add(r, op);
    return r;
}

// The multiplication-by-f(x) content of a value, if it is one.
inline std::optional<Expr> as_function(const OpSum& v) {
    if (v.empty()) return Expr(0);
    if (v.size() != 1 || v.begin()->first != 0) return std::nullopt;
    const DensOp& op = v.begin()->second;
    if (op.coefficients().size() != 1 || op.coefficients().begin()->first != Monomial{0, 0})
        return std::nullopt;
    return op.coefficients().begin()->second;
}

inline Expr require_function(const OpSum& v, const Syntax& at, const char* what) {
    if (auto f = as_function(v)) return *f;
    throw NotAFunction("offset " + std::to_string(at.offset) + ": " + what +
                       " requires a function of x, not an operator");
}

inline OpSum syntax_to_op(const Syntax& s, const ParseOptions& opts) {
    using T = Syntax::Type;
    switch (s.type) {
    case T::Number: return op_sum_of(DensOp::function(Expr(s.value)));
    case T::Ident:
        if (s.name == "t") return op_sum_of(DensOp::t_power(1));
        if (s.name == "w") return op_sum_of(DensOp::weight_operator());
        if (s.name == "d") return op_sum_of(DensOp::derivative());
        return op_sum_of(DensOp::function(syntax_to_expr(s, opts)));
    case T::Call: {
        const Expr a = require_function(syntax_to_op(s.children.front(), opts), s, s.name.c_str());
        return op_sum_of(DensOp::function(s.name == "ln" ? Expr::ln(a) : Expr::exp(a)));
    }
    case T::Sum: {
        OpSum r;
        for (const auto& c : s.children)
            for (const auto& [w, op] : syntax_to_op(c, opts)) op_sum_add(r, op);
        return r;
    }
    case T::Neg: {
        OpSum r;
        for (const auto& [w, op] : syntax_to_op(s.children.front(), opts)) op_sum_add(r, negate(op));
        return r;
    }
    case T::Product: {
        OpSum r = op_sum_of(DensOp::identity());
        for (const auto& c : s.children) r = op_sum_compose(r, syntax_to_op(c, opts));
        return r;
    }
    case T::Quotient: {
        const OpSum num = syntax_to_op(s.children[0], opts);
        const Expr den = require_function(syntax_to_op(s.children[1], opts), s, "division");
        return op_sum_compose(num, op_sum_of(DensOp::function(Expr::power(den, -1))));
    }
    case T::Power: {
        const Syntax& base = s.children.front();
        if (base.type == T::Ident && base.name == "t") return op_sum_of(DensOp::t_power(s.value));
        const OpSum b = syntax_to_op(base, opts);
        if (auto f = as_function(b)) return op_sum_of(DensOp::function(Expr::power(*f, s.value)));
        if (!is_integer(s.value) || s.value < 0)
            throw NotAFunction("offset " + std::to_string(s.offset) +
                               ": operators only take non-negative integer powers");
        OpSum r = op_sum_of(DensOp::identity());
        for (int i = 0; i < s.value.convert_to<int>(); ++i) r = op_sum_compose(r, b);
        return r;
    }
    }
    return {};
}

// Coefficient as printed in front of w^p d^q.
inline std::string coefficient_prefix(const Expr& c, bool has_generators, bool& negative) {
    negative = is_negative_term(c);
    const Expr mag = negative ? simplify(negate_term(c)) : c;
    if (!has_generators) return to_string(mag);
    if (mag.is_one()) return "";
    return wrap(mag, kProduct) + "*";
}

}  // namespace detail

/// Parses the operator DSL: generators t, t^a, w, d, coefficient expressions
/// in x, '*' for composition, '+' and '-'.
inline OpSum parse_op_sum(std::string_view text, const ParseOptions& opts = {}) {
    return detail::syntax_to_op(parse_syntax(text), opts);
}

/// Parses a homogeneous operator; throws WeightMismatch for mixed weights.
inline DensOp parse_op(std::string_view text, const ParseOptions& opts = {}) {
    const OpSum s = parse_op_sum(text, opts);
    if (s.empty()) return DensOp::zero();
    if (s.size() > 1) {
        std::string ws;
        for (const auto& [w, op] : s) ws += (ws.empty() ? "" : ", ") + to_string(w);
        throw WeightMismatch("operator is not homogeneous (weights " + ws + ")");
    }
    return s.begin()->second;
}

/// The normal-ordered body sum a_pq w^p d^q, monomials in ascending (p, q).
inline std::string body_to_string(const DensOp& op) {
    if (op.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : op.coefficients()) {
        std::string gens;
        auto push = [&](const char* g, unsigned n) {
            if (n == 0) return;
            if (!gens.empty()) gens += "*";
            gens += g;
            if (n > 1) gens += "^" + std::to_string(n);
        };
        push("w", m.p);
        push("d", m.q);
        bool negative = false;
        const std::string term = detail::coefficient_prefix(c, !gens.empty(), negative) + gens;
        if (out.empty())
            out = (negative ? "-" : "") + term;
        else
            out += (negative ? " - " : " + ") + term;
    }
    return out;
}

/// Full DSL form, "t^mu * (body)" or just the body at weight 0.
inline std::string to_string(const DensOp& op) {
    const std::string body = body_to_string(op);
    if (op.weight() == 0 || op.is_zero()) return body;
    std::string t = op.weight() == 1 ? "t" : "t^" + (is_integer(op.weight()) && op.weight() > 0
                                                         ? to_string(op.weight())
                                                         : "(" + to_string(op.weight()) + ")");
    return t + " * (" + body + ")";
}

/// Ordinary operator sum c_q d^q in ascending q.
inline std::string to_string(const PencilSlice& s) {
    DensOp as_op(0);
    for (const auto& [q, c] : s.coeffs) as_op.accumulate({0, q}, c);
    return body_to_string(as_op);
}

}  // namespace densops
