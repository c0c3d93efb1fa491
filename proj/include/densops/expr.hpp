#pragma once

#include <cctype>
#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "densops/rational.hpp"

namespace densops {

/// Node kinds of a scalar expression in the single variable x.
enum class Kind : std::uint8_t { Constant, Variable, Symbol, Sum, Product, Quotient, Power, Ln, Exp, Neg };

class Expr;

namespace detail {
struct Node {
    Kind kind;
    Rational number;  // Constant value, or Power exponent
    std::string name;  // Symbol name
    std::vector<Expr> args;
};
}  // namespace detail

/// Immutable expression tree, shared by value. Building an Expr never
/// simplifies; see simplify().
class Expr {
public:
    Expr() : Expr(Rational(0)) {}
    Expr(int value) : Expr(Rational(value)) {}
    Expr(Rational value) : node_(make_node(Kind::Constant, std::move(value))) {}

    static Expr constant(Rational value) { return Expr(std::move(value)); }

    static Expr variable() {
        static const std::shared_ptr<const detail::Node> x = make_node(Kind::Variable);
        return Expr(x);
    }

    static Expr symbol(std::string name) {
        return Expr(make_node(Kind::Symbol, Rational(0), std::move(name)));
    }

    static Expr sum(std::vector<Expr> terms) {
        if (terms.empty()) return Expr(0);
        if (terms.size() == 1) return terms.front();
        return Expr(make_node(Kind::Sum, Rational(0), {}, std::move(terms)));
    }

    static Expr product(std::vector<Expr> factors) {
        if (factors.empty()) return Expr(1);
        if (factors.size() == 1) return factors.front();
        return Expr(make_node(Kind::Product, Rational(0), {}, std::move(factors)));
    }

    static Expr quotient(Expr num, Expr den) {
        return Expr(make_node(Kind::Quotient, Rational(0), {}, {std::move(num), std::move(den)}));
    }

    static Expr power(Expr base, Rational exponent) {
        return Expr(make_node(Kind::Power, std::move(exponent), {}, {std::move(base)}));
    }

    static Expr ln(Expr arg) { return Expr(make_node(Kind::Ln, Rational(0), {}, {std::move(arg)})); }
    static Expr exp(Expr arg) { return Expr(make_node(Kind::Exp, Rational(0), {}, {std::move(arg)})); }
    static Expr neg(Expr arg) { return Expr(make_node(Kind::Neg, Rational(0), {}, {std::move(arg)})); }

    Kind kind() const noexcept { return node_->kind; }
    /// Constant value or Power exponent.
    const Rational& number() const noexcept { return node_->number; }
    const std::string& name() const noexcept { return node_->name; }
    std::span<const Expr> args() const noexcept { return node_->args; }
    const Expr& arg(std::size_t i = 0) const { return node_->args.at(i); }

    bool is_constant() const noexcept { return kind() == Kind::Constant; }
    bool is_constant(const Rational& v) const { return is_constant() && number() == v; }
    bool is_zero() const { return is_constant(Rational(0)); }
    bool is_one() const { return is_constant(Rational(1)); }

    bool same_node(const Expr& other) const noexcept { return node_ == other.node_; }

private:
    explicit Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}

    static std::shared_ptr<const detail::Node> make_node(Kind kind, Rational number = 0,
                                                         std::string name = {},
                                                         std::vector<Expr> args = {}) {
        return std::make_shared<const detail::Node>(
            detail::Node{kind, std::move(number), std::move(name), std::move(args)});
    }

    std::shared_ptr<const detail::Node> node_;
};

inline const Expr x_var = Expr::variable();

// Raw (unsimplified) arithmetic.
inline Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, Expr::neg(b)}); }
inline Expr operator-(const Expr& a) { return Expr::neg(a); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return Expr::quotient(a, b); }
inline Expr pow(const Expr& base, const Rational& exponent) { return Expr::power(base, exponent); }
inline Expr ln(const Expr& a) { return Expr::ln(a); }
inline Expr exp(const Expr& a) { return Expr::exp(a); }

/// Total structural order; 0 iff the trees are identical.
inline int compare(const Expr& a, const Expr& b) {
    if (a.same_node(b)) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
    case Kind::Constant:
        return a.number() == b.number() ? 0 : (a.number() < b.number() ? -1 : 1);
    case Kind::Variable:
        return 0;
    case Kind::Symbol:
        return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case Kind::Power:
        if (int c = compare(a.arg(), b.arg()); c != 0) return c;
        return a.number() == b.number() ? 0 : (a.number() < b.number() ? -1 : 1);
    default:
        break;
    }
    const auto xs = a.args(), ys = b.args();
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
        if (int c = compare(xs[i], ys[i]); c != 0) return c;
    if (xs.size() == ys.size()) return 0;
    return xs.size() < ys.size() ? -1 : 1;
}

inline bool identical(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

/// True when the expression mentions x.
inline bool depends_on_x(const Expr& e) {
    if (e.kind() == Kind::Variable) return true;
    for (const auto& a : e.args())
        if (depends_on_x(a)) return true;
    return false;
}

inline void collect_symbols(const Expr& e, std::vector<std::string>& out) {
    if (e.kind() == Kind::Symbol) {
        for (const auto& n : out)
            if (n == e.name()) return;
        out.push_back(e.name());
        return;
    }
    for (const auto& a : e.args()) collect_symbols(a, out);
}

// ---------------------------------------------------------------------------
// Pretty-printer. Output is accepted by parse_expr().

namespace detail {

enum Prec : int { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

inline bool is_negative_term(const Expr& e) {
    switch (e.kind()) {
    case Kind::Constant: return e.number() < 0;
    case Kind::Neg: return true;
    case Kind::Product: return e.arg(0).is_constant() && e.arg(0).number() < 0;
    default: return false;
    }
}

inline Expr negate_term(const Expr& e) {
    switch (e.kind()) {
    case Kind::Constant: return Expr(Rational(-e.number()));
    case Kind::Neg: return e.arg();
    case Kind::Product: {
        std::vector<Expr> rest(e.args().begin() + 1, e.args().end());
        const Rational c = -e.arg(0).number();
        if (c != 1) rest.insert(rest.begin(), Expr(c));
        return Expr::product(std::move(rest));
    }
    default: return Expr::neg(e);
    }
}

inline std::string print(const Expr& e, int& prec);

inline std::string wrap(const Expr& e, int min_prec) {
    int p = 0;
    std::string s = print(e, p);
    return p < min_prec ? "(" + s + ")" : s;
}

// "x^2/3" would read back as x^(2/3); parenthesize a trailing integer exponent.
inline std::string guard_exponent(const std::string& s) {
    std::size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    return i < s.size() && i > 0 && s[i - 1] == '^' ? "(" + s + ")" : s;
}

inline std::string print_product(const Expr& e, int& prec) {
    Rational coef = 1;
    std::span<const Expr> factors = e.args();
    if (!factors.empty() && factors.front().is_constant()) {
        coef = factors.front().number();
        factors = factors.subspan(1);
    }
    std::vector<std::string> num, den;
    const Rational mag = coef < 0 ? Rational(-coef) : coef;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const Expr& f = factors[i];
        if (f.kind() == Kind::Power && f.number() < 0) {
            const Rational r = -f.number();
            den.push_back(r == 1 ? wrap(f.arg(), kPower) : wrap(Expr::power(f.arg(), r), kPower));
        } else {
            // Nested Quotient/Product factors are parenthesized to keep the tree shape;
            // a leading negation reads back the same without them.
            const bool lead = num.empty() && coef == 1;
            num.push_back(wrap(f, f.kind() == Kind::Neg && !lead ? kAtom : kUnary));
        }
    }
    if (numerator(mag) != 1 || num.empty()) num.insert(num.begin(), numerator(mag).str());
    if (denominator(mag) != 1) den.insert(den.begin(), denominator(mag).str());

    std::string s = coef < 0 ? "-" : "";
    for (std::size_t i = 0; i < num.size(); ++i) s += (i ? "*" : "") + num[i];
    if (!den.empty()) {
        s = guard_exponent(s);
        std::string d;
        for (std::size_t i = 0; i < den.size(); ++i) d += (i ? "*" : "") + den[i];
        s += "/" + (den.size() == 1 ? d : "(" + d + ")");
    }
    prec = kProduct;
    return s;
}

inline std::string print(const Expr& e, int& prec) {
    switch (e.kind()) {
    case Kind::Constant: {
        const Rational& v = e.number();
        prec = !is_integer(v) ? kProduct : (v < 0 ? kUnary : kAtom);
        return to_string(v);
    }
    case Kind::Variable: prec = kAtom; return "x";
    case Kind::Symbol: prec = kAtom; return e.name();
    case Kind::Ln: prec = kAtom; return "ln(" + wrap(e.arg(), kSum) + ")";
    case Kind::Exp: prec = kAtom; return "exp(" + wrap(e.arg(), kSum) + ")";
    case Kind::Neg: prec = kUnary; return "-" + wrap(e.arg(), kUnary);
    case Kind::Power: {
        const Rational& r = e.number();
        if (r < 0) {
            prec = kProduct;
            return "1/" + (r == -1 ? wrap(e.arg(), kPower) : wrap(Expr::power(e.arg(), -r), kPower));
        }
        prec = kPower;
        std::string s = wrap(e.arg(), kAtom) + "^";
        if (is_integer(r) && r >= 0) return s + to_string(r);
        return s + "(" + to_string(r) + ")";
    }
    case Kind::Quotient:
        prec = kProduct;
        return guard_exponent(wrap(e.arg(0), kProduct)) + "/" + wrap(e.arg(1), kPower);
    case Kind::Product: return print_product(e, prec);
    case Kind::Sum: {
        prec = kSum;
        std::string s;
        bool first = true;
        for (const auto& t : e.args()) {
            if (first) {
                s = wrap(t, kProduct);
                first = false;
            } else if (is_negative_term(t)) {
                s += " - " + wrap(negate_term(t), kProduct);
            } else {
                s += " + " + wrap(t, kProduct);
            }
        }
        return s;
    }
    }
    return {};
}

}  // namespace detail

/// Pretty-prints in the expression grammar.
inline std::string to_string(const Expr& e) {
    int prec = 0;
    return detail::print(e, prec);
}

}  // namespace densops
