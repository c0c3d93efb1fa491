#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "densops/error.hpp"
#include "densops/expr.hpp"

namespace densops {

/// Concrete syntax shared by the expression grammar and the operator DSL:
///
///   expr     := term (('+'|'-') term)*
///   term     := unary (('*'|'/') unary)*
///   unary    := '-' unary | power
///   power    := atom ('^' exponent)?
///   exponent := rational | '-' rational | '(' '-'? rational ')'
///   rational := integer ('/' positive-integer)?
///   atom     := number | ident | ('ln'|'exp') '(' expr ')' | '(' expr ')'
///
/// Unary minus binds looser than '^', so -x^2 reads as -(x^2).
struct Syntax {
    enum class Type { Number, Ident, Call, Sum, Product, Quotient, Power, Neg };

    Type type;
    std::size_t offset = 0;
    Rational value;    // Number literal, or Power exponent
    std::string name;  // Ident or Call
    std::vector<Syntax> children;
};

namespace detail {

class SyntaxParser {
public:
    explicit SyntaxParser(std::string_view text) : text_(text) {}

    Syntax parse() {
        skip_space();
        if (pos_ == text_.size()) throw SyntaxError(pos_, "empty input");
        Syntax s = parse_expr();
        skip_space();
        if (pos_ != text_.size())
            throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
        return s;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size())
                throw SyntaxError(pos_, std::string("expected '") + c + "' before end of input");
            throw SyntaxError(pos_, std::string("expected '") + c + "', found '" + text_[pos_] + "'");
        }
    }

    bool peek_digit() const {
        return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
    }

    Integer read_integer() {
        skip_space();
        if (!peek_digit()) throw SyntaxError(pos_, "expected an integer");
        const std::size_t start = pos_;
        while (peek_digit()) ++pos_;
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    Syntax parse_expr() {
        skip_space();
        const std::size_t start = pos_;
        std::vector<Syntax> terms{parse_term()};
        while (true) {
            skip_space();
            const std::size_t at = pos_;
            if (accept('+')) {
                terms.push_back(parse_term());
            } else if (accept('-')) {
                Syntax t = parse_term();
                terms.push_back(Syntax{Syntax::Type::Neg, at, {}, {}, {std::move(t)}});
            } else {
                break;
            }
        }
        if (terms.size() == 1) return std::move(terms.front());
        return Syntax{Syntax::Type::Sum, start, {}, {}, std::move(terms)};
    }

    Syntax parse_term() {
        skip_space();
        const std::size_t start = pos_;
        Syntax cur = parse_unary();
        bool open_product = false;  // cur is a product built by this term
        while (true) {
            skip_space();
            if (accept('*')) {
                Syntax rhs = parse_unary();
                if (open_product) {
                    cur.children.push_back(std::move(rhs));
                } else {
                    Syntax p{Syntax::Type::Product, start, {}, {}, {}};
                    p.children.push_back(std::move(cur));
                    p.children.push_back(std::move(rhs));
                    cur = std::move(p);
                    open_product = true;
                }
            } else if (accept('/')) {
                Syntax rhs = parse_unary();
                Syntax q{Syntax::Type::Quotient, start, {}, {}, {}};
                q.children.push_back(std::move(cur));
                q.children.push_back(std::move(rhs));
                cur = std::move(q);
                open_product = false;
            } else {
                return cur;
            }
        }
    }

    Syntax parse_unary() {
        skip_space();
        const std::size_t at = pos_;
        if (accept('-')) {
            Syntax inner = parse_unary();
            return Syntax{Syntax::Type::Neg, at, {}, {}, {std::move(inner)}};
        }
        return parse_power();
    }

    Rational parse_exponent() {
        skip_space();
        const bool paren = accept('(');
        const bool neg = accept('-');
        Integer num = read_integer();
        Integer den = 1;
        // "x^2/3" is the exponent 2/3; a '/' not followed by a digit divides.
        const std::size_t save = pos_;
        if (accept('/')) {
            skip_space();
            if (peek_digit()) {
                den = read_integer();
                if (den == 0) throw SyntaxError(pos_, "zero denominator in exponent");
            } else {
                pos_ = save;
            }
        }
        if (paren) expect(')');
        Rational r(num, den);
        return neg ? Rational(-r) : r;
    }

    Syntax parse_power() {
        Syntax base = parse_atom();
        skip_space();
        const std::size_t at = pos_;
        if (accept('^')) {
            Rational e = parse_exponent();
            Syntax p{Syntax::Type::Power, at, std::move(e), {}, {}};
            p.children.push_back(std::move(base));
            return p;
        }
        return base;
    }

    Syntax parse_atom() {
        skip_space();
        const std::size_t at = pos_;
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of input");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.'))
                ++end;
            auto v = parse_rational(text_.substr(pos_, end - pos_));
            if (!v) throw SyntaxError(pos_, "malformed number");
            pos_ = end;
            return Syntax{Syntax::Type::Number, at, *v, {}, {}};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            std::string name(text_.substr(pos_, end - pos_));
            pos_ = end;
            skip_space();
            const bool call = pos_ < text_.size() && text_[pos_] == '(';
            if (name == "ln" || name == "exp") {
                if (!call) throw SyntaxError(pos_, "expected '(' after " + name);
                expect('(');
                Syntax arg = parse_expr();
                expect(')');
                return Syntax{Syntax::Type::Call, at, {}, std::move(name), {std::move(arg)}};
            }
            if (call && name != "x") throw UnknownIdentifier(at, name);
            return Syntax{Syntax::Type::Ident, at, {}, std::move(name), {}};
        }
        if (accept('(')) {
            Syntax inner = parse_expr();
            expect(')');
            return inner;
        }
        throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Syntax parse_syntax(std::string_view text) { return detail::SyntaxParser(text).parse(); }

struct ParseOptions {
    /// Identifiers replaced by a given expression.
    std::map<std::string, Expr, std::less<>> bindings;
    /// When false, identifiers other than x and the bound names are errors.
    bool allow_free_symbols = true;
};

namespace detail {

inline Expr syntax_to_expr(const Syntax& s, const ParseOptions& opts) {
    switch (s.type) {
    case Syntax::Type::Number: return Expr(s.value);
    case Syntax::Type::Ident: {
        if (s.name == "x") return Expr::variable();
        if (auto it = opts.bindings.find(s.name); it != opts.bindings.end()) return it->second;
        if (!opts.allow_free_symbols) throw UnknownIdentifier(s.offset, s.name);
        return Expr::symbol(s.name);
    }
    case Syntax::Type::Call: {
        Expr a = syntax_to_expr(s.children.front(), opts);
        return s.name == "ln" ? Expr::ln(a) : Expr::exp(a);
    }
    case Syntax::Type::Sum:
    case Syntax::Type::Product: {
        std::vector<Expr> parts;
        for (const auto& c : s.children) parts.push_back(syntax_to_expr(c, opts));
        return s.type == Syntax::Type::Sum ? Expr::sum(std::move(parts))
                                           : Expr::product(std::move(parts));
    }
    case Syntax::Type::Quotient:
        return Expr::quotient(syntax_to_expr(s.children[0], opts), syntax_to_expr(s.children[1], opts));
    case Syntax::Type::Power:
        return Expr::power(syntax_to_expr(s.children.front(), opts), s.value);
    case Syntax::Type::Neg:
        return Expr::neg(syntax_to_expr(s.children.front(), opts));
    }
    return Expr(0);
}

}  // namespace detail

/// Parses the expression grammar into an unsimplified tree.
inline Expr parse_expr(std::string_view text, const ParseOptions& opts = {}) {
    return detail::syntax_to_expr(parse_syntax(text), opts);
}

}  // namespace densops
