#pragma once

#include <map>
#include <utility>
#include <variant>
#include <vector>

#include "densops/calculus.hpp"
#include "densops/equality.hpp"
#include "densops/error.hpp"
#include "densops/expr.hpp"
#include "densops/simplify.hpp"

namespace densops {

/// Index of the normal-ordered monomial w^p d^q.
struct Monomial {
    unsigned p = 0;  // power of the weight operator w
    unsigned q = 0;  // power of d = d/dx
    auto operator<=>(const Monomial&) const = default;
};

/// Homogeneous differential operator on the algebra of densities on the line,
/// held in normal order
///
///     t^weight * sum a_pq(x) w^p d^q
///
/// with t leftmost, then the coefficient, then powers of w, then powers of d.
/// Coefficients are kept simplified and exact zeros are dropped.
class DensOp {
public:
    using Coefficients = std::map<Monomial, Expr>;

    DensOp() = default;
    explicit DensOp(Rational weight) : weight_(std::move(weight)) {}
    DensOp(Rational weight, const Coefficients& coeffs) : weight_(std::move(weight)) {
        for (const auto& [m, c] : coeffs) accumulate(m, c);
    }

    static DensOp zero(Rational weight = 0) { return DensOp(std::move(weight)); }
    static DensOp identity() { return function(Expr(1)); }
    /// Multiplication by f(x).
    static DensOp function(const Expr& f) { return DensOp(0, {{{0, 0}, f}}); }
    /// Multiplication by t^a.
    static DensOp t_power(Rational a) { return DensOp(std::move(a), {{{0, 0}, Expr(1)}}); }
    static DensOp weight_operator() { return DensOp(0, {{{1, 0}, Expr(1)}}); }
    static DensOp derivative() { return DensOp(0, {{{0, 1}, Expr(1)}}); }
    static DensOp monomial(Rational weight, Monomial m, const Expr& coeff) {
        return DensOp(std::move(weight), {{m, coeff}});
    }

    const Rational& weight() const noexcept { return weight_; }
    const Coefficients& coefficients() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }

    /// Coefficient of w^p d^q (0 when absent).
    Expr coefficient(unsigned p, unsigned q) const {
        auto it = coeffs_.find({p, q});
        return it == coeffs_.end() ? Expr(0) : it->second;
    }

    /// max(p + q) over stored monomials; 0 for the zero operator.
    unsigned order() const {
        unsigned n = 0;
        for (const auto& [m, c] : coeffs_) n = std::max(n, m.p + m.q);
        return n;
    }

    /// Adds c * w^p d^q into the operator.
    void accumulate(Monomial m, const Expr& c) {
        auto it = coeffs_.find(m);
        Expr sum = it == coeffs_.end() ? simplify(c) : simplify(it->second + c);
        if (sum.is_zero()) {
            if (it != coeffs_.end()) coeffs_.erase(it);
        } else if (it == coeffs_.end()) {
            coeffs_.emplace(m, std::move(sum));
        } else {
            it->second = std::move(sum);
        }
    }

private:
    Rational weight_ = 0;
    Coefficients coeffs_;
};

/// rho(x) |dx|^weight.
struct Density {
    Rational weight;
    Expr profile;
};

/// Restriction of a DensOp to Dens_{weight_in}: an ordinary operator
/// sum_q c_q(x) d^q mapping weight_in to weight_out.
struct PencilSlice {
    Rational weight_in;
    Rational weight_out;
    std::map<unsigned, Expr> coeffs;

    Expr coefficient(unsigned q) const {
        auto it = coeffs.find(q);
        return it == coeffs.end() ? Expr(0) : it->second;
    }
};

// ---------------------------------------------------------------------------
// Arithmetic

inline DensOp add(const DensOp& a, const DensOp& b) {
    if (a.is_zero() && a.weight() != b.weight()) return b;
    if (b.is_zero() && a.weight() != b.weight()) return a;
    if (a.weight() != b.weight())
        throw WeightMismatch("cannot add operators of weights " + to_string(a.weight()) + " and " +
                             to_string(b.weight()));
    DensOp r = a;
    for (const auto& [m, c] : b.coefficients()) r.accumulate(m, c);
    return r;
}

/// Left multiplication by a function (coefficients commute with t).
inline DensOp scale(const Expr& f, const DensOp& a) {
    DensOp r(a.weight());
    for (const auto& [m, c] : a.coefficients()) r.accumulate(m, f * c);
    return r;
}

inline DensOp negate(const DensOp& a) { return scale(Expr(-1), a); }

inline DensOp subtract(const DensOp& a, const DensOp& b) { return add(a, negate(b)); }

/// Normal-ordered composition a∘b, using
///   w t^m = t^m (w + m),   d f = f d + f',   w f = f w,   w d = d w,   d t = t d.
inline DensOp multiply(const DensOp& a, const DensOp& b) {
    const Rational& shift = b.weight();
    unsigned max_q = 0;
    for (const auto& [m, c] : a.coefficients()) max_q = std::max(max_q, m.q);

    // Derivatives b_rs^(k) for k <= max_q.
    std::map<Monomial, std::vector<Expr>> derivs;
    for (const auto& [m, c] : b.coefficients()) {
        std::vector<Expr> d{c};
        for (unsigned k = 1; k <= max_q; ++k) d.push_back(differentiate(d.back()));
        derivs.emplace(m, std::move(d));
    }

    std::map<Monomial, std::vector<Expr>> terms;
    for (const auto& [ma, ca] : a.coefficients()) {
        for (const auto& [mb, db] : derivs) {
            for (unsigned k = 0; k <= ma.q; ++k) {
                if (db[k].is_zero()) continue;
                const Rational ck = binomial(ma.q, k);
                // (w + shift)^p = sum_j C(p, j) shift^(p-j) w^j
                for (unsigned j = 0; j <= ma.p; ++j) {
                    const Rational cj = binomial(ma.p, j) * rational_pow(shift, ma.p - j);
                    if (cj == 0) continue;
                    const Monomial out{j + mb.p, ma.q - k + mb.q};
                    terms[out].push_back(Expr::product({Expr(ck * cj), ca, db[k]}));
                }
            }
        }
    }
    DensOp r(a.weight() + b.weight());
    for (auto& [m, parts] : terms) r.accumulate(m, Expr::sum(std::move(parts)));
    return r;
}

/// Composition of a sequence, left to right.
inline DensOp multiply(std::initializer_list<DensOp> ops) {
    DensOp r = DensOp::identity();
    for (const auto& o : ops) r = multiply(r, o);
    return r;
}

/// Non-negative integer power under composition.
inline DensOp power(const DensOp& a, unsigned n) {
    DensOp r = DensOp::identity();
    for (unsigned i = 0; i < n; ++i) r = multiply(r, a);
    return r;
}

inline DensOp commutator(const DensOp& a, const DensOp& b) {
    return subtract(multiply(a, b), multiply(b, a));
}

/// Formal adjoint: the anti-automorphism with w* = 1 - w, d* = -d, t* = t,
/// f(x)* = f(x). Each monomial t^mu a w^p d^q maps to (-d)^q (1-w)^p a t^mu.
inline DensOp adjoint(const DensOp& a) {
    unsigned max_p = 0, max_q = 0;
    for (const auto& [m, c] : a.coefficients()) {
        max_p = std::max(max_p, m.p);
        max_q = std::max(max_q, m.q);
    }
    // (1 - w)^p by the binomial theorem; (-d)^q directly.
    std::vector<DensOp> one_minus_w, minus_d;
    for (unsigned p = 0; p <= max_p; ++p) {
        DensOp t(0);
        for (unsigned j = 0; j <= p; ++j)
            t.accumulate({j, 0}, Expr(binomial(p, j) * (j % 2 ? -1 : 1)));
        one_minus_w.push_back(std::move(t));
    }
    for (unsigned q = 0; q <= max_q; ++q)
        minus_d.push_back(DensOp::monomial(0, {0, q}, Expr(q % 2 ? -1 : 1)));

    const DensOp t_mu = DensOp::t_power(a.weight());
    DensOp r(a.weight());
    for (const auto& [m, c] : a.coefficients()) {
        DensOp term = multiply(multiply(minus_d[m.q], one_minus_w[m.p]),
                               multiply(DensOp::function(c), t_mu));
        r = add(r, term);
    }
    return r;
}

/// Operator pencil at weight lambda: substitutes w -> lambda.
inline PencilSlice restrict(const DensOp& a, const Rational& lambda) {
    PencilSlice s{lambda, lambda + a.weight(), {}};
    std::map<unsigned, std::vector<Expr>> parts;
    for (const auto& [m, c] : a.coefficients())
        parts[m.q].push_back(Expr::product({Expr(rational_pow(lambda, m.p)), c}));
    for (auto& [q, p] : parts) {
        Expr v = simplify(Expr::sum(std::move(p)));
        if (!v.is_zero()) s.coeffs.emplace(q, std::move(v));
    }
    return s;
}

/// Applies an ordinary operator to a function profile.
inline Expr apply_slice(const PencilSlice& s, const Expr& f) {
    std::vector<Expr> terms;
    Expr d = f;
    unsigned k = 0;
    for (const auto& [q, c] : s.coeffs) {
        while (k < q) {
            d = differentiate(d);
            ++k;
        }
        terms.push_back(c * d);
    }
    return simplify(Expr::sum(std::move(terms)));
}

inline Density apply(const DensOp& a, const Density& rho) {
    const PencilSlice s = restrict(a, rho.weight);
    return Density{s.weight_out, apply_slice(s, rho.profile)};
}

/// Composition of ordinary operators (a after b) by the Leibniz rule.
inline PencilSlice compose(const PencilSlice& a, const PencilSlice& b) {
    if (a.weight_in != b.weight_out)
        throw WeightMismatch("slice weights do not chain: " + to_string(b.weight_out) + " vs " +
                             to_string(a.weight_in));
    std::map<unsigned, std::vector<Expr>> parts;
    for (const auto& [qa, ca] : a.coeffs) {
        for (const auto& [qb, cb] : b.coeffs) {
            Expr d = cb;
            for (unsigned k = 0; k <= qa; ++k) {
                if (k) d = differentiate(d);
                parts[qa - k + qb].push_back(Expr::product({Expr(binomial(qa, k)), ca, d}));
            }
        }
    }
    PencilSlice r{b.weight_in, a.weight_out, {}};
    for (auto& [q, p] : parts) {
        Expr v = simplify(Expr::sum(std::move(p)));
        if (!v.is_zero()) r.coeffs.emplace(q, std::move(v));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Words of generators

struct TPower {
    Rational exponent;
};
struct WeightGen {};
struct DerivGen {};
struct FunctionGen {
    Expr f;
};
using Generator = std::variant<TPower, WeightGen, DerivGen, FunctionGen>;

inline DensOp to_op(const Generator& g) {
    struct Visitor {
        DensOp operator()(const TPower& t) const { return DensOp::t_power(t.exponent); }
        DensOp operator()(const WeightGen&) const { return DensOp::weight_operator(); }
        DensOp operator()(const DerivGen&) const { return DensOp::derivative(); }
        DensOp operator()(const FunctionGen& f) const { return DensOp::function(f.f); }
    };
    return std::visit(Visitor{}, g);
}

/// Normal order of a composition word.
inline DensOp normal_order(const std::vector<Generator>& word) {
    DensOp r = DensOp::identity();
    for (const auto& g : word) r = multiply(r, to_op(g));
    return r;
}

// ---------------------------------------------------------------------------
// Comparison

/// Coefficientwise equality up to simplify(): every difference reduces to 0.
inline bool equal_exact(const DensOp& a, const DensOp& b) {
    if (a.weight() != b.weight()) return false;
    const DensOp d = subtract(a, b);
    return d.is_zero();
}

/// Coefficientwise probabilistic equality.
inline bool equal_probabilistic(const DensOp& a, const DensOp& b, const EqualityConfig& cfg = {}) {
    if (a.weight() != b.weight()) return false;
    std::map<Monomial, std::pair<Expr, Expr>> keys;
    for (const auto& [m, c] : a.coefficients()) keys[m].first = c;
    for (const auto& [m, c] : b.coefficients()) keys[m].second = c;
    for (const auto& [m, pair] : keys)
        if (!equal_probabilistic(pair.first, pair.second, cfg)) return false;
    return true;
}

inline bool equal_probabilistic(const PencilSlice& a, const PencilSlice& b,
                                const EqualityConfig& cfg = {}) {
    if (a.weight_in != b.weight_in || a.weight_out != b.weight_out) return false;
    std::map<unsigned, std::pair<Expr, Expr>> keys;
    for (const auto& [q, c] : a.coeffs) keys[q].first = c;
    for (const auto& [q, c] : b.coeffs) keys[q].second = c;
    for (const auto& [q, pair] : keys)
        if (!equal_probabilistic(pair.first, pair.second, cfg)) return false;
    return true;
}

}  // namespace densops
