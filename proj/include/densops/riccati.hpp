#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "densops/densop.hpp"
#include "densops/equality.hpp"

namespace densops {

/// c0 + c1*w, an x-dependent function affine in the weight operator.
struct AffinePair {
    Expr constant;  // c0
    Expr slope;     // c1
};

/// L = t(d - alpha1 w - alpha0) ∘ t(d - beta1 w - beta0).
struct Complete {
    AffinePair alpha;
    AffinePair beta;
};

/// beta1 is forced but beta0 must solve a classical Riccati equation,
/// -b' = b^2 + potential, with beta0 = b - p0/2.
struct Degenerate {
    Expr beta1;
    Expr potential;
};

/// No factorization; residual is the defect of the last unsatisfied equation.
struct Obstructed {
    Expr residual;
};

using FactorizationOutcome = std::variant<Complete, Degenerate, Obstructed>;

enum class FactorTag { Complete, Degenerate, Obstructed };

inline FactorTag tag(const FactorizationOutcome& o) { return static_cast<FactorTag>(o.index()); }

inline const char* to_string(FactorTag t) {
    switch (t) {
    case FactorTag::Complete: return "complete";
    case FactorTag::Degenerate: return "degenerate";
    case FactorTag::Obstructed: return "obstructed";
    }
    return "";
}

/// Choice of square-root branch.
enum class Branch { Plus, Minus };

inline int sign_of(Branch b) { return b == Branch::Plus ? 1 : -1; }

/// Coefficients of L = t^2 (d^2 + (p1 w + p0) d + q2 w^2 + q1 w + q0).
struct SecondOrderData {
    Expr p1, p0, q2, q1, q0;
};

inline DensOp to_op(const SecondOrderData& d) {
    return DensOp(2, {{{0, 2}, Expr(1)},
                      {{1, 1}, d.p1},
                      {{0, 1}, d.p0},
                      {{2, 0}, d.q2},
                      {{1, 0}, d.q1},
                      {{0, 0}, d.q0}});
}

/// Reads the five coefficients off a monic weight-2 operator of the shape above.
inline SecondOrderData extract_coefficients(const DensOp& L, const EqualityConfig& cfg = {}) {
    std::string offending;
    auto flag = [&](const std::string& what) { offending += (offending.empty() ? "" : ", ") + what; };
    if (L.weight() != 2) flag("weight " + to_string(L.weight()) + " (expected 2)");
    for (const auto& [m, c] : L.coefficients()) {
        const bool allowed = (m.p == 0 && m.q <= 2) || (m.p == 1 && m.q <= 1) || (m.p == 2 && m.q == 0);
        if (!allowed) flag("(" + std::to_string(m.p) + "," + std::to_string(m.q) + ")");
    }
    const Expr lead = L.coefficient(0, 2);
    if (!lead.is_one() && !equal_probabilistic(lead, Expr(1), cfg)) flag("(0,2) leading coefficient not 1");
    if (!offending.empty()) throw ShapeMismatch("operator is not of the monic second-order shape: " + offending);
    return {L.coefficient(1, 1), L.coefficient(0, 1), L.coefficient(2, 0), L.coefficient(1, 0),
            L.coefficient(0, 0)};
}

/// alpha1 = -p1 - beta1, alpha0 = -p0 + p1 + beta1 - beta0.
inline AffinePair alpha_from_beta(const SecondOrderData& d, const AffinePair& beta) {
    return {simplify(-d.p0 + d.p1 + beta.slope - beta.constant), simplify(-d.p1 - beta.slope)};
}

/// t (d - c1 w - c0).
inline DensOp first_order_factor(const AffinePair& a) {
    return DensOp(1, {{{0, 1}, Expr(1)}, {{1, 0}, -a.slope}, {{0, 0}, -a.constant}});
}

inline DensOp recompose(const Complete& c) {
    return multiply(first_order_factor(c.alpha), first_order_factor(c.beta));
}

/// Solves the split Riccati system
///     0     = beta1^2 + p1 beta1 + q2
///    -beta1' = 2 beta0 beta1 + p0 beta1 + p1 beta0 + q1
///    -beta0' = beta0^2 + p0 beta0 + q0
/// on the chosen branch of the quadratic.
inline FactorizationOutcome factorize_second_order(const SecondOrderData& d, Branch branch = Branch::Plus,
                                                   const EqualityConfig& cfg = {}) {
    const Expr disc = simplify(d.p1 * d.p1 - Expr(4) * d.q2);
    if (is_zero_probabilistic(disc, cfg)) {
        const Expr beta1 = simplify(Expr(Rational(-1, 2)) * d.p1);
        const Expr defect = simplify(differentiate(beta1) + d.p0 * beta1 + d.q1);
        if (!is_zero_probabilistic(defect, cfg)) return Obstructed{defect};
        const Expr u = simplify(d.q0 - Expr(Rational(1, 4)) * d.p0 * d.p0 -
                                Expr(Rational(1, 2)) * differentiate(d.p0));
        return Degenerate{beta1, u};
    }
    const Expr root = pow(disc, Rational(1, 2));
    const Expr beta1 = simplify((-d.p1 + Expr(sign_of(branch)) * root) / Expr(2));
    const Expr beta0 =
        simplify((-differentiate(beta1) - d.p0 * beta1 - d.q1) / (Expr(2) * beta1 + d.p1));
    const Expr residual = simplify(differentiate(beta0) + beta0 * beta0 + d.p0 * beta0 + d.q0);
    if (!is_zero_probabilistic(residual, cfg)) return Obstructed{residual};
    const AffinePair beta{beta0, beta1};
    return Complete{alpha_from_beta(d, beta), beta};
}

/// Re-expands a Complete outcome and compares it with L coefficientwise.
inline bool verify_factorization(const DensOp& L, const FactorizationOutcome& outcome,
                                 const EqualityConfig& cfg = {}) {
    const auto* c = std::get_if<Complete>(&outcome);
    if (!c) throw std::invalid_argument("verify_factorization needs a complete factorization");
    return equal_probabilistic(recompose(*c), L, cfg);
}

}  // namespace densops
