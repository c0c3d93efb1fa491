#pragma once

#include <array>
#include <utility>

#include "densops/densop.hpp"
#include "densops/equality.hpp"
#include "densops/riccati.hpp"

namespace densops {

/// Generalized Sturm-Liouville data on the line.
struct GenSL {
    Expr gamma;
    Expr theta;
};

/// L = t^2 (d^2 + gamma (2w + 1) d + (theta (w + 1) + gamma') w).
inline DensOp build_gsl(const GenSL& g) {
    const Expr dg = differentiate(g.gamma);
    return DensOp(2, {{{0, 2}, Expr(1)},
                      {{1, 1}, Expr(2) * g.gamma},
                      {{0, 1}, g.gamma},
                      {{2, 0}, g.theta},
                      {{1, 0}, g.theta + dg}});
}

inline SecondOrderData second_order_data(const GenSL& g) {
    return {simplify(Expr(2) * g.gamma), simplify(g.gamma), simplify(g.theta),
            simplify(g.theta + differentiate(g.gamma)), Expr(0)};
}

/// u = -(gamma' + theta/2)/2, so that L restricted to weight -1/2 is d^2 + u.
inline Expr potential(const GenSL& g) {
    return simplify(Expr(Rational(-1, 2)) * (differentiate(g.gamma) + Expr(Rational(1, 2)) * g.theta));
}

/// Inverse of potential(): theta = -4u - 2 gamma'.
inline GenSL gsl_from_potential(const Expr& gamma, const Expr& u) {
    return {gamma, simplify(Expr(-4) * u - Expr(2) * differentiate(gamma))};
}

/// t^2 (d^2 + 2 gamma l d - 2 (gamma' + 2u) l^2 + gamma' l + u) with l = w + 1/2,
/// rewritten in w.
inline DensOp gsl_lambda_form(const Expr& gamma, const Expr& u) {
    const Expr dg = differentiate(gamma);
    const Expr half(Rational(1, 2));
    const Expr c2 = Expr(-2) * (dg + Expr(2) * u);  // coefficient of l^2
    // l = w + 1/2:  l^2 = w^2 + w + 1/4
    return DensOp(2, {{{0, 2}, Expr(1)},
                      {{1, 1}, Expr(2) * gamma},
                      {{0, 1}, gamma},
                      {{2, 0}, c2},
                      {{1, 0}, c2 + dg},
                      {{0, 0}, Expr(Rational(1, 4)) * c2 + half * dg + u}});
}

inline Expr psi_radicand(const GenSL& g) { return simplify(g.gamma * g.gamma - g.theta); }

/// psi = (gamma^2 - theta)^(-1/4).
inline Expr psi_invariant(const GenSL& g, const EqualityConfig& cfg = {}) {
    const Expr r = psi_radicand(g);
    if (is_zero_probabilistic(r, cfg))
        throw DegenerateRadicand("gamma^2 - theta vanishes identically; psi is undefined");
    return simplify(pow(r, Rational(-1, 4)));
}

/// psi written through the potential: (gamma^2 + 2 (gamma' + 2u))^(-1/4).
inline Expr psi_from_potential(const Expr& gamma, const Expr& u) {
    return simplify(pow(gamma * gamma + Expr(2) * (differentiate(gamma) + Expr(2) * u), Rational(-1, 4)));
}

/// Converts between w- and l-presentations of an affine pair, l = w + 1/2:
/// c0 + c1 w = (c0 - c1/2) + c1 l.
inline AffinePair to_lambda_form(const AffinePair& a) {
    return {simplify(a.constant - Expr(Rational(1, 2)) * a.slope), a.slope};
}
inline AffinePair from_lambda_form(const AffinePair& a) {
    return {simplify(a.constant + Expr(Rational(1, 2)) * a.slope), a.slope};
}

namespace detail {

struct PsiData {
    Expr psi, u, b0, b1, defect;  // defect = (d^2 + u) psi
};

inline PsiData psi_data(const GenSL& g, Branch sign, const EqualityConfig& cfg) {
    PsiData d;
    d.psi = psi_invariant(g, cfg);
    d.u = potential(g);
    d.b0 = simplify(differentiate(d.psi) / d.psi);
    d.b1 = simplify(-g.gamma + Expr(sign_of(sign)) * pow(d.psi, -2));
    d.defect = simplify(differentiate(d.psi, 2) + d.u * d.psi);
    return d;
}

}  // namespace detail

/// Complete iff (d^2 + u) psi = 0. The obstructed residual is (d^2 + u) psi.
inline FactorizationOutcome factorize_gsl(const GenSL& g, Branch sign = Branch::Plus,
                                          const EqualityConfig& cfg = {}) {
    if (is_zero_probabilistic(psi_radicand(g), cfg)) return Degenerate{simplify(-g.gamma), potential(g)};
    const auto d = detail::psi_data(g, sign, cfg);
    if (!is_zero_probabilistic(d.defect, cfg)) return Obstructed{d.defect};
    const AffinePair beta = from_lambda_form({d.b0, d.b1});
    return Complete{alpha_from_beta(second_order_data(g), beta), beta};
}

/// Both branches, '+' first.
inline std::array<FactorizationOutcome, 2> factorize_gsl_both(const GenSL& g, const EqualityConfig& cfg = {}) {
    return {factorize_gsl(g, Branch::Plus, cfg), factorize_gsl(g, Branch::Minus, cfg)};
}

/// L = t(d - alpha) ∘ t(d - beta) + t^2 f, f free of w.
/// b0, b1 are the l-presentation of beta; alpha and beta are stored in w.
struct IncompleteFactorization {
    Expr b0, b1, f;
    AffinePair alpha, beta;
};

inline IncompleteFactorization factorize_incomplete(const GenSL& g, Branch sign = Branch::Plus,
                                                    const EqualityConfig& cfg = {}) {
    const auto d = detail::psi_data(g, sign, cfg);
    const AffinePair beta = from_lambda_form({d.b0, d.b1});
    return {d.b0, d.b1, simplify(d.defect / d.psi), alpha_from_beta(second_order_data(g), beta), beta};
}

inline DensOp recompose(const IncompleteFactorization& r) {
    return add(multiply(first_order_factor(r.alpha), first_order_factor(r.beta)),
               multiply(DensOp::t_power(2), DensOp::function(r.f)));
}

/// d^2 + p d + q = (d - alpha)(d - beta) from a kernel element phi.
struct ClassicalFactors {
    Expr beta;
    Expr alpha;
};

inline ClassicalFactors classical_factor_from_kernel(const Expr& p, const Expr& q, const Expr& phi,
                                                     const EqualityConfig& cfg = {}) {
    const Expr dphi = differentiate(phi);
    const Expr lhs = simplify(differentiate(dphi) + p * dphi + q * phi);
    if (!is_zero_probabilistic(lhs, cfg))
        throw KernelMismatch("phi is not in the kernel: phi'' + p phi' + q phi = " + to_string(lhs));
    const Expr beta = simplify(dphi / phi);
    return {beta, simplify(-p - beta)};
}

inline DensOp recompose(const ClassicalFactors& c) {
    const auto factor = [](const Expr& a) {
        return DensOp(0, {{{0, 1}, Expr(1)}, {{0, 0}, -a}});
    };
    return multiply(factor(c.alpha), factor(c.beta));
}

}  // namespace densops
