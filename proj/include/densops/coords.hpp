#pragma once

#include <optional>

#include "densops/equality.hpp"
#include "densops/ratfun.hpp"
#include "densops/sturm.hpp"

namespace densops {

/// x' = phi(x), with phi^{-1} when the caller knows it.
struct CoordChange {
    Expr forward;
    std::optional<Expr> inverse;

    Expr d1() const { return differentiate(forward); }
    Expr d2() const { return differentiate(forward, 2); }
    Expr d3() const { return differentiate(forward, 3); }
};

inline CoordChange identity_change() { return {x_var, x_var}; }

/// (a x + b)/(c x + d); requires a d - b c != 0.
inline CoordChange mobius(const Rational& a, const Rational& b, const Rational& c, const Rational& d) {
    if (a * d - b * c == 0) throw DegenerateMap("Mobius coefficients with ad - bc = 0");
    const Expr fwd = simplify((Expr(a) * x_var + Expr(b)) / (Expr(c) * x_var + Expr(d)));
    const Expr inv = simplify((Expr(d) * x_var - Expr(b)) / (Expr(-c) * x_var + Expr(a)));
    return {fwd, inv};
}

/// f'''/f' - 3/2 (f''/f')^2.
inline Expr schwarzian(const Expr& f, const EqualityConfig& cfg = {}) {
    const Expr f1 = differentiate(f);
    if (is_zero_probabilistic(f1, cfg)) throw DegenerateMap("f' vanishes identically");
    const Expr f2 = differentiate(f1);
    const Expr f3 = differentiate(f2);
    return normalize_rational(f3 / f1 - Expr(Rational(3, 2)) * pow(f2 / f1, 2));
}

namespace detail {

inline void require_map(const CoordChange& c, const EqualityConfig& cfg) {
    if (is_zero_probabilistic(c.d1(), cfg)) throw DegenerateMap("phi' vanishes identically");
    if (!c.inverse) throw MissingInverse("an inverse of the coordinate change is required");
}

// Expression in x rewritten as a function of x' = phi(x).
inline Expr in_new_variable(const Expr& e, const CoordChange& c) { return normalize_rational(substitute_raw(e, *c.inverse)); }

}  // namespace detail

/// phi(phi^{-1}(y)) == y.
inline bool inverse_consistent(const CoordChange& c, const EqualityConfig& cfg = {}) {
    if (!c.inverse) throw MissingInverse("an inverse of the coordinate change is required");
    return equal_probabilistic(substitute(c.forward, *c.inverse), x_var, cfg);
}

/// gamma' = (gamma phi' + phi'') / phi'^2,
/// theta' = (theta phi'^2 + 2 gamma phi' phi'' + phi''^2) / phi'^4.
inline GenSL transform_gsl(const GenSL& g, const CoordChange& c, const EqualityConfig& cfg = {}) {
    detail::require_map(c, cfg);
    const Expr j = c.d1(), k = c.d2();
    const Expr gamma = (g.gamma * j + k) / pow(j, 2);
    const Expr theta = (g.theta * pow(j, 2) + Expr(2) * g.gamma * j * k + pow(k, 2)) / pow(j, 4);
    return {detail::in_new_variable(gamma, c), detail::in_new_variable(theta, c)};
}

/// u' = (u - S(phi)/2) phi'^(-2).
inline Expr transform_potential(const Expr& u, const CoordChange& c, const EqualityConfig& cfg = {}) {
    detail::require_map(c, cfg);
    const Expr out = (u - Expr(Rational(1, 2)) * schwarzian(c.forward, cfg)) * pow(c.d1(), -2);
    return detail::in_new_variable(out, c);
}

/// Principal symbol data (S, gamma, theta) of a canonical operator of weight mu.
struct CanonicalCoefficients {
    Expr S, gamma, theta;
};

/// S' = S phi'^(2-mu), gamma' = (gamma phi' + S phi'') phi'^(-mu),
/// theta' = (theta phi'^2 + 2 gamma phi' phi'' + S phi''^2) phi'^(-mu-2).
inline CanonicalCoefficients transform_coefficients_1d(const CanonicalCoefficients& in, const Rational& mu,
                                                       const CoordChange& c, const EqualityConfig& cfg = {}) {
    detail::require_map(c, cfg);
    const Expr j = c.d1(), k = c.d2();
    const Expr S = in.S * pow(j, Rational(2 - mu));
    const Expr gamma = (in.gamma * j + in.S * k) * pow(j, Rational(-mu));
    const Expr theta = (in.theta * pow(j, 2) + Expr(2) * in.gamma * j * k + in.S * pow(k, 2)) * pow(j, Rational(-mu - 2));
    return {detail::in_new_variable(S, c), detail::in_new_variable(gamma, c), detail::in_new_variable(theta, c)};
}

/// (gamma'^2 - theta') ∘ phi == (gamma^2 - theta) phi'^(-2).
inline bool check_psi_invariance(const GenSL& g, const CoordChange& c, const EqualityConfig& cfg = {}) {
    if (is_zero_probabilistic(psi_radicand(g), cfg))
        throw DegenerateRadicand("gamma^2 - theta vanishes identically");
    const GenSL h = transform_gsl(g, c, cfg);
    const Expr lhs = normalize_rational(substitute_raw(psi_radicand(h), c.forward));
    return equal_probabilistic(lhs, normalize_rational(psi_radicand(g) * pow(c.d1(), -2)), cfg);
}

}  // namespace densops
