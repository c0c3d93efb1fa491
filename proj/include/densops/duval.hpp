#pragma once

#include <functional>

#include "densops/calculus.hpp"
#include "densops/error.hpp"
#include "densops/simplify.hpp"

namespace densops {

/// a2 d^2 + a1 d + a0 acting on densities of weight `weight`.
struct WeightedOp2 {
    Expr a2, a1, a0;
    Rational weight;
};

/// Equivariant map from weight mu = src.weight to weight lambda:
///   a2~ = a2
///   a1~ = (2l+1)/(2m+1) a1 + 2(m-l)/(2m+1) a2'
///   a0~ = l(l+1)/(m(m+1)) a0 + l(m-l)/((2m+1)(m+1)) (a1' - a2'')
inline WeightedOp2 duval_ovsienko_map(const WeightedOp2& src, const Rational& lambda) {
    const Rational& mu = src.weight;
    if (mu == 0) throw SingularWeight("weight 0: mu(mu+1) vanishes");
    if (mu == -1) throw SingularWeight("weight -1: mu+1 and mu(mu+1) vanish");
    if (mu == Rational(-1, 2)) throw SingularWeight("weight -1/2: 2mu+1 vanishes");
    const Rational& l = lambda;
    const Expr da2 = differentiate(src.a2);
    const Expr a1 = Expr((2 * l + 1) / (2 * mu + 1)) * src.a1 + Expr(2 * (mu - l) / (2 * mu + 1)) * da2;
    const Expr a0 = Expr(l * (l + 1) / (mu * (mu + 1))) * src.a0 +
                    Expr(l * (mu - l) / ((2 * mu + 1) * (mu + 1))) * (differentiate(src.a1) - differentiate(da2));
    return {src.a2, simplify(a1), simplify(a0), lambda};
}

/// lambda -> duval_ovsienko_map(src, lambda).
inline std::function<WeightedOp2(const Rational&)> pencil_from_duval(const WeightedOp2& src) {
    duval_ovsienko_map(src, src.weight);  // rejects singular weights up front
    return [src](const Rational& lambda) { return duval_ovsienko_map(src, lambda); };
}

}  // namespace densops
