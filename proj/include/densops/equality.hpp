#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "densops/calculus.hpp"
#include "densops/error.hpp"
#include "densops/expr.hpp"

namespace densops {

/// Sampling policy for probabilistic identity testing.
struct EqualityConfig {
    static constexpr std::uint64_t kDefaultSeed = 0x5eed'd0e5'2019ULL;

    unsigned sample_count = 24;
    double domain_lo = 0.1;
    double domain_hi = 10.0;
    double tolerance = 1e-9;  // relative
    unsigned max_rejects = 500;
    std::uint64_t rng_seed = kDefaultSeed;

    void validate() const {
        if (sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
        if (!(tolerance > 0)) throw std::invalid_argument("tolerance must be > 0");
        if (max_rejects < 1) throw std::invalid_argument("max_rejects must be >= 1");
        if (!(domain_lo < domain_hi) || !std::isfinite(domain_lo) || !std::isfinite(domain_hi))
            throw std::invalid_argument("sampling domain must be a nonempty finite interval");
    }
};

namespace detail {

// Symbols are bound to random rationals with denominator 64 inside the domain.
inline double draw_symbol_value(std::mt19937_64& rng, const EqualityConfig& cfg) {
    std::uniform_real_distribution<double> u(cfg.domain_lo, cfg.domain_hi);
    const double v = std::round(u(rng) * 64.0) / 64.0;
    return v == 0.0 ? 1.0 / 64.0 : v;
}

}  // namespace detail

/// True iff |a(x) - b(x)| <= tol * (1 + |a(x)|) at `sample_count` accepted
/// points drawn from the domain. Points where either side is Undefined are
/// redrawn; exceeding `max_rejects` throws InsufficientDomain.
inline bool equal_probabilistic(const Expr& a, const Expr& b, const EqualityConfig& cfg = {}) {
    cfg.validate();
    std::vector<std::string> names;
    collect_symbols(a, names);
    collect_symbols(b, names);

    std::mt19937_64 rng(cfg.rng_seed);
    std::uniform_real_distribution<double> draw_x(cfg.domain_lo, cfg.domain_hi);
    Bindings bindings;
    unsigned accepted = 0, rejected = 0;
    bool equal = true;
    while (accepted < cfg.sample_count) {
        const double x0 = draw_x(rng);
        for (const auto& n : names) bindings[n] = detail::draw_symbol_value(rng, cfg);
        const auto va = evaluate(a, x0, bindings);
        const auto vb = evaluate(b, x0, bindings);
        if (!va || !vb) {
            if (++rejected > cfg.max_rejects)
                throw InsufficientDomain("expression undefined at " + std::to_string(rejected) +
                                         " sampled points of [" + std::to_string(cfg.domain_lo) +
                                         ", " + std::to_string(cfg.domain_hi) + "]");
            continue;
        }
        ++accepted;
        if (std::abs(*va - *vb) > cfg.tolerance * (1.0 + std::abs(*va))) equal = false;
    }
    return equal;
}

/// Probabilistic test for e == 0. Exact zeros short-circuit.
inline bool is_zero_probabilistic(const Expr& e, const EqualityConfig& cfg = {}) {
    if (e.is_zero()) return true;
    return equal_probabilistic(e, Expr(0), cfg);
}

}  // namespace densops
