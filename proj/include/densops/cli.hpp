#pragma once

// Command-line front end. Needs CLI11 and nlohmann/json on the include path.

#include <algorithm>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "densops/coords.hpp"
#include "densops/duval.hpp"
#include "densops/op_dsl.hpp"
#include "densops/riccati.hpp"
#include "densops/sturm.hpp"

namespace densops::cli {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

struct Globals {
    std::uint64_t seed = EqualityConfig::kDefaultSeed;
    double tol = 1e-9;
    unsigned samples = 24;
    std::string domain;
    std::string file;
};

inline EqualityConfig make_config(const Globals& g) {
    EqualityConfig cfg;
    cfg.rng_seed = g.seed;
    cfg.tolerance = g.tol;
    cfg.sample_count = g.samples;
    if (!g.domain.empty()) {
        const auto colon = g.domain.find(':');
        if (colon == std::string::npos) throw UsageError("--domain expects lo:hi");
        try {
            std::size_t used = 0;
            cfg.domain_lo = std::stod(g.domain.substr(0, colon), &used);
            if (used != colon) throw UsageError("--domain expects lo:hi");
            const std::string hi = g.domain.substr(colon + 1);
            cfg.domain_hi = std::stod(hi, &used);
            if (used != hi.size()) throw UsageError("--domain expects lo:hi");
        } catch (const std::logic_error&) {
            throw UsageError("--domain expects lo:hi");
        }
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

inline Rational rational_flag(const std::string& name, const std::string& text) {
    auto r = parse_rational(text);
    if (!r) throw UsageError(name + " expects an exact rational, got '" + text + "'");
    return *r;
}

inline std::string read_term_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
}

inline Expr expr_arg(const std::string& text) { return simplify(parse_expr(text)); }

inline Json op_json(const DensOp& op) { return Json{{"op", to_string(op)}, {"weight", to_string(op.weight())}}; }

inline Json pair_json(const AffinePair& a) {
    return Json{{"constant", to_string(a.constant)}, {"slope", to_string(a.slope)}};
}

inline Json outcome_json(const FactorizationOutcome& o) {
    Json j{{"tag", to_string(tag(o))}};
    if (const auto* c = std::get_if<Complete>(&o)) {
        j["alpha"] = pair_json(c->alpha);
        j["beta"] = pair_json(c->beta);
    } else if (const auto* d = std::get_if<Degenerate>(&o)) {
        j["beta1"] = to_string(d->beta1);
        j["potential"] = to_string(d->potential);
    } else {
        j["residual"] = to_string(std::get<Obstructed>(o).residual);
    }
    return j;
}

}  // namespace detail

/// Runs one command. Writes a single JSON document to `out` and diagnostics
/// to `err`; returns 0 on success, 1 on domain errors, 2 on usage errors.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using namespace detail;

    CLI::App app{"Operators on the algebra of densities"};
    app.require_subcommand(1, 1);
    app.allow_windows_style_options(false);
    Globals g;
    app.add_option("--seed", g.seed, "sampling seed");
    app.add_option("--tol", g.tol, "relative tolerance of identity tests");
    app.add_option("--samples", g.samples, "sample points per identity test");
    app.add_option("--domain", g.domain, "sampling interval lo:hi");
    app.add_option("--file", g.file, "read the first input term from a file");

    std::vector<std::string> terms;
    std::string gamma = "0", theta = "0", branch = "+", lambda, weight, profile, map, inverse;
    std::string S = "1", mu = "2", a2 = "1", a1 = "0", a0 = "0";

    auto add_terms = [&](CLI::App* sub, int n) {
        sub->add_option("terms", terms, "operator terms")->expected(n);
    };
    auto add_gsl = [&](CLI::App* sub) {
        sub->add_option("--gamma", gamma, "gamma(x)");
        sub->add_option("--theta", theta, "theta(x)");
    };
    auto add_branch = [&](CLI::App* sub) {
        sub->add_option("--branch", branch, "square-root branch")->check(CLI::IsMember({"+", "-", "both"}));
    };
    auto add_map = [&](CLI::App* sub) {
        sub->add_option("--map", map, "new coordinate as a function of x")->required();
        sub->add_option("--inverse", inverse, "old coordinate as a function of the new one");
    };

    auto* normalize = app.add_subcommand("normalize", "normal-order an operator");
    add_terms(normalize, 1);
    auto* mul = app.add_subcommand("mul", "compose operators left to right");
    mul->add_option("terms", terms, "operator terms")->expected(1, -1);
    auto* adj = app.add_subcommand("adjoint", "formal adjoint");
    add_terms(adj, 1);
    auto* comm = app.add_subcommand("commutator", "[A, B]");
    add_terms(comm, 2);
    auto* wt = app.add_subcommand("weight", "operator weight");
    add_terms(wt, 1);
    auto* restr = app.add_subcommand("restrict", "pencil member at a density weight");
    add_terms(restr, 1);
    restr->add_option("--lambda", lambda, "density weight")->required();
    auto* app_cmd = app.add_subcommand("apply", "apply to a density");
    add_terms(app_cmd, 1);
    app_cmd->add_option("--profile", profile, "density profile f(x)")->required();
    app_cmd->add_option("--weight", weight, "density weight")->required();
    auto* sl_build = app.add_subcommand("sl-build", "generalized Sturm-Liouville operator");
    auto* sl_pot = app.add_subcommand("sl-potential", "potential u");
    auto* sl_psi = app.add_subcommand("sl-psi", "psi invariant");
    auto* sl_factor = app.add_subcommand("sl-factor", "factorization criterion");
    auto* sl_inc = app.add_subcommand("sl-incomplete", "incomplete factorization");
    for (auto* s : {sl_build, sl_pot, sl_psi, sl_factor, sl_inc}) add_gsl(s);
    add_branch(sl_factor);
    add_branch(sl_inc);
    auto* f2 = app.add_subcommand("factor2", "factor a monic second-order operator");
    add_terms(f2, 1);
    add_branch(f2);
    auto* schw = app.add_subcommand("schwarzian", "Schwarzian derivative");
    add_terms(schw, 1);
    auto* trans = app.add_subcommand("transform", "transform (S, gamma, theta) of weight mu");
    add_gsl(trans);
    add_map(trans);
    trans->add_option("--S", S, "top coefficient");
    trans->add_option("--mu", mu, "operator weight");
    auto* psi_check = app.add_subcommand("psi-check", "psi-density invariance");
    add_gsl(psi_check);
    add_map(psi_check);
    auto* duval = app.add_subcommand("duval", "Duval-Ovsienko map");
    duval->add_option("--a2", a2, "coefficient of d^2");
    duval->add_option("--a1", a1, "coefficient of d");
    duval->add_option("--a0", a0, "free term");
    duval->add_option("--mu", mu, "source weight")->required();
    duval->add_option("--lambda", lambda, "target weight")->required();
    for (auto* s : app.get_subcommands({})) s->fallthrough();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }
    CLI::App* sub = app.get_subcommands().front();

    Json result;
    try {
        const EqualityConfig cfg = make_config(g);
        if (!g.file.empty()) terms.insert(terms.begin(), read_term_file(g.file));
        auto need_terms = [&](std::size_t n) {
            if (terms.size() != n)
                throw UsageError(sub->get_name() + " takes " + std::to_string(n) + " operator term(s)");
        };
        auto branches = [&]() -> std::vector<Branch> {
            if (branch == "both") return {Branch::Plus, Branch::Minus};
            return {branch == "-" ? Branch::Minus : Branch::Plus};
        };
        auto per_branch = [&](auto&& f) {
            Json all = Json::array();
            for (Branch b : branches()) all.push_back(f(b));
            return all.size() == 1 ? all.front() : all;
        };
        auto change = [&] {
            CoordChange c{expr_arg(map), std::nullopt};
            if (!inverse.empty()) {
                c.inverse = expr_arg(inverse);
                if (!inverse_consistent(c, cfg)) throw InverseMismatch("--inverse is not inverse to --map");
            }
            return c;
        };
        const std::string verb = sub->get_name();

        if (verb == "normalize") {
            need_terms(1);
            result = op_json(parse_op(terms[0]));
        } else if (verb == "mul") {
            if (terms.empty()) throw UsageError("mul takes at least one operator term");
            DensOp acc = DensOp::identity();
            for (const auto& t : terms) acc = multiply(acc, parse_op(t));
            result = op_json(acc);
        } else if (verb == "adjoint") {
            need_terms(1);
            result = op_json(adjoint(parse_op(terms[0])));
        } else if (verb == "commutator") {
            need_terms(2);
            result = op_json(commutator(parse_op(terms[0]), parse_op(terms[1])));
        } else if (verb == "weight") {
            need_terms(1);
            result = to_string(parse_op(terms[0]).weight());
        } else if (verb == "restrict") {
            need_terms(1);
            const PencilSlice s = restrict(parse_op(terms[0]), rational_flag("--lambda", lambda));
            result = Json{{"op", to_string(s)},
                          {"weight_in", to_string(s.weight_in)},
                          {"weight_out", to_string(s.weight_out)}};
        } else if (verb == "apply") {
            need_terms(1);
            const Density d = apply(parse_op(terms[0]), {rational_flag("--weight", weight), expr_arg(profile)});
            result = Json{{"profile", to_string(d.profile)}, {"weight", to_string(d.weight)}};
        } else if (verb == "factor2") {
            need_terms(1);
            const SecondOrderData d = extract_coefficients(parse_op(terms[0]), cfg);
            result = per_branch([&](Branch b) { return outcome_json(factorize_second_order(d, b, cfg)); });
        } else if (verb == "schwarzian") {
            need_terms(1);
            result = to_string(schwarzian(expr_arg(terms[0]), cfg));
        } else if (verb == "duval") {
            const WeightedOp2 src{expr_arg(a2), expr_arg(a1), expr_arg(a0), rational_flag("--mu", mu)};
            const WeightedOp2 r = duval_ovsienko_map(src, rational_flag("--lambda", lambda));
            result = Json{{"a2", to_string(r.a2)},
                          {"a1", to_string(r.a1)},
                          {"a0", to_string(r.a0)},
                          {"weight", to_string(r.weight)}};
        } else {
            if (!terms.empty()) throw UsageError(verb + " takes no operator terms");
            const GenSL gsl{expr_arg(gamma), expr_arg(theta)};
            if (verb == "sl-build") {
                result = op_json(build_gsl(gsl));
            } else if (verb == "sl-potential") {
                result = to_string(potential(gsl));
            } else if (verb == "sl-psi") {
                result = to_string(psi_invariant(gsl, cfg));
            } else if (verb == "sl-factor") {
                result = per_branch([&](Branch b) { return outcome_json(factorize_gsl(gsl, b, cfg)); });
            } else if (verb == "sl-incomplete") {
                result = per_branch([&](Branch b) {
                    const auto r = factorize_incomplete(gsl, b, cfg);
                    return Json{{"b0", to_string(r.b0)},
                                {"b1", to_string(r.b1)},
                                {"f", to_string(r.f)},
                                {"alpha", pair_json(r.alpha)},
                                {"beta", pair_json(r.beta)}};
                });
            } else if (verb == "transform") {
                const auto r = transform_coefficients_1d({expr_arg(S), gsl.gamma, gsl.theta},
                                                         rational_flag("--mu", mu), change(), cfg);
                result = Json{{"S", to_string(r.S)}, {"gamma", to_string(r.gamma)}, {"theta", to_string(r.theta)}};
            } else if (verb == "psi-check") {
                result = check_psi_invariance(gsl, change(), cfg);
            }
        }
    } catch (const UsageError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        out << Json{{"ok", false}, {"error", {{"kind", e.kind()}, {"detail", e.what()}}}}.dump();
        return 1;
    }
    out << Json{{"ok", true}, {"result", result}}.dump();
    return 0;
}

}  // namespace densops::cli
