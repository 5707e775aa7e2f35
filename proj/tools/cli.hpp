#pragma once

// Command-line front end. run_cli writes to the given streams and returns the
// process exit code, so tests can drive it without spawning processes.
//
// Exit codes: 0 ok, 1 a requested check failed, 2 parse error, 3 singular
// input, 4 precision exhausted, 5 precondition violated.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lfunc/lfunc.hpp"

namespace lfunc::cli {

using ojson = nlohmann::ordered_json;

struct Flags {
    bool json = false;
    unsigned prec = 30;
    std::size_t nmax = 0;
    std::uint64_t pmax = 0;
    std::string s = "1";
    std::vector<std::string> gens;
    std::string file;
    int kmax = 3;
    bool gamma_only = false;
    bool s_given = false;
    std::vector<std::string> coeffs;
    std::string matrix;
};

inline std::string bound(double e) {
    std::ostringstream os;
    os << std::setprecision(2) << std::scientific << e;
    return os.str();
}

inline WeierstrassCurve parse_curve(const std::vector<std::string>& args) {
    std::vector<std::string> parts;
    if (args.size() == 1) {
        // Bracketed form "[a1,a2,a3,a4,a6]".
        std::string s = args[0];
        if (s.size() < 2 || s.front() != '[' || s.back() != ']')
            throw ParseError("expected five coefficients or \"[a1,a2,a3,a4,a6]\"");
        std::stringstream ss(s.substr(1, s.size() - 2));
        for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    } else {
        parts = args;
    }
    if (parts.size() != 5) throw ParseError("expected five coefficients a1 a2 a3 a4 a6, got " + std::to_string(parts.size()));
    Coefficients a;
    for (std::size_t i = 0; i < 5; ++i) a[i] = parse_rational(parts[i]);
    return WeierstrassCurve(a);
}

inline CurvePoint parse_point(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ParseError("generator must be \"x,y\", got '" + text + "'");
    return CurvePoint(parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1)));
}

inline std::string point_string(const CurvePoint& p) {
    if (p.is_infinity()) return "O";
    return "(" + p.x().get_str() + ", " + p.y().get_str() + ")";
}

inline ojson coefficients_json(const WeierstrassCurve& e) {
    auto j = ojson::array();
    for (const auto& c : e.coefficients()) j.push_back(c.get_str());
    return j;
}

inline nlohmann::json read_json_input(const Flags& f) {
    if (f.file.empty()) throw ParseError("--file is required");
    std::ifstream in(f.file);
    if (!in) throw ParseError("cannot open " + f.file);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON in ") + f.file + ": " + e.what());
    }
}

inline AnalyticOptions analytic_options(const Flags& f) {
    if (f.prec < 10 || f.prec > 1000) throw PreconditionViolation("--prec must lie in [10, 1000]");
    AnalyticOptions o;
    o.digits = f.prec;
    o.n_max = f.nmax;
    return o;
}

inline std::string value_text(const AnalyticValue& v, unsigned digits) {
    std::string s = v.value.re.str(digits);
    if (v.value.im != 0) {
        const bool neg = v.value.im < 0;
        s += neg ? " - " : " + ";
        s += (neg ? mp_real(-v.value.im) : v.value.im).str(digits) + "i";
    }
    return s + " ± " + bound(v.error);
}

// ---------------------------------------------------------------------------

inline int cmd_analyze(const Flags& f, std::ostream& out) {
    const auto curve = parse_curve(f.coeffs);
    const auto [minimal, iso] = minimal_model(curve);
    const auto local = bad_local_data(minimal);
    const auto N = conductor(minimal);
    const auto tors = torsion_subgroup(minimal);
    const auto& inv = minimal.invariants();
    if (f.json) {
        ojson j;
        j["curve"] = coefficients_json(curve);
        j["minimal_model"] = coefficients_json(minimal);
        j["invariants"] = {{"c4", inv.c4.get_str()}, {"c6", inv.c6.get_str()},
                           {"discriminant", inv.discriminant.get_str()}, {"j", inv.j.get_str()}};
        j["conductor"] = N.get_str();
        auto bad = ojson::array();
        for (const auto& ld : local) bad.push_back(to_json(ld));
        j["bad_primes"] = bad;
        auto pts = ojson::array();
        for (const auto& p : tors.points) pts.push_back(point_string(p));
        j["torsion"] = {{"order", tors.order()}, {"structure", tors.structure}, {"points", pts}};
        out << j.dump(2) << "\n";
        return 0;
    }
    out << "curve         " << curve.to_string() << "\n";
    out << "minimal model " << minimal.to_string() << "\n";
    out << "discriminant  " << inv.discriminant.get_str() << "\n";
    out << "j-invariant   " << inv.j.get_str() << "\n";
    out << "conductor     " << N.get_str() << "\n";
    out << "torsion       ";
    if (tors.structure.empty()) out << "trivial";
    for (std::size_t i = 0; i < tors.structure.size(); ++i) out << (i ? " x " : "") << "Z/" << tors.structure[i];
    out << "\n";
    for (const auto& ld : local)
        out << "  p = " << ld.p.get_str() << ": " << to_string(ld.reduction) << ", " << ld.kodaira << ", f = " << ld.f_p
            << ", c = " << ld.c_p << ", a_p = " << ld.a_p << "\n";
    return 0;
}

inline int cmd_value(const Flags& f, std::ostream& out, bool completed) {
    const auto curve = parse_curve(f.coeffs);
    const auto s = parse_complex(f.s);
    AnalyticContext ctx(curve, analytic_options(f));
    const AnalyticValue v = completed ? lambda(ctx, s) : l_value(ctx, s);
    std::optional<SeriesValue> euler;
    if (f.pmax) euler = eval_euler(ctx.prime_data(), s, f.pmax);
    if (f.json) {
        ojson j;
        j["curve"] = coefficients_json(ctx.curve());
        j["s"] = {{"re", s.real()}, {"im", s.imag()}};
        j["digits"] = f.prec;
        j[completed ? "lambda" : "value"] = v.to_json(static_cast<int>(f.prec));
        if (euler)
            j["euler"] = {{"p_max", f.pmax},
                          {"re", euler->value.real()},
                          {"im", euler->value.imag()},
                          {"error", euler->error_bound}};
        out << j.dump(2) << "\n";
        return 0;
    }
    out << (completed ? "Lambda(E, " : "L(E, ") << f.s << ") = " << value_text(v, f.prec) << "\n";
    if (euler) {
        std::ostringstream os;
        os << std::setprecision(15) << euler->value.real();
        if (euler->value.imag() != 0) os << (euler->value.imag() < 0 ? " - " : " + ") << std::fabs(euler->value.imag()) << "i";
        out << "Euler product up to " << f.pmax << ": " << os.str() << " ± " << bound(euler->error_bound) << "\n";
    }
    return 0;
}

inline int cmd_rank(const Flags& f, std::ostream& out) {
    const auto curve = parse_curve(f.coeffs);
    AnalyticContext ctx(curve, analytic_options(f));
    const RankResult r = analytic_rank(ctx);
    const AnalyticValue lead = leading_coefficient(ctx, r.rank);
    if (f.json) {
        ojson j;
        j["curve"] = coefficients_json(ctx.curve());
        j["N"] = ctx.conductor().get_str();
        j["w"] = r.root_number;
        j["rank_analytic"] = r.rank;
        j["determined"] = r.determined;
        j["L_leading"] = lead.to_json(static_cast<int>(f.prec));
        out << j.dump(2) << "\n";
        return 0;
    }
    out << "conductor      " << ctx.conductor().get_str() << "\n";
    out << "root number    " << r.root_number << "\n";
    out << "analytic rank  " << r.rank << (r.determined ? "" : " (undetermined: no nonzero derivative found)") << "\n";
    out << "L^(r)(1)/r!    " << value_text(lead, f.prec) << "\n";
    return 0;
}

inline int cmd_bsd(const Flags& f, std::ostream& out) {
    const auto curve = parse_curve(f.coeffs);
    std::vector<CurvePoint> gens;
    for (const auto& g : f.gens) gens.push_back(parse_point(g));
    BsdOptions opt;
    opt.analytic = analytic_options(f);
    const BsdReport rep = bsd_report(curve, gens, opt);
    const int digits = static_cast<int>(std::min(f.prec, 20u));
    if (f.json) {
        out << rep.to_json(digits).dump(2) << "\n";
        return 0;
    }
    out << "curve           " << rep.curve << "\n";
    out << "conductor       " << rep.conductor.get_str() << "\n";
    out << "root number     " << rep.root_number << "\n";
    out << "analytic rank   " << rep.rank << "\n";
    out << "L^(r)(1)/r!     " << rep.leading.value.re.str(digits) << " ± " << bound(rep.leading.error) << "\n";
    out << "Omega           " << rep.omega.str(digits) << " ± " << bound(rep.omega_error) << "\n";
    out << "regulator       " << rep.regulator.str(digits) << " ± " << bound(rep.regulator_error) << "\n";
    out << "torsion order   " << rep.torsion << "\n";
    out << "Tamagawa        ";
    for (const auto& [p, c] : rep.tamagawa) out << "c_" << p << " = " << c << "  ";
    out << "\n";
    out << "Sha (predicted) " << rep.sha.str(digits) << " ± " << bound(rep.sha_error) << "\n";
    if (!rep.flags.empty()) {
        out << "flags          ";
        for (const auto& fl : rep.flags) out << " " << fl;
        out << "\n";
    }
    return 0;
}

inline int cmd_zetacheck(const Flags& f, std::ostream& out) {
    const auto curve = parse_curve(f.coeffs);
    if (f.kmax < 1 || f.kmax > 8) throw PreconditionViolation("--kmax must lie in [1, 8]");
    const std::uint64_t pmax = f.pmax ? f.pmax : 20;
    if (pmax > 100000) throw PreconditionViolation("--pmax for zetacheck is capped at 100000 (enumeration)");
    PrimeData data(curve);
    bool all_ok = true;
    auto rows = ojson::array();
    std::ostringstream text;
    for (auto p64 : primes_up_to(pmax)) {
        const Integer p(static_cast<unsigned long>(p64));
        if (data.is_bad(p64)) continue;
        const long a = data.ap(p64);
        // Newton sums up to k = kmax use the field of size p^k; keep it enumerable.
        const int k = p64 > 50 ? 1 : f.kmax;
        const bool hasse = Integer(a) * a <= 4 * p;
        const bool trace = trace_formula_check(data.minimal(), p, k);
        const bool zeta = zeta_factorization_check(data.minimal(), p, k);
        all_ok = all_ok && hasse && trace && zeta;
        rows.push_back({{"p", p.get_str()}, {"a_p", a}, {"k_max", k}, {"hasse", hasse}, {"trace", trace}, {"zeta", zeta}});
        text << "  p = " << p.get_str() << "  a_p = " << a << "  k <= " << k << "  hasse " << (hasse ? "ok" : "FAIL")
             << "  trace " << (trace ? "ok" : "FAIL") << "  zeta " << (zeta ? "ok" : "FAIL") << "\n";
    }
    if (f.json) {
        ojson j;
        j["curve"] = coefficients_json(data.minimal());
        j["p_max"] = pmax;
        j["k_max"] = f.kmax;
        j["primes"] = rows;
        j["ok"] = all_ok;
        out << j.dump(2) << "\n";
    } else {
        out << text.str() << (all_ok ? "all checks passed" : "some checks FAILED") << "\n";
    }
    return all_ok ? 0 : 1;
}

inline int cmd_motive(const Flags& f, std::ostream& out) {
    const nlohmann::json in = read_json_input(f);
    ojson j;
    std::ostringstream text;
    std::optional<HodgeData> hodge;
    if (in.contains("weight")) hodge = hodge_from_json(in);
    else if (in.contains("hodge") && in["hodge"].is_object()) hodge = hodge_from_json(in["hodge"]);
    if (hodge) {
        const auto terms = gamma_terms(*hodge);
        ojson g;
        g["terms"] = to_json(terms);
        g["text"] = to_string(terms);
        text << "gamma factor  " << to_string(terms) << "\n";
        if (f.s_given || !f.gamma_only) {
            const auto s = parse_complex(f.s);
            const auto v = gamma_factor(terms, s, std::max(f.prec, 20u));
            // Computed at full precision and rounded once to double.
            const double err = 2.3e-16 * std::abs(v);
            g["at"] = {{"re", s.real()}, {"im", s.imag()}};
            g["value"] = {{"re", v.real()}, {"im", v.imag()}, {"error", err}};
            std::ostringstream os;
            os << std::setprecision(15) << v.real();
            if (v.imag() != 0) os << (v.imag() < 0 ? " - " : " + ") << std::fabs(v.imag()) << "i";
            text << "  at s = " << f.s << ": " << os.str() << " ± " << bound(err) << "\n";
        }
        if (!f.gamma_only) j["hodge"] = to_json(*hodge);
        j["gamma"] = g;
    } else if (f.gamma_only) {
        throw ParseError("no Hodge data in " + f.file);
    }
    if (!f.gamma_only && in.contains("wd")) {
        const auto& list = in["wd"].is_array() ? in["wd"] : nlohmann::json::array({in["wd"]});
        auto reps = ojson::array();
        for (const auto& item : list) {
            const auto wd = wd_from_json(item);
            ojson r;
            r["p"] = wd.p.get_str();
            r["dimension"] = wd.dimension();
            const bool compatible = check_compatibility(wd);
            r["compatible"] = compatible;
            text << "WD at p = " << wd.p.get_str() << " (dim " << wd.dimension() << ")"
                 << (compatible ? "" : "  phi N phi^-1 != N/p") << "\n";
            if (compatible) {
                const auto lf = wd_local_factor(wd);
                r["local_factor"] = to_json(lf);
                const auto filt = monodromy_filtration(wd.N);
                r["monodromy"] = to_json(filt);
                text << "  local factor   1/(" << lf.to_string() << ")\n";
                text << "  monodromy gr   ";
                for (const auto& [k, d] : filt.graded_dimensions()) text << "gr_" << k << ":" << d << " ";
                text << "\n";
                if (hodge) {
                    const int n = hodge->weight;
                    if (wd.N.is_zero() && wd.unramified()) {
                        const bool ok = check_weight(wd, n);
                        r["weight_ok"] = ok;
                        text << "  weight " << n << "       " << (ok ? "ok" : "FAIL") << "\n";
                    } else {
                        const bool ok = check_purity(wd, n);
                        r["purity_ok"] = ok;
                        text << "  purity, n = " << n << "  " << (ok ? "ok" : "FAIL") << "\n";
                    }
                }
            }
            r["semisimple_phi"] = to_json(semisimple_part(wd.phi));
            reps.push_back(r);
        }
        j["wd"] = reps;
    }
    if (f.json) out << j.dump(2) << "\n";
    else out << text.str();
    return 0;
}

inline int cmd_snf(const Flags& f, std::ostream& out) {
    nlohmann::json in;
    if (!f.file.empty()) {
        in = read_json_input(f);
    } else if (!f.matrix.empty()) {
        try {
            in = nlohmann::json::parse(f.matrix);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("invalid matrix JSON: ") + e.what());
        }
    } else {
        throw ParseError("snf needs --file or a JSON matrix argument");
    }
    ojson j;
    std::ostringstream text;
    if (in.is_object() && in.contains("lattices")) {
        const auto& L = in["lattices"];
        if (!L.is_array() || L.size() != 2) throw ParseError("\"lattices\" must hold two basis matrices");
        const Rational idx = lattice_index(rational_matrix_from_json(L[0]), rational_matrix_from_json(L[1]));
        j["lattice_index"] = idx.get_str();
        text << "lattice index " << idx.get_str() << "\n";
    } else {
        const IntegerMatrix A = integer_matrix_from_json(in.is_object() ? in.at("matrix") : in);
        const SmithForm s = smith_normal_form(A);
        auto d = ojson::array();
        for (const auto& x : s.diagonal()) d.push_back(x.get_str());
        j["U"] = to_json(s.U);
        j["D"] = to_json(s.D);
        j["V"] = to_json(s.V);
        j["elementary_divisors"] = d;
        j["torsion_order"] = torsion_order(A).get_str();
        text << "elementary divisors";
        for (const auto& x : s.diagonal()) text << " " << x.get_str();
        text << "\ntorsion order " << torsion_order(A).get_str() << "\n";
    }
    if (f.json) out << j.dump(2) << "\n";
    else out << text.str();
    return 0;
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"L-functions of elliptic curves and motives: local data, analytic values, BSD invariants"};
    app.require_subcommand(1, 1);
    Flags f;
    auto common = [&](CLI::App* sub, bool curve) {
        sub->add_flag("--json", f.json, "machine-readable output");
        if (curve) sub->add_option("coeffs", f.coeffs, "a1 a2 a3 a4 a6 (integers or rationals)");
    };
    auto analytic = [&](CLI::App* sub) {
        sub->add_option("--prec", f.prec, "working precision in decimal digits (default 30)");
        sub->add_option("--nmax", f.nmax, "number of Dirichlet coefficients (default: from the tail bound)");
    };
    auto* analyze = app.add_subcommand("analyze", "minimal model, conductor, local data, torsion");
    common(analyze, true);
    auto* lvalue = app.add_subcommand("lvalue", "L(E, s) with an error bound");
    common(lvalue, true);
    analytic(lvalue);
    lvalue->add_option("--s", f.s, "complex argument a+bi (default 1)");
    lvalue->add_option("--pmax", f.pmax, "also evaluate the Euler product over p <= P");
    auto* lambda_cmd = app.add_subcommand("lambda", "completed Lambda(E, s) = N^{s/2} (2 pi)^{-s} Gamma(s) L(E, s)");
    common(lambda_cmd, true);
    analytic(lambda_cmd);
    lambda_cmd->add_option("--s", f.s, "complex argument a+bi (default 1)");
    auto* rank = app.add_subcommand("rank", "root number, analytic rank, leading coefficient");
    common(rank, true);
    analytic(rank);
    auto* bsd = app.add_subcommand("bsd", "BSD invariants and the predicted order of Sha");
    common(bsd, true);
    analytic(bsd);
    bsd->add_option("--gen", f.gens, "generator x,y (repeatable)");
    auto* zetacheck = app.add_subcommand("zetacheck", "Hasse bound, trace formula and zeta factorization at good primes");
    common(zetacheck, true);
    zetacheck->add_option("--pmax", f.pmax, "largest prime checked (default 20)");
    zetacheck->add_option("--kmax", f.kmax, "largest extension degree for p <= 50 (default 3)");
    auto* motive = app.add_subcommand("motive", "gamma factor and Weil-Deligne local data from a JSON description");
    common(motive, false);
    motive->add_option("--file", f.file, "JSON with \"weight\"/\"hodge\" and optional \"wd\"")->required();
    motive->add_flag("--gamma", f.gamma_only, "only the symbolic gamma factor");
    motive->add_option("--s", f.s, "evaluate the gamma factor at s");
    motive->add_option("--prec", f.prec, "precision for gamma evaluation");
    auto* snf = app.add_subcommand("snf", "Smith normal form, torsion order, lattice index");
    common(snf, false);
    snf->add_option("matrix", f.matrix, "integer matrix as JSON, e.g. [[2,4],[6,8]]");
    snf->add_option("--file", f.file, "JSON matrix, {\"matrix\": ...} or {\"lattices\": [B1, B2]}");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    f.s_given = motive->count("--s") > 0;

    try {
        if (analyze->parsed()) return cmd_analyze(f, out);
        if (lvalue->parsed()) return cmd_value(f, out, false);
        if (lambda_cmd->parsed()) return cmd_value(f, out, true);
        if (rank->parsed()) return cmd_rank(f, out);
        if (bsd->parsed()) return cmd_bsd(f, out);
        if (zetacheck->parsed()) return cmd_zetacheck(f, out);
        if (motive->parsed()) return cmd_motive(f, out);
        if (snf->parsed()) return cmd_snf(f, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const SingularCurve& e) {
        err << "singular: " << e.what() << "\n";
        return 3;
    } catch (const SingularBasis& e) {
        err << "singular: " << e.what() << "\n";
        return 3;
    } catch (const PrecisionExhausted& e) {
        err << "precision exhausted: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        err << "precondition violated: " << e.what() << "\n";
        return 5;
    }
    return 2;
}

} // namespace lfunc::cli
