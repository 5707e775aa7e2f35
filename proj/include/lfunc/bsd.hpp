#pragma once

// Real period, Neron-Tate heights, regulator, and the numerical BSD report.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "lfunc/analytic.hpp"
#include "lfunc/curve.hpp"
#include "lfunc/local.hpp"
#include "lfunc/numeric.hpp"

namespace lfunc {

// ---------------------------------------------------------------------------
// Real period.

struct PeriodResult {
    mp_real omega;          // integral of |omega| over all of E(R)
    double error = 0;
    double quadrature = 0;  // independent value by numerical integration (double precision)
    int components = 1;
};

namespace detail {

/// Real roots of 4x^3 + b2 x^2 + 2 b4 x + b6, in decreasing order.
inline std::vector<mp_real> real_roots_of_two_torsion_cubic(const mp_real& b2, const mp_real& b4, const mp_real& b6) {
    auto f = [&](const mp_real& x) { return ((4 * x + b2) * x + 2 * b4) * x + b6; };
    auto df = [&](const mp_real& x) { return (12 * x + 2 * b2) * x + 2 * b4; };
    // Cauchy bound on the roots.
    mp_real bound = 1 + std::max<mp_real>(boost::multiprecision::abs(b2) / 4,
                                                   std::max<mp_real>(boost::multiprecision::abs(b4) / 2,
                                                                              boost::multiprecision::abs(b6) / 4));
    // Monotone pieces between the critical points.
    std::vector<mp_real> cuts{-bound};
    const mp_real disc = 4 * b2 * b2 - 96 * b4; // of 12x^2 + 2 b2 x + 2 b4
    if (disc > 0) {
        const mp_real r = boost::multiprecision::sqrt(disc);
        cuts.push_back((-2 * b2 - r) / 24);
        cuts.push_back((-2 * b2 + r) / 24);
    }
    cuts.push_back(bound);
    const mp_real eps = mp_epsilon();
    std::vector<mp_real> roots;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        mp_real lo = cuts[i], hi = cuts[i + 1];
        mp_real flo = f(lo), fhi = f(hi);
        if (flo == 0) {
            roots.push_back(lo);
            continue;
        }
        if ((flo > 0) == (fhi > 0)) continue;
        // Bisection until Newton is safe, then Newton.
        for (int it = 0; it < 60; ++it) {
            mp_real mid = (lo + hi) / 2;
            if ((f(mid) > 0) == (flo > 0)) lo = mid;
            else hi = mid;
        }
        mp_real x = (lo + hi) / 2;
        for (int it = 0; it < 200; ++it) {
            mp_real d = df(x);
            if (d == 0) break;
            mp_real step = f(x) / d;
            x -= step;
            if (boost::multiprecision::abs(step) <= eps * (1 + boost::multiprecision::abs(x))) break;
        }
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end(), [](const mp_real& a, const mp_real& b) { return a > b; });
    // Merge numerically identical roots (cannot happen for nonsingular curves).
    return roots;
}

inline mp_real agm(mp_real a, mp_real b) {
    const mp_real eps = mp_epsilon();
    for (int it = 0; it < 10000; ++it) {
        mp_real a1 = (a + b) / 2;
        mp_real b1 = boost::multiprecision::sqrt(a * b);
        if (boost::multiprecision::abs(a1 - b1) <= eps * a1) return a1;
        a = std::move(a1);
        b = std::move(b1);
    }
    throw PrecisionExhausted("AGM did not converge");
}

/// The same period by quadrature in double precision.
inline double period_by_quadrature(double b2, double b4, double b6, const std::vector<double>& roots) {
    using boost::math::quadrature::exp_sinh;
    using boost::math::quadrature::gauss_kronrod;
    const double e1 = roots[0];
    // (4x^3 + b2 x^2 + 2 b4 x + b6) / (4 (x - e1)) = x^2 + p x + q
    const double p = b2 / 4 + e1, q = b4 / 2 + e1 * p;
    // Identity component: 2 int_{e1}^oo dx / sqrt(f), with x = e1 + t^2.
    auto h = [&](double t) {
        const double x = e1 + t * t;
        return 2.0 / std::sqrt(x * x + p * x + q);
    };
    exp_sinh<double> es;
    double total = es.integrate(h);
    if (roots.size() == 3) {
        // The oval: 2 int_{e3}^{e2} dx / sqrt(f), with x = e3 + (e2 - e3) sin^2 theta.
        const double e2 = roots[1], e3 = roots[2];
        auto g = [&](double th) {
            const double s = std::sin(th);
            return 2.0 / std::sqrt(e1 - e3 - (e2 - e3) * s * s);
        };
        total += gauss_kronrod<double, 61>::integrate(g, 0.0, std::acos(-1.0) / 2, 15, 1e-15);
    }
    return total;
}

} // namespace detail

/// Period of the given model (no minimization): scales by u under x = u^2 x' + r.
inline PeriodResult real_period_of_model(const WeierstrassCurve& e, unsigned digits = 30) {
    PrecisionScope scope(digits + 10);
    const auto& inv = e.invariants();
    const mp_real b2 = mp_from(inv.b2), b4 = mp_from(inv.b4), b6 = mp_from(inv.b6);
    const auto roots = detail::real_roots_of_two_torsion_cubic(b2, b4, b6);
    const mp_real pi = mp_pi();
    PeriodResult out;
    if (inv.discriminant > 0) {
        if (roots.size() != 3) throw PrecisionExhausted("expected three real two-torsion roots");
        const mp_real& e1 = roots[0];
        const mp_real& e2 = roots[1];
        const mp_real& e3 = roots[2];
        out.omega = 2 * pi / detail::agm(boost::multiprecision::sqrt(e1 - e3), boost::multiprecision::sqrt(e1 - e2));
        out.components = 2;
    } else {
        if (roots.size() != 1) throw PrecisionExhausted("expected one real two-torsion root");
        const mp_real& e1 = roots[0];
        const mp_real a = 3 * e1 + b2 / 4;
        const mp_real b = boost::multiprecision::sqrt(3 * e1 * e1 + b2 * e1 / 2 + b4 / 2);
        out.omega = 2 * pi / detail::agm(2 * boost::multiprecision::sqrt(b), boost::multiprecision::sqrt(2 * b + a));
        out.components = 1;
    }
    std::vector<double> droots;
    for (const auto& r : roots) droots.push_back(r.convert_to<double>());
    out.quadrature = detail::period_by_quadrature(b2.convert_to<double>(), b4.convert_to<double>(),
                                                  b6.convert_to<double>(), droots);
    const double om = out.omega.convert_to<double>();
    if (std::fabs(out.quadrature - om) > 1e-10 * std::max(1.0, om))
        throw PrecisionExhausted("period by AGM and by quadrature disagree");
    out.error = om * std::pow(10.0, -static_cast<double>(digits));
    return out;
}

/// Period of the global minimal model over all real components.
inline PeriodResult real_period(const WeierstrassCurve& curve, unsigned digits = 30) {
    return real_period_of_model(minimal_model(curve).first, digits);
}

// ---------------------------------------------------------------------------
// Heights. Throughout, h_x(P) = log max(|num x|, |den x|) and the canonical
// height is hhat = lim h_x(2^n P) / 4^n, the normalization under which the
// BSD formula balances.

inline mp_real naive_height(const CurvePoint& p) {
    if (p.is_infinity()) return mp_real(0);
    Integer m = abs(Integer(p.x().get_num()));
    Integer d = p.x().get_den();
    return boost::multiprecision::log(mp_from(m > d ? m : d));
}

namespace detail {

/// Archimedean part in the x-normalization:
/// log max(|x|, 1) + sum_n 4^{-n-1} log max(|F(X_n, Z_n)|, |G(X_n, Z_n)|)
/// where (F : G) is the duplication map on x and (X_n : Z_n) has max norm 1.
inline mp_real archimedean_height_x(const WeierstrassCurve& e, const Rational& x) {
    const auto& inv = e.invariants();
    const mp_real b2 = mp_from(inv.b2), b4 = mp_from(inv.b4), b6 = mp_from(inv.b6), b8 = mp_from(inv.b8);
    mp_real X = mp_from(x), Z = 1;
    mp_real result = boost::multiprecision::log(std::max<mp_real>(boost::multiprecision::abs(X), mp_real(1)));
    {
        mp_real m = std::max<mp_real>(boost::multiprecision::abs(X), Z);
        X /= m;
        Z /= m;
    }
    const unsigned digits = mp_real::default_precision();
    const int steps = static_cast<int>(digits * std::log(10.0) / std::log(4.0)) + 8;
    mp_real weight = mp_real(1) / 4;
    for (int n = 0; n < steps; ++n) {
        const mp_real X2 = X * X, Z2 = Z * Z;
        const mp_real F = X2 * X2 - b4 * X2 * Z2 - 2 * b6 * X * Z2 * Z - b8 * Z2 * Z2;
        const mp_real G = 4 * X2 * X * Z + b2 * X2 * Z2 + 2 * b4 * X * Z2 * Z + b6 * Z2 * Z2;
        const mp_real m = std::max<mp_real>(boost::multiprecision::abs(F), boost::multiprecision::abs(G));
        result += weight * boost::multiprecision::log(m);
        X = F / m;
        Z = G / m;
        weight /= 4;
    }
    return result;
}

/// Non-archimedean part at p in the x-normalization, divided by log p, for a
/// point on a minimal model.
inline Rational local_height_x(const WeierstrassCurve& e, const CurvePoint& P, const Integer& p) {
    const Rational& x = P.x();
    const Rational& y = P.y();
    const int vx = valuation(x, p);
    if (vx < 0) return Rational(-vx);
    const auto& inv = e.invariants();
    const int N = valuation(inv.discriminant, p);
    if (N == 0) return 0;
    const int A = valuation(3 * x * x + 2 * e.a2() * x + e.a4() - e.a1() * y, p);
    const int B = valuation(2 * y + e.a1() * x + e.a3(), p);
    if (A <= 0 || B <= 0) return 0; // nonsingular reduction
    if (valuation(inv.c4, p) == 0) {
        // Multiplicative: the component index is min(B, N/2).
        const Rational M = std::min(Rational(B), ratio(N, 2));
        return M * (M - N) / N;
    }
    const int C = valuation(3 * x * x * x * x + inv.b2 * x * x * x + 3 * inv.b4 * x * x + 3 * inv.b6 * x + inv.b8, p);
    if (C >= 3 * B) return ratio(-2 * B, 3);
    return ratio(-C, 4);
}

} // namespace detail

/// Canonical height, from the decomposition into local heights on the
/// minimal model.
inline mp_real canonical_height(const WeierstrassCurve& curve, const CurvePoint& P, unsigned digits = 30) {
    require_on_curve(curve, P);
    PrecisionScope scope(digits + 10);
    if (P.is_infinity()) return mp_real(0);
    auto [e, iso] = minimal_model(curve);
    const CurvePoint Q = transform_point(P, iso);
    mp_real hx = detail::archimedean_height_x(e, Q.x());
    std::vector<Integer> primes = prime_divisors(abs(to_integer(e.discriminant())));
    for (const auto& p : prime_divisors(Integer(Q.x().get_den())))
        if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
    for (const auto& p : primes) {
        const Rational z = detail::local_height_x(e, Q, p);
        if (z != 0) hx += mp_from(z) * boost::multiprecision::log(mp_from(p));
    }
    mp_real h = hx;
    // Tiny negative values are rounding noise around a torsion point.
    if (h < 0 && h > -mp_real("1e-20")) h = 0;
    return h;
}

/// The doubling limit h_x(2^k P) / 4^k; exact arithmetic, so k stays small.
inline mp_real canonical_height_doubling(const WeierstrassCurve& curve, const CurvePoint& P, int k,
                                         unsigned digits = 30) {
    require_on_curve(curve, P);
    PrecisionScope scope(digits + 10);
    CurvePoint Q = P;
    for (int i = 0; i < k; ++i) {
        if (Q.is_infinity()) return mp_real(0);
        Q = add(curve, Q, Q);
    }
    return naive_height(Q) / boost::multiprecision::pow(mp_real(4), k);
}

inline mp_real height_pairing(const WeierstrassCurve& e, const CurvePoint& P, const CurvePoint& Q,
                              unsigned digits = 30) {
    PrecisionScope scope(digits + 10);
    return (canonical_height(e, add(e, P, Q), digits) - canonical_height(e, P, digits) -
            canonical_height(e, Q, digits)) / 2;
}

/// |det| of the height-pairing Gram matrix; 1 for the empty list.
inline mp_real regulator(const WeierstrassCurve& e, const std::vector<CurvePoint>& gens, unsigned digits = 30) {
    PrecisionScope scope(digits + 10);
    const std::size_t r = gens.size();
    if (r == 0) return mp_real(1);
    for (const auto& g : gens) require_on_curve(e, g);
    std::vector<std::vector<mp_real>> M(r, std::vector<mp_real>(r));
    std::vector<mp_real> h(r);
    for (std::size_t i = 0; i < r; ++i) h[i] = canonical_height(e, gens[i], digits);
    for (std::size_t i = 0; i < r; ++i) {
        M[i][i] = h[i];
        for (std::size_t j = i + 1; j < r; ++j)
            M[i][j] = M[j][i] = (canonical_height(e, add(e, gens[i], gens[j]), digits) - h[i] - h[j]) / 2;
    }
    // Gaussian elimination with partial pivoting.
    mp_real det = 1, scale = 1;
    for (std::size_t i = 0; i < r; ++i) scale *= std::max<mp_real>(h[i], mp_real(0));
    for (std::size_t c = 0; c < r; ++c) {
        std::size_t piv = c;
        for (std::size_t i = c + 1; i < r; ++i)
            if (boost::multiprecision::abs(M[i][c]) > boost::multiprecision::abs(M[piv][c])) piv = i;
        if (piv != c) {
            std::swap(M[piv], M[c]);
            det = -det;
        }
        det *= M[c][c];
        if (M[c][c] == 0) break;
        for (std::size_t i = c + 1; i < r; ++i) {
            mp_real f = M[i][c] / M[c][c];
            for (std::size_t j = c; j < r; ++j) M[i][j] -= f * M[c][j];
        }
    }
    det = boost::multiprecision::abs(det);
    const mp_real tiny = boost::multiprecision::pow(mp_real(10), -static_cast<int>(digits) / 2);
    if (!(det > tiny * std::max<mp_real>(scale, mp_real(1)))) throw DependentGenerators();
    return det;
}

// ---------------------------------------------------------------------------
// BSD report.

struct BsdOptions {
    AnalyticOptions analytic{};
    double rank_tolerance = 1e-10;
};

struct BsdReport {
    std::string curve;
    Integer conductor;
    int root_number = 1;
    int rank = 0;
    AnalyticValue leading;        // L^{(r)}(1) / r!
    mp_real omega;
    double omega_error = 0;
    mp_real regulator{1};
    double regulator_error = 0;
    int torsion = 1;
    std::map<std::string, int> tamagawa;
    Integer tamagawa_product{1};
    mp_real sha;
    double sha_error = 0;
    std::vector<std::string> flags;

    bool has_flag(const std::string& f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }

    nlohmann::ordered_json to_json(int digits = 20) const {
        auto val = [&](const mp_real& v, double err) {
            nlohmann::ordered_json j;
            j["value"] = v.str(digits);
            j["error"] = err;
            return j;
        };
        nlohmann::ordered_json j;
        j["curve"] = curve;
        j["N"] = conductor.get_str();
        j["w"] = root_number;
        j["rank_analytic"] = rank;
        j["L_leading"] = val(leading.value.re, leading.error);
        j["omega"] = val(omega, omega_error);
        j["regulator"] = val(regulator, regulator_error);
        j["torsion"] = torsion;
        nlohmann::ordered_json tam = nlohmann::ordered_json::object();
        for (const auto& [p, c] : tamagawa) tam[p] = c;
        j["tamagawa"] = tam;
        j["sha_predicted"] = val(sha, sha_error);
        j["flags"] = flags;
        return j;
    }
};

inline BsdReport bsd_report(const WeierstrassCurve& curve, const std::vector<CurvePoint>& generators,
                            const BsdOptions& opt = {}) {
    for (const auto& g : generators) require_on_curve(curve, g);
    const unsigned digits = opt.analytic.digits;
    AnalyticContext ctx(curve, opt.analytic);
    BsdReport rep;
    rep.curve = ctx.curve().to_string();
    rep.conductor = ctx.conductor();
    auto rank = analytic_rank(ctx, opt.rank_tolerance);
    rep.root_number = rank.root_number;
    rep.rank = rank.rank;
    if (!rank.determined) rep.flags.push_back("rank_undetermined");
    rep.leading = leading_coefficient(ctx, rep.rank);

    auto period = real_period(curve, digits);
    rep.omega = period.omega;
    rep.omega_error = period.error;

    PrecisionScope scope(digits + 10);
    if (generators.size() != static_cast<std::size_t>(rep.rank)) rep.flags.push_back("generator_count_mismatch");
    try {
        rep.regulator = regulator(curve, generators, digits);
        rep.regulator_error = rep.regulator.convert_to<double>() * std::pow(10.0, 5.0 - digits);
    } catch (const DependentGenerators&) {
        rep.flags.push_back("dependent_generators");
        rep.regulator = 0;
    }
    rep.torsion = torsion_subgroup(curve).order();
    for (const auto& ld : ctx.prime_data().bad_primes()) {
        rep.tamagawa[ld.p.get_str()] = ld.c_p;
        rep.tamagawa_product *= ld.c_p;
    }
    if ((rep.rank % 2 == 1) != (rep.root_number == -1)) rep.flags.push_back("rank_parity_mismatch");

    if (rep.regulator > 0) {
        const mp_real denom = rep.omega * rep.regulator * mp_from(rep.tamagawa_product);
        rep.sha = rep.leading.value.re * rep.torsion * rep.torsion / denom;
        const double rel = rep.leading.error / std::max(1e-300, std::fabs(rep.leading.real())) +
                           rep.omega_error / rep.omega.convert_to<double>() +
                           rep.regulator_error / rep.regulator.convert_to<double>();
        rep.sha_error = std::fabs(rep.sha.convert_to<double>()) * rel;
        const double s = rep.sha.convert_to<double>();
        const double root = std::round(std::sqrt(std::max(s, 0.0)));
        if (root >= 1 && std::fabs(s - root * root) < 1e-4) rep.flags.push_back("sha_near_square");
        else rep.flags.push_back("sha_not_near_square");
    }
    return rep;
}

} // namespace lfunc
