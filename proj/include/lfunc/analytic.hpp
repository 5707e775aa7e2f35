#pragma once

// L(E, s) everywhere in the plane from the q-expansion: the Mellin integral of
// f(iy) is split at y = t/sqrt(N) and the piece near zero is folded back with
// the Fricke involution, giving
//
//   Lambda(s) = t^s sum a_n g(s, 2 pi n t / sqrt N)
//             + w t^{s-2} sum a_n g(2 - s, 2 pi n / (t sqrt N)),
//
// where Lambda(s) = N^{s/2} (2 pi)^{-s} Gamma(s) L(s) and
// g(s, x) = x^{-s} Gamma(s, x). Any t > 0 gives the same function when w is
// the root number; t = 1 makes the symmetry Lambda(s) = w Lambda(2 - s)
// automatic, so checks of the functional equation use t != 1.

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"
#include "lfunc/numeric.hpp"
#include "lfunc/series.hpp"

namespace lfunc {

struct AnalyticOptions {
    unsigned digits = 30;          // working precision in decimal digits
    double target = 0;             // target accuracy; 0 means 10^{4 - digits}
    std::size_t n_max = 0;         // 0 means chosen from the tail bound
    PointCountOptions counting{};
};

/// A value with an explicit error bound.
struct AnalyticValue {
    MpComplex value;
    double error = 0;

    std::complex<double> approx() const { return value.to_double(); }
    double real() const { return value.re.convert_to<double>(); }

    nlohmann::ordered_json to_json(int digits = 20) const {
        nlohmann::ordered_json j;
        j["re"] = value.re.str(digits);
        j["im"] = value.im.str(digits);
        j["error"] = error;
        return j;
    }
};

struct RankResult {
    int rank = 0;
    int root_number = 1;
    AnalyticValue leading;      // Lambda^{(rank)}(1)
    bool determined = true;     // false when no derivative up to the cap exceeds tol
    std::string note;
};

namespace detail {

/// Upper bound for sum_{n > M} 2n e^{-alpha n} / (alpha n - c), the tail of
/// sum |a_n| |g^{(k)}(s, alpha n)| / k! using |a_n| <= 2n and
/// |g^{(k)}(s, x)| / k! <= e^{-x} / (x - max(Re s - 1, 0) - 1).
inline double exponential_tail(std::size_t M, double alpha, double c) {
    const double m = static_cast<double>(M + 1);
    if (alpha * m <= c + 1e-9) return std::numeric_limits<double>::infinity();
    const double r = std::exp(-alpha);
    // sum_{n >= m} n r^n = r^m (m - (m - 1) r) / (1 - r)^2
    const double log_sum = m * std::log(r) + std::log(m - (m - 1) * r) - 2 * std::log1p(-r);
    return 2 * std::exp(log_sum) / (alpha * m - c);
}

} // namespace detail

class AnalyticContext {
public:
    explicit AnalyticContext(const WeierstrassCurve& curve, AnalyticOptions opt = {})
        : data_(curve, opt.counting), opt_(opt) {
        if (opt_.digits < 10) throw PreconditionViolation("working precision must be at least 10 digits");
        if (opt_.target <= 0) opt_.target = std::pow(10.0, 4.0 - static_cast<double>(opt_.digits));
        conductor_ = data_.conductor();
        sqrt_n_ = std::sqrt(conductor_.get_d());
    }

    const WeierstrassCurve& curve() const { return data_.minimal(); }
    const PrimeData& prime_data() const { return data_; }
    const Integer& conductor() const { return conductor_; }
    unsigned digits() const { return opt_.digits; }
    unsigned working_digits() const { return opt_.digits + 10; }
    double target() const { return opt_.target; }

    /// Smallest M whose tail bound for the given x-scale and exponent slack
    /// is below target/100, unless fixed by the caller.
    std::size_t terms_needed(double alpha, double c) const {
        if (opt_.n_max) return opt_.n_max;
        std::size_t M = static_cast<std::size_t>((c + 2) / alpha) + 1;
        while (detail::exponential_tail(M, alpha, c) > opt_.target / 100) M += 1 + M / 8;
        return M;
    }

    /// Coefficients a_1..a_M, extended on demand.
    const DirichletCoefficients& coefficients(std::size_t M) const {
        std::lock_guard lock(mu_);
        if (coeffs_.n_max() < M) coeffs_ = dirichlet_coefficients(data_, std::max(M, 2 * coeffs_.n_max()));
        return coeffs_;
    }

    double alpha() const { return 2 * std::acos(-1.0) / sqrt_n_; }

    std::optional<int> cached_root_number() const {
        std::lock_guard lock(mu_);
        return w_;
    }
    void cache_root_number(int w) const {
        std::lock_guard lock(mu_);
        w_ = w;
    }

private:
    PrimeData data_;
    AnalyticOptions opt_;
    Integer conductor_;
    double sqrt_n_ = 1;
    mutable std::mutex mu_;
    mutable DirichletCoefficients coeffs_;
    mutable std::optional<int> w_;
};

namespace detail {

struct LambdaJet {
    Jet jet;
    double error = 0; // bound for every Taylor coefficient
};

/// Lambda as a jet in s at s0, for a given sign w and split parameter t.
inline LambdaJet lambda_jet(const AnalyticContext& ctx, const MpComplex& s0, int order, int w, double t) {
    if (!(t > 0)) throw PreconditionViolation("split parameter t must be positive");
    PrecisionScope scope(ctx.working_digits());
    const double sigma = s0.re.convert_to<double>();
    const double alpha = ctx.alpha();
    const double c1 = std::max(sigma - 1, 0.0) + 1, c2 = std::max(1 - sigma, 0.0) + 1;
    const std::size_t M1 = ctx.terms_needed(alpha * t, c1);
    const std::size_t M2 = ctx.terms_needed(alpha / t, c2);
    const auto& a = ctx.coefficients(std::max(M1, M2)).a;

    const Jet S = Jet::variable(s0, order);
    const Jet S2 = MpComplex(mp_real(2)) - S;
    const mp_real pi2 = 2 * mp_pi();
    const mp_real sqrt_n = boost::multiprecision::sqrt(mp_from(ctx.conductor()));
    const mp_real tt(t);

    Jet sum1(order), sum2(order);
    mp_real abs_sum = 0;
    for (std::size_t n = 1; n <= std::max(M1, M2); ++n) {
        if (a[n] == 0) continue;
        const MpComplex an(mp_real(a[n]));
        const mp_real base = pi2 * mp_real(n) / sqrt_n;
        if (n <= M1) {
            Jet g = scaled_incomplete_gamma(S, base * tt);
            abs_sum += abs(g.value()) * boost::multiprecision::abs(an.re);
            sum1 += g * an;
        }
        if (n <= M2) {
            Jet g = scaled_incomplete_gamma(S2, base / tt);
            abs_sum += abs(g.value()) * boost::multiprecision::abs(an.re);
            sum2 += g * an;
        }
    }
    Jet result = pow(tt, S) * sum1;
    if (w != 0) result += pow(tt, S - MpComplex(mp_real(2))) * sum2 * MpComplex(mp_real(w));

    // Truncation tails, scaled by the size of t^s, t^{s-2} and their jets.
    const double lt = std::fabs(std::log(t));
    const double f1 = std::pow(t, sigma) * std::exp(lt), f2 = std::pow(t, sigma - 2) * std::exp(lt);
    double err = f1 * exponential_tail(M1, alpha * t, c1) + f2 * exponential_tail(M2, alpha / t, c2);
    const double rounding = (abs_sum.convert_to<double>() + 1) * static_cast<double>(M1 + M2 + 50) *
                            std::pow(10.0, -static_cast<double>(ctx.working_digits()) + 2);
    return {result, err + rounding};
}

/// N^{s/2} (2 pi)^{-s} Gamma(s) as a jet.
inline Jet archimedean_factor(const AnalyticContext& ctx, const Jet& S) {
    const mp_real log_ratio = boost::multiprecision::log(mp_from(ctx.conductor())) / 2 -
                              boost::multiprecision::log(2 * mp_pi());
    return exp(S * MpComplex(log_ratio) + log_gamma(S));
}

inline MpComplex eval_f(const AnalyticContext& ctx, const mp_real& y) {
    // f(iy) = sum a_n e^{-2 pi n y}
    const double alpha_y = 2 * std::acos(-1.0) * y.convert_to<double>();
    const std::size_t M = ctx.terms_needed(alpha_y, 0);
    const auto& a = ctx.coefficients(M).a;
    const mp_real q = boost::multiprecision::exp(-2 * mp_pi() * y);
    mp_real qn = 1, sum = 0;
    for (std::size_t n = 1; n <= M; ++n) {
        qn *= q;
        if (a[n]) sum += mp_real(a[n]) * qn;
    }
    return MpComplex(sum);
}

} // namespace detail

/// |Lambda(s) - w Lambda(2 - s)| with Lambda built from the split at t / sqrt(N).
inline AnalyticValue fe_residual(const AnalyticContext& ctx, const MpComplex& s, int w, double t = 1.2) {
    auto a = detail::lambda_jet(ctx, s, 0, w, t);
    auto b = detail::lambda_jet(ctx, MpComplex(mp_real(2)) - s, 0, w, t);
    PrecisionScope scope(ctx.working_digits());
    MpComplex diff = a.jet.value() - b.jet.value() * MpComplex(mp_real(w));
    return {MpComplex(abs(diff)), a.error + b.error};
}

/// Root number from the Fricke involution on f, confirmed by the functional
/// equation with an asymmetric split.
inline int root_number(const AnalyticContext& ctx) {
    if (auto w = ctx.cached_root_number()) return *w;
    PrecisionScope scope(ctx.working_digits());
    const mp_real N = mp_from(ctx.conductor());
    const mp_real y0 = 1 / boost::multiprecision::sqrt(N);
    std::optional<int> sign;
    for (double u : {1.05, 1.17, 1.31}) {
        const mp_real y = y0 * mp_real(u);
        const MpComplex fy = detail::eval_f(ctx, y);
        const MpComplex fr = detail::eval_f(ctx, 1 / (N * y));
        if (boost::multiprecision::abs(fy.re) < mp_real("1e-12")) continue;
        // f(i/(Ny)) = w N y^2 f(iy)
        const double ratio = (fr.re / (N * y * y * fy.re)).convert_to<double>();
        const int e = ratio > 0 ? 1 : -1;
        if (std::fabs(ratio - e) > 1e-6)
            throw PrecisionExhausted("Fricke ratio " + std::to_string(ratio) + " is not within 1e-6 of +-1");
        if (sign && *sign != e) throw PrecisionExhausted("Fricke ratio changes sign between samples");
        sign = e;
    }
    if (!sign) throw PrecisionExhausted("f(iy) vanishes numerically at every sample point");
    const int w = *sign;
    // The other sign must visibly fail the functional equation.
    const MpComplex s(mp_real(1.2));
    const auto good = fe_residual(ctx, s, w);
    const auto bad = fe_residual(ctx, s, -w);
    if (!(good.real() < 1e-8 + good.error) || !(bad.real() > 1e3 * (good.real() + good.error)))
        throw PrecisionExhausted("root number from the Fricke test is not confirmed by the functional equation");
    ctx.cache_root_number(w);
    return w;
}

inline AnalyticValue lambda_mp(const AnalyticContext& ctx, const MpComplex& s) {
    const int w = root_number(ctx);
    auto lj = detail::lambda_jet(ctx, s, 0, w, 1.0);
    return {lj.jet.value(), lj.error};
}

inline AnalyticValue lambda(const AnalyticContext& ctx, std::complex<double> s) {
    PrecisionScope scope(ctx.working_digits());
    return lambda_mp(ctx, MpComplex(s));
}

inline AnalyticValue l_value_mp(const AnalyticContext& ctx, const MpComplex& s) {
    const int w = root_number(ctx);
    auto lj = detail::lambda_jet(ctx, s, 0, w, 1.0);
    PrecisionScope scope(ctx.working_digits());
    const MpComplex A = detail::archimedean_factor(ctx, Jet(0, s)).value();
    return {lj.jet.value() / A, lj.error / abs(A).convert_to<double>()};
}

inline AnalyticValue l_value(const AnalyticContext& ctx, std::complex<double> s) {
    PrecisionScope scope(ctx.working_digits());
    return l_value_mp(ctx, MpComplex(s));
}

/// Taylor coefficients of L at s = 1 up to the given order, each with a bound.
inline std::vector<AnalyticValue> l_taylor_at_one(const AnalyticContext& ctx, int order) {
    const int w = root_number(ctx);
    PrecisionScope scope(ctx.working_digits());
    const MpComplex one(mp_real(1));
    auto lj = detail::lambda_jet(ctx, one, order, w, 1.0);
    const Jet A = detail::archimedean_factor(ctx, Jet::variable(one, order));
    const Jet L = lj.jet / A;
    // Dividing by A mixes coefficients; bound with the sum of |1/A| coefficients.
    const Jet invA = Jet(order, MpComplex(1)) / A;
    double inv_norm = 0;
    for (const auto& c : invA.c) inv_norm += abs(c).convert_to<double>();
    std::vector<AnalyticValue> out;
    for (int k = 0; k <= order; ++k) out.push_back({L.c[static_cast<std::size_t>(k)], lj.error * inv_norm});
    return out;
}

/// k-th derivative of L at s = 1.
inline AnalyticValue l_derivative(const AnalyticContext& ctx, int order) {
    if (order < 0) throw PreconditionViolation("derivative order must be nonnegative");
    auto coeffs = l_taylor_at_one(ctx, order);
    PrecisionScope scope(ctx.working_digits());
    mp_real fact = 1;
    for (int k = 2; k <= order; ++k) fact *= k;
    AnalyticValue v = coeffs.back();
    v.value *= MpComplex(fact);
    v.error *= fact.convert_to<double>();
    return v;
}

/// Derivatives of Lambda at s = 1.
inline std::vector<AnalyticValue> lambda_derivatives_at_one(const AnalyticContext& ctx, int order) {
    const int w = root_number(ctx);
    PrecisionScope scope(ctx.working_digits());
    auto lj = detail::lambda_jet(ctx, MpComplex(mp_real(1)), order, w, 1.0);
    std::vector<AnalyticValue> out;
    mp_real fact = 1;
    for (int k = 0; k <= order; ++k) {
        if (k > 1) fact *= k;
        out.push_back({lj.jet.c[static_cast<std::size_t>(k)] * MpComplex(fact), lj.error * fact.convert_to<double>()});
    }
    return out;
}

/// Apparent order of vanishing at s = 1: the smallest k of the parity forced
/// by w with |Lambda^{(k)}(1)| > tol. A numerical statement, not a proof.
inline RankResult analytic_rank(const AnalyticContext& ctx, double tol = 1e-10, int max_order = 5) {
    if (!(tol > 0)) throw PreconditionViolation("tolerance must be positive");
    RankResult r;
    r.root_number = root_number(ctx);
    auto d = lambda_derivatives_at_one(ctx, max_order);
    const int parity = r.root_number == 1 ? 0 : 1;
    for (int k = parity; k <= max_order; k += 2) {
        if (std::fabs(d[static_cast<std::size_t>(k)].real()) > tol + d[static_cast<std::size_t>(k)].error) {
            r.rank = k;
            r.leading = d[static_cast<std::size_t>(k)];
            r.note = "numerical: apparent order of vanishing at tolerance " + std::to_string(tol);
            return r;
        }
    }
    r.rank = max_order + 1;
    r.determined = false;
    r.note = "no derivative up to order " + std::to_string(max_order) + " exceeds the tolerance";
    return r;
}

/// Leading Taylor coefficient L^{(r)}(1)/r! at the analytic rank.
inline AnalyticValue leading_coefficient(const AnalyticContext& ctx, int rank) {
    auto c = l_taylor_at_one(ctx, rank);
    return c.back();
}

} // namespace lfunc
