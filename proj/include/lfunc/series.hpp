#pragma once

// Euler factors, Dirichlet coefficients, evaluation in the region of absolute
// convergence, and the local zeta-function identities as exact checks.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lfunc/local.hpp"

namespace lfunc {

/// Local factor 1 + c1 T + c2 T^2 in T = p^{-s}; L_p(s) is its reciprocal.
struct EulerFactor {
    Integer p;
    std::vector<Integer> coeffs{Integer(1)}; // constant term first, trailing zeros trimmed

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    template <class C>
    C evaluate(const C& T) const {
        C acc(0);
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * T + C(coeffs[i].get_d());
        return acc;
    }

    std::string to_string() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            const Integer& c = coeffs[i];
            if (i == 0) {
                os << c.get_str();
                continue;
            }
            if (c == 0) continue;
            os << (c < 0 ? " - " : " + ");
            Integer a = abs(c);
            if (a != 1) os << a.get_str();
            os << (i == 1 ? "T" : "T^" + std::to_string(i));
        }
        return os.str();
    }

    friend bool operator==(const EulerFactor&, const EulerFactor&) = default;
};

inline EulerFactor euler_factor(const Integer& p, long a_p, Reduction red) {
    EulerFactor f{p, {Integer(1)}};
    switch (red) {
        case Reduction::Good: f.coeffs = {Integer(1), Integer(-a_p), p}; break;
        case Reduction::SplitMultiplicative: f.coeffs = {Integer(1), Integer(-1)}; break;
        case Reduction::NonsplitMultiplicative: f.coeffs = {Integer(1), Integer(1)}; break;
        case Reduction::Additive: break;
    }
    return f;
}

inline EulerFactor local_euler_factor(const LocalData& ld) { return euler_factor(ld.p, ld.a_p, ld.reduction); }

// ---------------------------------------------------------------------------
// Streaming a_p over all primes up to a bound.

/// Minimal model together with its bad-prime data, shared by the evaluators.
class PrimeData {
public:
    explicit PrimeData(const WeierstrassCurve& curve, PointCountOptions opt = {})
        : minimal_(minimal_model(curve).first), opt_(opt) {
        for (auto& ld : bad_local_data(minimal_, opt_)) {
            conductor_ *= ipow(ld.p, static_cast<unsigned long>(ld.f_p));
            bad_.emplace(ld.p.get_str(), ld);
        }
    }

    const WeierstrassCurve& minimal() const { return minimal_; }
    const Integer& conductor() const { return conductor_; }
    std::vector<LocalData> bad_primes() const {
        std::vector<LocalData> out;
        for (const auto& [k, v] : bad_) out.push_back(v);
        std::sort(out.begin(), out.end(), [](const LocalData& a, const LocalData& b) { return a.p < b.p; });
        return out;
    }
    const LocalData* bad(std::uint64_t p) const {
        auto it = bad_.find(std::to_string(p));
        return it == bad_.end() ? nullptr : &it->second;
    }
    bool is_bad(std::uint64_t p) const { return bad(p) != nullptr; }

    long ap(std::uint64_t p) const {
        if (const LocalData* ld = bad(p)) return ld->a_p;
        return lfunc::ap(minimal_, Integer(static_cast<unsigned long>(p)), opt_);
    }

    EulerFactor factor(std::uint64_t p) const {
        if (const LocalData* ld = bad(p)) return local_euler_factor(*ld);
        return euler_factor(Integer(static_cast<unsigned long>(p)), ap(p), Reduction::Good);
    }

    /// Calls f(p, a_p) for every prime p <= p_max in increasing order.
    template <class F>
    void for_each_ap(std::uint64_t p_max, F&& f) const {
        if (p_max < 2) return;
        // Enumeration tables for small primes are built per prime inside ap();
        // above the threshold the short model is reduced once per prime here.
        const auto& inv = minimal_.invariants();
        const Integer c4 = to_integer(inv.c4), c6 = to_integer(inv.c6);
        std::vector<bool> composite(p_max + 1, false);
        for (std::uint64_t i = 2; i <= p_max; ++i) {
            if (composite[i]) continue;
            if (i <= p_max / i)
                for (std::uint64_t j = i * i; j <= p_max; j += i) composite[j] = true;
            if (i <= opt_.exhaustive_limit || is_bad(i) || i >= (1ULL << 31)) {
                f(i, ap(i));
                continue;
            }
            const std::uint64_t A = (i - mod(27 * c4, Integer(static_cast<unsigned long>(i))).get_ui()) % i;
            const std::uint64_t B = (i - mod(54 * c6, Integer(static_cast<unsigned long>(i))).get_ui()) % i;
            const std::uint64_t N = detail::count_bsgs_fast(static_cast<std::uint32_t>(i), A, B);
            f(i, static_cast<long>(static_cast<std::int64_t>(i + 1) - static_cast<std::int64_t>(N)));
        }
    }

private:
    WeierstrassCurve minimal_;
    PointCountOptions opt_;
    Integer conductor_{1};
    std::map<std::string, LocalData> bad_;
};

// ---------------------------------------------------------------------------
// Dirichlet coefficients.

struct DirichletCoefficients {
    std::vector<std::int64_t> a; // a[0] unused, a[1] = 1
    Integer conductor;
    std::vector<Integer> bad_primes;

    std::size_t n_max() const { return a.empty() ? 0 : a.size() - 1; }
    std::int64_t operator[](std::size_t n) const { return a.at(n); }

    /// "n a_n" lines.
    std::string to_text() const {
        std::ostringstream os;
        for (std::size_t n = 1; n < a.size(); ++n) os << n << ' ' << a[n] << '\n';
        return os.str();
    }
    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["conductor"] = conductor.get_str();
        std::vector<std::string> bad;
        for (const auto& p : bad_primes) bad.push_back(p.get_str());
        j["bad_primes"] = bad;
        j["a"] = std::vector<std::int64_t>(a.begin() + 1, a.end());
        return j;
    }
};

inline DirichletCoefficients dirichlet_coefficients(const PrimeData& data, std::size_t n_max) {
    if (n_max < 1) throw PreconditionViolation("n_max must be at least 1");
    DirichletCoefficients out;
    out.conductor = data.conductor();
    for (const auto& ld : data.bad_primes()) out.bad_primes.push_back(ld.p);
    auto& a = out.a;
    a.assign(n_max + 1, 0);
    a[1] = 1;
    std::vector<std::uint32_t> spf(n_max + 1, 0);
    for (std::size_t i = 2; i <= n_max; ++i)
        if (!spf[i])
            for (std::size_t j = i; j <= n_max; j += i)
                if (!spf[j]) spf[j] = static_cast<std::uint32_t>(i);
    data.for_each_ap(n_max, [&](std::uint64_t p, long ap) {
        // Prime powers by the Hecke recurrence.
        const std::int64_t eps = data.is_bad(p) ? 0 : 1;
        const auto P = static_cast<std::int64_t>(p);
        a[p] = ap;
        std::int64_t prev = 1, cur = ap;
        for (std::uint64_t q = p; q <= n_max / p;) {
            q *= p;
            std::int64_t next = ap * cur - eps * P * prev;
            a[q] = next;
            prev = cur;
            cur = next;
        }
    });
    // Composite indices from the factorization n = p^k m with p the least prime.
    for (std::size_t n = 2; n <= n_max; ++n) {
        const std::size_t p = spf[n];
        std::size_t q = p, m = n / p;
        while (m % p == 0) {
            m /= p;
            q *= p;
        }
        if (m != 1) a[n] = a[q] * a[m];
    }
    return out;
}

inline DirichletCoefficients dirichlet_coefficients(const WeierstrassCurve& curve, std::size_t n_max) {
    return dirichlet_coefficients(PrimeData(curve), n_max);
}

// ---------------------------------------------------------------------------
// Evaluation for Re(s) > 3/2.

struct SeriesValue {
    std::complex<double> value;
    double error_bound = 0; // truncation estimate
};

namespace detail {

inline void require_convergence(const std::complex<double>& s) {
    if (!(s.real() > 1.5))
        throw OutsideConvergenceRegion("Re(s) = " + std::to_string(s.real()) + " is not in the half-plane Re(s) > 3/2");
}

// Neumaier compensated summation for complex values.
struct CompensatedSum {
    double re = 0, im = 0, cre = 0, cim = 0;
    static void step(double& sum, double& c, double x) {
        double t = sum + x;
        c += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    void add(const std::complex<double>& z) {
        step(re, cre, z.real());
        step(im, cim, z.imag());
    }
    std::complex<double> value() const { return {re + cre, im + cim}; }
};

/// Bound for sum_{n > N} d(n) n^{1/2 - sigma}, from D(x) <= x (log x + 1)
/// and partial summation.
inline double divisor_tail_bound(double N, double sigma) {
    const double alpha = sigma - 0.5;
    const double L = std::log(N);
    return alpha * std::pow(N, 1 - alpha) * ((L + 1) / (alpha - 1) + 1 / ((alpha - 1) * (alpha - 1)));
}

} // namespace detail

inline SeriesValue eval_dirichlet(const DirichletCoefficients& coeffs, std::complex<double> s) {
    detail::require_convergence(s);
    detail::CompensatedSum sum;
    for (std::size_t n = 1; n < coeffs.a.size(); ++n) {
        if (coeffs.a[n] == 0) continue;
        sum.add(static_cast<double>(coeffs.a[n]) * std::exp(-s * std::log(static_cast<double>(n))));
    }
    return {sum.value(), detail::divisor_tail_bound(static_cast<double>(coeffs.n_max()), s.real())};
}

inline SeriesValue eval_dirichlet(const WeierstrassCurve& curve, std::complex<double> s, std::size_t n_max) {
    detail::require_convergence(s);
    return eval_dirichlet(dirichlet_coefficients(curve, n_max), s);
}

/// Truncated Euler products over p <= p_max at several points, sharing one
/// pass over the primes.
inline std::vector<SeriesValue> eval_euler(const PrimeData& data, const std::vector<std::complex<double>>& points,
                                           std::uint64_t p_max) {
    for (const auto& s : points) detail::require_convergence(s);
    std::vector<detail::CompensatedSum> log_sums(points.size());
    data.for_each_ap(p_max, [&](std::uint64_t p, long ap) {
        const double logp = std::log(static_cast<double>(p));
        const LocalData* ld = data.bad(p);
        for (std::size_t i = 0; i < points.size(); ++i) {
            const std::complex<double> T = std::exp(-points[i] * logp);
            const std::complex<double> f = ld ? local_euler_factor(*ld).evaluate(T)
                                              : 1.0 - static_cast<double>(ap) * T + static_cast<double>(p) * T * T;
            log_sums[i].add(-std::log(f));
        }
    });
    std::vector<SeriesValue> out;
    const double P = static_cast<double>(std::max<std::uint64_t>(p_max, 2));
    for (std::size_t i = 0; i < points.size(); ++i) {
        // |log L_p| <= -2 log(1 - p^{1/2 - sigma}) for the omitted primes.
        const double sigma = points[i].real();
        const double tail = 2 * std::pow(P, 1.5 - sigma) / ((sigma - 1.5) * (1 - std::pow(P, 0.5 - sigma)));
        const std::complex<double> v = std::exp(log_sums[i].value());
        out.push_back({v, std::abs(v) * std::expm1(tail)});
    }
    return out;
}

/// Truncated Euler product over p <= p_max.
inline SeriesValue eval_euler(const PrimeData& data, std::complex<double> s, std::uint64_t p_max) {
    return eval_euler(data, std::vector<std::complex<double>>{s}, p_max).front();
}

inline SeriesValue eval_euler(const WeierstrassCurve& curve, std::complex<double> s, std::uint64_t p_max) {
    detail::require_convergence(s);
    return eval_euler(PrimeData(curve), s, p_max);
}

/// zeta(s) for Re(s) > 1 by Euler-Maclaurin.
inline std::complex<double> riemann_zeta(std::complex<double> s) {
    if (!(s.real() > 1)) throw OutsideConvergenceRegion("riemann_zeta requires Re(s) > 1");
    const int N = 20;
    std::complex<double> sum = 0;
    for (int n = 1; n < N; ++n) sum += std::exp(-s * std::log(static_cast<double>(n)));
    const double logN = std::log(static_cast<double>(N));
    const std::complex<double> Ns = std::exp(-s * logN);
    sum += Ns * static_cast<double>(N) / (s - 1.0) + 0.5 * Ns;
    // B_{2k} / (2k)!
    static const double b[] = {1.0 / 12, -1.0 / 720, 1.0 / 30240, -1.0 / 1209600, 1.0 / 47900160,
                               -691.0 / 1307674368000.0, 1.0 / 74724249600.0};
    std::complex<double> rising = s; // s (s+1) ... (s + 2k - 2)
    double Npow = 1.0 / N;           // N^{-2k+1}
    for (int k = 1; k <= 7; ++k) {
        sum += b[k - 1] * rising * Ns * Npow;
        rising *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
        Npow /= static_cast<double>(N) * N;
    }
    return sum;
}

/// Riemann zeta with the Euler factors at the primes in S removed.
inline std::complex<double> incomplete_zeta(std::complex<double> s, const std::vector<Integer>& S) {
    std::complex<double> z = riemann_zeta(s);
    for (const auto& p : S) z *= 1.0 - std::exp(-s * std::log(p.get_d()));
    return z;
}

// ---------------------------------------------------------------------------
// Exact power series and the local zeta identities.

using PowerSeries = std::vector<Rational>; // coefficients of T^0 .. T^k

inline PowerSeries series_mul(const PowerSeries& a, const PowerSeries& b, std::size_t k) {
    PowerSeries out(k + 1, Rational(0));
    for (std::size_t i = 0; i < a.size() && i <= k; ++i)
        for (std::size_t j = 0; j < b.size() && i + j <= k; ++j) out[i + j] += a[i] * b[j];
    return out;
}

/// num / den to O(T^{k+1}); den must have constant term 1.
inline PowerSeries rational_series(const PowerSeries& num, const PowerSeries& den, std::size_t k) {
    if (den.empty() || den[0] != 1) throw PreconditionViolation("denominator must have constant term 1");
    PowerSeries out(k + 1, Rational(0));
    for (std::size_t n = 0; n <= k; ++n) {
        Rational c = n < num.size() ? num[n] : Rational(0);
        for (std::size_t j = 1; j <= n && j < den.size(); ++j) c -= den[j] * out[n - j];
        out[n] = c;
    }
    return out;
}

/// exp(sum_j N_j T^j / j) truncated at T^k.
inline PowerSeries weil_zeta_from_counts(const std::vector<Integer>& counts, std::size_t k) {
    // Z' = L' Z gives n z_n = sum_{j=1}^n N_j z_{n-j}.
    PowerSeries z(k + 1, Rational(0));
    z[0] = 1;
    for (std::size_t n = 1; n <= k; ++n) {
        Rational acc = 0;
        for (std::size_t j = 1; j <= n; ++j)
            if (j <= counts.size()) acc += Rational(counts[j - 1]) * z[n - j];
        z[n] = acc / static_cast<long>(n);
    }
    return z;
}

namespace detail {

inline std::uint64_t require_good_prime(const WeierstrassCurve& minimal, const Integer& p) {
    require_prime(p);
    if (valuation(minimal.discriminant(), p) > 0) throw BadReduction(p.get_str());
    return detail::to_u64_prime(p);
}

inline Integer enumerate_count(const WeierstrassCurve& e, std::uint64_t p, int k) {
    return count_points_over(e, ExtensionField::standard(p, k));
}

} // namespace detail

/// N_{p^k} = p^k + 1 - (alpha^k + beta^k) for k <= k_max, with the power sums
/// from s_k = a_p s_{k-1} - p s_{k-2}. `ap_override` replaces the a_p used on
/// the right-hand side.
inline bool trace_formula_check(const WeierstrassCurve& curve, const Integer& p, int k_max,
                                std::optional<long> ap_override = std::nullopt) {
    const WeierstrassCurve e = detail::minimal_at(curve, p);
    const std::uint64_t pp = detail::require_good_prime(e, p);
    const Integer ap = ap_override ? Integer(*ap_override) : p + 1 - detail::enumerate_count(e, pp, 1);
    Integer s_prev = 2, s_cur = ap;
    for (int k = 1; k <= k_max; ++k) {
        if (k > 1) {
            Integer next = ap * s_cur - p * s_prev;
            s_prev = s_cur;
            s_cur = next;
        }
        if (detail::enumerate_count(e, pp, k) != ipow(p, static_cast<unsigned long>(k)) + 1 - s_cur) return false;
    }
    return true;
}

/// Z(E_p, T) from enumerated counts equals (1 - a_p T + p T^2)/((1 - T)(1 - pT)) to O(T^{k_max+1}).
inline bool zeta_factorization_check(const WeierstrassCurve& curve, const Integer& p, int k_max) {
    const WeierstrassCurve e = detail::minimal_at(curve, p);
    const std::uint64_t pp = detail::require_good_prime(e, p);
    std::vector<Integer> counts;
    for (int k = 1; k <= k_max; ++k) counts.push_back(detail::enumerate_count(e, pp, k));
    const Integer ap = p + 1 - counts[0];
    const auto k = static_cast<std::size_t>(k_max);
    PowerSeries num{Rational(1), Rational(-ap), Rational(p)};
    PowerSeries den = series_mul({Rational(1), Rational(-1)}, {Rational(1), Rational(-p)}, 2);
    return weil_zeta_from_counts(counts, k) == rational_series(num, den, k);
}

inline nlohmann::ordered_json to_json(const EulerFactor& f) {
    std::vector<std::string> c;
    for (const auto& x : f.coeffs) c.push_back(x.get_str());
    return {{"p", f.p.get_str()}, {"coefficients", c}, {"polynomial", f.to_string()}};
}

} // namespace lfunc
