#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "lfunc/series.hpp"

using namespace lfunc;

namespace {

WeierstrassCurve e37() { return WeierstrassCurve(0, 0, 1, -1, 0); }
WeierstrassCurve e11() { return WeierstrassCurve(0, -1, 1, -10, -20); }

// q prod (1 - q^n)^2 (1 - q^{11n})^2, the weight-two newform of level 11.
std::vector<long> eta_product_11(std::size_t n_max) {
    std::vector<long> c(n_max + 1, 0);
    c[0] = 1;
    auto times_one_minus = [&](std::size_t k) {
        for (std::size_t i = n_max; i >= k; --i) c[i] -= c[i - k];
    };
    for (std::size_t n = 1; n <= n_max; ++n) {
        times_one_minus(n);
        times_one_minus(n);
        if (11 * n <= n_max) {
            times_one_minus(11 * n);
            times_one_minus(11 * n);
        }
    }
    std::vector<long> a(n_max + 1, 0);
    for (std::size_t n = 1; n <= n_max; ++n) a[n] = c[n - 1];
    return a;
}

} // namespace

TEST(EulerFactor, E37Examples) {
    PrimeData d(e37());
    EXPECT_EQ(d.factor(2).coeffs, (std::vector<Integer>{1, 2, 2}));
    EXPECT_EQ(d.factor(2).to_string(), "1 + 2T + 2T^2");
    EXPECT_EQ(d.factor(37).coeffs, (std::vector<Integer>{1, 1}));
    EXPECT_EQ(d.factor(3).coeffs, (std::vector<Integer>{1, 3, 3}));
}

TEST(EulerFactor, BadTypes) {
    PrimeData d11(e11());
    EXPECT_EQ(d11.factor(11).coeffs, (std::vector<Integer>{1, -1}));
    PrimeData d36(WeierstrassCurve(0, 0, 0, 0, 1));
    EXPECT_EQ(d36.factor(2).degree(), 0);
    EXPECT_EQ(d36.factor(3).degree(), 0);
    EXPECT_EQ(d36.conductor(), 36);
}

TEST(Dirichlet, E37Known) {
    auto a = dirichlet_coefficients(e37(), 20);
    const std::vector<std::int64_t> known{1, -2, -3, 2, -2, 6, -1, 0, 6, 4, -5, -6, -2, 2, 6, -4, 0, -12, 0, -4};
    for (std::size_t n = 1; n <= 20; ++n) EXPECT_EQ(a[n], known[n - 1]) << n;
    EXPECT_EQ(a.conductor, 37);
}

TEST(Dirichlet, E11AgainstEtaProduct) {
    const std::size_t N = 600;
    auto a = dirichlet_coefficients(e11(), N);
    auto oracle = eta_product_11(N);
    for (std::size_t n = 1; n <= N; ++n) ASSERT_EQ(a[n], oracle[n]) << n;
}

TEST(Dirichlet, MultiplicativeAndHecke) {
    const std::size_t N = 20000;
    auto a = dirichlet_coefficients(e37(), N);
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> pick(1, 140);
    int checked = 0;
    while (checked < 200) {
        std::size_t m = pick(rng), n = pick(rng);
        if (std::gcd(m, n) != 1) continue;
        EXPECT_EQ(a[m * n], a[m] * a[n]) << m << ' ' << n;
        ++checked;
    }
    for (std::size_t p : {2, 3, 5, 7, 11, 13}) {
        for (std::size_t q = p; q * p <= N; q *= p) {
            std::int64_t prev = q == p ? 1 : a[q / p];
            EXPECT_EQ(a[q * p], a[p] * a[q] - static_cast<std::int64_t>(p) * prev);
        }
    }
    for (std::size_t k = 1, q = 37; q <= N; q *= 37, ++k) EXPECT_EQ(a[q], k % 2 ? -1 : 1);
}

TEST(Dirichlet, Exports) {
    auto a = dirichlet_coefficients(e37(), 4);
    EXPECT_EQ(a.to_text(), "1 1\n2 -2\n3 -3\n4 2\n");
    auto j = a.to_json();
    EXPECT_EQ(j["a"], nlohmann::json({1, -2, -3, 2}));
    EXPECT_EQ(j["conductor"], "37");
}

TEST(Evaluation, EulerMatchesDirichlet) {
    const std::complex<double> s(2.5, 0);
    auto dirichlet = eval_dirichlet(e37(), s, 100000);
    auto euler = eval_euler(e37(), s, 100000);
    EXPECT_LT(std::abs(dirichlet.value - euler.value), 1e-6);
    const std::complex<double> t(2.2, 3.0);
    auto d2 = eval_dirichlet(e11(), t, 100000);
    auto e2 = eval_euler(e11(), t, 100000);
    EXPECT_LT(std::abs(d2.value - e2.value), d2.error_bound + e2.error_bound);
}

TEST(Evaluation, BoundsAreHonest) {
    PrimeData d(e37());
    const std::complex<double> s(1.8, 0.5);
    auto coarse = eval_euler(d, s, 2000);
    auto fine = eval_euler(d, s, 200000);
    EXPECT_LT(std::abs(coarse.value - fine.value), coarse.error_bound + fine.error_bound);
    auto coeffs = dirichlet_coefficients(d, 200000);
    auto small = eval_dirichlet(DirichletCoefficients{{coeffs.a.begin(), coeffs.a.begin() + 5001}, 37, {}}, s);
    auto big = eval_dirichlet(coeffs, s);
    EXPECT_LT(std::abs(small.value - big.value), small.error_bound);
}

TEST(Evaluation, RejectsOutsideHalfPlane) {
    EXPECT_THROW(eval_euler(e37(), {1.5, 0}, 100), OutsideConvergenceRegion);
    EXPECT_THROW(eval_dirichlet(e37(), {1.0, 2.0}, 100), OutsideConvergenceRegion);
    EXPECT_THROW(riemann_zeta({1.0, 0}), OutsideConvergenceRegion);
}

TEST(Zeta, KnownValues) {
    const double pi = std::acos(-1.0);
    EXPECT_NEAR(riemann_zeta(2.0).real(), pi * pi / 6, 1e-14);
    EXPECT_NEAR(riemann_zeta(3.0).real(), 1.2020569031595942, 1e-14);
    EXPECT_NEAR(riemann_zeta(4.0).real(), std::pow(pi, 4) / 90, 1e-14);
    // Direct sum with an integral tail for a complex argument.
    const std::complex<double> s(1.7, 4.0);
    std::complex<double> direct = 0;
    const int M = 200000;
    for (int n = 1; n < M; ++n) direct += std::exp(-s * std::log(double(n)));
    direct += std::exp(-s * std::log(double(M))) * (double(M) / (s - 1.0) + 0.5);
    EXPECT_LT(std::abs(direct - riemann_zeta(s)), 1e-9);
}

TEST(Zeta, Incomplete) {
    const double pi = std::acos(-1.0);
    auto z = incomplete_zeta(2.0, {Integer(2), Integer(3)});
    EXPECT_NEAR(z.real(), pi * pi / 6 * 0.75 * (8.0 / 9), 1e-14);
    EXPECT_EQ(incomplete_zeta(3.0, {}), riemann_zeta(3.0));
}

TEST(WeilZeta, ProjectiveLineAndEmpty) {
    const int q = 7;
    std::vector<Integer> counts;
    for (int k = 1; k <= 8; ++k) counts.push_back(ipow(Integer(q), k) + 1);
    auto z = weil_zeta_from_counts(counts, 8);
    auto expected = rational_series({Rational(1)}, series_mul({1, -1}, {1, -q}, 2), 8);
    EXPECT_EQ(z, expected);
    for (int n = 0; n <= 8; ++n) EXPECT_EQ(z[n], Rational((ipow(Integer(q), n + 1) - 1) / (q - 1)));

    auto empty = weil_zeta_from_counts(std::vector<Integer>(5, Integer(0)), 5);
    EXPECT_EQ(empty[0], 1);
    for (int n = 1; n <= 5; ++n) EXPECT_EQ(empty[n], 0);
}

TEST(LocalIdentities, AllGoodPrimesUpTo20) {
    for (const auto& curve : {e37(), e11()}) {
        PrimeData d(curve);
        for (long p : {2, 3, 5, 7, 11, 13, 17, 19}) {
            if (d.is_bad(p)) continue;
            int k = p <= 5 ? 6 : 3;
            EXPECT_TRUE(trace_formula_check(curve, Integer(p), k)) << p;
            EXPECT_TRUE(zeta_factorization_check(curve, Integer(p), k)) << p;
        }
    }
}

TEST(LocalIdentities, WrongTraceIsDetected) {
    EXPECT_TRUE(trace_formula_check(e37(), 5, 3, -2));
    EXPECT_FALSE(trace_formula_check(e37(), 5, 3, -1));
    EXPECT_FALSE(trace_formula_check(e37(), 5, 2, 0));
}

TEST(LocalIdentities, BadPrimeRejected) {
    EXPECT_THROW(trace_formula_check(e37(), 37, 2), BadReduction);
    EXPECT_THROW(zeta_factorization_check(e11(), 11, 2), BadReduction);
    EXPECT_THROW(trace_formula_check(e37(), 4, 2), NotPrime);
}
