#include <gtest/gtest.h>

#include <boost/math/special_functions/expint.hpp>

#include "lfunc/analytic.hpp"

using namespace lfunc;

namespace {

WeierstrassCurve e37() { return WeierstrassCurve(0, 0, 1, -1, 0); }
WeierstrassCurve e11() { return WeierstrassCurve(0, -1, 1, -10, -20); }
WeierstrassCurve e36() { return WeierstrassCurve(0, 0, 0, 0, 1); }

// Coefficients of q prod (1-q^n)^2 (1-q^{11n})^2.
std::vector<double> eta11(int n_max) {
    std::vector<double> c(n_max + 1, 0);
    c[0] = 1;
    auto mul = [&](int k) {
        for (int i = n_max; i >= k; --i) c[i] -= c[i - k];
    };
    for (int n = 1; n <= n_max; ++n) {
        mul(n);
        mul(n);
        if (11 * n <= n_max) {
            mul(11 * n);
            mul(11 * n);
        }
    }
    std::vector<double> a(n_max + 1, 0);
    for (int n = 1; n <= n_max; ++n) a[n] = c[n - 1];
    return a;
}

} // namespace

TEST(RootNumber, ReferenceCurves) {
    EXPECT_EQ(root_number(AnalyticContext(e37())), -1);
    EXPECT_EQ(root_number(AnalyticContext(e11())), 1);
    EXPECT_EQ(root_number(AnalyticContext(e36())), 1);
    EXPECT_EQ(root_number(AnalyticContext(WeierstrassCurve(0, 1, 1, -2, 0))), 1);   // 389
    EXPECT_EQ(root_number(AnalyticContext(WeierstrassCurve(0, 0, 1, -7, 6))), -1);  // 5077
}

TEST(FunctionalEquation, ResidualWithAsymmetricSplit) {
    for (const auto& c : {e37(), e11(), e36()}) {
        AnalyticContext ctx(c);
        const int w = root_number(ctx);
        for (double t : {1.2, 0.75})
            for (double s : {0.6, 0.8, 1.0, 1.2, 1.4}) {
                PrecisionScope scope(ctx.working_digits());
                auto r = fe_residual(ctx, MpComplex(mp_real(s)), w, t);
                EXPECT_LT(r.real(), 1e-8) << c.to_string() << " s=" << s;
            }
    }
}

TEST(FunctionalEquation, WrongSignFails) {
    AnalyticContext ctx(e37());
    PrecisionScope scope(ctx.working_digits());
    EXPECT_GT(fe_residual(ctx, MpComplex(mp_real(1.3)), +1).real(), 1e-3);
    AnalyticContext ctx11(e11());
    EXPECT_GT(fe_residual(ctx11, MpComplex(mp_real(1.3)), -1).real(), 1e-3);
}

TEST(FunctionalEquation, ComplexArgument) {
    AnalyticContext ctx(e11());
    PrecisionScope scope(ctx.working_digits());
    auto r = fe_residual(ctx, MpComplex(mp_real(0.7), mp_real(3.0)), 1, 1.3);
    EXPECT_LT(r.real(), 1e-8);
    auto a = lambda(ctx, std::complex<double>(0.7, 3.0)).approx();
    auto b = lambda(ctx, std::complex<double>(0.7, -3.0)).approx();
    EXPECT_LT(std::abs(a - std::conj(b)), 1e-15);
}

TEST(Lambda, SymmetricValues) {
    AnalyticContext c37(e37()), c11(e11());
    auto a = lambda(c37, {1.3, 0}), b = lambda(c37, {0.7, 0});
    EXPECT_LT(std::abs(a.approx() + b.approx()), 1e-8);
    auto x = lambda(c11, {1.3, 0}), y = lambda(c11, {0.7, 0});
    EXPECT_LT(std::abs(x.approx() - y.approx()), 1e-8);
    for (double s : {0.2, 0.9, 1.6}) EXPECT_EQ(lambda(c11, {s, 0}).approx().imag(), 0.0);
}

TEST(LValue, E11AtOne) {
    // L(1) = 2 sum a_n/n e^{-2 pi n / sqrt 11} for a w = +1 curve.
    auto a = eta11(200);
    double oracle = 0;
    for (int n = 1; n <= 200; ++n) oracle += 2 * a[n] / n * std::exp(-2 * M_PI * n / std::sqrt(11.0));
    AnalyticContext ctx(e11());
    auto v = l_value(ctx, {1, 0});
    EXPECT_NEAR(v.real(), oracle, 1e-13);
    EXPECT_NEAR(v.real(), 0.253842, 5e-7);
    EXPECT_LT(v.error, 1e-20);
}

TEST(LValue, E37VanishesAtOne) {
    AnalyticContext ctx(e37());
    EXPECT_LT(std::abs(l_value(ctx, {1, 0}).approx()), 1e-10);
}

TEST(LValue, OverlapWithEulerProduct) {
    AnalyticContext ctx(e37());
    PrimeData data(e37());
    std::vector<std::complex<double>> pts{{2.5, 0}, {3.0, 0}, {2.5, 1.0}};
    auto euler = eval_euler(data, pts, 1000000);
    for (std::size_t i = 0; i < pts.size(); ++i)
        EXPECT_LT(std::abs(l_value(ctx, pts[i]).approx() - euler[i].value), 1e-8) << pts[i];
}

TEST(Derivative, E37FirstDerivative) {
    // L'(1) = 2 sum a_n/n E_1(2 pi n / sqrt 37) for a w = -1 curve.
    auto coeffs = dirichlet_coefficients(e37(), 300);
    double oracle = 0;
    for (int n = 1; n <= 300; ++n)
        if (coeffs[n]) oracle += 2.0 * coeffs[n] / n * boost::math::expint(1, 2 * M_PI * n / std::sqrt(37.0));
    AnalyticContext ctx(e37());
    auto d = l_derivative(ctx, 1);
    EXPECT_NEAR(d.real(), oracle, 1e-13);
    EXPECT_NEAR(d.real(), 0.305999, 1e-6);
    EXPECT_GT(d.real(), 0);
}

TEST(Derivative, OddDerivativesVanishForEvenSign) {
    AnalyticContext ctx(e11());
    auto d = lambda_derivatives_at_one(ctx, 3);
    EXPECT_LT(std::fabs(d[1].real()), 1e-20);
    EXPECT_LT(std::fabs(d[3].real()), 1e-20);
    EXPECT_GT(std::fabs(d[0].real()), 0.1);
}

TEST(Derivative, MatchesFiniteDifference) {
    AnalyticContext ctx(e36());
    PrecisionScope scope(ctx.working_digits());
    const mp_real h("1e-10");
    auto up = l_value_mp(ctx, MpComplex(1 + h)), dn = l_value_mp(ctx, MpComplex(1 - h));
    mp_real fd = (up.value.re - dn.value.re) / (2 * h);
    EXPECT_NEAR(fd.convert_to<double>(), l_derivative(ctx, 1).real(), 1e-15);
}

TEST(Rank, SmallCurves) {
    auto r11 = analytic_rank(AnalyticContext(e11()));
    EXPECT_EQ(r11.rank, 0);
    auto r37 = analytic_rank(AnalyticContext(e37()));
    EXPECT_EQ(r37.rank, 1);
    auto r389 = analytic_rank(AnalyticContext(WeierstrassCurve(0, 1, 1, -2, 0)));
    EXPECT_EQ(r389.rank, 2);
    auto r5077 = analytic_rank(AnalyticContext(WeierstrassCurve(0, 0, 1, -7, 6)));
    EXPECT_EQ(r5077.rank, 3);
    for (const auto& r : {r11, r37, r389, r5077}) {
        EXPECT_EQ(r.rank % 2, r.root_number == -1 ? 1 : 0);
        EXPECT_TRUE(r.determined);
    }
}

TEST(Precision, DoublingChangesLessThanBound) {
    AnalyticOptions lo, hi;
    lo.digits = 30;
    hi.digits = 60;
    AnalyticContext a(e11(), lo), b(e11(), hi);
    auto va = l_value(a, {1, 0}), vb = l_value(b, {1, 0});
    PrecisionScope scope(70);
    EXPECT_LT(boost::multiprecision::abs(va.value.re - vb.value.re).convert_to<double>(), va.error + 1e-300);
    AnalyticContext c(e37(), lo), d(e37(), hi);
    auto dc = l_derivative(c, 1), dd = l_derivative(d, 1);
    EXPECT_LT(boost::multiprecision::abs(dc.value.re - dd.value.re).convert_to<double>(), dc.error);
}

TEST(Precision, TailBoundIsHonest) {
    AnalyticContext ctx(e37());
    const std::size_t auto_terms = ctx.terms_needed(ctx.alpha(), 1);
    AnalyticOptions more;
    more.n_max = auto_terms + 100;
    AnalyticContext wide(e37(), more);
    auto a = lambda(ctx, {1.1, 0}), b = lambda(wide, {1.1, 0});
    PrecisionScope scope(50);
    EXPECT_LT(boost::multiprecision::abs(a.value.re - b.value.re).convert_to<double>(), ctx.target());
}

TEST(Json, ValueCarriesBound) {
    AnalyticContext ctx(e11());
    auto j = l_value(ctx, {1, 0}).to_json(12);
    EXPECT_EQ(j["re"], "0.253841860856");
    EXPECT_TRUE(j.contains("error"));
}
