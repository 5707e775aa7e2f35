#include <gtest/gtest.h>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "lfunc/numeric.hpp"

using namespace lfunc;

namespace {

double d(const mp_real& x) { return x.convert_to<double>(); }

} // namespace

TEST(Numeric, PrecisionScopeRestores) {
    const unsigned before = mp_real::default_precision();
    {
        PrecisionScope scope(80);
        EXPECT_EQ(mp_real::default_precision(), 80u);
        mp_real pi = mp_pi();
        EXPECT_EQ(pi.str(40).substr(0, 40), "3.14159265358979323846264338327950288419");
    }
    EXPECT_EQ(mp_real::default_precision(), before);
}

TEST(Numeric, Bernoulli) {
    const auto& B = detail::bernoulli_numbers(12);
    EXPECT_EQ(B[1], Rational(-1, 2));
    EXPECT_EQ(B[2], Rational(1, 6));
    EXPECT_EQ(B[4], Rational(-1, 30));
    EXPECT_EQ(B[12], Rational(-691, 2730));
    EXPECT_EQ(B[7], 0);
}

TEST(Numeric, GammaValues) {
    PrecisionScope scope(40);
    const mp_real pi = mp_pi();
    MpComplex half = gamma(MpComplex(mp_real(0.5)));
    EXPECT_LT(boost::multiprecision::abs(half.re - boost::multiprecision::sqrt(pi)), mp_real("1e-37"));
    EXPECT_LT(boost::multiprecision::abs(half.im), mp_real("1e-37"));
    // |Gamma(1 + i)|^2 = pi / sinh(pi).
    MpComplex g = gamma(MpComplex(mp_real(1), mp_real(1)));
    mp_real m2 = g.re * g.re + g.im * g.im;
    EXPECT_LT(boost::multiprecision::abs(m2 - pi / boost::multiprecision::sinh(pi)), mp_real("1e-36"));
    for (double s : {0.1, 0.7, 1.3, 2.5, 7.25, 31.5, -0.5, -2.3}) {
        MpComplex v = gamma(MpComplex(mp_real(s)));
        EXPECT_NEAR(d(v.re) / boost::math::tgamma(s), 1.0, 1e-14) << s;
    }
}

TEST(Numeric, GammaJetDerivatives) {
    PrecisionScope scope(40);
    // d/ds log Gamma at 1 is -Euler gamma; second derivative pi^2/6.
    Jet lg = log_gamma(Jet::variable(MpComplex(mp_real(1)), 3));
    const mp_real euler("0.5772156649015328606065120900824024310422");
    EXPECT_LT(boost::multiprecision::abs(lg.c[1].re + euler), mp_real("1e-36"));
    const mp_real pi = mp_pi();
    EXPECT_LT(boost::multiprecision::abs(2 * lg.c[2].re - pi * pi / 6), mp_real("1e-36"));
    // Third Taylor coefficient is -zeta(3)/3.
    EXPECT_NEAR(d(lg.c[3].re), -boost::math::zeta(3.0) / 3, 1e-15);
    EXPECT_LT(boost::multiprecision::abs(lg.c[0].re), mp_real("1e-38"));
}

TEST(Numeric, JetArithmetic) {
    PrecisionScope scope(30);
    Jet s = Jet::variable(MpComplex(mp_real(2)), 4);
    Jet e = exp(log(s));
    for (int k = 0; k <= 4; ++k) EXPECT_LT(d(abs(e.c[k] - s.c[k])), 1e-28);
    Jet q = Jet(4, MpComplex(1)) / s; // 1/s = sum (-1)^k (t)^k / 2^{k+1}
    for (int k = 0; k <= 4; ++k) EXPECT_NEAR(d(q.c[k].re), std::pow(-1.0, k) / std::pow(2.0, k + 1), 1e-28);
}

TEST(Numeric, ScaledIncompleteGammaClosedForms) {
    PrecisionScope scope(40);
    for (double xd : {0.05, 0.5, 1.0, 1.9, 2.1, 5.0, 40.0}) {
        mp_real x(xd);
        mp_real ex = boost::multiprecision::exp(-x);
        MpComplex g1 = scaled_incomplete_gamma(MpComplex(mp_real(1)), x);
        EXPECT_LT(d(boost::multiprecision::abs(g1.re - ex / x) / (ex / x)), 1e-35) << xd;
        MpComplex g2 = scaled_incomplete_gamma(MpComplex(mp_real(2)), x);
        mp_real want2 = ex * (1 / x + 1 / (x * x));
        EXPECT_LT(d(boost::multiprecision::abs(g2.re - want2) / want2), 1e-35) << xd;
        // s = 0 sits on a pole of Gamma; the value is E_1(x).
        MpComplex g0 = scaled_incomplete_gamma(MpComplex(mp_real(0)), x);
        EXPECT_NEAR(d(g0.re) / boost::math::expint(1, xd), 1.0, 1e-14) << xd;
    }
}

TEST(Numeric, IncompleteGammaAgainstBoost) {
    PrecisionScope scope(30);
    for (double s : {0.3, 0.8, 1.2, 1.7, 2.5, 3.0})
        for (double x : {0.2, 1.0, 1.99, 2.01, 3.0, 10.0}) {
            MpComplex v = incomplete_gamma(MpComplex(mp_real(s)), mp_real(x));
            EXPECT_NEAR(d(v.re) / boost::math::tgamma(s, x), 1.0, 1e-13) << s << ' ' << x;
        }
}

TEST(Numeric, SeriesAndFractionAgree) {
    PrecisionScope scope(40);
    Jet s = Jet::variable(MpComplex(mp_real(1.3), mp_real(0.4)), 3);
    for (double x : {1.0, 1.5, 1.99}) {
        Jet a = detail::scaled_gamma_series(s, mp_real(x));
        Jet b = detail::scaled_gamma_cf(s, mp_real(x), 1000000);
        for (int k = 0; k <= 3; ++k) EXPECT_LT(d(abs(a.c[k] - b.c[k])), 1e-33) << x << ' ' << k;
    }
}

TEST(Numeric, IncompleteGammaDerivativeByQuadrature) {
    // d/ds g(s, x) = int_1^oo e^{-xt} t^{s-1} log t dt; compare with a
    // central difference at 40 digits.
    PrecisionScope scope(40);
    const mp_real x(0.9), h("1e-12");
    Jet j = scaled_incomplete_gamma(Jet::variable(MpComplex(mp_real(1)), 1), x);
    MpComplex up = scaled_incomplete_gamma(MpComplex(mp_real(1) + h), x);
    MpComplex dn = scaled_incomplete_gamma(MpComplex(mp_real(1) - h), x);
    mp_real fd = (up.re - dn.re) / (2 * h);
    EXPECT_LT(d(boost::multiprecision::abs(fd - j.c[1].re)), 1e-20);
}

TEST(Numeric, ParseComplex) {
    EXPECT_EQ(parse_complex("1"), std::complex<double>(1, 0));
    EXPECT_EQ(parse_complex("1.5+2i"), std::complex<double>(1.5, 2));
    EXPECT_EQ(parse_complex("1-i"), std::complex<double>(1, -1));
    EXPECT_EQ(parse_complex("-3i"), std::complex<double>(0, -3));
    EXPECT_EQ(parse_complex("2e-1+1e+1i"), std::complex<double>(0.2, 10));
    EXPECT_THROW(parse_complex("abc"), ParseError);
    EXPECT_THROW(parse_complex("1+2"), ParseError);
}
