#pragma once

// Multiprecision reals and complexes, truncated Taylor series ("jets") in one
// variable, and the Gamma-type special functions used by the analytic code.

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <complex>
#include <mutex>
#include <string>
#include <vector>

#include "lfunc/arith.hpp"

namespace lfunc {

using mp_real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                              boost::multiprecision::et_off>;

/// Sets the default working precision (decimal digits) for the lifetime of
/// the scope.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned digits) : saved_(mp_real::default_precision()) {
        mp_real::default_precision(digits);
    }
    ~PrecisionScope() { mp_real::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

inline mp_real mp_pi() {
    mp_real r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

inline mp_real mp_from(const Integer& n) {
    mp_real r;
    mpfr_set_z(r.backend().data(), n.get_mpz_t(), MPFR_RNDN);
    return r;
}

inline mp_real mp_from(const Rational& q) {
    mp_real r;
    mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

inline mp_real mp_epsilon() { return boost::multiprecision::pow(mp_real(10), -static_cast<int>(mp_real::default_precision())); }

// ---------------------------------------------------------------------------

struct MpComplex {
    mp_real re{0}, im{0};

    MpComplex() = default;
    MpComplex(const mp_real& r) : re(r), im(0) {} // NOLINT: implicit on purpose
    explicit MpComplex(const mp_real& r, const mp_real& i) : re(r), im(i) {}
    MpComplex(double r) : re(r), im(0) {} // NOLINT
    explicit MpComplex(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    MpComplex& operator+=(const MpComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    MpComplex& operator-=(const MpComplex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    MpComplex& operator*=(const MpComplex& o) {
        mp_real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    MpComplex& operator/=(const MpComplex& o) {
        mp_real d = o.re * o.re + o.im * o.im;
        mp_real r = (re * o.re + im * o.im) / d;
        im = (im * o.re - re * o.im) / d;
        re = std::move(r);
        return *this;
    }
    friend MpComplex operator+(MpComplex a, const MpComplex& b) { return a += b; }
    friend MpComplex operator-(MpComplex a, const MpComplex& b) { return a -= b; }
    friend MpComplex operator*(MpComplex a, const MpComplex& b) { return a *= b; }
    friend MpComplex operator/(MpComplex a, const MpComplex& b) { return a /= b; }
    friend MpComplex operator-(const MpComplex& a) { return MpComplex(-a.re, -a.im); }

    std::complex<double> to_double() const { return {re.convert_to<double>(), im.convert_to<double>()}; }
};

inline mp_real abs(const MpComplex& z) { return boost::multiprecision::hypot(z.re, z.im); }

inline MpComplex exp(const MpComplex& z) {
    mp_real m = boost::multiprecision::exp(z.re);
    return MpComplex(m * boost::multiprecision::cos(z.im), m * boost::multiprecision::sin(z.im));
}

/// Principal branch.
inline MpComplex log(const MpComplex& z) {
    return MpComplex(boost::multiprecision::log(abs(z)), boost::multiprecision::atan2(z.im, z.re));
}

// ---------------------------------------------------------------------------
// Jets: c[k] is the k-th Taylor coefficient f^{(k)}(s0)/k!.

struct Jet {
    std::vector<MpComplex> c;

    Jet() = default;
    explicit Jet(int order, const MpComplex& value = MpComplex(0)) : c(static_cast<std::size_t>(order) + 1) {
        c[0] = value;
    }
    /// The identity function s evaluated at s0.
    static Jet variable(const MpComplex& s0, int order) {
        Jet j(order, s0);
        if (order > 0) j.c[1] = MpComplex(1);
        return j;
    }

    int order() const { return static_cast<int>(c.size()) - 1; }
    const MpComplex& value() const { return c[0]; }

    Jet& operator+=(const Jet& o) {
        for (std::size_t k = 0; k < c.size(); ++k) c[k] += o.c[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t k = 0; k < c.size(); ++k) c[k] -= o.c[k];
        return *this;
    }
    Jet& operator+=(const MpComplex& v) {
        c[0] += v;
        return *this;
    }
    Jet& operator*=(const MpComplex& v) {
        for (auto& x : c) x *= v;
        return *this;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, const MpComplex& v) { return a += v; }
    friend Jet operator-(Jet a, const MpComplex& v) { return a += -v; }
    friend Jet operator-(const MpComplex& v, const Jet& a) {
        Jet r = a;
        r *= MpComplex(-1);
        return r += v;
    }
    friend Jet operator*(Jet a, const MpComplex& v) { return a *= v; }
    friend Jet operator*(const MpComplex& v, Jet a) { return a *= v; }
    friend Jet operator-(const Jet& a) { return a * MpComplex(-1); }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(a.order());
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; i + j < a.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        Jet q(a.order());
        const MpComplex inv = MpComplex(1) / b.c[0];
        for (std::size_t k = 0; k < a.c.size(); ++k) {
            MpComplex acc = a.c[k];
            for (std::size_t j = 1; j <= k; ++j) acc -= b.c[j] * q.c[k - j];
            q.c[k] = acc * inv;
        }
        return q;
    }
};

inline Jet exp(const Jet& f) {
    Jet h(f.order(), exp(f.c[0]));
    for (std::size_t k = 1; k < f.c.size(); ++k) {
        MpComplex acc;
        for (std::size_t j = 1; j <= k; ++j) acc += MpComplex(mp_real(j)) * f.c[j] * h.c[k - j];
        h.c[k] = acc / MpComplex(mp_real(k));
    }
    return h;
}

inline Jet log(const Jet& f) {
    Jet g(f.order(), log(f.c[0]));
    const MpComplex inv = MpComplex(1) / f.c[0];
    for (std::size_t k = 1; k < f.c.size(); ++k) {
        MpComplex acc = MpComplex(mp_real(k)) * f.c[k];
        for (std::size_t j = 1; j < k; ++j) acc -= MpComplex(mp_real(j)) * g.c[j] * f.c[k - j];
        g.c[k] = acc * inv / MpComplex(mp_real(k));
    }
    return g;
}

/// a^s for a real a > 0.
inline Jet pow(const mp_real& a, const Jet& s) { return exp(s * MpComplex(boost::multiprecision::log(a))); }

// ---------------------------------------------------------------------------
// Gamma function.

namespace detail {

/// B_0, B_1, ..., B_n as exact rationals, cached.
inline const std::vector<Rational>& bernoulli_numbers(std::size_t n) {
    static std::mutex mu;
    static std::vector<Rational> cache{Rational(1)};
    std::lock_guard lock(mu);
    while (cache.size() <= n) {
        const std::size_t m = cache.size();
        Rational acc = 0;
        Integer binom = 1; // C(m+1, j)
        for (std::size_t j = 0; j < m; ++j) {
            acc += binom * cache[j];
            binom = binom * Integer(static_cast<unsigned long>(m + 1 - j)) / Integer(static_cast<unsigned long>(j + 1));
        }
        cache.push_back(-acc / Rational(static_cast<long>(m + 1)));
    }
    return cache;
}

} // namespace detail

/// log Gamma as a jet, by Stirling's series after shifting the argument right.
inline Jet log_gamma(const Jet& z) {
    const unsigned digits = mp_real::default_precision();
    const double radius = 0.8 * digits + 10;
    const std::size_t terms = digits / 2 + 10;
    const auto& B = detail::bernoulli_numbers(2 * terms);

    const double re = z.value().re.convert_to<double>();
    const int shift = re < radius ? static_cast<int>(std::ceil(radius - re)) : 0;
    Jet correction(z.order());
    Jet w = z;
    if (shift > 0) {
        Jet prod(z.order(), MpComplex(1));
        for (int j = 0; j < shift; ++j) {
            prod = prod * (z + MpComplex(mp_real(j)));
            // Keep the product moderate; summing logs piecewise avoids overflow.
            if ((j + 1) % 16 == 0 || j + 1 == shift) {
                correction += log(prod);
                prod = Jet(z.order(), MpComplex(1));
            }
        }
        w = z + MpComplex(mp_real(shift));
    }
    const mp_real half_log_2pi = boost::multiprecision::log(2 * mp_pi()) / 2;
    Jet lw = log(w);
    Jet result = (w - MpComplex(mp_real(0.5))) * lw - w + MpComplex(half_log_2pi);
    Jet inv = Jet(z.order(), MpComplex(1)) / w;
    Jet inv2 = inv * inv;
    Jet power = inv;
    for (std::size_t k = 1; k <= terms; ++k) {
        const Rational coef = B[2 * k] / Rational(static_cast<long>((2 * k) * (2 * k - 1)));
        result += power * MpComplex(mp_from(coef));
        power = power * inv2;
    }
    return result - correction;
}

inline MpComplex log_gamma(const MpComplex& z) { return log_gamma(Jet(0, z)).value(); }
inline Jet gamma(const Jet& z) { return exp(log_gamma(z)); }
inline MpComplex gamma(const MpComplex& z) { return exp(log_gamma(z)); }

// ---------------------------------------------------------------------------
// The scaled upper incomplete gamma function
//   g(s, x) = x^{-s} Gamma(s, x) = int_1^oo e^{-x t} t^{s-1} dt,
// entire in s, for real x > 0.

namespace detail {

/// Legendre continued fraction by the modified Lentz method; good for x >~ 1.
inline Jet scaled_gamma_cf(const Jet& s, const mp_real& x, std::size_t max_iter) {
    const int K = s.order();
    const mp_real eps = mp_epsilon();
    const MpComplex tiny(boost::multiprecision::pow(mp_real(10), -3 * static_cast<int>(mp_real::default_precision())));
    auto nonzero = [&](Jet& j) {
        if (abs(j.c[0]) < tiny.re) j.c[0] = tiny;
    };
    const Jet one(K, MpComplex(1));
    // b_0 = x + 1 - s, a_n = -n (n - s), b_n = x + 2n + 1 - s.
    Jet b = (MpComplex(x + 1) - s);
    Jet f = b;
    nonzero(f);
    Jet C = f;
    Jet D(K);
    for (std::size_t n = 1; n <= max_iter; ++n) {
        const mp_real nn(n);
        Jet a = (s - MpComplex(nn)) * MpComplex(nn); // -n(n - s)
        b = b + MpComplex(mp_real(2));
        D = b + a * D;
        nonzero(D);
        D = one / D;
        C = b + a / C;
        nonzero(C);
        Jet delta = C * D;
        f = f * delta;
        bool done = true;
        for (int k = 0; k <= K && done; ++k) {
            const mp_real dev = k == 0 ? abs(delta.c[0] - MpComplex(1)) : abs(delta.c[static_cast<std::size_t>(k)]);
            if (dev > eps) done = false;
        }
        if (done) return one / f * MpComplex(boost::multiprecision::exp(-x));
    }
    throw PrecisionExhausted("incomplete gamma continued fraction did not converge at x = " + x.str(10));
}

/// Gamma(s) x^{-s} - sum_k (-x)^k / (k! (s + k)); good for small x away from
/// the poles of Gamma.
inline Jet scaled_gamma_series(const Jet& s, const mp_real& x) {
    const int K = s.order();
    const mp_real eps = mp_epsilon();
    Jet sum(K);
    mp_real term(1); // (-x)^k / k!
    for (std::size_t k = 0;; ++k) {
        sum += Jet(K, MpComplex(term)) / (s + MpComplex(mp_real(k)));
        term *= -x / mp_real(k + 1);
        if (boost::multiprecision::abs(term) < eps * 1e-3 && mp_real(k) > x) break;
        if (k > 100000) throw PrecisionExhausted("incomplete gamma series did not converge");
    }
    Jet lead = exp(log_gamma(s) - s * MpComplex(boost::multiprecision::log(x)));
    return lead - sum;
}

inline double distance_to_pole(const MpComplex& s) {
    const double re = s.re.convert_to<double>(), im = s.im.convert_to<double>();
    if (re > 0.5) return 1e300;
    return std::hypot(re - std::round(re), im);
}

} // namespace detail

inline Jet scaled_incomplete_gamma(const Jet& s, const mp_real& x) {
    if (!(x > 0)) throw PreconditionViolation("incomplete gamma needs x > 0");
    if (x >= 2 || detail::distance_to_pole(s.value()) < 1e-3)
        return detail::scaled_gamma_cf(s, x, 2000000);
    return detail::scaled_gamma_series(s, x);
}

inline MpComplex scaled_incomplete_gamma(const MpComplex& s, const mp_real& x) {
    return scaled_incomplete_gamma(Jet(0, s), x).value();
}

/// Upper incomplete gamma Gamma(s, x) = x^s g(s, x).
inline MpComplex incomplete_gamma(const MpComplex& s, const mp_real& x) {
    return exp(s * MpComplex(boost::multiprecision::log(x))) * scaled_incomplete_gamma(s, x);
}

/// Parses "a", "a+bi", "a-bi", "bi".
inline std::complex<double> parse_complex(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw ParseError("empty complex literal");
    try {
        if (t.back() != 'i') {
            std::size_t used = 0;
            double re = std::stod(t, &used);
            if (used != t.size()) throw ParseError("bad complex literal: " + text);
            return {re, 0};
        }
        std::string body = t.substr(0, t.size() - 1);
        // Split at the last sign that is not an exponent sign.
        std::size_t split = std::string::npos;
        for (std::size_t i = body.size(); i-- > 1;)
            if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
                split = i;
                break;
            }
        auto parse_imag = [&](const std::string& s) {
            if (s.empty() || s == "+") return 1.0;
            if (s == "-") return -1.0;
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) throw ParseError("bad complex literal: " + text);
            return v;
        };
        if (split == std::string::npos) return {0, parse_imag(body)};
        std::size_t used = 0;
        const std::string re_part = body.substr(0, split);
        double re = std::stod(re_part, &used);
        if (used != re_part.size()) throw ParseError("bad complex literal: " + text);
        return {re, parse_imag(body.substr(split))};
    } catch (const std::logic_error&) {
        throw ParseError("bad complex literal: " + text);
    }
}

} // namespace lfunc
