#pragma once

// Exact integer and rational helpers shared by every module.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lfunc/errors.hpp"

namespace lfunc {

using Integer = mpz_class;
using Rational = mpq_class;

/// Valuation of zero.
inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

inline int valuation(const Integer& n, const Integer& p) {
    if (n == 0) return kInfiniteValuation;
    Integer m = n;
    int v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

inline int valuation(const Rational& q, const Integer& p) {
    if (q == 0) return kInfiniteValuation;
    return valuation(Integer(q.get_num()), p) - valuation(Integer(q.get_den()), p);
}

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

inline Integer to_integer(const Rational& q) {
    if (!is_integral(q)) throw PreconditionViolation("expected an integer, got " + q.get_str());
    return q.get_num();
}

inline Integer ipow(Integer base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

/// n/d in lowest terms; GMP arithmetic assumes canonical operands.
inline Rational ratio(const Integer& n, const Integer& d) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

inline Rational rpow(const Rational& base, int e) {
    Rational r(ipow(base.get_num(), static_cast<unsigned long>(e < 0 ? -e : e)),
               ipow(base.get_den(), static_cast<unsigned long>(e < 0 ? -e : e)));
    if (e < 0) {
        if (base == 0) throw PreconditionViolation("zero to a negative power");
        r = 1 / r;
    }
    r.canonicalize();
    return r;
}

/// Non-negative remainder of n modulo m (m > 0).
inline Integer mod(const Integer& n, const Integer& m) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline bool is_prime(const Integer& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

inline void require_prime(const Integer& p) {
    if (!is_prime(p)) throw NotPrime(p.get_str());
}

inline bool is_square(const Integer& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline Integer isqrt(const Integer& n) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_square(const Rational& q) {
    return is_square(Integer(q.get_num())) && is_square(Integer(q.get_den()));
}

inline Rational rational_sqrt(const Rational& q) {
    Rational r(isqrt(q.get_num()), isqrt(q.get_den()));
    r.canonicalize();
    return r;
}

// ---------------------------------------------------------------------------
// 64-bit modular arithmetic used by point counting.

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::tie(t, nt) = std::pair{nt, t - q * nt};
        std::tie(r, nr) = std::pair{nr, r - q * nr};
    }
    if (r != 1) throw PreconditionViolation("element is not invertible");
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(m) : t);
}

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Square root modulo an odd prime (Tonelli-Shanks). `a` must be a square.
inline std::uint64_t sqrtmod(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0 || p == 2) return a;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    std::uint64_t q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    std::uint64_t z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    std::uint64_t m = static_cast<std::uint64_t>(s);
    std::uint64_t c = powmod(z, q, p);
    std::uint64_t t = powmod(a, q, p);
    std::uint64_t r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        std::uint64_t i = 0, t2 = t;
        while (t2 != 1) {
            t2 = mulmod(t2, t2, p);
            ++i;
        }
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    if (n < 2) return out;
    std::vector<bool> composite(n + 1, false);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Factorization: trial division followed by Pollard-Brent.

namespace detail {

inline Integer pollard_brent(const Integer& n, unsigned long seed) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(seed);
    Integer y = rng.get_z_range(n - 1) + 1;
    Integer c = rng.get_z_range(n - 1) + 1;
    const unsigned long block = 128;
    Integer g = 1, r = 1, q = 1, x, ys;
    while (g == 1) {
        x = y;
        for (Integer i = 0; i < r; ++i) y = mod(y * y + c, n);
        Integer k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (unsigned long i = 0; i < block && k + i < r; ++i) {
                y = mod(y * y + c, n);
                q = mod(q * abs(x - y), n);
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += block;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = mod(ys * ys + c, n);
            Integer d = abs(x - ys);
            mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    return g;
}

inline void factor_into(const Integer& n, std::vector<Integer>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    Integer d = n;
    for (unsigned long seed = 1; d == n || d == 1; ++seed) d = pollard_brent(n, seed);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace detail

/// Prime factorization of |n| as (prime, exponent) pairs in increasing order.
inline std::vector<std::pair<Integer, int>> factor(const Integer& n) {
    if (n == 0) throw PreconditionViolation("cannot factor zero");
    Integer m = abs(n);
    std::vector<Integer> primes;
    for (unsigned long p = 2; p < 10000 && Integer(p) * p <= m; ++p) {
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            primes.emplace_back(p);
            m /= p;
        }
    }
    if (m > 1) detail::factor_into(m, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<Integer, int>> out;
    for (const auto& p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1);
    }
    return out;
}

inline std::vector<Integer> prime_divisors(const Integer& n) {
    std::vector<Integer> out;
    for (auto& [p, e] : factor(n)) out.push_back(p);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing of exact literals: "12", "-3/4", "0.125", "+7".

inline Rational parse_rational(std::string_view text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw ParseError("empty numeric literal");
    auto fail = [&] { return ParseError("invalid exact literal '" + std::string(text) + "'"); };
    bool negative = false;
    std::size_t pos = 0;
    if (s[0] == '+' || s[0] == '-') {
        negative = s[0] == '-';
        pos = 1;
    }
    std::string body = s.substr(pos);
    if (body.empty()) throw fail();
    Rational value;
    if (auto slash = body.find('/'); slash != std::string::npos) {
        std::string num = body.substr(0, slash), den = body.substr(slash + 1);
        auto digits = [](const std::string& d) {
            return !d.empty() && std::all_of(d.begin(), d.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
        };
        if (!digits(num) || !digits(den)) throw fail();
        Integer n(num), d(den);
        if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        value = Rational(n, d);
    } else if (auto dot = body.find('.'); dot != std::string::npos) {
        std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
        if (ip.empty() && fp.empty()) throw fail();
        auto ok = [](const std::string& d) {
            return std::all_of(d.begin(), d.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
        };
        if (!ok(ip) || !ok(fp)) throw fail();
        Integer n((ip.empty() ? "0" : ip) + fp);
        value = Rational(n, ipow(10, fp.size()));
    } else {
        if (!std::all_of(body.begin(), body.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw fail();
        value = Rational(Integer(body));
    }
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& n) { return n.get_str(); }

} // namespace lfunc
