#pragma once

// Arithmetic in F_q, q = p^k, with elements stored as coefficient vectors
// modulo a monic irreducible polynomial over F_p.

#include <cstdint>
#include <string>
#include <vector>

#include "lfunc/arith.hpp"

namespace lfunc {

namespace detail {

using PolyModP = std::vector<std::uint64_t>; // little-endian coefficients

inline void trim(PolyModP& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline PolyModP poly_mod(PolyModP a, const PolyModP& m, std::uint64_t p) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    std::uint64_t inv_lead = invmod(m.back(), p);
    while (a.size() > dm) {
        std::uint64_t coef = mulmod(a.back(), inv_lead, p);
        std::size_t shift = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i)
            a[shift + i] = (a[shift + i] + p - mulmod(coef, m[i], p)) % p;
        trim(a);
    }
    return a;
}

inline PolyModP poly_mulmod(const PolyModP& a, const PolyModP& b, const PolyModP& m, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    PolyModP out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + mulmod(a[i], b[j], p)) % p;
    return poly_mod(std::move(out), m, p);
}

inline PolyModP poly_gcd(PolyModP a, PolyModP b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        PolyModP r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

/// Ben-Or irreducibility test for a monic polynomial of degree k >= 1.
inline bool is_irreducible(const PolyModP& f, std::uint64_t p) {
    const std::size_t k = f.size() - 1;
    PolyModP xpow{0, 1}; // x
    for (std::size_t i = 1; i <= k / 2; ++i) {
        // xpow <- xpow^p mod f
        PolyModP acc{1}, base = xpow;
        for (std::uint64_t e = p; e; e >>= 1) {
            if (e & 1) acc = poly_mulmod(acc, base, f, p);
            base = poly_mulmod(base, base, f, p);
        }
        xpow = acc;
        PolyModP diff = xpow;
        diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        if (poly_gcd(f, diff, p).size() != 1) return false;
    }
    return true;
}

} // namespace detail

class ExtensionField {
public:
    using Element = std::vector<std::uint64_t>; // exactly k coefficients

    /// `modulus` is monic of degree k, listed from the constant term up.
    ExtensionField(std::uint64_t p, int k, std::vector<std::uint64_t> modulus)
        : p_(p), k_(k), modulus_(std::move(modulus)) {
        if (!is_prime_u64(p)) throw NotPrime(std::to_string(p));
        if (k < 1 || modulus_.size() != static_cast<std::size_t>(k) + 1 || modulus_.back() != 1)
            throw PreconditionViolation("modulus must be monic of degree k");
        if (!detail::is_irreducible(modulus_, p_)) throw PreconditionViolation("modulus is reducible");
        q_ = 1;
        for (int i = 0; i < k; ++i) q_ *= p;
    }

    /// The `which`-th monic irreducible polynomial of degree k in
    /// lexicographic order of its lower coefficients.
    static ExtensionField standard(std::uint64_t p, int k, int which = 0) {
        if (!is_prime_u64(p)) throw NotPrime(std::to_string(p));
        if (k == 1) return ExtensionField(p, 1, {0, 1});
        std::uint64_t total = 1;
        for (int i = 0; i < k; ++i) total *= p;
        int seen = 0;
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::vector<std::uint64_t> f(static_cast<std::size_t>(k) + 1, 0);
            std::uint64_t v = idx;
            for (int i = 0; i < k; ++i) {
                f[static_cast<std::size_t>(i)] = v % p;
                v /= p;
            }
            f[static_cast<std::size_t>(k)] = 1;
            if (f[0] == 0) continue;
            if (detail::is_irreducible(f, p) && seen++ == which) return ExtensionField(p, k, f);
        }
        throw PreconditionViolation("not enough irreducible polynomials");
    }

    std::uint64_t characteristic() const { return p_; }
    int degree() const { return k_; }
    std::uint64_t size() const { return q_; }
    const std::vector<std::uint64_t>& modulus() const { return modulus_; }

    Element zero() const { return Element(static_cast<std::size_t>(k_), 0); }
    Element from_int(std::uint64_t v) const {
        Element e = zero();
        e[0] = v % p_;
        return e;
    }
    /// Elements indexed 0..q-1 by their base-p digits.
    Element from_index(std::uint64_t idx) const {
        Element e = zero();
        for (int i = 0; i < k_; ++i) {
            e[static_cast<std::size_t>(i)] = idx % p_;
            idx /= p_;
        }
        return e;
    }

    bool is_zero(const Element& a) const {
        for (auto c : a)
            if (c) return false;
        return true;
    }

    Element add(const Element& a, const Element& b) const {
        Element r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + b[i]) % p_;
        return r;
    }
    Element sub(const Element& a, const Element& b) const {
        Element r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + p_ - b[i]) % p_;
        return r;
    }
    Element mul(const Element& a, const Element& b) const {
        std::vector<std::uint64_t> prod(2 * static_cast<std::size_t>(k_) - 1, 0);
        for (int i = 0; i < k_; ++i) {
            if (!a[static_cast<std::size_t>(i)]) continue;
            for (int j = 0; j < k_; ++j)
                prod[static_cast<std::size_t>(i + j)] =
                    (prod[static_cast<std::size_t>(i + j)] +
                     mulmod(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)], p_)) % p_;
        }
        for (int d = 2 * k_ - 2; d >= k_; --d) {
            std::uint64_t c = prod[static_cast<std::size_t>(d)];
            if (!c) continue;
            prod[static_cast<std::size_t>(d)] = 0;
            for (int i = 0; i < k_; ++i) {
                auto& slot = prod[static_cast<std::size_t>(d - k_ + i)];
                slot = (slot + p_ - mulmod(c, modulus_[static_cast<std::size_t>(i)], p_)) % p_;
            }
        }
        prod.resize(static_cast<std::size_t>(k_));
        return prod;
    }
    Element pow(Element base, std::uint64_t e) const {
        Element r = from_int(1);
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }
    Element inverse(const Element& a) const {
        if (is_zero(a)) throw PreconditionViolation("inverse of zero");
        return pow(a, q_ - 2);
    }

    /// Quadratic character (q odd): 1, -1, or 0.
    int quadratic_character(const Element& a) const {
        if (is_zero(a)) return 0;
        Element r = pow(a, (q_ - 1) / 2);
        return r == from_int(1) ? 1 : -1;
    }

    /// Absolute trace to F_p.
    std::uint64_t trace(const Element& a) const {
        Element acc = a, cur = a;
        for (int i = 1; i < k_; ++i) {
            cur = pow(cur, p_);
            acc = add(acc, cur);
        }
        return acc[0];
    }

private:
    std::uint64_t p_;
    int k_;
    std::vector<std::uint64_t> modulus_;
    std::uint64_t q_ = 0;
};

/// Reduction of a p-integral rational modulo p.
inline std::uint64_t reduce_mod(const Rational& v, std::uint64_t p) {
    Integer P(static_cast<unsigned long>(p));
    if (mpz_divisible_p(v.get_den_mpz_t(), P.get_mpz_t()))
        throw PreconditionViolation("coefficient " + v.get_str() + " is not integral at p = " + std::to_string(p));
    Integer num = mod(Integer(v.get_num()), P), den = mod(Integer(v.get_den()), P);
    return mulmod(num.get_ui(), invmod(den.get_ui(), p), p);
}

} // namespace lfunc
