#pragma once

// Per-prime data: point counts over F_{p^k}, a_p, reduction type, Tate's
// algorithm and the conductor.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <mutex>
#include <numeric>
#include <random>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "lfunc/arith.hpp"
#include "lfunc/curve.hpp"
#include "lfunc/finite_field.hpp"

namespace lfunc {

enum class Reduction { Good, SplitMultiplicative, NonsplitMultiplicative, Additive };

inline std::string to_string(Reduction r) {
    switch (r) {
        case Reduction::Good: return "Good";
        case Reduction::SplitMultiplicative: return "SplitMultiplicative";
        case Reduction::NonsplitMultiplicative: return "NonsplitMultiplicative";
        case Reduction::Additive: return "Additive";
    }
    return "?";
}

inline bool is_multiplicative(Reduction r) {
    return r == Reduction::SplitMultiplicative || r == Reduction::NonsplitMultiplicative;
}

struct LocalData {
    Integer p;
    Reduction reduction = Reduction::Good;
    std::string kodaira = "I0";
    long a_p = 0;
    int f_p = 0;
    int c_p = 1;
    int m_E = 1;
    int ord_disc = 0; // valuation of the minimal discriminant
};

/// Above this field size point counts switch from enumeration to
/// baby-step giant-step (k = 1) or to the Frobenius recurrence (k > 1).
inline constexpr std::uint64_t kDefaultExhaustiveLimit = 1ULL << 15;

struct PointCountOptions {
    std::uint64_t exhaustive_limit = kDefaultExhaustiveLimit;
};

namespace detail {

inline std::uint64_t to_u64_prime(const Integer& p) {
    require_prime(p);
    if (!p.fits_ulong_p()) throw PreconditionViolation("prime too large for point counting: " + p.get_str());
    return p.get_ui();
}

struct ReducedCoefficients {
    std::uint64_t p;
    std::uint64_t a1, a2, a3, a4, a6;
};

inline ReducedCoefficients reduce_curve(const WeierstrassCurve& e, std::uint64_t p) {
    return {p, reduce_mod(e.a1(), p), reduce_mod(e.a2(), p), reduce_mod(e.a3(), p), reduce_mod(e.a4(), p),
            reduce_mod(e.a6(), p)};
}

/// Enumeration over F_p for odd p using a table of squares.
inline std::uint64_t count_prime_field_odd(const ReducedCoefficients& c) {
    const std::uint64_t p = c.p;
    // y'^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 with y' = 2y + a1 x + a3
    const std::uint64_t b2 = (mulmod(c.a1, c.a1, p) + 4 * c.a2) % p;
    const std::uint64_t b4 = (mulmod(c.a1, c.a3, p) + 2 * c.a4) % p;
    const std::uint64_t b6 = (mulmod(c.a3, c.a3, p) + 4 * c.a6) % p;
    std::vector<char> square(p, 0);
    for (std::uint64_t y = 1; y <= p / 2; ++y) square[mulmod(y, y, p)] = 1;
    const std::uint64_t two_b4 = (2 * b4) % p;
    std::uint64_t count = 1;
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t f = (mulmod((mulmod(4 % p, x, p) + b2) % p, x, p) + two_b4) % p;
        f = (mulmod(f, x, p) + b6) % p;
        count += f == 0 ? 1 : (square[f] ? 2 : 0);
    }
    return count;
}

/// Enumeration over an arbitrary F_q.
inline std::uint64_t count_extension(const ReducedCoefficients& c, const ExtensionField& F) {
    using E = ExtensionField::Element;
    const E a1 = F.from_int(c.a1), a2 = F.from_int(c.a2), a3 = F.from_int(c.a3), a4 = F.from_int(c.a4),
            a6 = F.from_int(c.a6), four = F.from_int(4);
    std::uint64_t count = 1;
    for (std::uint64_t i = 0; i < F.size(); ++i) {
        E x = F.from_index(i);
        E b = F.add(F.mul(a1, x), a3);
        E rhs = F.add(F.mul(F.add(F.mul(F.add(x, a2), x), a4), x), a6);
        if (c.p == 2) {
            if (F.is_zero(b)) {
                count += 1; // y^2 = rhs has exactly one root in characteristic 2
            } else {
                E u = F.mul(rhs, F.inverse(F.mul(b, b)));
                if (F.trace(u) == 0) count += 2;
            }
        } else {
            count += static_cast<std::uint64_t>(1 + F.quadratic_character(F.add(F.mul(b, b), F.mul(four, rhs))));
        }
    }
    return count;
}

// Short Weierstrass arithmetic mod p for baby-step giant-step.
struct ShortPoint {
    std::uint64_t x = 0, y = 0;
    bool inf = true;
    bool operator==(const ShortPoint& o) const { return inf == o.inf && (inf || (x == o.x && y == o.y)); }
};

struct ShortCurveModP {
    std::uint64_t p, A, B;

    ShortPoint neg(const ShortPoint& P) const {
        if (P.inf) return P;
        return {P.x, P.y == 0 ? 0 : p - P.y, false};
    }
    ShortPoint add(const ShortPoint& P, const ShortPoint& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        std::uint64_t lambda;
        if (P.x == Q.x) {
            if ((P.y + Q.y) % p == 0) return {};
            std::uint64_t num = (mulmod(3, mulmod(P.x, P.x, p), p) + A) % p;
            lambda = mulmod(num, invmod((2 * P.y) % p, p), p);
        } else {
            lambda = mulmod((Q.y + p - P.y) % p, invmod((Q.x + p - P.x) % p, p), p);
        }
        std::uint64_t x3 = (mulmod(lambda, lambda, p) + 2 * p - P.x - Q.x) % p;
        std::uint64_t y3 = (mulmod(lambda, (P.x + p - x3) % p, p) + p - P.y) % p;
        return {x3, y3, false};
    }
    ShortPoint mul(std::uint64_t n, ShortPoint P) const {
        ShortPoint r;
        while (n) {
            if (n & 1) r = add(r, P);
            P = add(P, P);
            n >>= 1;
        }
        return r;
    }
    std::uint64_t rhs(std::uint64_t x) const {
        return (mulmod((mulmod(x, x, p) + A) % p, x, p) + B) % p;
    }
};

struct ShortPointHash {
    std::size_t operator()(const ShortPoint& P) const {
        return P.inf ? 0x9e3779b97f4a7c15ULL : (P.x * 0x9e3779b97f4a7c15ULL) ^ P.y;
    }
};

/// Exact order of P, given some multiple m in [lo, hi] with mP = O.
inline std::uint64_t order_of_point(const ShortCurveModP& E, const ShortPoint& P, std::uint64_t lo,
                                    std::uint64_t hi) {
    const std::uint64_t width = hi - lo;
    const std::uint64_t s = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(width + 1))));
    std::unordered_map<ShortPoint, std::uint64_t, ShortPointHash> baby;
    ShortPoint cur;
    for (std::uint64_t j = 0; j < s; ++j) {
        baby.emplace(cur, j);
        cur = E.add(cur, P);
    }
    const ShortPoint giant = E.mul(s, P);
    ShortPoint R = E.mul(lo, P);
    std::uint64_t multiple = 0;
    for (std::uint64_t i = 0; i <= s && !multiple; ++i) {
        auto it = baby.find(E.neg(R));
        if (it != baby.end() && i * s + it->second <= width) multiple = lo + i * s + it->second;
        R = E.add(R, giant);
    }
    if (!multiple) throw Error("internal: no multiple of the point in the Hasse interval");
    std::uint64_t order = multiple;
    for (const auto& [q, e] : factor(Integer(static_cast<unsigned long>(multiple)))) {
        const std::uint64_t qq = q.get_ui();
        while (order % qq == 0 && E.mul(order / qq, P).inf) order /= qq;
    }
    return order;
}

/// #E(F_p) for y^2 = x^3 + Ax + B, p >= 5 prime and good reduction.
inline std::uint64_t count_bsgs(std::uint64_t p, std::uint64_t A, std::uint64_t B) {
    const std::uint64_t r = static_cast<std::uint64_t>(isqrt(Integer(static_cast<unsigned long>(4 * p))).get_ui());
    const std::uint64_t lo = p + 1 - r, hi = p + 1 + r;
    std::uint64_t nonresidue = 2;
    while (powmod(nonresidue, (p - 1) / 2, p) != p - 1) ++nonresidue;
    const ShortCurveModP E{p, A, B};
    const std::uint64_t g2 = mulmod(nonresidue, nonresidue, p);
    const ShortCurveModP T{p, mulmod(A, g2, p), mulmod(B, mulmod(g2, nonresidue, p), p)};
    std::mt19937_64 rng(p);
    auto random_point = [&](const ShortCurveModP& C) {
        while (true) {
            std::uint64_t x = rng() % p;
            std::uint64_t f = C.rhs(x);
            if (f == 0) return ShortPoint{x, 0, false};
            if (powmod(f, (p - 1) / 2, p) == 1) return ShortPoint{x, sqrtmod(f, p), false};
        }
    };
    std::uint64_t lcm_e = 1, lcm_t = 1;
    for (int round = 0; round < 200; ++round) {
        const bool use_twist = round % 2 == 1;
        const ShortCurveModP& C = use_twist ? T : E;
        std::uint64_t ord = order_of_point(C, random_point(C), lo, hi);
        std::uint64_t& acc = use_twist ? lcm_t : lcm_e;
        acc = std::lcm(acc, ord);
        // Candidates N for #E with lcm_e | N and lcm_t | 2p + 2 - N.
        std::uint64_t found = 0, hits = 0;
        for (std::uint64_t n = (lo + lcm_e - 1) / lcm_e * lcm_e; n <= hi; n += lcm_e) {
            if ((2 * p + 2 - n) % lcm_t == 0) {
                found = n;
                if (++hits > 1) break;
            }
        }
        if (hits == 1) return found;
    }
    throw PrecisionExhausted("baby-step giant-step did not isolate #E(F_p) for p = " + std::to_string(p));
}

// Montgomery arithmetic modulo an odd prime p < 2^31.
struct Mont32 {
    std::uint32_t p, pinv, r2, one;

    explicit Mont32(std::uint32_t modulus) : p(modulus) {
        std::uint32_t inv = p;
        for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;
        pinv = static_cast<std::uint32_t>(0) - inv;
        r2 = static_cast<std::uint32_t>((static_cast<unsigned __int128>(1) << 64) % p);
        one = to(1);
    }
    std::uint32_t reduce(std::uint64_t t) const {
        std::uint32_t m = static_cast<std::uint32_t>(t) * pinv;
        std::uint64_t u = (t + static_cast<std::uint64_t>(m) * p) >> 32;
        return static_cast<std::uint32_t>(u >= p ? u - p : u);
    }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return reduce(static_cast<std::uint64_t>(a) * b); }
    std::uint32_t sqr(std::uint32_t a) const { return mul(a, a); }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        std::uint32_t s = a + b;
        return s >= p ? s - p : s;
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a >= b ? a - b : a + p - b; }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p - a; }
    std::uint32_t to(std::uint64_t a) const { return reduce(static_cast<std::uint64_t>(a % p) * r2); }
    std::uint32_t from(std::uint32_t a) const { return reduce(a); }
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
        std::uint32_t r = one;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = sqr(a);
            e >>= 1;
        }
        return r;
    }
    std::uint32_t inv(std::uint32_t a) const { return to(invmod(from(a), p)); }
};

// Jacobian coordinates over Mont32; Z = 0 is the point at infinity.
struct JacPoint {
    std::uint32_t X = 0, Y = 0, Z = 0;
};
struct AffPoint {
    std::uint32_t x = 0, y = 0;
    bool inf = false;
};

struct FastCurve {
    const Mont32& F;
    std::uint32_t A; // Montgomery form

    JacPoint dbl(const JacPoint& P) const {
        if (P.Z == 0 || P.Y == 0) return {};
        std::uint32_t XX = F.sqr(P.X), YY = F.sqr(P.Y), YYYY = F.sqr(YY), ZZ = F.sqr(P.Z);
        std::uint32_t S = F.mul(P.X, YY);
        S = F.add(S, S);
        S = F.add(S, S);
        std::uint32_t M = F.add(F.add(XX, XX), F.add(XX, F.mul(A, F.sqr(ZZ))));
        std::uint32_t X3 = F.sub(F.sqr(M), F.add(S, S));
        std::uint32_t Y8 = F.add(YYYY, YYYY);
        Y8 = F.add(Y8, Y8);
        Y8 = F.add(Y8, Y8);
        std::uint32_t Y3 = F.sub(F.mul(M, F.sub(S, X3)), Y8);
        std::uint32_t Z3 = F.mul(P.Y, P.Z);
        Z3 = F.add(Z3, Z3);
        return {X3, Y3, Z3};
    }
    JacPoint add_affine(const JacPoint& P, const AffPoint& Q) const {
        if (Q.inf) return P;
        if (P.Z == 0) return {Q.x, Q.y, F.one};
        std::uint32_t Z1Z1 = F.sqr(P.Z);
        std::uint32_t U2 = F.mul(Q.x, Z1Z1);
        std::uint32_t S2 = F.mul(Q.y, F.mul(P.Z, Z1Z1));
        std::uint32_t H = F.sub(U2, P.X), r = F.sub(S2, P.Y);
        if (H == 0) return r == 0 ? dbl(P) : JacPoint{};
        std::uint32_t HH = F.sqr(H), HHH = F.mul(H, HH), V = F.mul(P.X, HH);
        std::uint32_t X3 = F.sub(F.sub(F.sqr(r), HHH), F.add(V, V));
        std::uint32_t Y3 = F.sub(F.mul(r, F.sub(V, X3)), F.mul(P.Y, HHH));
        return {X3, Y3, F.mul(P.Z, H)};
    }
    JacPoint mul(std::uint64_t n, const AffPoint& P) const {
        JacPoint R;
        for (int bit = 63; bit >= 0; --bit) {
            R = dbl(R);
            if ((n >> bit) & 1) R = add_affine(R, P);
        }
        return R;
    }
    /// Affine images of a batch of points with one inversion.
    std::vector<AffPoint> normalize(const std::vector<JacPoint>& pts) const {
        std::vector<std::uint32_t> prefix(pts.size());
        std::uint32_t acc = F.one;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            prefix[i] = acc;
            if (pts[i].Z) acc = F.mul(acc, pts[i].Z);
        }
        std::uint32_t inv = F.inv(acc);
        std::vector<AffPoint> out(pts.size());
        for (std::size_t i = pts.size(); i-- > 0;) {
            if (!pts[i].Z) {
                out[i].inf = true;
                continue;
            }
            std::uint32_t zi = F.mul(inv, prefix[i]);
            inv = F.mul(inv, pts[i].Z);
            std::uint32_t zi2 = F.sqr(zi);
            out[i] = {F.mul(pts[i].X, zi2), F.mul(pts[i].Y, F.mul(zi2, zi)), false};
        }
        return out;
    }
    AffPoint to_affine(const JacPoint& P) const { return normalize({P})[0]; }

    std::uint64_t exact_order(const AffPoint& P, std::uint64_t multiple) const {
        std::uint64_t order = multiple;
        for (const auto& [q, e] : factor(Integer(static_cast<unsigned long>(multiple)))) {
            const std::uint64_t qq = q.get_ui();
            while (order % qq == 0 && mul(order / qq, P).Z == 0) order /= qq;
        }
        return order;
    }
};

/// All m in [lo, hi] with mP = O.
inline std::vector<std::uint64_t> multiples_killing(const FastCurve& C, const AffPoint& P, std::uint64_t lo,
                                                    std::uint64_t hi) {
    const Mont32& F = C.F;
    auto multiples_of = [&](std::uint64_t order) {
        std::vector<std::uint64_t> out;
        for (std::uint64_t m = (lo + order - 1) / order * order; m <= hi; m += order) out.push_back(m);
        return out;
    };
    const std::uint64_t r = (hi - lo) / 2, c = lo + r;
    std::uint64_t s = 1;
    while (s * s < r) ++s;
    const std::uint64_t t = 2 * s + 1;

    std::vector<JacPoint> jac(s);
    jac[0] = {P.x, P.y, F.one};
    for (std::uint64_t j = 1; j < s; ++j) jac[j] = C.add_affine(jac[j - 1], P);
    const auto baby = C.normalize(jac);
    std::size_t cap = 1;
    while (cap < 4 * s) cap <<= 1;
    std::vector<std::uint32_t> key(cap, 0), val(cap, 0); // val holds j, 0 marks empty
    for (std::uint64_t j = 1; j <= s; ++j) {
        const AffPoint& B = baby[j - 1];
        if (B.inf) return multiples_of(C.exact_order(P, j));
        std::size_t h = (B.x * 0x9E3779B1u) & (cap - 1);
        while (val[h] && key[h] != B.x) h = (h + 1) & (cap - 1);
        if (val[h]) {
            // jP = +-j'P: a small multiple of the order.
            const std::uint64_t jj = val[h];
            const std::uint64_t m = baby[jj - 1].y == B.y ? j - jj : j + jj;
            return multiples_of(C.exact_order(P, m));
        }
        key[h] = B.x;
        val[h] = static_cast<std::uint32_t>(j);
    }
    const AffPoint G = C.to_affine(C.mul(t, P));
    if (G.inf) return multiples_of(C.exact_order(P, t));
    const AffPoint negG{G.x, F.neg(G.y), false};
    const std::uint64_t I = (r + t - 1) / t;
    std::vector<JacPoint> giant(2 * I + 1);
    giant[I] = C.mul(c, P);
    for (std::uint64_t i = 1; i <= I; ++i) {
        giant[I + i] = C.add_affine(giant[I + i - 1], G);
        giant[I - i] = C.add_affine(giant[I - i + 1], negG);
    }
    const auto R = C.normalize(giant);
    std::vector<std::uint64_t> out;
    auto push = [&](std::int64_t m) {
        if (m >= static_cast<std::int64_t>(lo) && m <= static_cast<std::int64_t>(hi))
            out.push_back(static_cast<std::uint64_t>(m));
    };
    for (std::uint64_t idx = 0; idx < R.size(); ++idx) {
        const std::int64_t i = static_cast<std::int64_t>(idx) - static_cast<std::int64_t>(I);
        const std::int64_t base = static_cast<std::int64_t>(c) + i * static_cast<std::int64_t>(t);
        if (R[idx].inf) {
            push(base);
            continue;
        }
        std::size_t h = (R[idx].x * 0x9E3779B1u) & (cap - 1);
        while (val[h] && key[h] != R[idx].x) h = (h + 1) & (cap - 1);
        if (!val[h]) continue;
        const std::int64_t j = val[h];
        // R = (c + i t) P equals +jP or -jP.
        push(baby[static_cast<std::size_t>(j - 1)].y == R[idx].y ? base - j : base + j);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// #E(F_p) for y^2 = x^3 + Ax + B with p < 2^31. Random points are taken on
/// quadratic twists E_f where (x f, f^2) is a point; E_f is E or its twist
/// according to the character of f.
inline std::uint64_t count_bsgs_fast(std::uint32_t p, std::uint64_t A, std::uint64_t B) {
    const Mont32 F(p);
    const std::uint64_t r = static_cast<std::uint64_t>(isqrt(Integer(static_cast<unsigned long>(4ULL * p))).get_ui());
    const std::uint64_t lo = p + 1 - r, hi = p + 1 + r;
    const std::uint32_t Am = F.to(A), Bm = F.to(B), minus_one = F.neg(F.one);
    std::vector<std::uint64_t> cand;
    bool constrained = false;
    for (std::uint64_t x0 = 1; x0 < 1000; ++x0) {
        const std::uint32_t x = F.to(x0);
        const std::uint32_t f = F.add(F.mul(F.add(F.sqr(x), Am), x), Bm);
        if (f == 0) continue;
        const std::uint32_t chi = F.pow(f, (p - 1) / 2);
        const std::uint32_t f2 = F.sqr(f);
        FastCurve C{F, F.mul(Am, f2)};
        AffPoint P{F.mul(x, f), f2, false};
        std::vector<std::uint64_t> ms = multiples_killing(C, P, lo, hi);
        if (chi == minus_one) {
            for (auto& m : ms) m = 2ULL * p + 2 - m;
            std::sort(ms.begin(), ms.end());
        }
        if (!constrained) {
            cand = std::move(ms);
            constrained = true;
        } else {
            std::vector<std::uint64_t> both;
            std::set_intersection(cand.begin(), cand.end(), ms.begin(), ms.end(), std::back_inserter(both));
            cand = std::move(both);
        }
        if (cand.size() == 1) return cand[0];
        if (cand.empty()) break;
    }
    throw PrecisionExhausted("baby-step giant-step did not isolate #E(F_p) for p = " + std::to_string(p));
}

inline Integer discriminant_mod_check(const WeierstrassCurve& e, const Integer& p) {
    const Rational& d = e.discriminant();
    Integer num = d.get_num();
    return mod(num, p);
}

/// -1 nonsplit, +1 split, 0 cusp for a singular reduction, via the tangent cone.
inline int singular_reduction_sign_large(const WeierstrassCurve& e, std::uint64_t p) {
    std::uint64_t c4 = reduce_mod(e.invariants().c4, p), c6 = reduce_mod(e.invariants().c6, p);
    if (c4 == 0) return 0;
    std::uint64_t minus_c6 = (p - c6) % p;
    return powmod(minus_c6, (p - 1) / 2, p) == 1 ? 1 : -1;
}

} // namespace detail

/// Number of projective points of the reduction of the given model over the
/// field with p^k elements; the reduction may be singular (k = 1).
inline Integer count_points(const WeierstrassCurve& e, const Integer& prime, int k = 1,
                            const PointCountOptions& opt = {}) {
    const std::uint64_t p = detail::to_u64_prime(prime);
    if (k < 1) throw PreconditionViolation("extension degree must be positive");
    const auto rc = detail::reduce_curve(e, p);
    const double qd = std::pow(static_cast<double>(p), k);
    const bool small = qd <= static_cast<double>(opt.exhaustive_limit) || p < 1000;
    if (small && qd < 1.8e19) {
        if (k == 1 && p != 2) return Integer(static_cast<unsigned long>(detail::count_prime_field_odd(rc)));
        return Integer(static_cast<unsigned long>(detail::count_extension(rc, ExtensionField::standard(p, k))));
    }
    Integer q = ipow(prime, static_cast<unsigned long>(k));
    const bool singular = detail::discriminant_mod_check(e, prime) == 0;
    if (singular) {
        int a = detail::singular_reduction_sign_large(e, p);
        long ak = (k % 2 == 0) ? (a == 0 ? 0 : 1) : a;
        return q + 1 - ak;
    }
    if (k == 1) {
        const auto& inv = e.invariants();
        std::uint64_t A = (p - reduce_mod(27 * inv.c4, p)) % p;
        std::uint64_t B = (p - reduce_mod(54 * inv.c6, p)) % p;
        if (p < (1ULL << 31))
            return Integer(static_cast<unsigned long>(detail::count_bsgs_fast(static_cast<std::uint32_t>(p), A, B)));
        return Integer(static_cast<unsigned long>(detail::count_bsgs(p, A, B)));
    }
    // k > 1 beyond enumeration: Newton sums of the Frobenius roots.
    Integer ap = prime + 1 - count_points(e, prime, 1, opt);
    Integer s_prev = 2, s_cur = ap;
    for (int j = 2; j <= k; ++j) {
        Integer s_next = ap * s_cur - prime * s_prev;
        s_prev = s_cur;
        s_cur = s_next;
    }
    return q + 1 - s_cur;
}

/// Count over an explicitly chosen model of F_{p^k}.
inline Integer count_points_over(const WeierstrassCurve& e, const ExtensionField& F) {
    const auto rc = detail::reduce_curve(e, F.characteristic());
    return Integer(static_cast<unsigned long>(detail::count_extension(rc, F)));
}

// ---------------------------------------------------------------------------
// Minimality at p.

inline bool is_minimal_at(const WeierstrassCurve& e, const Integer& p) {
    for (const auto& a : e.coefficients())
        if (valuation(a, p) < 0) return false;
    const auto& inv = e.invariants();
    if (valuation(inv.discriminant, p) < 12) return true;
    if (!is_integral(inv.c4) || !is_integral(inv.c6)) return true;
    const Integer c4 = inv.c4.get_num(), c6 = inv.c6.get_num();
    if (valuation(c4, p) < 4 || valuation(c6, p) < 6) return true;
    return !detail::kraus_local(p, c4 / ipow(p, 4), c6 / ipow(p, 6));
}

namespace detail {

inline WeierstrassCurve minimal_at(const WeierstrassCurve& e, const Integer& p) {
    return is_minimal_at(e, p) ? e : minimal_model(e).first;
}

} // namespace detail

/// Reduction type of the minimal model at p. Split versus non-split is read off
/// from the number of nonsingular points of the reduction.
inline Reduction reduction_type(const WeierstrassCurve& curve, const Integer& p, const PointCountOptions& opt = {}) {
    require_prime(p);
    const WeierstrassCurve e = detail::minimal_at(curve, p);
    const auto& inv = e.invariants();
    if (valuation(inv.discriminant, p) == 0) return Reduction::Good;
    if (valuation(inv.c4, p) > 0) return Reduction::Additive;
    // One singular point; the rest form the group of nonsingular points.
    Integer nonsingular = count_points(e, p, 1, opt) - 1;
    if (nonsingular == p - 1) return Reduction::SplitMultiplicative;
    if (nonsingular == p + 1) return Reduction::NonsplitMultiplicative;
    throw Error("internal: inconsistent nonsingular point count at p = " + p.get_str());
}

/// Trace of Frobenius at a good prime, table value at a bad one.
inline long ap(const WeierstrassCurve& curve, const Integer& p, const PointCountOptions& opt = {}) {
    require_prime(p);
    const WeierstrassCurve e = detail::minimal_at(curve, p);
    if (valuation(e.discriminant(), p) == 0) {
        Integer a = p + 1 - count_points(e, p, 1, opt);
        return a.get_si();
    }
    switch (reduction_type(e, p, opt)) {
        case Reduction::SplitMultiplicative: return 1;
        case Reduction::NonsplitMultiplicative: return -1;
        default: return 0;
    }
}

// ---------------------------------------------------------------------------
// Tate's algorithm.

namespace detail {

struct IntModel {
    Integer a1, a2, a3, a4, a6;

    Integer b2() const { return a1 * a1 + 4 * a2; }
    Integer b4() const { return a1 * a3 + 2 * a4; }
    Integer b6() const { return a3 * a3 + 4 * a6; }
    Integer b8() const { return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }
    Integer c4() const { return b2() * b2() - 24 * b4(); }
    Integer c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
    Integer disc() const {
        Integer B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
        return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
    }

    /// x = x' + r, y = y' + s x' + t.
    void rst(const Integer& r, const Integer& s, const Integer& t) {
        Integer n1 = a1 + 2 * s;
        Integer n2 = a2 - s * a1 + 3 * r - s * s;
        Integer n3 = a3 + r * a1 + 2 * t;
        Integer n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        Integer n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        a1 = n1;
        a2 = n2;
        a3 = n3;
        a4 = n4;
        a6 = n6;
    }
};

inline Integer inverse_mod(const Integer& a, const Integer& p) {
    Integer r;
    Integer am = mod(a, p);
    if (mpz_invert(r.get_mpz_t(), am.get_mpz_t(), p.get_mpz_t()) == 0)
        throw Error("internal: non-invertible residue");
    return r;
}

inline bool divisible(const Integer& a, const Integer& m) { return mpz_divisible_p(a.get_mpz_t(), m.get_mpz_t()) != 0; }

/// Does a x^2 + b x + c have a root mod p?
inline bool has_root_quadratic(const Integer& a0, const Integer& b0, const Integer& c0, const Integer& p) {
    Integer a = mod(a0, p), b = mod(b0, p), c = mod(c0, p);
    if (a == 0) return b != 0 || c == 0;
    if (p == 2) return c == 0 || mod(a + b + c, p) == 0;
    Integer d = mod(b * b - 4 * a * c, p);
    return d == 0 || mpz_legendre(d.get_mpz_t(), p.get_mpz_t()) == 1;
}

using IntPoly = std::vector<Integer>; // little-endian, reduced mod p

inline void trim_poly(IntPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline IntPoly ipoly_mod(IntPoly a, const IntPoly& m, const Integer& p) {
    trim_poly(a);
    Integer inv = inverse_mod(m.back(), p);
    while (a.size() >= m.size()) {
        Integer coef = mod(a.back() * inv, p);
        std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = mod(a[shift + i] - coef * m[i], p);
        trim_poly(a);
    }
    return a;
}

inline IntPoly ipoly_mulmod(const IntPoly& a, const IntPoly& b, const IntPoly& m, const Integer& p) {
    if (a.empty() || b.empty()) return {};
    IntPoly out(a.size() + b.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    for (auto& c : out) c = mod(c, p);
    return ipoly_mod(std::move(out), m, p);
}

/// Number of distinct roots in F_p of the monic cubic x^3 + b x^2 + c x + d.
inline int count_cubic_roots(const Integer& b, const Integer& c, const Integer& d, const Integer& p) {
    if (p < 1000) {
        int n = 0;
        for (unsigned long x = 0; x < p.get_ui(); ++x)
            if (mod(((Integer(x) + b) * x + c) * x + d, p) == 0) ++n;
        return n;
    }
    IntPoly f{mod(d, p), mod(c, p), mod(b, p), Integer(1)};
    // gcd(f, x^p - x) has degree equal to the number of distinct roots.
    IntPoly acc{Integer(1)}, base{Integer(0), Integer(1)};
    for (Integer e = p; e > 0; e /= 2) {
        if (mpz_odd_p(e.get_mpz_t())) acc = ipoly_mulmod(acc, base, f, p);
        base = ipoly_mulmod(base, base, f, p);
    }
    acc.resize(std::max<std::size_t>(acc.size(), 2), Integer(0));
    acc[1] = mod(acc[1] - 1, p);
    IntPoly a = f, g = acc;
    trim_poly(g);
    while (!g.empty()) {
        IntPoly r = ipoly_mod(a, g, p);
        a = std::move(g);
        g = std::move(r);
    }
    return static_cast<int>(a.size()) - 1;
}

/// Double root of a cubic with exactly one repeated root mod p.
inline Integer cubic_double_root(const Integer& b, const Integer& c, const Integer& d, const Integer& p) {
    if (p < 1000) {
        for (unsigned long x = 0; x < p.get_ui(); ++x) {
            Integer X(x);
            if (mod(((X + b) * X + c) * X + d, p) == 0 && mod((3 * X + 2 * b) * X + c, p) == 0) return X;
        }
        throw Error("internal: no double root");
    }
    return mod((b * c - 9 * d) * inverse_mod(2 * (3 * c - b * b), p), p);
}

inline int component_count(const std::string& kodaira, int n) {
    if (kodaira == "I0") return 1;
    if (kodaira == "II") return 1;
    if (kodaira == "II*") return 9;
    if (kodaira == "III") return 2;
    if (kodaira == "IV") return 3;
    if (kodaira == "IV*") return 7;
    if (kodaira == "III*") return 8;
    if (kodaira.back() == '*') return n + 5; // I_n*
    return n;                                 // I_n
}

} // namespace detail

/// Tate's algorithm at p on a p-integral model; non-minimal models are
/// rescaled on the way.
inline LocalData tate_local(const WeierstrassCurve& curve, const Integer& p, const PointCountOptions& opt = {}) {
    require_prime(p);
    for (const auto& a : curve.coefficients())
        if (valuation(a, p) < 0) return tate_local(minimal_model(curve).first, p, opt);
    // Clear denominators prime to p: scaling by a p-unit does not change the local data.
    Integer D = 1;
    for (const auto& a : curve.coefficients()) D = lcm(D, Integer(a.get_den()));
    detail::IntModel E;
    {
        Rational u(D);
        const auto& c = curve.coefficients();
        E = {to_integer(c[0] * u), to_integer(c[1] * u * u), to_integer(c[2] * u * u * u),
             to_integer(c[3] * u * u * u * u), to_integer(c[4] * u * u * u * u * u * u)};
    }
    using detail::divisible;
    using detail::inverse_mod;
    const Integer p2 = p * p, p3 = p2 * p, p4 = p3 * p;
    auto v = [&](const Integer& x) { return valuation(x, p); };

    LocalData out;
    out.p = p;
    auto finish = [&](const std::string& kodaira, int n, int c, int f) {
        out.kodaira = kodaira;
        out.c_p = c;
        out.f_p = f;
        out.m_E = detail::component_count(kodaira, n);
        if (out.f_p != out.ord_disc + 1 - out.m_E)
            throw Error("internal: conductor exponent disagrees with the component count at p = " + p.get_str());
        return out;
    };

    while (true) {
        out.ord_disc = v(E.disc());
        if (out.ord_disc == 0) {
            out.reduction = Reduction::Good;
            WeierstrassCurve model(Rational(E.a1), Rational(E.a2), Rational(E.a3), Rational(E.a4), Rational(E.a6));
            out.a_p = ap(model, p, opt);
            return finish("I0", 0, 1, 0);
        }
        // Move the singular point of the reduction to (0, 0).
        Integer r, t;
        if (p == 2) {
            if (divisible(E.b2(), p)) {
                r = mod(E.a4, p);
                t = mod(r * (1 + E.a2 + E.a4) + E.a6, p);
            } else {
                r = mod(E.a3, p);
                t = mod(r + E.a4, p);
            }
        } else if (p == 3) {
            r = divisible(E.b2(), p) ? mod(-E.b6(), p) : mod(-E.b2() * E.b4(), p);
            t = mod(E.a1 * r + E.a3, p);
        } else {
            Integer c4 = E.c4();
            r = divisible(c4, p) ? mod(-inverse_mod(Integer(12), p) * E.b2(), p)
                                 : mod(-inverse_mod(12 * c4, p) * (E.c6() + E.b2() * c4), p);
            t = mod(-inverse_mod(Integer(2), p) * (E.a1 * r + E.a3), p);
        }
        E.rst(r, 0, t);

        // Multiplicative reduction.
        if (!divisible(E.c4(), p)) {
            const bool split = detail::has_root_quadratic(1, E.a1, -E.a2, p);
            const int n = out.ord_disc;
            out.reduction = split ? Reduction::SplitMultiplicative : Reduction::NonsplitMultiplicative;
            out.a_p = split ? 1 : -1;
            return finish("I" + std::to_string(n), n, split ? n : (n % 2 == 0 ? 2 : 1), 1);
        }
        out.reduction = Reduction::Additive;
        out.a_p = 0;
        if (v(E.a6) < 2) return finish("II", 0, 1, out.ord_disc);
        if (v(E.b8()) < 3) return finish("III", 0, 2, out.ord_disc - 1);
        if (v(E.b6()) < 3) {
            const bool roots = detail::has_root_quadratic(1, E.a3 / p, -E.a6 / p2, p);
            return finish("IV", 0, roots ? 3 : 1, out.ord_disc - 2);
        }
        // Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6.
        Integer s;
        if (p == 2) {
            s = mod(E.a2, 2);
            t = 2 * mod(E.a6 / 4, 2);
        } else {
            s = mod(-E.a1 * inverse_mod(Integer(2), p), p);
            t = 0;
        }
        E.rst(0, s, t);
        if (p != 2) E.rst(0, 0, p * mod(-(E.a3 / p) * inverse_mod(Integer(2), p), p));
        if (!divisible(E.a1, p) || !divisible(E.a2, p) || !divisible(E.a3, p2) || !divisible(E.a4, p2) ||
            !divisible(E.a6, p3))
            throw Error("internal: Tate normalization failed at p = " + p.get_str());

        const Integer b = E.a2 / p, c = E.a4 / p2, d = E.a6 / p3;
        const Integer w = 27 * d * d - b * b * c * c + 4 * b * b * b * d - 18 * b * c * d + 4 * c * c * c;
        const Integer x = 3 * c - b * b;
        if (!divisible(w, p)) {
            return finish("I0*", 0, 1 + detail::count_cubic_roots(b, c, d, p), out.ord_disc - 4);
        }
        if (!divisible(x, p)) {
            // Double root: the I_m* chain.
            E.rst(p * detail::cubic_double_root(b, c, d, p), 0, 0);
            int ix = 3, iy = 3;
            Integer mx = p2, my = p2;
            int cp = 0;
            while (true) {
                Integer a2t = E.a2 / p, a3t = E.a3 / my, a6t = E.a6 / (mx * my);
                if (!divisible(a3t * a3t + 4 * a6t, p)) {
                    cp = detail::has_root_quadratic(1, a3t, -a6t, p) ? 4 : 2;
                    break;
                }
                Integer ty = p == 2 ? my * mod(a6t, 2) : my * mod(-a3t * inverse_mod(Integer(2), p), p);
                E.rst(0, 0, ty);
                my *= p;
                ++iy;
                a2t = E.a2 / p;
                Integer a4t = E.a4 / (p * mx);
                a6t = E.a6 / (mx * my);
                if (!divisible(a4t * a4t - 4 * a6t * a2t, p)) {
                    cp = detail::has_root_quadratic(a2t, a4t, a6t, p) ? 4 : 2;
                    break;
                }
                Integer rx = p == 2 ? mx * mod(a6t * a2t, 2)
                                    : mx * mod(-a4t * inverse_mod(2 * a2t, p), p);
                E.rst(rx, 0, 0);
                mx *= p;
                ++ix;
            }
            const int m = ix + iy - 5;
            return finish("I" + std::to_string(m) + "*", m, cp, out.ord_disc - m - 4);
        }
        // Triple root.
        Integer root = p == 3 ? mod(-d, p) : mod(-b * inverse_mod(Integer(3), p), p);
        E.rst(p * root, 0, 0);
        const Integer x3 = E.a3 / p2, x6 = E.a6 / p4;
        if (!divisible(x3 * x3 + 4 * x6, p)) {
            const bool roots = detail::has_root_quadratic(1, x3, -x6, p);
            return finish("IV*", 0, roots ? 3 : 1, out.ord_disc - 6);
        }
        Integer ty = p == 2 ? p2 * mod(x6, 2) : p2 * mod(-x3 * inverse_mod(Integer(2), p), p);
        E.rst(0, 0, ty);
        if (v(E.a4) < 4) return finish("III*", 0, 2, out.ord_disc - 7);
        if (v(E.a6) < 6) return finish("II*", 0, 1, out.ord_disc - 8);
        // Not minimal: scale by p and start over.
        E = {E.a1 / p, E.a2 / p2, E.a3 / p3, E.a4 / p4, E.a6 / (p4 * p2)};
    }
}

/// Local data at every bad prime of the minimal model.
inline std::vector<LocalData> bad_local_data(const WeierstrassCurve& curve, const PointCountOptions& opt = {}) {
    const WeierstrassCurve e = minimal_model(curve).first;
    std::vector<LocalData> out;
    for (const auto& p : prime_divisors(to_integer(e.discriminant()))) out.push_back(tate_local(e, p, opt));
    return out;
}

inline Integer conductor(const WeierstrassCurve& curve) {
    Integer N = 1;
    for (const auto& ld : bad_local_data(curve)) N *= ipow(ld.p, static_cast<unsigned long>(ld.f_p));
    return N;
}

/// Memoized a_p values of one curve; concurrent readers, exclusive writers.
class ApCache {
public:
    explicit ApCache(WeierstrassCurve curve, PointCountOptions opt = {})
        : curve_(minimal_model(curve).first), opt_(opt) {}

    long get(std::uint64_t p) const {
        {
            std::shared_lock lock(mutex_);
            if (auto it = table_.find(p); it != table_.end()) return it->second;
        }
        long value = ap(curve_, Integer(static_cast<unsigned long>(p)), opt_);
        std::unique_lock lock(mutex_);
        table_.emplace(p, value);
        return value;
    }
    const WeierstrassCurve& curve() const { return curve_; }
    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return table_.size();
    }

private:
    WeierstrassCurve curve_;
    PointCountOptions opt_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<std::uint64_t, long> table_;
};

inline nlohmann::ordered_json to_json(const LocalData& ld) {
    return {{"p", ld.p.get_str()},   {"reduction", to_string(ld.reduction)}, {"kodaira", ld.kodaira},
            {"a_p", ld.a_p},         {"f_p", ld.f_p},                       {"c_p", ld.c_p},
            {"m_E", ld.m_E},         {"ord_disc", ld.ord_disc}};
}

} // namespace lfunc
