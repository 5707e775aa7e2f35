#pragma once

// Weierstrass models over Q: invariants, coordinate changes, minimal models,
// the chord-tangent group law, torsion and bounded point search. All
// arithmetic here is exact.

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lfunc/arith.hpp"

namespace lfunc {

struct InvariantSet {
    Rational b2, b4, b6, b8;
    Rational c4, c6;
    Rational discriminant;
    Rational j;
};

/// Coefficients [a1, a2, a3, a4, a6].
using Coefficients = std::array<Rational, 5>;

/// Computes b-, c-invariants, discriminant and j. Throws SingularCurve when the
/// discriminant vanishes.
inline InvariantSet invariants(const Coefficients& a) {
    const auto& [a1, a2, a3, a4, a6] = a;
    InvariantSet inv;
    inv.b2 = a1 * a1 + 4 * a2;
    inv.b4 = 2 * a4 + a1 * a3;
    inv.b6 = a3 * a3 + 4 * a6;
    inv.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    inv.c4 = inv.b2 * inv.b2 - 24 * inv.b4;
    inv.c6 = -inv.b2 * inv.b2 * inv.b2 + 36 * inv.b2 * inv.b4 - 216 * inv.b6;
    inv.discriminant = -inv.b2 * inv.b2 * inv.b8 - 8 * inv.b4 * inv.b4 * inv.b4
                       - 27 * inv.b6 * inv.b6 + 9 * inv.b2 * inv.b4 * inv.b6;
    if (inv.discriminant == 0) throw SingularCurve();
    inv.j = inv.c4 * inv.c4 * inv.c4 / inv.discriminant;
    return inv;
}

/// Standard coordinate change x = u^2 x' + r, y = u^3 y' + u^2 s x' + t.
struct IsomorphismData {
    Rational u{1}, r{0}, s{0}, t{0};

    /// The change obtained by applying `this` first and `next` second.
    IsomorphismData then(const IsomorphismData& next) const {
        return {u * next.u, u * u * next.r + r, u * next.s + s,
                u * u * u * next.t + u * u * s * next.r + t};
    }

    IsomorphismData inverse() const {
        return {1 / u, -r / (u * u), -s / u, (r * s - t) / (u * u * u)};
    }

    bool is_identity() const { return u == 1 && r == 0 && s == 0 && t == 0; }

    friend bool operator==(const IsomorphismData&, const IsomorphismData&) = default;
};

/// A rational point: either the point at infinity or an affine pair.
class CurvePoint {
public:
    CurvePoint() = default; // the point at infinity
    CurvePoint(Rational x, Rational y) : x_(std::move(x)), y_(std::move(y)), infinity_(false) {
        x_.canonicalize();
        y_.canonicalize();
    }

    static CurvePoint infinity() { return {}; }

    bool is_infinity() const { return infinity_; }
    const Rational& x() const { return x_; }
    const Rational& y() const { return y_; }

    friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
        if (a.infinity_ || b.infinity_) return a.infinity_ == b.infinity_;
        return a.x_ == b.x_ && a.y_ == b.y_;
    }

    friend bool operator<(const CurvePoint& a, const CurvePoint& b) {
        if (a.infinity_ != b.infinity_) return a.infinity_;
        if (a.infinity_) return false;
        if (a.x_ != b.x_) return a.x_ < b.x_;
        return a.y_ < b.y_;
    }

    friend std::ostream& operator<<(std::ostream& os, const CurvePoint& p) {
        if (p.infinity_) return os << "O";
        return os << "(" << p.x_.get_str() << "," << p.y_.get_str() << ")";
    }

private:
    Rational x_, y_;
    bool infinity_ = true;
};

class WeierstrassCurve {
public:
    explicit WeierstrassCurve(Coefficients a) : a_(std::move(a)) {
        for (auto& c : a_) c.canonicalize();
        inv_ = lfunc::invariants(a_);
    }

    WeierstrassCurve(const Rational& a1, const Rational& a2, const Rational& a3,
                     const Rational& a4, const Rational& a6)
        : WeierstrassCurve(Coefficients{a1, a2, a3, a4, a6}) {}

    const Coefficients& coefficients() const { return a_; }
    const Rational& a1() const { return a_[0]; }
    const Rational& a2() const { return a_[1]; }
    const Rational& a3() const { return a_[2]; }
    const Rational& a4() const { return a_[3]; }
    const Rational& a6() const { return a_[4]; }

    const InvariantSet& invariants() const { return inv_; }
    const Rational& discriminant() const { return inv_.discriminant; }

    bool is_integral() const {
        return std::all_of(a_.begin(), a_.end(), [](const Rational& c) { return lfunc::is_integral(c); });
    }

    bool contains(const CurvePoint& p) const {
        if (p.is_infinity()) return true;
        const auto& x = p.x();
        const auto& y = p.y();
        return y * y + a1() * x * y + a3() * y == x * x * x + a2() * x * x + a4() * x + a6();
    }

    /// The model obtained by the coordinate change `iso`.
    WeierstrassCurve transform(const IsomorphismData& iso) const {
        const auto& [u, r, s, t] = iso;
        const auto& [a1, a2, a3, a4, a6] = a_;
        Rational u2 = u * u, u3 = u2 * u;
        return WeierstrassCurve(
            (a1 + 2 * s) / u,
            (a2 - s * a1 + 3 * r - s * s) / u2,
            (a3 + r * a1 + 2 * t) / u3,
            (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / (u2 * u2),
            (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / (u3 * u3));
    }

    std::string to_string() const {
        std::string out = "[";
        for (std::size_t i = 0; i < 5; ++i) {
            if (i) out += ",";
            out += a_[i].get_str();
        }
        return out + "]";
    }

    friend bool operator==(const WeierstrassCurve& a, const WeierstrassCurve& b) { return a.a_ == b.a_; }

private:
    Coefficients a_;
    InvariantSet inv_;
};

/// Maps a point on `curve` to the model `curve.transform(iso)`.
inline CurvePoint transform_point(const CurvePoint& p, const IsomorphismData& iso) {
    if (p.is_infinity()) return p;
    const auto& [u, r, s, t] = iso;
    Rational xp = (p.x() - r) / (u * u);
    Rational yp = (p.y() - s * (p.x() - r) - t) / (u * u * u);
    return {xp, yp};
}

// ---------------------------------------------------------------------------
// Group law.

inline void require_on_curve(const WeierstrassCurve& e, const CurvePoint& p) {
    if (!e.contains(p)) throw PointNotOnCurve();
}

inline CurvePoint neg(const WeierstrassCurve& e, const CurvePoint& p) {
    require_on_curve(e, p);
    if (p.is_infinity()) return p;
    return {p.x(), -p.y() - e.a1() * p.x() - e.a3()};
}

namespace detail {

inline CurvePoint add_unchecked(const WeierstrassCurve& e, const CurvePoint& p, const CurvePoint& q) {
    if (p.is_infinity()) return q;
    if (q.is_infinity()) return p;
    const auto& [a1, a2, a3, a4, a6] = e.coefficients();
    const Rational &x1 = p.x(), &y1 = p.y(), &x2 = q.x(), &y2 = q.y();
    Rational lambda, nu;
    if (x1 == x2) {
        if (y1 + y2 + a1 * x2 + a3 == 0) return CurvePoint::infinity();
        Rational den = 2 * y1 + a1 * x1 + a3;
        lambda = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den;
        nu = (-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1) / den;
    } else {
        Rational dx = x2 - x1;
        lambda = (y2 - y1) / dx;
        nu = (y1 * x2 - y2 * x1) / dx;
    }
    Rational x3 = lambda * lambda + a1 * lambda - a2 - x1 - x2;
    Rational y3 = -(lambda + a1) * x3 - nu - a3;
    return {x3, y3};
}

inline CurvePoint mul_unchecked(const WeierstrassCurve& e, Integer n, CurvePoint p) {
    if (n < 0) {
        n = -n;
        if (!p.is_infinity()) p = CurvePoint(p.x(), -p.y() - e.a1() * p.x() - e.a3());
    }
    CurvePoint acc;
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) acc = add_unchecked(e, acc, p);
        n >>= 1;
        if (n > 0) p = add_unchecked(e, p, p);
    }
    return acc;
}

} // namespace detail

inline CurvePoint add(const WeierstrassCurve& e, const CurvePoint& p, const CurvePoint& q) {
    require_on_curve(e, p);
    require_on_curve(e, q);
    return detail::add_unchecked(e, p, q);
}

inline CurvePoint sub(const WeierstrassCurve& e, const CurvePoint& p, const CurvePoint& q) {
    return add(e, p, neg(e, q));
}

inline CurvePoint mul_scalar(const WeierstrassCurve& e, const Integer& n, const CurvePoint& p) {
    require_on_curve(e, p);
    return detail::mul_unchecked(e, n, p);
}

// ---------------------------------------------------------------------------
// Minimal models (Laska-Kraus-Connell).

namespace detail {

/// Kraus' local criterion: do (c4, c6) come from a model integral at p?
inline bool kraus_local(const Integer& p, const Integer& c4, const Integer& c6) {
    if (p == 3) return valuation(c6, Integer(3)) != 2;
    if (p == 2) {
        if (mod(c6, 4) == 3) return true;
        Integer r = mod(c6, 32);
        return valuation(c4, Integer(2)) >= 4 && (r == 0 || r == 8);
    }
    return true;
}

/// The reduced integral model with a1, a3 in {0,1} and a2 in {-1,0,1}.
inline Coefficients model_from_c4c6(const Integer& c4, const Integer& c6) {
    Integer b2 = mod(-c6, 12);
    if (b2 > 6) b2 -= 12;
    Integer b4num = b2 * b2 - c4;
    Integer b4 = b4num / 24;
    Integer b6num = -b2 * b2 * b2 + 36 * b2 * b4 - c6;
    Integer b6 = b6num / 216;
    if (b4 * 24 != b4num || b6 * 216 != b6num)
        throw PreconditionViolation("(c4, c6) are not the invariants of an integral model");
    Integer a1 = mod(b2, 2);
    Integer a3 = mod(b6, 2);
    return {Rational(a1), Rational((b2 - a1) / 4), Rational(a3), Rational((b4 - a1 * a3) / 2),
            Rational((b6 - a3) / 4)};
}

inline std::optional<IsomorphismData> isomorphism_with_scale(const WeierstrassCurve& from,
                                                             const WeierstrassCurve& to,
                                                             const Rational& u) {
    const auto& a = from.coefficients();
    const auto& b = to.coefficients();
    Rational s = (u * b[0] - a[0]) / 2;
    Rational r = (u * u * b[1] - a[1] + s * a[0] + s * s) / 3;
    Rational t = (u * u * u * b[2] - a[2] - r * a[0]) / 2;
    IsomorphismData iso{u, r, s, t};
    if (from.transform(iso) == to) return iso;
    return std::nullopt;
}

} // namespace detail

/// Finds (r, s, t) and the sign of u so that `from.transform(iso) == to`,
/// given |u|. Returns nullopt when no such change exists.
inline std::optional<IsomorphismData> find_isomorphism(const WeierstrassCurve& from,
                                                       const WeierstrassCurve& to, const Rational& u) {
    if (auto iso = detail::isomorphism_with_scale(from, to, u)) return iso;
    return detail::isomorphism_with_scale(from, to, -u);
}

/// Global minimal model over Q in reduced form, together with the coordinate
/// change carrying the input model onto it.
inline std::pair<WeierstrassCurve, IsomorphismData> minimal_model(const WeierstrassCurve& e) {
    Integer scale_in = 1; // a_i * scale_in^i is integral
    for (const auto& c : e.coefficients()) mpz_lcm(scale_in.get_mpz_t(), scale_in.get_mpz_t(), c.get_den_mpz_t());
    const auto& inv = e.invariants();
    Integer c4 = to_integer(inv.c4 * rpow(Rational(scale_in), 4));
    Integer c6 = to_integer(inv.c6 * rpow(Rational(scale_in), 6));
    Integer disc = to_integer(inv.discriminant * rpow(Rational(scale_in), 12));

    Integer scale_out = 1;
    for (const auto& [p, e12] : factor(disc)) {
        int d = e12 / 12;
        if (c4 != 0) d = std::min(d, valuation(c4, p) / 4);
        if (c6 != 0) d = std::min(d, valuation(c6, p) / 6);
        for (; d > 0; --d) {
            Integer q = ipow(p, static_cast<unsigned long>(d));
            if (detail::kraus_local(p, c4 / ipow(q, 4), c6 / ipow(q, 6))) break;
        }
        scale_out *= ipow(p, static_cast<unsigned long>(d));
    }
    Integer c4m = c4 / ipow(scale_out, 4);
    Integer c6m = c6 / ipow(scale_out, 6);
    WeierstrassCurve minimal(detail::model_from_c4c6(c4m, c6m));
    Rational u = Rational(scale_out, scale_in);
    u.canonicalize();
    auto iso = find_isomorphism(e, minimal, u);
    if (!iso) throw Error("internal: minimal model construction failed for " + e.to_string());
    return {minimal, *iso};
}

/// Short model y^2 = x^3 - 27 c4 x - 54 c6 and the change onto it.
inline std::pair<WeierstrassCurve, IsomorphismData> short_model(const WeierstrassCurve& e) {
    Rational u(1, 6);
    Rational s = -e.a1() / 2;
    Rational r = -e.invariants().b2 / 12;
    Rational t = -(e.a3() + r * e.a1()) / 2;
    IsomorphismData iso{u, r, s, t};
    return {e.transform(iso), iso};
}

// ---------------------------------------------------------------------------
// Torsion (Nagell-Lutz).

namespace detail {

inline Integer eval_monic_cubic(const Integer& a2, const Integer& a1, const Integer& a0, const Integer& x) {
    return ((x + a2) * x + a1) * x + a0;
}

/// All integer roots of x^3 + a2 x^2 + a1 x + a0.
inline std::vector<Integer> integer_roots_monic_cubic(const Integer& a2, const Integer& a1, const Integer& a0) {
    auto g = [&](const Integer& x) { return eval_monic_cubic(a2, a1, a0, x); };
    std::vector<Integer> roots;
    Integer bound = 1 + abs(a2) + abs(a1) + abs(a0);
    // Integer boundaries of monotone pieces and the short windows around the
    // critical points, which are checked exhaustively.
    std::vector<std::pair<Integer, Integer>> monotone;
    std::vector<std::pair<Integer, Integer>> windows;
    Integer disc = a2 * a2 - 3 * a1;
    auto floor_div3 = [](const Integer& n) {
        Integer q;
        mpz_fdiv_q_ui(q.get_mpz_t(), n.get_mpz_t(), 3);
        return q;
    };
    auto ceil_div3 = [](const Integer& n) {
        Integer q;
        mpz_cdiv_q_ui(q.get_mpz_t(), n.get_mpz_t(), 3);
        return q;
    };
    if (disc <= 0) {
        monotone.emplace_back(-bound, bound);
    } else {
        Integer s = isqrt(disc);
        Integer lo1 = floor_div3(-a2 - s - 1), hi1 = ceil_div3(-a2 - s);
        Integer lo2 = floor_div3(-a2 + s), hi2 = ceil_div3(-a2 + s + 1);
        windows.emplace_back(lo1, hi1);
        windows.emplace_back(lo2, hi2);
        monotone.emplace_back(-bound, lo1);
        if (hi1 <= lo2) monotone.emplace_back(hi1, lo2);
        monotone.emplace_back(hi2, bound);
    }
    for (auto [lo, hi] : windows)
        for (Integer x = lo; x <= hi; ++x)
            if (g(x) == 0) roots.push_back(x);
    for (auto [lo, hi] : monotone) {
        if (lo > hi) continue;
        Integer glo = g(lo), ghi = g(hi);
        if (glo == 0) roots.push_back(lo);
        if (ghi == 0) roots.push_back(hi);
        if (sgn(glo) * sgn(ghi) >= 0) continue;
        while (hi - lo > 1) {
            Integer mid = (lo + hi) / 2;
            Integer gm = g(mid);
            if (gm == 0) {
                roots.push_back(mid);
                break;
            }
            if (sgn(gm) == sgn(glo)) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

/// Order of a point whose multiples stay integral on an integral model;
/// 0 when some multiple leaves the integers (the point has infinite order).
inline int torsion_order_of(const WeierstrassCurve& e, const CurvePoint& p) {
    CurvePoint q = p;
    for (int k = 1; k <= 12; ++k) {
        if (q.is_infinity()) return k;
        if (!is_integral(q.x()) || !is_integral(q.y())) return 0;
        q = add_unchecked(e, q, p);
    }
    return 0;
}

} // namespace detail

struct TorsionSubgroup {
    /// Invariant factors n1 | n2 (empty for the trivial group).
    std::vector<int> structure;
    std::vector<CurvePoint> generators;
    /// Every torsion point, O first, sorted.
    std::vector<CurvePoint> points;

    int order() const { return static_cast<int>(points.size()); }
};

/// Exact order of a point, or 0 if it has infinite order.
inline int point_order(const WeierstrassCurve& e, const CurvePoint& p) {
    require_on_curve(e, p);
    auto [minimal, to_min] = minimal_model(e);
    auto [shrt, to_short] = short_model(minimal);
    CurvePoint q = transform_point(transform_point(p, to_min), to_short);
    return detail::torsion_order_of(shrt, q);
}

inline TorsionSubgroup torsion_subgroup(const WeierstrassCurve& e) {
    auto [minimal, to_min] = minimal_model(e);
    auto [shrt, to_short] = short_model(minimal);
    Integer A = to_integer(shrt.a4()), B = to_integer(shrt.a6());
    Integer D = 4 * A * A * A + 27 * B * B;

    // y = 0 or y^2 | D.
    std::vector<Integer> ys{0};
    {
        std::vector<Integer> divs{1};
        for (const auto& [p, k] : factor(D)) {
            std::vector<Integer> next;
            for (const auto& d : divs) {
                Integer pw = 1;
                for (int f = 0; 2 * f <= k; ++f) {
                    next.push_back(d * pw);
                    pw *= p;
                }
            }
            divs = std::move(next);
        }
        ys.insert(ys.end(), divs.begin(), divs.end());
    }

    std::vector<CurvePoint> found{CurvePoint::infinity()};
    std::vector<int> orders{1};
    for (const auto& y : ys) {
        for (const auto& x : detail::integer_roots_monic_cubic(0, A, B - y * y)) {
            for (int sign : {1, -1}) {
                if (y == 0 && sign == -1) continue;
                CurvePoint p{Rational(x), Rational(sign * y)};
                int ord = detail::torsion_order_of(shrt, p);
                if (ord > 0) {
                    found.push_back(p);
                    orders.push_back(ord);
                }
            }
        }
    }

    TorsionSubgroup result;
    int n = static_cast<int>(found.size());
    int two_torsion = static_cast<int>(std::count_if(orders.begin(), orders.end(), [](int o) { return o <= 2; }));
    IsomorphismData back = to_min.then(to_short).inverse();
    auto to_input = [&](const CurvePoint& p) { return transform_point(p, back); };
    if (n > 1) {
        if (two_torsion == 4) {
            // Z/2 x Z/(n/2)
            int big = n / 2;
            auto it = std::find(orders.begin(), orders.end(), big);
            CurvePoint g1 = found[static_cast<std::size_t>(it - orders.begin())];
            CurvePoint half = detail::mul_unchecked(shrt, big / 2, g1);
            CurvePoint g2;
            for (std::size_t i = 0; i < found.size(); ++i)
                if (orders[i] == 2 && !(found[i] == half)) {
                    g2 = found[i];
                    break;
                }
            result.structure = {2, big};
            result.generators = {to_input(g2), to_input(g1)};
        } else {
            auto it = std::find(orders.begin(), orders.end(), n);
            if (it == orders.end()) throw Error("internal: torsion points do not form a cyclic group");
            result.structure = {n};
            // Prefer the generator with the smallest coordinates for a stable answer.
            std::vector<CurvePoint> gens;
            for (std::size_t i = 0; i < found.size(); ++i)
                if (orders[i] == n) gens.push_back(to_input(found[i]));
            std::sort(gens.begin(), gens.end());
            result.generators = {gens.front()};
        }
    }
    for (const auto& p : found) result.points.push_back(to_input(p));
    std::sort(result.points.begin(), result.points.end());
    return result;
}

// ---------------------------------------------------------------------------
// Point search.

/// All rational points with x = a/d, max(|a|, d) <= bound, plus O.
inline std::vector<CurvePoint> point_search(const WeierstrassCurve& e, long bound) {
    std::vector<CurvePoint> out{CurvePoint::infinity()};
    const auto& [a1, a2, a3, a4, a6] = e.coefficients();
    for (long d = 1; d <= bound; ++d) {
        for (long a = -bound; a <= bound; ++a) {
            if (std::gcd(a, d) != 1) continue;
            Rational x(a, d);
            x.canonicalize();
            Rational b = a1 * x + a3;
            Rational c = x * x * x + a2 * x * x + a4 * x + a6;
            Rational disc = b * b + 4 * c;
            if (disc < 0 || !is_square(disc)) continue;
            Rational r = rational_sqrt(disc);
            out.emplace_back(x, (-b + r) / 2);
            if (r != 0) out.emplace_back(x, (-b - r) / 2);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace lfunc
