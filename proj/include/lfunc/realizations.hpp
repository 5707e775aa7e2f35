#pragma once

// Hodge data and archimedean gamma factors, Tate twists, Weil-Deligne
// representations with their local factors, monodromy filtrations, and
// weight/purity checks.

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lfunc/linalg.hpp"
#include "lfunc/numeric.hpp"
#include "lfunc/series.hpp"

namespace lfunc {

// ---------------------------------------------------------------------------
// Hodge data and gamma factors

/// Hodge numbers of a pure weight-n structure. For even n the middle slot is
/// split by the eigenvalue of F_inf itself (finf_plus: F_inf = +1).
struct HodgeData {
    int weight = 0;
    std::map<std::pair<int, int>, int> h;
    int finf_plus = 0;
    int finf_minus = 0;

    int h_pq(int p, int q) const {
        auto it = h.find({p, q});
        return it == h.end() ? 0 : it->second;
    }
    int dimension() const {
        int d = 0;
        for (const auto& [pq, n] : h) d += n;
        return d;
    }

    void validate() const {
        for (const auto& [pq, n] : h) {
            if (n < 0) throw PreconditionViolation("Hodge numbers must be nonnegative");
            if (pq.first + pq.second != weight)
                throw PreconditionViolation("Hodge type (" + std::to_string(pq.first) + "," + std::to_string(pq.second) +
                                            ") does not have weight " + std::to_string(weight));
            if (h_pq(pq.second, pq.first) != n) throw PreconditionViolation("Hodge numbers must satisfy h^{pq} = h^{qp}");
        }
        if (weight % 2 == 0) {
            if (finf_plus < 0 || finf_minus < 0) throw PreconditionViolation("F_inf multiplicities must be nonnegative");
            if (finf_plus + finf_minus != h_pq(weight / 2, weight / 2))
                throw PreconditionViolation("F_inf split must add up to the middle Hodge number");
        } else if (finf_plus || finf_minus) {
            throw PreconditionViolation("F_inf split only exists for even weight");
        }
    }

    friend bool operator==(const HodgeData&, const HodgeData&) = default;
};

inline HodgeData trivial_hodge() { return HodgeData{0, {{{0, 0}, 1}}, 1, 0}; }

inline HodgeData elliptic_h1_hodge() { return HodgeData{1, {{{1, 0}, 1}, {{0, 1}, 1}}, 0, 0}; }

/// Gamma_kind(s + shift)^exponent.
struct GammaTerm {
    char kind; // 'R' or 'C'
    int shift;
    int exponent;
    friend bool operator==(const GammaTerm&, const GammaTerm&) = default;
};

/// Symbolic archimedean factor. In even weight the slot at n/2 is sorted by
/// the eigenvalue of (-1)^{n/2} F_inf: +1 feeds Gamma_R(s - n/2), -1 feeds
/// Gamma_R(s - n/2 + 1). This is the reading compatible with Tate twists.
inline std::vector<GammaTerm> gamma_terms(const HodgeData& hd) {
    hd.validate();
    std::vector<GammaTerm> out;
    for (const auto& [pq, n] : hd.h)
        if (pq.first < pq.second && n > 0) out.push_back({'C', -pq.first, n});
    if (hd.weight % 2 == 0) {
        const int half = hd.weight / 2;
        const bool flip = half % 2 != 0;
        const int plus = flip ? hd.finf_minus : hd.finf_plus;
        const int minus = flip ? hd.finf_plus : hd.finf_minus;
        if (plus > 0) out.push_back({'R', -half, plus});
        if (minus > 0) out.push_back({'R', -half + 1, minus});
    }
    return out;
}

inline std::string to_string(const std::vector<GammaTerm>& terms) {
    if (terms.empty()) return "1";
    std::string s;
    for (const auto& t : terms) {
        if (!s.empty()) s += " ";
        s += t.kind == 'R' ? "Γ_R(s" : "Γ_C(s";
        if (t.shift > 0) s += " + " + std::to_string(t.shift);
        if (t.shift < 0) s += " - " + std::to_string(-t.shift);
        s += ")";
        if (t.exponent != 1) s += "^" + std::to_string(t.exponent);
    }
    return s;
}

inline MpComplex log_gamma_r(const MpComplex& s) {
    return log_gamma(s * MpComplex(mp_real(0.5))) - s * MpComplex(boost::multiprecision::log(mp_pi()) / 2);
}

inline MpComplex log_gamma_c(const MpComplex& s) {
    return log_gamma(s) + MpComplex(boost::multiprecision::log(mp_real(2))) -
           s * MpComplex(boost::multiprecision::log(2 * mp_pi()));
}

/// Gamma_R(s) = pi^{-s/2} Gamma(s/2).
inline std::complex<double> gamma_r(std::complex<double> s, unsigned digits = 30) {
    PrecisionScope scope(digits);
    auto v = exp(log_gamma_r(MpComplex(s)));
    return {v.re.convert_to<double>(), v.im.convert_to<double>()};
}

/// Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s).
inline std::complex<double> gamma_c(std::complex<double> s, unsigned digits = 30) {
    PrecisionScope scope(digits);
    auto v = exp(log_gamma_c(MpComplex(s)));
    return {v.re.convert_to<double>(), v.im.convert_to<double>()};
}

inline std::complex<double> gamma_factor(const std::vector<GammaTerm>& terms, std::complex<double> s,
                                         unsigned digits = 30) {
    PrecisionScope scope(digits);
    MpComplex acc;
    for (const auto& t : terms) {
        MpComplex arg = MpComplex(s) + MpComplex(mp_real(t.shift));
        acc += (t.kind == 'R' ? log_gamma_r(arg) : log_gamma_c(arg)) * MpComplex(mp_real(t.exponent));
    }
    auto v = exp(acc);
    return {v.re.convert_to<double>(), v.im.convert_to<double>()};
}

inline std::complex<double> gamma_factor(const HodgeData& hd, std::complex<double> s, unsigned digits = 30) {
    return gamma_factor(gamma_terms(hd), s, digits);
}

/// M(k): Hodge types move by (-k,-k) and F_inf picks up (-1)^k.
inline HodgeData tate_twist(const HodgeData& hd, int k) {
    hd.validate();
    HodgeData out;
    out.weight = hd.weight - 2 * k;
    for (const auto& [pq, n] : hd.h)
        if (n) out.h[{pq.first - k, pq.second - k}] = n;
    out.finf_plus = k % 2 ? hd.finf_minus : hd.finf_plus;
    out.finf_minus = k % 2 ? hd.finf_plus : hd.finf_minus;
    return out;
}

// ---------------------------------------------------------------------------
// Weil-Deligne representations

/// (phi, N) on Q^d at a prime p, with the inertia invariants given as a
/// subspace (the full space when unramified).
struct WeilDeligneRep {
    Integer p;
    RationalMatrix phi;
    RationalMatrix N;
    Subspace inertia;

    WeilDeligneRep() = default;
    WeilDeligneRep(Integer prime, RationalMatrix frob, RationalMatrix mono)
        : p(std::move(prime)), phi(std::move(frob)), N(std::move(mono)), inertia(Subspace::whole(phi.rows())) {
        validate();
    }
    WeilDeligneRep(Integer prime, RationalMatrix frob, RationalMatrix mono, Subspace invariants)
        : p(std::move(prime)), phi(std::move(frob)), N(std::move(mono)), inertia(std::move(invariants)) {
        validate();
    }

    std::size_t dimension() const { return phi.rows(); }
    bool unramified() const { return inertia.dim() == dimension(); }

    /// Structural invariants other than the (phi, N) relation, which has its own check.
    void validate() const {
        require_prime(p);
        const std::size_t d = phi.rows();
        if (!phi.square() || !N.square() || N.rows() != d || inertia.ambient() != d)
            throw PreconditionViolation("phi, N and the inertia subspace must share one dimension");
        if (determinant(phi) == 0) throw PreconditionViolation("Frobenius matrix is not invertible");
        if (!N.pow(static_cast<unsigned>(d)).is_zero()) throw NotNilpotent();
        if (!inertia.stable_under(phi) || !inertia.stable_under(N))
            throw PreconditionViolation("inertia invariants must be stable under phi and N");
    }
};

/// phi N phi^{-1} = N / p, exactly.
inline bool check_compatibility(const WeilDeligneRep& wd) {
    return wd.phi * wd.N * inverse(wd.phi) == Rational(1) / Rational(wd.p) * wd.N;
}

/// Denominator of the local factor: det(1 - T phi) on V^I intersected with ker N.
struct LocalFactor {
    Integer p;
    RationalPoly denominator; // in T = p^{-s}, constant term 1

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < denominator.size(); ++i) {
            const Rational& c = denominator[i];
            if (i == 0) {
                s = c.get_str();
                continue;
            }
            if (c == 0) continue;
            s += c < 0 ? " - " : " + ";
            Rational a = abs(c);
            if (a != 1) s += a.get_str();
            s += i == 1 ? "T" : "T^" + std::to_string(i);
        }
        return s;
    }

    std::complex<double> evaluate(std::complex<double> s) const {
        const auto T = std::pow(std::complex<double>(p.get_d()), -s);
        std::complex<double> acc = 0;
        for (std::size_t i = denominator.size(); i-- > 0;) acc = acc * T + denominator[i].get_d();
        return 1.0 / acc;
    }

    friend bool operator==(const LocalFactor&, const LocalFactor&) = default;
};

inline LocalFactor wd_local_factor(const WeilDeligneRep& wd) {
    const Subspace u = intersect(wd.inertia, Subspace::kernel(wd.N));
    if (!u.stable_under(wd.phi))
        throw PreconditionViolation("V^I meet ker N is not phi-stable (phi N phi^{-1} = N/p fails)");
    LocalFactor f{wd.p, {Rational(1)}};
    if (u.dim() == 0) return f;
    f.denominator = reverse_characteristic(restricted_to(wd.phi, u));
    return f;
}

inline bool operator==(const LocalFactor& f, const EulerFactor& e) {
    if (f.p != e.p || f.denominator.size() != e.coeffs.size()) return false;
    for (std::size_t i = 0; i < e.coeffs.size(); ++i)
        if (f.denominator[i] != Rational(e.coeffs[i])) return false;
    return true;
}

/// L(M(k), s) = L(M, s + k): phi scales by p^{-k}, N is untouched.
inline WeilDeligneRep tate_twist(const WeilDeligneRep& wd, int k) {
    return WeilDeligneRep(wd.p, rpow(Rational(wd.p), -k) * wd.phi, wd.N, wd.inertia);
}

// ---------------------------------------------------------------------------
// Monodromy filtration

/// Increasing filtration M_k, k in [lowest, lowest + steps.size() - 1], with
/// M_k = 0 below and M_k = V above that window.
struct MonodromyFiltration {
    std::size_t ambient = 0;
    int lowest = 0;
    std::vector<Subspace> steps;

    Subspace at(int k) const {
        if (steps.empty() || k < lowest) return Subspace(ambient);
        if (k >= lowest + static_cast<int>(steps.size())) return Subspace::whole(ambient);
        return steps[k - lowest];
    }
    int highest() const { return lowest + static_cast<int>(steps.size()) - 1; }

    std::map<int, std::size_t> graded_dimensions() const {
        std::map<int, std::size_t> g;
        for (int k = lowest; k <= highest(); ++k) {
            const std::size_t d = at(k).dim() - at(k - 1).dim();
            if (d) g[k] = d;
        }
        return g;
    }

    friend bool operator==(const MonodromyFiltration& a, const MonodromyFiltration& b) {
        if (a.ambient != b.ambient) return false;
        const int lo = std::min(a.lowest, b.lowest) - 1;
        const int hi = std::max(a.highest(), b.highest()) + 1;
        for (int k = lo; k <= hi; ++k)
            if (!(a.at(k) == b.at(k))) return false;
        return true;
    }
};

namespace detail {

inline unsigned nilpotency_index(const RationalMatrix& N) {
    const unsigned d = static_cast<unsigned>(N.rows());
    RationalMatrix P = RationalMatrix::identity(d);
    for (unsigned k = 0; k <= d; ++k) {
        if (P.is_zero()) return k;
        P = P * N;
    }
    throw NotNilpotent();
}

inline MonodromyFiltration trimmed(std::size_t d, std::map<int, Subspace> m) {
    MonodromyFiltration f{d, 0, {}};
    int lo = 0, hi = -1;
    bool any = false;
    for (const auto& [k, s] : m) {
        if (s.dim() == 0) continue;
        if (!any) lo = k;
        any = true;
        hi = k;
        if (s.dim() == d) break;
    }
    if (!any) return f;
    f.lowest = lo;
    for (int k = lo; k <= hi; ++k) f.steps.push_back(m.at(k));
    return f;
}

} // namespace detail

/// Kernel/image formula: M_k = sum over j >= max(0, -k) of ker N^{k+j+1} meet im N^j.
inline MonodromyFiltration monodromy_filtration(const RationalMatrix& N) {
    const std::size_t d = N.rows();
    const unsigned n = detail::nilpotency_index(N);
    if (n <= 1) return {d, 0, {Subspace::whole(d)}};
    const int top = static_cast<int>(n) - 1;
    std::vector<RationalMatrix> powers{RationalMatrix::identity(d)};
    for (unsigned i = 1; i <= 2 * n + 1; ++i) powers.push_back(powers.back() * N);
    auto pw = [&](int i) -> const RationalMatrix& { return powers[std::min<std::size_t>(i, powers.size() - 1)]; };
    std::map<int, Subspace> m;
    for (int k = -top - 1; k <= top; ++k) {
        Subspace acc(d);
        for (int j = std::max(0, -k); j <= top; ++j)
            acc = acc + intersect(Subspace::kernel(pw(k + j + 1)), Subspace::image(pw(j)));
        m.emplace(k, acc);
    }
    return detail::trimmed(d, std::move(m));
}

namespace detail {

// For N^{n+1} = 0: M_n = V, M_{n-1} = ker N^n, M_{-n} = im N^n, and in
// between the filtration of the induced operator on ker N^n / im N^n.
inline std::map<int, Subspace> recursive_filtration(const RationalMatrix& N, unsigned n) {
    const std::size_t d = N.rows();
    std::map<int, Subspace> m;
    if (d == 0) return m;
    if (n == 0) { // N = 0
        m.emplace(-1, Subspace(d));
        m.emplace(0, Subspace::whole(d));
        return m;
    }
    const int top = static_cast<int>(n) - 1;
    const RationalMatrix Nn = N.pow(n);
    const Subspace ker = Subspace::kernel(Nn), img = Subspace::image(Nn);
    m.emplace(top + 1, Subspace::whole(d));
    m.emplace(top, ker);
    m.emplace(-top - 1, img);
    m.emplace(-top - 2, Subspace(d));
    const auto comp = complement_in(ker, img);
    const RationalMatrix induced = induced_on_quotient(N, ker, img);
    auto inner = recursive_filtration(induced, n - 1);
    for (int k = -top; k <= top - 1; ++k) {
        Subspace sub = img;
        Subspace q(comp.size());
        if (auto it = inner.find(k); it != inner.end()) q = it->second;
        else if (!inner.empty() && k > inner.rbegin()->first) q = Subspace::whole(comp.size());
        for (const auto& c : q.basis()) {
            std::vector<Rational> v(d);
            for (std::size_t i = 0; i < comp.size(); ++i)
                for (std::size_t r = 0; r < d; ++r) v[r] += c[i] * comp[i][r];
            sub = sub + Subspace(d, {v});
        }
        m.emplace(k, sub);
    }
    return m;
}

} // namespace detail

/// Second, independent construction (Deligne's induction on the nilpotency order).
inline MonodromyFiltration monodromy_filtration_recursive(const RationalMatrix& N) {
    const std::size_t d = N.rows();
    const unsigned n = detail::nilpotency_index(N);
    if (n <= 1) return {d, 0, {Subspace::whole(d)}};
    return detail::trimmed(d, detail::recursive_filtration(N, n - 1));
}

/// N(M_k) in M_{k-2}, and N^k : gr_k -> gr_{-k} bijective for k >= 1.
inline bool is_monodromy_filtration(const MonodromyFiltration& f, const RationalMatrix& N) {
    const int lo = f.lowest - 1, hi = f.highest() + 1;
    for (int k = lo; k <= hi + 2; ++k)
        if (!f.at(k - 2).contains(f.at(k).mapped_by(N))) return false;
    for (int k = 1; k <= std::max(hi, -lo) + 1; ++k) {
        const RationalMatrix Nk = N.pow(static_cast<unsigned>(k));
        const Subspace top = f.at(k), below = f.at(k - 1), low = f.at(-k), lower = f.at(-k - 1);
        if (top.dim() - below.dim() != low.dim() - lower.dim()) return false;
        // Injective on gr_k: anything in M_k sent into M_{-k-1} already lies in M_{k-1}.
        if (!below.contains(intersect(top, lower.preimage(Nk)))) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Weights, purity and semisimplification

namespace detail {

/// Distinct eigenvalues of m: roots of the squarefree part of its characteristic polynomial.
inline std::vector<PolyRoot> eigenvalues(const RationalMatrix& m) {
    if (m.rows() == 0) return {};
    return squarefree_roots(squarefree_part(characteristic_polynomial(m)));
}

// +1 all within tolerance, 0 some outside, throws when the inclusion radius
// leaves the answer open.
inline bool magnitudes_match(const std::vector<PolyRoot>& roots, long double target, double tol) {
    bool ok = true;
    for (const auto& r : roots) {
        const long double dev = std::fabs(std::abs(r.z) - target);
        if (dev + r.radius <= tol) continue;
        if (dev - r.radius > tol) {
            ok = false;
            continue;
        }
        throw PrecisionExhausted("eigenvalue magnitude undecided at tolerance " + std::to_string(tol));
    }
    return ok;
}

} // namespace detail

/// All Frobenius eigenvalues have absolute value p^{n/2}. Requires N = 0 and V^I = V.
inline bool check_weight(const WeilDeligneRep& wd, int n, double tol = 1e-9) {
    if (!wd.N.is_zero() || !wd.unramified())
        throw PreconditionViolation("check_weight needs an unramified representation with N = 0");
    const long double target = std::pow(static_cast<long double>(wd.p.get_d()), n / 2.0L);
    return detail::magnitudes_match(detail::eigenvalues(wd.phi), target, tol);
}

/// gr_k of the monodromy filtration has Frobenius eigenvalues of absolute value p^{(n+k)/2}.
inline bool check_purity(const WeilDeligneRep& wd, int n, double tol = 1e-9) {
    if (!check_compatibility(wd)) throw PreconditionViolation("check_purity needs phi N phi^{-1} = N/p");
    const auto f = monodromy_filtration(wd.N);
    bool ok = true;
    for (int k = f.lowest; k <= f.highest(); ++k) {
        const Subspace top = f.at(k), below = f.at(k - 1);
        if (top.dim() == below.dim()) continue;
        const RationalMatrix gr = induced_on_quotient(wd.phi, top, below);
        const long double target = std::pow(static_cast<long double>(wd.p.get_d()), (n + k) / 2.0L);
        ok = detail::magnitudes_match(detail::eigenvalues(gr), target, tol) && ok;
    }
    return ok;
}

/// Semisimple part of phi, exactly: Newton iteration S <- S - P(S) P'(S)^{-1}
/// on the squarefree part P of the characteristic polynomial.
inline RationalMatrix semisimple_part(const RationalMatrix& phi) {
    const auto P = squarefree_part(characteristic_polynomial(phi));
    const auto dP = poly_derivative(P);
    RationalMatrix S = phi;
    for (std::size_t it = 0; it <= phi.rows(); ++it) {
        const RationalMatrix v = poly_eval(P, S);
        if (v.is_zero()) return S;
        S = S - v * inverse(poly_eval(dP, S));
    }
    throw PrecisionExhausted("semisimple part iteration did not terminate");
}

inline WeilDeligneRep frobenius_semisimplify(const WeilDeligneRep& wd) {
    return WeilDeligneRep(wd.p, semisimple_part(wd.phi), wd.N, wd.inertia);
}

// ---------------------------------------------------------------------------
// Elliptic curves

/// H^1 of an elliptic curve at p as a Weil-Deligne representation:
/// good reduction gives the companion matrix of X^2 - a_p X + p; split and
/// non-split multiplicative give diag(e, e p) with N = E_12 and e = +1 / -1;
/// additive reduction is encoded with V^I = 0 and phi = 1, N = 0, which is
/// all the local factor can see.
inline WeilDeligneRep wd_from_local(const LocalData& ld) {
    const Rational p(ld.p);
    switch (ld.reduction) {
        case Reduction::Good:
            return WeilDeligneRep(ld.p, RationalMatrix{{0, -p}, {1, Rational(ld.a_p)}}, RationalMatrix(2, 2));
        case Reduction::SplitMultiplicative:
            return WeilDeligneRep(ld.p, RationalMatrix{{1, 0}, {0, p}}, RationalMatrix{{0, 1}, {0, 0}});
        case Reduction::NonsplitMultiplicative:
            return WeilDeligneRep(ld.p, RationalMatrix{{-1, 0}, {0, -p}}, RationalMatrix{{0, 1}, {0, 0}});
        case Reduction::Additive:
            return WeilDeligneRep(ld.p, RationalMatrix::identity(2), RationalMatrix(2, 2), Subspace(2));
    }
    throw PreconditionViolation("unknown reduction type");
}

// ---------------------------------------------------------------------------
// JSON

inline HodgeData hodge_from_json(const nlohmann::json& j) {
    try {
        HodgeData hd;
        hd.weight = j.at("weight").get<int>();
        for (const auto& e : j.at("hodge")) hd.h[{e.at("p").get<int>(), e.at("q").get<int>()}] = e.at("h").get<int>();
        if (j.contains("finf")) {
            hd.finf_plus = j["finf"].value("plus", 0);
            hd.finf_minus = j["finf"].value("minus", 0);
        }
        hd.validate();
        return hd;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad Hodge data: ") + e.what());
    }
}

inline nlohmann::ordered_json to_json(const HodgeData& hd) {
    nlohmann::ordered_json j;
    j["weight"] = hd.weight;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [pq, n] : hd.h) arr.push_back({{"p", pq.first}, {"q", pq.second}, {"h", n}});
    j["hodge"] = arr;
    if (hd.weight % 2 == 0) j["finf"] = {{"plus", hd.finf_plus}, {"minus", hd.finf_minus}};
    return j;
}

inline nlohmann::ordered_json to_json(const std::vector<GammaTerm>& terms) {
    auto j = nlohmann::ordered_json::array();
    for (const auto& t : terms) j.push_back({std::string(1, t.kind), t.shift, t.exponent});
    return j;
}

inline WeilDeligneRep wd_from_json(const nlohmann::json& j) {
    try {
        const Integer p(j.at("p").is_string() ? j["p"].get<std::string>() : std::to_string(j["p"].get<long long>()));
        RationalMatrix phi = rational_matrix_from_json(j.at("phi"));
        RationalMatrix N = j.contains("N") ? rational_matrix_from_json(j["N"]) : RationalMatrix(phi.rows(), phi.cols());
        if (!j.contains("inertia")) return WeilDeligneRep(p, phi, N);
        std::vector<std::vector<Rational>> span;
        for (const auto& v : j["inertia"]) {
            std::vector<Rational> row;
            for (const auto& x : v) row.push_back(rational_from_json(x));
            span.push_back(std::move(row));
        }
        return WeilDeligneRep(p, phi, N, Subspace(phi.rows(), span));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad Weil-Deligne data: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("bad integer in Weil-Deligne data: ") + e.what());
    }
}

inline nlohmann::ordered_json to_json(const LocalFactor& f) {
    nlohmann::ordered_json j;
    j["p"] = f.p.get_str();
    auto c = nlohmann::ordered_json::array();
    for (const auto& x : f.denominator) c.push_back(x.get_str());
    j["denominator"] = c;
    j["text"] = "1/(" + f.to_string() + ")";
    return j;
}

inline nlohmann::ordered_json to_json(const MonodromyFiltration& f) {
    nlohmann::ordered_json j;
    j["lowest"] = f.lowest;
    auto dims = nlohmann::ordered_json::array();
    for (const auto& s : f.steps) dims.push_back(s.dim());
    j["dimensions"] = dims;
    auto gr = nlohmann::ordered_json::object();
    for (const auto& [k, d] : f.graded_dimensions()) gr[std::to_string(k)] = d;
    j["graded"] = gr;
    return j;
}

} // namespace lfunc
