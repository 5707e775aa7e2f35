#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "lfunc/realizations.hpp"

using namespace lfunc;

namespace {

using cd = std::complex<double>;

bool close(cd a, cd b, double tol = 1e-12) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }

HodgeData random_hodge(std::mt19937& rng) {
    std::uniform_int_distribution<int> wd(-3, 4), hd(0, 2);
    HodgeData h;
    h.weight = wd(rng);
    const int lo = h.weight / 2 - 3;
    for (int p = lo; 2 * p < h.weight; ++p) {
        const int n = hd(rng);
        if (n) h.h[{p, h.weight - p}] = h.h[{h.weight - p, p}] = n;
    }
    if (h.weight % 2 == 0) {
        const int mid = hd(rng);
        if (mid) h.h[{h.weight / 2, h.weight / 2}] = mid;
        h.finf_plus = std::uniform_int_distribution<int>(0, mid)(rng);
        h.finf_minus = mid - h.finf_plus;
    }
    return h;
}

RationalMatrix random_invertible(std::mt19937& rng, std::size_t d) {
    std::uniform_int_distribution<int> e(-2, 2);
    while (true) {
        RationalMatrix P(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) P(i, j) = e(rng);
        if (determinant(P) != 0) return P;
    }
}

/// Conjugate of a random strictly upper triangular matrix; zeros are common so
/// that many Jordan types appear.
RationalMatrix random_nilpotent(std::mt19937& rng, std::size_t d) {
    std::uniform_int_distribution<int> e(-3, 3), coin(0, 2);
    RationalMatrix T(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (coin(rng)) T(i, j) = e(rng);
    const RationalMatrix P = random_invertible(rng, d);
    return P * T * inverse(P);
}

RationalMatrix E12() { return RationalMatrix{{0, 1}, {0, 0}}; }

// Brute-force oracle: every chain of subspaces drawn from the lattice spanned
// by the kernels and images of powers of N, tested against the defining
// properties. The filtration must be the only survivor.
std::vector<MonodromyFiltration> brute_force_filtrations(const RationalMatrix& N) {
    const std::size_t d = N.rows();
    std::vector<Subspace> pool{Subspace(d), Subspace::whole(d)};
    auto add = [&](const Subspace& s) {
        for (const auto& t : pool)
            if (t == s) return false;
        pool.push_back(s);
        return true;
    };
    for (unsigned i = 1; i <= d; ++i) {
        add(Subspace::kernel(N.pow(i)));
        add(Subspace::image(N.pow(i)));
    }
    for (bool grew = true; grew;) {
        grew = false;
        const auto snapshot = pool;
        for (const auto& a : snapshot)
            for (const auto& b : snapshot) {
                grew = add(a + b) || grew;
                grew = add(intersect(a, b)) || grew;
            }
    }
    const int lo = -static_cast<int>(d) + 1, hi = static_cast<int>(d) - 2;
    std::vector<MonodromyFiltration> found;
    std::vector<Subspace> chain;
    auto at = [&](int k) -> Subspace {
        if (k < lo) return Subspace(d);
        if (k > hi) return Subspace::whole(d);
        return chain[k - lo];
    };
    std::function<void(int)> rec = [&](int k) {
        if (k > hi) {
            MonodromyFiltration f{d, lo, chain};
            if (is_monodromy_filtration(f, N)) found.push_back(f);
            return;
        }
        for (const auto& s : pool) {
            if (!s.contains(at(k - 1))) continue;
            if (!at(k - 2).contains(s.mapped_by(N))) continue;
            chain.push_back(s);
            rec(k + 1);
            chain.pop_back();
        }
    };
    rec(lo);
    return found;
}

} // namespace

TEST(Gamma, ExamplesSymbolic) {
    EXPECT_EQ(gamma_terms(trivial_hodge()), (std::vector<GammaTerm>{{'R', 0, 1}}));
    EXPECT_EQ(gamma_terms(elliptic_h1_hodge()), (std::vector<GammaTerm>{{'C', 0, 1}}));
    const HodgeData q_minus_1{2, {{{1, 1}, 1}}, 0, 1};
    EXPECT_EQ(gamma_terms(q_minus_1), (std::vector<GammaTerm>{{'R', -1, 1}}));
    EXPECT_EQ(to_string(gamma_terms(elliptic_h1_hodge())), "Γ_C(s)");
    EXPECT_EQ(to_string(gamma_terms(q_minus_1)), "Γ_R(s - 1)");
}

TEST(Gamma, ExamplesNumeric) {
    EXPECT_NEAR(gamma_r(1.0).real(), 1.0, 1e-15);
    EXPECT_NEAR(gamma_r(2.0).real(), 1 / M_PI, 1e-15);
    EXPECT_NEAR(gamma_c(1.0).real(), 1 / M_PI, 1e-15);
    EXPECT_NEAR(gamma_c(2.0).real(), 2 / (4 * M_PI * M_PI), 1e-15);
    EXPECT_TRUE(close(gamma_factor(elliptic_h1_hodge(), {1.3, 0.4}), gamma_c({1.3, 0.4})));
}

TEST(Gamma, LegendreDuplication) {
    for (int i = 0; i < 20; ++i) {
        const cd s(0.15 + 0.37 * i, std::sin(1.7 * i) * 3);
        EXPECT_TRUE(close(gamma_c(s), gamma_r(s) * gamma_r(s + 1.0))) << s;
    }
}

TEST(Gamma, TwistCompatibility) {
    std::mt19937 rng(7);
    const std::vector<cd> grid{{2.5, 0}, {3.1, 1.2}, {4.0, -0.7}, {5.5, 2.0}};
    for (int trial = 0; trial < 50; ++trial) {
        const HodgeData h = random_hodge(rng);
        h.validate();
        for (int k = -2; k <= 2; ++k) {
            const HodgeData t = tate_twist(h, k);
            t.validate();
            EXPECT_EQ(t.dimension(), h.dimension());
            for (cd s : grid) EXPECT_TRUE(close(gamma_factor(t, s), gamma_factor(h, s + double(k)))) << trial << " " << k;
        }
    }
}

TEST(Gamma, BareEigenvalueReadingBreaksTwists) {
    // Under the opposite convention Q(-1) would get Gamma_R(s) instead of
    // Gamma_R(s - 1); the adopted one reproduces the shift.
    const HodgeData q = trivial_hodge();
    EXPECT_TRUE(close(gamma_factor(tate_twist(q, -1), 3.0), gamma_r(2.0)));
    EXPECT_FALSE(close(gamma_factor(tate_twist(q, -1), 3.0), gamma_r(3.0)));
}

TEST(Hodge, Validation) {
    EXPECT_THROW((HodgeData{1, {{{1, 0}, 1}}, 0, 0}.validate()), PreconditionViolation);
    EXPECT_THROW((HodgeData{2, {{{1, 1}, 2}}, 1, 0}.validate()), PreconditionViolation);
    EXPECT_THROW((HodgeData{1, {{{2, 0}, 1}, {{0, 2}, 1}}, 0, 0}.validate()), PreconditionViolation);
    EXPECT_NO_THROW(elliptic_h1_hodge().validate());
}

TEST(TateTwist, Hodge) {
    EXPECT_EQ(tate_twist(elliptic_h1_hodge(), 0), elliptic_h1_hodge());
    const HodgeData t = tate_twist(trivial_hodge(), -1);
    EXPECT_EQ(t.weight, 2);
    EXPECT_EQ(t.h_pq(1, 1), 1);
    EXPECT_EQ(t.finf_minus, 1);
    EXPECT_EQ(tate_twist(tate_twist(elliptic_h1_hodge(), 3), -3), elliptic_h1_hodge());
}

TEST(WeilDeligne, LocalFactorExamples) {
    const WeilDeligneRep good(7, RationalMatrix{{0, -7}, {1, -1}}, RationalMatrix(2, 2));
    EXPECT_EQ(wd_local_factor(good).denominator, (RationalPoly{1, 1, 7}));
    const WeilDeligneRep steinberg(5, RationalMatrix{{1, 0}, {0, 5}}, E12());
    EXPECT_EQ(wd_local_factor(steinberg).denominator, (RationalPoly{1, -1}));
    EXPECT_EQ(wd_local_factor(steinberg).to_string(), "1 - T");
    const WeilDeligneRep zeta(3, RationalMatrix{{1}}, RationalMatrix(1, 1));
    EXPECT_EQ(wd_local_factor(zeta).denominator, (RationalPoly{1, -1}));
}

TEST(WeilDeligne, Compatibility) {
    EXPECT_TRUE(check_compatibility(WeilDeligneRep(3, RationalMatrix{{2, 1}, {0, 5}}, RationalMatrix(2, 2))));
    EXPECT_TRUE(check_compatibility(WeilDeligneRep(11, RationalMatrix{{1, 0}, {0, 11}}, E12())));
    EXPECT_FALSE(check_compatibility(WeilDeligneRep(2, RationalMatrix::identity(2), E12())));
}

TEST(WeilDeligne, RejectsBadData) {
    EXPECT_THROW(WeilDeligneRep(4, RationalMatrix::identity(1), RationalMatrix(1, 1)), NotPrime);
    EXPECT_THROW(WeilDeligneRep(2, RationalMatrix{{1, 0}, {0, 0}}, RationalMatrix(2, 2)), PreconditionViolation);
    EXPECT_THROW(WeilDeligneRep(2, RationalMatrix::identity(2), RationalMatrix{{1, 0}, {0, 0}}), NotNilpotent);
    EXPECT_THROW(WeilDeligneRep(2, RationalMatrix{{0, 1}, {1, 0}}, RationalMatrix(2, 2), Subspace(2, {{1, 0}})),
                 PreconditionViolation);
}

TEST(WeilDeligne, TwistShiftsArgument) {
    std::mt19937 rng(3);
    const std::vector<WeilDeligneRep> reps{
        WeilDeligneRep(7, RationalMatrix{{0, -7}, {1, -1}}, RationalMatrix(2, 2)),
        WeilDeligneRep(5, RationalMatrix{{1, 0}, {0, 5}}, E12()),
        WeilDeligneRep(3, RationalMatrix{{2, 1, 0}, {0, 3, 0}, {0, 0, 1}}, RationalMatrix(3, 3), Subspace(3, {{1, 0, 0}, {0, 1, 0}})),
    };
    for (const auto& w : reps)
        for (int k = -2; k <= 2; ++k) {
            const auto t = tate_twist(w, k);
            EXPECT_EQ(check_compatibility(t), check_compatibility(w));
            for (cd s : {cd(1.5, 0), cd(2.2, 3.0)})
                EXPECT_TRUE(close(wd_local_factor(t).evaluate(s), wd_local_factor(w).evaluate(s + double(k))));
            // Exactly: coefficient i scales by p^{-k i}.
            const auto a = wd_local_factor(t).denominator, b = wd_local_factor(w).denominator;
            ASSERT_EQ(a.size(), b.size());
            for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i] * rpow(Rational(w.p), -k * int(i)));
        }
    EXPECT_EQ(tate_twist(reps[0], 0).phi, reps[0].phi);
    // Q(-1) at p: Frobenius p, matching H^2 of the projective line.
    EXPECT_EQ(tate_twist(WeilDeligneRep(5, RationalMatrix{{1}}, RationalMatrix(1, 1)), -1).phi, (RationalMatrix{{5}}));
}

TEST(Monodromy, Examples) {
    const auto zero = monodromy_filtration(RationalMatrix(3, 3));
    EXPECT_EQ(zero.at(-1).dim(), 0u);
    EXPECT_EQ(zero.at(0).dim(), 3u);

    const auto block = monodromy_filtration(E12());
    EXPECT_EQ(block.at(-2).dim(), 0u);
    EXPECT_EQ(block.at(-1), Subspace(2, {{1, 0}}));
    EXPECT_EQ(block.at(0), Subspace(2, {{1, 0}}));
    EXPECT_EQ(block.at(1).dim(), 2u);

    const RationalMatrix j21{{0, 1, 0}, {0, 0, 0}, {0, 0, 0}};
    const auto f = monodromy_filtration(j21);
    EXPECT_EQ(f.graded_dimensions(), (std::map<int, std::size_t>{{-1, 1}, {0, 1}, {1, 1}}));

    const RationalMatrix j3{{0, 1, 0}, {0, 0, 1}, {0, 0, 0}};
    EXPECT_EQ(monodromy_filtration(j3).graded_dimensions(), (std::map<int, std::size_t>{{-2, 1}, {0, 1}, {2, 1}}));
    EXPECT_THROW(monodromy_filtration(RationalMatrix::identity(2)), NotNilpotent);
    EXPECT_THROW(monodromy_filtration_recursive(RationalMatrix{{1, 1}, {0, 0}}), NotNilpotent);
}

TEST(Monodromy, RandomNilpotentsBothAlgorithms) {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 1 + trial % 6;
        const RationalMatrix N = random_nilpotent(rng, d);
        const auto a = monodromy_filtration(N);
        const auto b = monodromy_filtration_recursive(N);
        EXPECT_TRUE(is_monodromy_filtration(a, N)) << N.to_string();
        EXPECT_TRUE(is_monodromy_filtration(b, N)) << N.to_string();
        EXPECT_TRUE(a == b) << N.to_string();
        std::size_t total = 0;
        for (const auto& [k, n] : a.graded_dimensions()) {
            total += n;
            EXPECT_EQ(n, a.at(-k).dim() - a.at(-k - 1).dim());
        }
        EXPECT_EQ(total, d);
    }
}

TEST(Monodromy, BruteForceUniqueness) {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t d = 2 + trial % 3;
        const RationalMatrix N = random_nilpotent(rng, d);
        const auto found = brute_force_filtrations(N);
        ASSERT_EQ(found.size(), 1u) << N.to_string();
        EXPECT_TRUE(found[0] == monodromy_filtration(N));
    }
}

TEST(Monodromy, DetectsWrongFiltration) {
    MonodromyFiltration shifted{2, 0, {Subspace(2, {{1, 0}})}};
    EXPECT_FALSE(is_monodromy_filtration(shifted, E12()));
}

TEST(Weights, Examples) {
    for (long p : {5L, 7L, 101L}) {
        const long a = p == 5 ? -2 : (p == 7 ? 3 : 17);
        const WeilDeligneRep h1(p, RationalMatrix{{0, Rational(-p)}, {1, Rational(a)}}, RationalMatrix(2, 2));
        EXPECT_TRUE(check_weight(h1, 1));
        EXPECT_FALSE(check_weight(h1, 2));
    }
    EXPECT_FALSE(check_weight(WeilDeligneRep(5, RationalMatrix::identity(2), RationalMatrix(2, 2)), 1));
    EXPECT_TRUE(check_weight(WeilDeligneRep(5, RationalMatrix::identity(2), RationalMatrix(2, 2)), 0));
    const WeilDeligneRep st(5, RationalMatrix{{1, 0}, {0, 5}}, E12());
    EXPECT_TRUE(check_purity(st, 1));
    EXPECT_FALSE(check_purity(st, 0));
    EXPECT_THROW(check_weight(st, 1), PreconditionViolation);
    EXPECT_THROW(check_purity(WeilDeligneRep(2, RationalMatrix::identity(2), E12()), 1), PreconditionViolation);
}

TEST(Weights, PurityOfTwistedSteinberg) {
    const WeilDeligneRep st(3, RationalMatrix{{1, 0}, {0, 3}}, E12());
    for (int k = -2; k <= 2; ++k) EXPECT_TRUE(check_purity(tate_twist(st, k), 1 - 2 * k)) << k;
}

TEST(Semisimplification, Examples) {
    const WeilDeligneRep diag(3, RationalMatrix{{2, 0}, {0, 5}}, RationalMatrix(2, 2));
    EXPECT_EQ(frobenius_semisimplify(diag).phi, diag.phi);
    const WeilDeligneRep unip(3, RationalMatrix{{1, 1}, {0, 1}}, RationalMatrix(2, 2));
    EXPECT_EQ(frobenius_semisimplify(unip).phi, RationalMatrix::identity(2));
    EXPECT_EQ(wd_local_factor(frobenius_semisimplify(unip)), wd_local_factor(unip));
}

TEST(Semisimplification, RandomJordanDecomposition) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> ev(-3, 3), coin(0, 1);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t d = 2 + trial % 4;
        RationalMatrix J(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            J(i, i) = i > 0 && coin(rng) ? J(i - 1, i - 1) : Rational(ev(rng) == 0 ? 2 : ev(rng) + 4);
            if (i > 0 && J(i, i) == J(i - 1, i - 1) && coin(rng)) J(i - 1, i) = 1;
        }
        const RationalMatrix P = random_invertible(rng, d);
        const RationalMatrix phi = P * J * inverse(P);
        const RationalMatrix S = semisimple_part(phi);
        const RationalMatrix U = phi - S;
        EXPECT_TRUE(poly_eval(squarefree_part(characteristic_polynomial(phi)), S).is_zero());
        EXPECT_EQ(S * U, U * S);
        EXPECT_TRUE(U.pow(static_cast<unsigned>(d)).is_zero());
        EXPECT_EQ(characteristic_polynomial(S), characteristic_polynomial(phi));
        const WeilDeligneRep w(7, phi, RationalMatrix(d, d));
        EXPECT_EQ(wd_local_factor(frobenius_semisimplify(w)), wd_local_factor(w));
    }
}

TEST(Elliptic, WdEncodingReproducesEulerFactors) {
    for (const auto& c : {WeierstrassCurve(0, 0, 1, -1, 0), WeierstrassCurve(0, -1, 1, -10, -20),
                          WeierstrassCurve(0, 0, 0, 0, 1), WeierstrassCurve(1, -1, 1, -122, 1721)}) {
        PrimeData data(c);
        for (auto p : primes_up_to(200)) {
            const LocalData ld = tate_local(data.minimal(), Integer(static_cast<unsigned long>(p)));
            const auto wd = wd_from_local(ld);
            EXPECT_TRUE(check_compatibility(wd));
            EXPECT_EQ(wd_local_factor(wd), local_euler_factor(ld)) << c.to_string() << " p=" << p;
            if (ld.reduction == Reduction::Good) EXPECT_TRUE(check_weight(wd, 1));
            if (is_multiplicative(ld.reduction)) EXPECT_TRUE(check_purity(wd, 1));
        }
    }
}

TEST(Json, ParsesRealizationInput) {
    const auto j = nlohmann::json::parse(R"({
        "weight": 1, "hodge": [{"p": 1, "q": 0, "h": 1}, {"p": 0, "q": 1, "h": 1}]})");
    EXPECT_EQ(hodge_from_json(j), elliptic_h1_hodge());
    EXPECT_EQ(hodge_from_json(nlohmann::json::parse(to_json(trivial_hodge()).dump())), trivial_hodge());
    const auto w = wd_from_json(nlohmann::json::parse(R"({"p": "5", "phi": [["1","0"],["0","5"]], "N": [[0,1],[0,0]]})"));
    EXPECT_EQ(wd_local_factor(w).to_string(), "1 - T");
    const auto half = wd_from_json(nlohmann::json::parse(R"({"p": 3, "phi": [["1/2"]]})"));
    EXPECT_EQ(wd_local_factor(half).denominator, (RationalPoly{1, Rational(-1, 2)}));
    EXPECT_THROW(hodge_from_json(nlohmann::json::parse(R"({"weight": 1})")), ParseError);
    EXPECT_THROW(wd_from_json(nlohmann::json::parse(R"({"p": 5, "phi": [["x"]]})")), ParseError);
    EXPECT_EQ(to_json(gamma_terms(elliptic_h1_hodge())).dump(), R"([["C",0,1]])");
}
