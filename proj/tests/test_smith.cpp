#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "lfunc/smith.hpp"

using namespace lfunc;

namespace {

IntegerMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int bound) {
    std::uniform_int_distribution<int> e(-bound, bound);
    IntegerMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = e(rng);
    return m;
}

void expect_valid(const IntegerMatrix& A, const SmithForm& s) {
    ASSERT_EQ(s.U * A * s.V, s.D);
    EXPECT_EQ(abs(integer_determinant(s.U)), 1);
    EXPECT_EQ(abs(integer_determinant(s.V)), 1);
    for (std::size_t i = 0; i < s.D.rows(); ++i)
        for (std::size_t j = 0; j < s.D.cols(); ++j)
            if (i != j) EXPECT_EQ(s.D(i, j), 0);
    const auto d = s.diagonal();
    for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_GE(d[i], 0);
        if (i + 1 < d.size()) {
            if (d[i] == 0) EXPECT_EQ(d[i + 1], 0);
            else EXPECT_TRUE(mpz_divisible_p(d[i + 1].get_mpz_t(), d[i].get_mpz_t()));
        }
    }
    if (A.rows() == A.cols()) {
        Integer prod = 1;
        for (const auto& x : d) prod *= x;
        EXPECT_EQ(prod, abs(integer_determinant(A)));
    }
}

// Cokernel order of a nonsingular square A by counting the integer points of
// the half-open parallelepiped spanned by its columns: one per coset.
Integer count_cosets(const IntegerMatrix& A) {
    const std::size_t n = A.rows();
    const RationalMatrix inv = inverse(A.to_rational());
    std::vector<long> lo(n, 0), hi(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const long a = A(i, j).get_si();
            (a < 0 ? lo[i] : hi[i]) += a;
        }
    Integer count = 0;
    std::vector<long> x(lo);
    while (true) {
        std::vector<Rational> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = x[i];
        const auto t = inv * v;
        if (std::all_of(t.begin(), t.end(), [](const Rational& q) { return q >= 0 && q < 1; })) ++count;
        std::size_t i = 0;
        while (i < n && ++x[i] > hi[i]) x[i] = lo[i], ++i;
        if (i == n) break;
    }
    return count;
}

// d_1 ... d_r as the gcd of the r x r minors, r = rank.
Integer determinantal_divisor(const IntegerMatrix& A) {
    const std::size_t r = rank(A.to_rational());
    if (r == 0) return 1;
    Integer g = 0;
    std::vector<std::size_t> rows, cols;
    std::function<void(std::size_t, std::size_t)> pick_cols;
    std::function<void(std::size_t)> pick_rows = [&](std::size_t start) {
        if (rows.size() == r) {
            pick_cols(0, 0);
            return;
        }
        for (std::size_t i = start; i < A.rows(); ++i) {
            rows.push_back(i);
            pick_rows(i + 1);
            rows.pop_back();
        }
    };
    pick_cols = [&](std::size_t start, std::size_t) {
        if (cols.size() == r) {
            IntegerMatrix m(r, r);
            for (std::size_t a = 0; a < r; ++a)
                for (std::size_t b = 0; b < r; ++b) m(a, b) = A(rows[a], cols[b]);
            g = gcd(g, integer_determinant(m));
            return;
        }
        for (std::size_t j = start; j < A.cols(); ++j) {
            cols.push_back(j);
            pick_cols(j + 1, 0);
            cols.pop_back();
        }
    };
    pick_rows(0);
    return abs(g);
}

} // namespace

TEST(Smith, Examples) {
    const IntegerMatrix a{{2, 0}, {0, 3}};
    auto s = smith_normal_form(a);
    expect_valid(a, s);
    EXPECT_EQ(s.diagonal(), (std::vector<Integer>{1, 6}));

    auto id = smith_normal_form(IntegerMatrix::identity(3));
    EXPECT_EQ(id.D, IntegerMatrix::identity(3));
    EXPECT_EQ(id.U, IntegerMatrix::identity(3));

    const IntegerMatrix b{{2, 4}, {6, 8}};
    auto t = smith_normal_form(b);
    expect_valid(b, t);
    EXPECT_EQ(t.diagonal(), (std::vector<Integer>{2, 4}));
}

TEST(Smith, RandomMatrices) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> dim(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t r = dim(rng), c = trial % 2 ? r : dim(rng);
        const IntegerMatrix A = random_matrix(rng, r, c, 9);
        SCOPED_TRACE(trial);
        expect_valid(A, smith_normal_form(A));
    }
}

TEST(Smith, ZeroAndRankDeficient) {
    const IntegerMatrix z(2, 3);
    auto s = smith_normal_form(z);
    expect_valid(z, s);
    EXPECT_EQ(s.diagonal(), (std::vector<Integer>{0, 0}));
    const IntegerMatrix r{{1, 2, 3}, {2, 4, 6}, {1, 1, 1}};
    expect_valid(r, smith_normal_form(r));
}

TEST(Torsion, Examples) {
    EXPECT_EQ(torsion_order(IntegerMatrix{{2, 0}, {0, 3}}), 6);
    EXPECT_EQ(torsion_order(IntegerMatrix::identity(4)), 1);
    EXPECT_EQ(torsion_order(IntegerMatrix{{0, 0}, {0, 3}}), 3);
}

TEST(Torsion, MatchesCosetEnumeration) {
    std::mt19937 rng(17);
    int nonsingular = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const IntegerMatrix A = random_matrix(rng, n, n, 4);
        if (integer_determinant(A) == 0) {
            EXPECT_EQ(torsion_order(A), determinantal_divisor(A));
            continue;
        }
        ++nonsingular;
        EXPECT_EQ(torsion_order(A), count_cosets(A));
    }
    EXPECT_GT(nonsingular, 60);
}

TEST(Torsion, RectangularViaDeterminantalDivisors) {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t r = 1 + trial % 3, c = 1 + (trial / 3) % 3;
        const IntegerMatrix A = random_matrix(rng, r, c, 4);
        EXPECT_EQ(torsion_order(A), determinantal_divisor(A));
    }
}

TEST(LatticeIndex, Examples) {
    const RationalMatrix L{{1, 2}, {0, 3}};
    EXPECT_EQ(lattice_index(L, L), 1);
    EXPECT_EQ(lattice_index(RationalMatrix{{1}}, RationalMatrix{{2}}), 2);
    EXPECT_EQ(lattice_index(RationalMatrix{{1}}, RationalMatrix{{Rational(1, 3)}}), Rational(1, 3));
    EXPECT_THROW(lattice_index(L, RationalMatrix{{1, 2}, {2, 4}}), SingularBasis);
}

TEST(LatticeIndex, SublatticeIsGroupIndex) {
    // Rows of B2 are integer combinations of rows of B1: [L1 : L2] is the cokernel order.
    const RationalMatrix B1{{1, 1}, {0, 2}};
    const IntegerMatrix C{{3, 1}, {0, 2}};
    const RationalMatrix B2 = C.to_rational() * B1;
    EXPECT_EQ(lattice_index(B1, B2), Rational(torsion_order(C)));
}

TEST(LatticeIndex, MultiplicativeAlongChains) {
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> e(-5, 5), den(1, 4);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + trial % 4;
        std::vector<RationalMatrix> L;
        while (L.size() < 3) {
            RationalMatrix B(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) B(i, j) = ratio(e(rng), den(rng));
            if (determinant(B) != 0) L.push_back(B);
        }
        EXPECT_EQ(lattice_index(L[0], L[2]), lattice_index(L[0], L[1]) * lattice_index(L[1], L[2]));
    }
}

TEST(Json, IntegerMatrixRoundTrip) {
    const auto j = nlohmann::json::parse(R"([["2","4"],[6,"8"]])");
    const IntegerMatrix m = integer_matrix_from_json(j);
    EXPECT_EQ(m, (IntegerMatrix{{2, 4}, {6, 8}}));
    EXPECT_EQ(to_json(m).dump(), R"([["2","4"],["6","8"]])");
    EXPECT_THROW(integer_matrix_from_json(nlohmann::json::parse(R"([["1/2"]])")), ParseError);
}
