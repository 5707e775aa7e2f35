#pragma once

// Smith normal form over Z with unimodular transforms, torsion orders of
// cokernels, and generalized indices of full-rank lattices.

#include <string>
#include <vector>

#include "json.hpp"
#include "lfunc/arith.hpp"
#include "lfunc/errors.hpp"
#include "lfunc/linalg.hpp"

namespace lfunc {

class IntegerMatrix {
public:
    IntegerMatrix() = default;
    IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntegerMatrix(std::initializer_list<std::initializer_list<Integer>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        for (const auto& r : rows) {
            if (r.size() != cols_) throw PreconditionViolation("ragged matrix literal");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }
    static IntegerMatrix identity(std::size_t n) {
        IntegerMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
        if (a.cols_ != b.rows_) throw PreconditionViolation("matrix shapes do not match for product");
        IntegerMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k)
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
        return c;
    }
    friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

    RationalMatrix to_rational() const {
        RationalMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = Rational((*this)(i, j));
        return r;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    /// row[dst] += f * row[src]
    void add_row(std::size_t dst, std::size_t src, const Integer& f) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += f * (*this)(src, j);
    }
    void add_col(std::size_t dst, std::size_t src, const Integer& f) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += f * (*this)(i, src);
    }
    void negate_row(std::size_t r) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Integer> data_;
};

inline Integer integer_determinant(const IntegerMatrix& m) { return to_integer(determinant(m.to_rational())); }

struct SmithForm {
    IntegerMatrix U, D, V; // U A V = D
    std::vector<Integer> diagonal() const {
        std::vector<Integer> d;
        for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
        return d;
    }
};

/// Elementary row/column reduction, always pivoting on the smallest nonzero
/// entry of the remaining block.
inline SmithForm smith_normal_form(const IntegerMatrix& A) {
    const std::size_t m = A.rows(), n = A.cols();
    SmithForm s{IntegerMatrix::identity(m), A, IntegerMatrix::identity(n)};
    IntegerMatrix& D = s.D;
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        while (true) {
            std::size_t pi = m, pj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (D(i, j) != 0 && (pi == m || abs(D(i, j)) < abs(D(pi, pj)))) pi = i, pj = j;
            if (pi == m) return s; // remaining block is zero
            if (pi != t) {
                D.swap_rows(pi, t);
                s.U.swap_rows(pi, t);
            }
            if (pj != t) {
                D.swap_cols(pj, t);
                s.V.swap_cols(pj, t);
            }
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (D(i, t) == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
                D.add_row(i, t, -q);
                s.U.add_row(i, t, -q);
                if (D(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (D(t, j) == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
                D.add_col(j, t, -q);
                s.V.add_col(j, t, -q);
                if (D(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            // Pivot must divide the rest of the block; otherwise fold an offending row in.
            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
                        bad = i;
                        break;
                    }
            if (bad == m) break;
            D.add_row(t, bad, 1);
            s.U.add_row(t, bad, 1);
        }
        if (D(t, t) < 0) {
            D.negate_row(t);
            s.U.negate_row(t);
        }
    }
    return s;
}

/// Order of the torsion subgroup of Z^rows / A Z^cols: the product of the
/// nonzero elementary divisors.
inline Integer torsion_order(const IntegerMatrix& presentation) {
    Integer r = 1;
    for (const auto& d : smith_normal_form(presentation).diagonal())
        if (d != 0) r *= d;
    return r;
}

/// Generalized index [L1 : L2] = |det B2| / |det B1| for full-rank lattices
/// with bases given as the rows of B1, B2. Equals the group index when L2 is
/// a sublattice of L1.
inline Rational lattice_index(const RationalMatrix& B1, const RationalMatrix& B2) {
    if (!B1.square() || !B2.square() || B1.rows() != B2.rows())
        throw PreconditionViolation("lattice bases must be square matrices of one size");
    const Rational d1 = determinant(B1), d2 = determinant(B2);
    if (d1 == 0 || d2 == 0) throw SingularBasis();
    return abs(d2 / d1);
}

inline IntegerMatrix integer_matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ParseError("matrix must be a JSON array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = rows ? j[0].size() : 0;
    IntegerMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw ParseError("matrix rows must have equal length");
        for (std::size_t k = 0; k < cols; ++k) {
            const Rational q = rational_from_json(j[i][k]);
            if (q.get_den() != 1) throw ParseError("integer matrix entry expected, got " + q.get_str());
            m(i, k) = q.get_num();
        }
    }
    return m;
}

inline nlohmann::ordered_json to_json(const IntegerMatrix& m) {
    auto j = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(m(i, k).get_str());
        j.push_back(r);
    }
    return j;
}

} // namespace lfunc
