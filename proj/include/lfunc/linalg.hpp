#pragma once

// Exact linear algebra over Q: dense matrices, subspaces kept in reduced row
// echelon form, characteristic polynomials and numerical roots of them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lfunc/arith.hpp"
#include "lfunc/errors.hpp"

namespace lfunc {

class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        for (const auto& r : rows) {
            if (r.size() != cols_) throw PreconditionViolation("ragged matrix literal");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static RationalMatrix diagonal(const std::vector<Rational>& d) {
        RationalMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }
    /// Matrix whose columns are the given vectors.
    static RationalMatrix from_columns(const std::vector<std::vector<Rational>>& cols, std::size_t dim) {
        RationalMatrix m(dim, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < dim; ++i) m(i, j) = cols[j][i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<Rational> row(std::size_t i) const {
        return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_};
    }
    std::vector<Rational> column(std::size_t j) const {
        std::vector<Rational> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x == 0; });
    }

    RationalMatrix transpose() const {
        RationalMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
        if (a.cols_ != b.rows_) throw PreconditionViolation("matrix shapes do not match for product");
        RationalMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Rational& x = a(i, k);
                if (x == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
            }
        return c;
    }
    friend std::vector<Rational> operator*(const RationalMatrix& a, const std::vector<Rational>& v) {
        if (a.cols_ != v.size()) throw PreconditionViolation("matrix/vector shapes do not match");
        std::vector<Rational> out(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
        return out;
    }
    friend RationalMatrix operator+(RationalMatrix a, const RationalMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw PreconditionViolation("matrix shapes do not match for sum");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }
    friend RationalMatrix operator-(RationalMatrix a, const RationalMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw PreconditionViolation("matrix shapes do not match for difference");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }
    friend RationalMatrix operator*(const Rational& s, RationalMatrix a) {
        for (auto& x : a.data_) x *= s;
        return a;
    }
    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

    RationalMatrix pow(unsigned k) const {
        RationalMatrix r = identity(rows_), b = *this;
        for (; k; k >>= 1, b = b * b)
            if (k & 1) r = r * b;
        return r;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i ? ", [" : "[");
            for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).get_str();
            os << "]";
        }
        os << "]";
        return os.str();
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> rref(RationalMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && m(piv, c) == 0) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
        const Rational inv = 1 / m(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            const Rational f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(RationalMatrix m) { return rref(m).size(); }

inline Rational determinant(RationalMatrix m) {
    if (!m.square()) throw PreconditionViolation("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m(piv, c) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            const Rational f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

inline RationalMatrix inverse(const RationalMatrix& m) {
    if (!m.square()) throw PreconditionViolation("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    RationalMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) throw PreconditionViolation("matrix is not invertible");
    RationalMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

/// Basis of {v : m v = 0}.
inline std::vector<std::vector<Rational>> null_space(RationalMatrix m) {
    auto piv = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(m.cols());
        v[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Subspace of Q^n, stored as the nonzero rows of its reduced echelon basis,
/// so equal subspaces compare equal.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t dim) : ambient_(dim) {}
    Subspace(std::size_t dim, const std::vector<std::vector<Rational>>& spanning) : ambient_(dim) {
        RationalMatrix m(spanning.size(), dim);
        for (std::size_t i = 0; i < spanning.size(); ++i) {
            if (spanning[i].size() != dim) throw PreconditionViolation("vector has wrong dimension");
            for (std::size_t j = 0; j < dim; ++j) m(i, j) = spanning[i][j];
        }
        auto piv = rref(m);
        for (std::size_t i = 0; i < piv.size(); ++i) basis_.push_back(m.row(i));
    }

    static Subspace whole(std::size_t dim) {
        std::vector<std::vector<Rational>> e;
        for (std::size_t i = 0; i < dim; ++i) {
            e.emplace_back(dim);
            e.back()[i] = 1;
        }
        return Subspace(dim, e);
    }
    static Subspace kernel(const RationalMatrix& m) { return Subspace(m.cols(), null_space(m)); }
    static Subspace image(const RationalMatrix& m) {
        std::vector<std::vector<Rational>> cols;
        for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.column(j));
        return Subspace(m.rows(), cols);
    }

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<std::vector<Rational>>& basis() const { return basis_; }

    bool contains(const std::vector<Rational>& v) const {
        auto rows = basis_;
        rows.push_back(v);
        return Subspace(ambient_, rows).dim() == dim();
    }
    bool contains(const Subspace& other) const {
        auto rows = basis_;
        rows.insert(rows.end(), other.basis_.begin(), other.basis_.end());
        return Subspace(ambient_, rows).dim() == dim();
    }

    friend Subspace operator+(const Subspace& a, const Subspace& b) {
        auto rows = a.basis_;
        rows.insert(rows.end(), b.basis_.begin(), b.basis_.end());
        return Subspace(a.ambient_, rows);
    }

    /// Linear functionals vanishing on the subspace, as row vectors.
    std::vector<std::vector<Rational>> annihilator() const {
        RationalMatrix m(basis_.size(), ambient_);
        for (std::size_t i = 0; i < basis_.size(); ++i)
            for (std::size_t j = 0; j < ambient_; ++j) m(i, j) = basis_[i][j];
        return null_space(m);
    }

    friend Subspace intersect(const Subspace& a, const Subspace& b) {
        auto fa = a.annihilator(), fb = b.annihilator();
        fa.insert(fa.end(), fb.begin(), fb.end());
        RationalMatrix m(fa.size(), a.ambient_);
        for (std::size_t i = 0; i < fa.size(); ++i)
            for (std::size_t j = 0; j < a.ambient_; ++j) m(i, j) = fa[i][j];
        return Subspace(a.ambient_, null_space(m));
    }

    Subspace mapped_by(const RationalMatrix& m) const {
        std::vector<std::vector<Rational>> img;
        for (const auto& v : basis_) img.push_back(m * v);
        return Subspace(m.rows(), img);
    }

    /// {v : m v in this}.
    Subspace preimage(const RationalMatrix& m) const {
        auto f = annihilator();
        RationalMatrix fm(f.size(), ambient_);
        for (std::size_t i = 0; i < f.size(); ++i)
            for (std::size_t j = 0; j < ambient_; ++j) fm(i, j) = f[i][j];
        return Subspace::kernel(fm * m);
    }

    bool stable_under(const RationalMatrix& m) const { return contains(mapped_by(m)); }

    friend bool operator==(const Subspace&, const Subspace&) = default;

private:
    std::size_t ambient_ = 0;
    std::vector<std::vector<Rational>> basis_;
};

/// Vectors completing a basis of `small` to a basis of `big` (small must lie in big).
inline std::vector<std::vector<Rational>> complement_in(const Subspace& big, const Subspace& small) {
    std::vector<std::vector<Rational>> extra;
    Subspace acc = small;
    for (const auto& v : big.basis()) {
        if (acc.contains(v)) continue;
        extra.push_back(v);
        acc = acc + Subspace(big.ambient(), {v});
    }
    return extra;
}

/// Coordinates of v in the given basis (columns of an injective matrix).
inline std::vector<Rational> coordinates(const std::vector<std::vector<Rational>>& basis,
                                         const std::vector<Rational>& v) {
    const std::size_t n = v.size(), k = basis.size();
    RationalMatrix aug(n, k + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) aug(i, j) = basis[j][i];
        aug(i, k) = v[i];
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == k) throw PreconditionViolation("vector is not in the span");
    std::vector<Rational> c(k);
    for (std::size_t r = 0; r < piv.size(); ++r) c[piv[r]] = aug(r, k);
    return c;
}

/// Matrix of the map induced by m on big/small, in the basis complement_in(big, small).
inline RationalMatrix induced_on_quotient(const RationalMatrix& m, const Subspace& big, const Subspace& small) {
    auto comp = complement_in(big, small);
    std::vector<std::vector<Rational>> full = small.basis();
    full.insert(full.end(), comp.begin(), comp.end());
    const std::size_t s = small.dim();
    RationalMatrix out(comp.size(), comp.size());
    for (std::size_t j = 0; j < comp.size(); ++j) {
        auto c = coordinates(full, m * comp[j]);
        for (std::size_t i = 0; i < comp.size(); ++i) out(i, j) = c[s + i];
    }
    return out;
}

inline RationalMatrix restricted_to(const RationalMatrix& m, const Subspace& u) {
    return induced_on_quotient(m, u, Subspace(m.rows()));
}

// Polynomials over Q, constant term first.
using RationalPoly = std::vector<Rational>;

inline void trim(RationalPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

/// det(X I - m), by the Faddeev-LeVerrier recursion (exact over Q).
inline RationalPoly characteristic_polynomial(const RationalMatrix& m) {
    if (!m.square()) throw PreconditionViolation("characteristic polynomial of a non-square matrix");
    const std::size_t n = m.rows();
    RationalPoly c(n + 1);
    c[n] = 1;
    RationalMatrix M(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        M = m * M;
        for (std::size_t i = 0; i < n; ++i) M(i, i) += c[n - k + 1];
        RationalMatrix AM = m * M;
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += AM(i, i);
        c[n - k] = -tr / Rational(static_cast<long>(k));
    }
    return c;
}

/// det(1 - T m) as a polynomial in T.
inline RationalPoly reverse_characteristic(const RationalMatrix& m) {
    auto c = characteristic_polynomial(m);
    RationalPoly r(c.rbegin(), c.rend());
    trim(r);
    return r;
}

inline RationalPoly poly_derivative(const RationalPoly& f) {
    RationalPoly d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * Rational(static_cast<long>(i)));
    trim(d);
    return d;
}

/// Quotient and remainder; b must be nonzero.
inline std::pair<RationalPoly, RationalPoly> poly_divmod(RationalPoly a, RationalPoly b) {
    trim(a);
    trim(b);
    if (b.empty()) throw PreconditionViolation("polynomial division by zero");
    if (a.size() < b.size()) return {{}, a};
    RationalPoly q(a.size() - b.size() + 1);
    for (std::size_t k = q.size(); k-- > 0;) {
        const Rational f = a[k + b.size() - 1] / b.back();
        q[k] = f;
        for (std::size_t j = 0; j < b.size(); ++j) a[k + j] -= f * b[j];
    }
    trim(a);
    trim(q);
    return {q, a};
}

inline RationalPoly poly_gcd(RationalPoly a, RationalPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = poly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const Rational lead = a.back();
        for (auto& x : a) x /= lead;
    }
    return a;
}

/// Product of the distinct irreducible factors (monic).
inline RationalPoly squarefree_part(const RationalPoly& f) {
    auto g = poly_gcd(f, poly_derivative(f));
    auto q = poly_divmod(f, g).first;
    const Rational lead = q.back();
    for (auto& x : q) x /= lead;
    return q;
}

inline RationalMatrix poly_eval(const RationalPoly& f, const RationalMatrix& m) {
    RationalMatrix acc(m.rows(), m.cols());
    for (std::size_t i = f.size(); i-- > 0;) {
        acc = acc * m;
        for (std::size_t j = 0; j < m.rows(); ++j) acc(j, j) += f[i];
    }
    return acc;
}

struct PolyRoot {
    std::complex<long double> z;
    long double radius; // a disk of this radius around z contains a root
};

/// Complex roots of a squarefree polynomial by Aberth iteration, each with an
/// inclusion radius deg * |f(z)/f'(z)|.
inline std::vector<PolyRoot> squarefree_roots(const RationalPoly& f) {
    using C = std::complex<long double>;
    const std::size_t n = f.size() - 1;
    if (f.size() < 2) return {};
    std::vector<long double> c(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) c[i] = static_cast<long double>(f[i].get_d());
    // Coefficients as long double lose nothing for the desk-scale inputs here;
    // the inclusion radius below is computed against the same rounded data.
    auto eval = [&](C z, C& d) {
        C v = 0;
        d = 0;
        for (std::size_t i = n + 1; i-- > 0;) {
            d = d * z + v;
            v = v * z + c[i];
        }
        return v;
    };
    long double bound = 0;
    for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, std::fabs(c[i] / c[n]));
    bound += 1;
    std::vector<C> z(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = std::polar(bound * 0.7L, 2 * M_PIl * k / n + 0.4L);
    for (int it = 0; it < 500; ++it) {
        long double move = 0;
        for (std::size_t k = 0; k < n; ++k) {
            C d;
            C v = eval(z[k], d);
            if (v == C(0)) continue;
            C ratio = v / d;
            C s = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) s += 1.0L / (z[k] - z[j]);
            C step = ratio / (1.0L - ratio * s);
            z[k] -= step;
            move = std::max(move, std::abs(step) / std::max(1.0L, std::abs(z[k])));
        }
        if (move < 1e-18L) break;
    }
    std::vector<PolyRoot> out;
    for (auto r : z) {
        C d;
        C v = eval(r, d);
        const long double rad = d == C(0) ? INFINITY : static_cast<long double>(n) * std::abs(v / d);
        out.push_back({r, rad});
    }
    return out;
}

inline nlohmann::ordered_json to_json(const RationalMatrix& m) {
    auto j = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(m(i, k).get_str());
        j.push_back(r);
    }
    return j;
}

inline Rational rational_from_json(const nlohmann::json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
    throw ParseError("matrix entries must be integers or rational strings");
}

inline RationalMatrix rational_matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ParseError("matrix must be a JSON array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = rows ? j[0].size() : 0;
    RationalMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw ParseError("matrix rows must have equal length");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = rational_from_json(j[i][k]);
    }
    return m;
}

} // namespace lfunc
