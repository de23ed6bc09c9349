#pragma once
// Dense exact linear algebra over the rationals: just enough for kernel
// computations, recurrence fitting and lattice arithmetic. Sizes here are
// tiny (matrices of dimension <= a few dozen), so plain Gauss-Jordan with
// full pivot normalization is the right tool.

#include "rational.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace birat {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;

inline QMat q_identity(size_t n) {
    QMat m(n, QVec(n, Rational(0)));
    for (size_t i = 0; i < n; ++i) m[i][i] = Rational(1);
    return m;
}

inline QMat q_mul(const QMat& a, const QMat& b) {
    if (a.empty() || b.empty() || a[0].size() != b.size())
        throw std::invalid_argument("matrix shape mismatch");
    QMat r(a.size(), QVec(b[0].size(), Rational(0)));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t k = 0; k < b.size(); ++k) {
            if (a[i][k].is_zero()) continue;
            for (size_t j = 0; j < b[0].size(); ++j) r[i][j].add_mul(a[i][k], b[k][j]);
        }
    return r;
}

inline QVec q_mul_vec(const QMat& a, const QVec& v) {
    if (a.empty() || a[0].size() != v.size()) throw std::invalid_argument("matrix shape mismatch");
    QVec r(a.size(), Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) r[i].add_mul(a[i][j], v[j]);
    return r;
}

inline QMat q_pow(QMat base, unsigned e) {
    QMat r = q_identity(base.size());
    while (e) {
        if (e & 1) r = q_mul(r, base);
        if (e >>= 1) base = q_mul(base, base);
    }
    return r;
}

// reduced row echelon form in place; returns pivot column per row
inline std::vector<size_t> rref(QMat& m) {
    std::vector<size_t> pivots;
    if (m.empty()) return pivots;
    size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t pr = r;
        while (pr < rows && m[pr][c].is_zero()) ++pr;
        if (pr == rows) continue;
        std::swap(m[r], m[pr]);
        Rational inv = Rational(1) / m[r][c];
        for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Rational f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// basis of the right kernel {v : m v = 0}
inline std::vector<QVec> kernel_basis(QMat m) {
    if (m.empty()) return {};
    size_t cols = m[0].size();
    std::vector<size_t> pivots = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (size_t c : pivots) is_pivot[c] = true;
    std::vector<QVec> basis;
    for (size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        QVec v(cols, Rational(0));
        v[fc] = Rational(1);
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][fc];
        basis.push_back(std::move(v));
    }
    return basis;
}

// one exact solution of A x = b, or nullopt when inconsistent; free variables
// are set to zero
inline std::optional<QVec> solve_linear(const QMat& a, const QVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("system shape mismatch");
    if (a.empty()) return QVec{};
    size_t cols = a[0].size();
    QMat aug = a;
    for (size_t i = 0; i < a.size(); ++i) aug[i].push_back(b[i]);
    std::vector<size_t> pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
    QVec x(cols, Rational(0));
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][cols];
    return x;
}

inline QMat q_inverse(const QMat& a) {
    size_t n = a.size();
    QMat aug = a;
    for (size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) throw std::invalid_argument("inverse of non-square matrix");
        for (size_t j = 0; j < n; ++j) aug[i].push_back(Rational(i == j ? 1 : 0));
    }
    if (rref(aug).size() != n) throw std::domain_error("singular matrix");
    QMat inv(n, QVec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

// scale a rational vector to coprime integers with the first nonzero entry
// positive
inline std::vector<mpz_class> primitive_integer(const QVec& v) {
    mpz_class lcm = 1;
    for (const Rational& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.denominator().get_mpz_t());
    std::vector<mpz_class> out;
    out.reserve(v.size());
    mpz_class g = 0;
    for (const Rational& x : v) {
        mpz_class n = x.numerator() * (lcm / x.denominator());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
        out.push_back(std::move(n));
    }
    if (g != 0 && g != 1)
        for (mpz_class& n : out) mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), g.get_mpz_t());
    for (const mpz_class& n : out) {
        if (n == 0) continue;
        if (n < 0)
            for (mpz_class& m : out) m = -m;
        break;
    }
    return out;
}

// is v a rational combination of the given vectors
inline bool in_span(const std::vector<QVec>& vectors, const QVec& v) {
    if (vectors.empty()) {
        for (const Rational& x : v)
            if (!x.is_zero()) return false;
        return true;
    }
    QMat a(v.size(), QVec(vectors.size()));
    for (size_t j = 0; j < vectors.size(); ++j) {
        if (vectors[j].size() != v.size()) throw std::invalid_argument("span dimension mismatch");
        for (size_t i = 0; i < v.size(); ++i) a[i][j] = vectors[j][i];
    }
    return solve_linear(a, v).has_value();
}

}  // namespace birat
