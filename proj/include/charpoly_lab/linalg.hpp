/*
 * Copyright 2026 The charpoly-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "fqpoly.hpp"
#include "gf.hpp"

namespace cpl {

namespace detail {

// Element-operation adaptors over raw element codes, so the elimination
// kernels below compile to tight loops for prime fields.
struct PrimeOps {
    const ModP* m;
    u64 add(u64 a, u64 b) const { return m->add(a, b); }
    u64 sub(u64 a, u64 b) const { return m->sub(a, b); }
    u64 mul(u64 a, u64 b) const { return m->mul(a, b); }
    u64 neg(u64 a) const { return m->neg(a); }
    u64 inv(u64 a) const { return m->inv(a); }
};

struct ExtOps {
    const Field* f;
    u64 add(u64 a, u64 b) const { return f->add({a}, {b}).code; }
    u64 sub(u64 a, u64 b) const { return f->sub({a}, {b}).code; }
    u64 mul(u64 a, u64 b) const { return f->mul({a}, {b}).code; }
    u64 neg(u64 a) const { return f->neg({a}).code; }
    u64 inv(u64 a) const { return f->inv({a}).code; }
};

template <class Fn>
decltype(auto) with_ops(const Field& f, Fn&& fn) {
    if (f.is_prime_field()) return fn(PrimeOps{&f.prime_arith()});
    return fn(ExtOps{&f});
}

/// Row reduction in place (row-major rows x cols). Returns the rank; when
/// det is non-null and the matrix is square, stores the determinant. With
/// stop_on_deficiency set, a square input stops at the first missing pivot
/// (the rank returned is then a lower bound and det is 0).
template <class Ops>
std::size_t eliminate(const Ops& ops, std::span<u64> a, std::size_t rows, std::size_t cols, u64* det = nullptr,
                      bool stop_on_deficiency = false) {
    std::size_t rank = 0;
    u64 d = 1;
    bool negate = false;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && a[piv * cols + col] == 0) ++piv;
        if (piv == rows) {
            if (stop_on_deficiency) {
                if (det) *det = 0;
                return rank;
            }
            continue;
        }
        if (piv != rank) {
            std::swap_ranges(a.begin() + piv * cols, a.begin() + (piv + 1) * cols, a.begin() + rank * cols);
            negate = !negate;
        }
        u64* prow = &a[rank * cols];
        const u64 pv = prow[col];
        d = ops.mul(d, pv);
        const u64 pinv = ops.inv(pv);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            u64* row = &a[r * cols];
            if (row[col] == 0) continue;
            const u64 factor = ops.neg(ops.mul(row[col], pinv));
            row[col] = 0;
            for (std::size_t j = col + 1; j < cols; ++j)
                if (prow[j]) row[j] = ops.add(row[j], ops.mul(factor, prow[j]));
        }
        ++rank;
    }
    if (det) *det = (rows == cols && rank == rows) ? (negate ? ops.neg(d) : d) : 0;
    return rank;
}

/// Characteristic polynomial det(tI - A) of an n x n matrix via similarity
/// reduction to upper Hessenberg form and the standard recurrence.
/// Result low to high, monic, length n + 1.
template <class Ops>
std::vector<u64> hessenberg_charpoly(const Ops& ops, std::vector<u64> h, std::size_t n) {
    auto at = [&](std::size_t i, std::size_t j) -> u64& { return h[i * n + j]; };
    for (std::size_t m = 1; m + 1 < n; ++m) {
        std::size_t piv = m;
        while (piv < n && at(piv, m - 1) == 0) ++piv;
        if (piv == n) continue;
        if (piv != m) {
            for (std::size_t j = 0; j < n; ++j) std::swap(at(piv, j), at(m, j));
            for (std::size_t i = 0; i < n; ++i) std::swap(at(i, piv), at(i, m));
        }
        const u64 pinv = ops.inv(at(m, m - 1));
        for (std::size_t i = m + 1; i < n; ++i) {
            const u64 u = ops.mul(at(i, m - 1), pinv);
            if (u == 0) continue;
            // row_i -= u * row_m, then col_m += u * col_i
            for (std::size_t j = m - 1; j < n; ++j)
                if (at(m, j)) at(i, j) = ops.sub(at(i, j), ops.mul(u, at(m, j)));
            for (std::size_t r = 0; r < n; ++r)
                if (at(r, i)) at(r, m) = ops.add(at(r, m), ops.mul(u, at(r, i)));
        }
    }
    // p_k = charpoly of the leading k x k block; p_0 = 1.
    std::vector<std::vector<u64>> p(n + 1);
    p[0] = {1};
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<u64>& cur = p[k];
        cur.assign(k + 1, 0);
        const auto& prev = p[k - 1];
        const u64 diag = at(k - 1, k - 1);
        for (std::size_t i = 0; i < k; ++i) {
            cur[i + 1] = ops.add(cur[i + 1], prev[i]);
            cur[i] = ops.sub(cur[i], ops.mul(diag, prev[i]));
        }
        u64 prod = 1;  // h[i][i-1] * ... * h[k-1][k-2]
        for (std::size_t i = k - 1; i-- > 0;) {
            prod = ops.mul(prod, at(i + 1, i));
            if (prod == 0) break;
            const u64 coef = ops.mul(prod, at(i, k - 1));
            if (coef == 0) continue;
            const auto& lower = p[i];
            for (std::size_t j = 0; j < lower.size(); ++j) cur[j] = ops.sub(cur[j], ops.mul(coef, lower[j]));
        }
    }
    return std::move(p[n]);
}

}  // namespace detail

/// Dense matrix over F_q, row-major, stored as element codes.
class MatFq {
public:
    MatFq() = default;
    MatFq(Field f, std::size_t rows, std::size_t cols) : field_(std::move(f)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}
    MatFq(Field f, std::size_t n) : MatFq(std::move(f), n, n) {}

    static MatFq identity(const Field& f, std::size_t n) {
        MatFq m(f, n);
        for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1;
        return m;
    }

    static MatFq from_codes(const Field& f, std::size_t rows, std::size_t cols, std::vector<u64> codes) {
        if (codes.size() != rows * cols) throw std::invalid_argument("matrix data size mismatch");
        for (u64 c : codes) f.element(c);
        MatFq m(f, rows, cols);
        m.a_ = std::move(codes);
        return m;
    }

    const Field& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    FieldElem at(std::size_t i, std::size_t j) const { return {a_[i * cols_ + j]}; }
    void set(std::size_t i, std::size_t j, FieldElem v) { a_[i * cols_ + j] = field_.element(v.code).code; }

    std::span<const u64> codes() const { return a_; }
    std::span<u64> codes() { return a_; }

    /// The top k x cols block.
    MatFq top_rows(std::size_t k) const {
        if (k > rows_) throw std::out_of_range("top_rows beyond matrix height");
        MatFq m(field_, k, cols_);
        std::copy(a_.begin(), a_.begin() + static_cast<std::ptrdiff_t>(k * cols_), m.a_.begin());
        return m;
    }

    /// M - lambda I.
    MatFq shifted(FieldElem lambda) const {
        if (!is_square()) throw std::invalid_argument("shift of a non-square matrix");
        MatFq m(*this);
        for (std::size_t i = 0; i < rows_; ++i) m.a_[i * cols_ + i] = field_.sub({m.a_[i * cols_ + i]}, lambda).code;
        return m;
    }

    friend bool operator==(const MatFq&, const MatFq&) = default;

private:
    Field field_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<u64> a_;
};

/// det(tI - M) by Hessenberg reduction, O(n^3) field operations.
inline PolyFq charpoly(const MatFq& m) {
    if (!m.is_square()) throw std::invalid_argument("charpoly of a non-square matrix");
    const Field& f = m.field();
    auto codes = detail::with_ops(f, [&](const auto& ops) {
        return detail::hessenberg_charpoly(ops, std::vector<u64>(m.codes().begin(), m.codes().end()), m.rows());
    });
    return PolyFq::from_codes(f, std::span<const u64>(codes));
}

inline std::size_t rank(const MatFq& m) {
    std::vector<u64> a(m.codes().begin(), m.codes().end());
    return detail::with_ops(m.field(), [&](const auto& ops) { return detail::eliminate(ops, a, m.rows(), m.cols()); });
}

/// Dimension of the right kernel {x : Mx = 0}; rank + kernel_dim = cols.
inline std::size_t kernel_dim(const MatFq& m) { return m.cols() - rank(m); }

inline FieldElem det(const MatFq& m) {
    if (!m.is_square()) throw std::invalid_argument("det of a non-square matrix");
    std::vector<u64> a(m.codes().begin(), m.codes().end());
    u64 d = 0;
    detail::with_ops(m.field(), [&](const auto& ops) { return detail::eliminate(ops, a, m.rows(), m.cols(), &d, true); });
    return {d};
}

/// True iff the square matrix is invertible (early exit on the first missing pivot).
inline bool is_nonsingular(const MatFq& m) {
    if (!m.is_square()) throw std::invalid_argument("nonsingularity of a non-square matrix");
    std::vector<u64> a(m.codes().begin(), m.codes().end());
    return detail::with_ops(m.field(), [&](const auto& ops) {
               return detail::eliminate(ops, a, m.rows(), m.cols(), nullptr, true);
           }) == m.rows();
}

/// Reduced row echelon form; returns the pivot columns.
inline std::vector<std::size_t> rref(MatFq& m) {
    const Field& f = m.field();
    auto a = m.codes();
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv * cols + c] == 0) ++piv;
        if (piv == rows) continue;
        for (std::size_t j = 0; j < cols; ++j) std::swap(a[piv * cols + j], a[r * cols + j]);
        const FieldElem inv = f.inv({a[r * cols + c]});
        for (std::size_t j = 0; j < cols; ++j) a[r * cols + j] = f.mul({a[r * cols + j]}, inv).code;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i * cols + c] == 0) continue;
            const FieldElem fac{a[i * cols + c]};
            for (std::size_t j = 0; j < cols; ++j)
                a[i * cols + j] = f.sub({a[i * cols + j]}, f.mul(fac, {a[r * cols + j]})).code;
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

/// Basis of the right kernel {x : Mx = 0}, as rows of a (cols - rank) x cols matrix.
inline MatFq kernel_basis(const MatFq& m) {
    MatFq e(m);
    const auto pivots = rref(e);
    const Field& f = m.field();
    const std::size_t cols = m.cols();
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    MatFq basis(f, cols - pivots.size(), cols);
    std::size_t row = 0;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        basis.set(row, free, f.one());
        for (std::size_t k = 0; k < pivots.size(); ++k) basis.set(row, pivots[k], f.neg(e.at(k, free)));
        ++row;
    }
    return basis;
}

/// Parses "a,b;c,d" (rows separated by ';', entries by ','), entries reduced
/// into the field as integers (prime field) or element codes (extension).
inline MatFq parse_matrix(const Field& f, const std::string& text) {
    std::vector<std::vector<FieldElem>> rows;
    for (const auto& row : detail::split(text, ';')) {
        std::vector<FieldElem> entries;
        for (const auto& tok : detail::split(row, ',')) entries.push_back(parse_element(f, tok));
        rows.push_back(std::move(entries));
    }
    const std::size_t n = rows.size();
    if (n == 0) throw std::invalid_argument("empty matrix");
    MatFq m(f, n, rows[0].size());
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != rows[0].size()) throw std::invalid_argument("ragged matrix rows");
        for (std::size_t j = 0; j < rows[i].size(); ++j) m.set(i, j, rows[i][j]);
    }
    return m;
}

/// Polynomial with integer coefficients, low to high, canonical (no trailing zeros).
class PolyZ {
public:
    PolyZ() = default;
    explicit PolyZ(std::vector<mpz_class> c) : c_(std::move(c)) { normalize(); }
    PolyZ(std::initializer_list<long> c) {
        for (long v : c) c_.emplace_back(v);
        normalize();
    }

    const std::vector<mpz_class>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    const mpz_class& leading() const { return c_.back(); }
    mpz_class operator[](std::size_t i) const { return i < c_.size() ? c_[i] : mpz_class(0); }

    friend bool operator==(const PolyZ&, const PolyZ&) = default;

    friend PolyZ operator*(const PolyZ& a, const PolyZ& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<mpz_class> r(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return PolyZ(std::move(r));
    }
    friend PolyZ operator+(const PolyZ& a, const PolyZ& b) {
        std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
        return PolyZ(std::move(r));
    }
    friend PolyZ operator-(const PolyZ& a, const PolyZ& b) {
        std::vector<mpz_class> r(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
        return PolyZ(std::move(r));
    }

    mpz_class evaluate(const mpz_class& x) const {
        mpz_class acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    /// "c0,c1,...,cd"; "0" for the zero polynomial.
    std::string to_string() const {
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ',';
            s += c_[i].get_str();
        }
        return s;
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<mpz_class> c_;
};

namespace detail {

inline std::vector<mpz_class> parse_int_list(const std::string& text) {
    std::vector<mpz_class> c;
    for (const auto& tok : split(text, ',')) {
        mpz_class v;
        if (tok.empty() || v.set_str(tok[0] == '+' ? tok.substr(1) : tok, 10) != 0)
            throw std::invalid_argument("bad integer '" + tok + "'");
        c.push_back(v);
    }
    return c;
}

}  // namespace detail

/// Parses "c0,c1,...,cd" with integer coefficients.
inline PolyZ parse_poly_z(const std::string& text) { return PolyZ(detail::parse_int_list(text)); }

/// Image of an integer in F_q (through the prime subfield).
inline FieldElem reduce(const mpz_class& v, const Field& f) {
    return {mpz_fdiv_ui(v.get_mpz_t(), f.characteristic())};
}

inline PolyFq reduce(const PolyZ& a, const Field& f) {
    std::vector<FieldElem> c;
    c.reserve(a.coeffs().size());
    for (const auto& v : a.coeffs()) c.push_back(reduce(v, f));
    return PolyFq(f, std::move(c));
}

inline PolyZ derivative(const PolyZ& a) {
    if (a.degree() < 1) return {};
    std::vector<mpz_class> r(a.coeffs().size() - 1);
    for (std::size_t i = 1; i < a.coeffs().size(); ++i) r[i - 1] = a.coeffs()[i] * static_cast<unsigned long>(i);
    return PolyZ(std::move(r));
}

/// Square integer matrix, row-major.
class MatZ {
public:
    MatZ() = default;
    explicit MatZ(std::size_t n) : n_(n), a_(n * n, 0) {}
    MatZ(std::size_t n, std::vector<mpz_class> entries) : n_(n), a_(std::move(entries)) {
        if (a_.size() != n * n) throw std::invalid_argument("MatZ data size mismatch");
    }

    std::size_t size() const { return n_; }
    const mpz_class& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    mpz_class& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const std::vector<mpz_class>& entries() const { return a_; }

    /// max |entry|
    mpz_class height() const {
        mpz_class h = 0;
        for (const auto& v : a_) h = std::max<mpz_class>(h, abs(v));
        return h;
    }

private:
    std::size_t n_ = 0;
    std::vector<mpz_class> a_;
};

inline MatZ parse_matrix_z(const std::string& text) {
    std::vector<std::vector<mpz_class>> rows;
    for (const auto& row : detail::split(text, ';')) rows.push_back(detail::parse_int_list(row));
    const std::size_t n = rows.size();
    MatZ m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw std::invalid_argument("integer matrix must be square");
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

inline MatFq reduce(const MatZ& m, const Field& f) {
    std::vector<u64> codes;
    codes.reserve(m.entries().size());
    for (const auto& v : m.entries()) codes.push_back(reduce(v, f).code);
    return MatFq::from_codes(f, m.size(), m.size(), std::move(codes));
}

/// det(tI - M) over Z by Berkowitz's division-free algorithm, O(n^4) ring operations.
inline PolyZ charpoly(const MatZ& m) {
    const std::size_t n = m.size();
    if (n == 0) return PolyZ({1});
    // c holds the charpoly of the leading r x r block, highest degree first.
    std::vector<mpz_class> c{1, -m.at(0, 0)};
    std::vector<mpz_class> v, w, toeplitz;
    for (std::size_t r = 1; r < n; ++r) {
        toeplitz.assign(r + 2, 0);
        toeplitz[0] = 1;
        toeplitz[1] = -m.at(r, r);
        v.resize(r);
        for (std::size_t i = 0; i < r; ++i) v[i] = m.at(i, r);
        w.resize(r);
        for (std::size_t j = 0; j < r; ++j) {
            mpz_class dot = 0;
            for (std::size_t i = 0; i < r; ++i) mpz_addmul(dot.get_mpz_t(), m.at(r, i).get_mpz_t(), v[i].get_mpz_t());
            toeplitz[2 + j] = -dot;
            if (j + 1 == r) break;
            for (std::size_t i = 0; i < r; ++i) {
                w[i] = 0;
                for (std::size_t k = 0; k < r; ++k) mpz_addmul(w[i].get_mpz_t(), m.at(i, k).get_mpz_t(), v[k].get_mpz_t());
            }
            std::swap(v, w);
        }
        std::vector<mpz_class> next(r + 2, 0);
        for (std::size_t i = 0; i < r + 2; ++i)
            for (std::size_t j = 0; j <= std::min(i, r); ++j)
                mpz_addmul(next[i].get_mpz_t(), toeplitz[i - j].get_mpz_t(), c[j].get_mpz_t());
        c = std::move(next);
    }
    std::reverse(c.begin(), c.end());
    return PolyZ(std::move(c));
}

/// H^(n(n-1)) * n^(n^2): bound on |disc psi| for any psi dividing the
/// characteristic polynomial of an n x n matrix with entries bounded by H.
inline mpz_class hadamard_disc_bound(unsigned long n, const mpz_class& height) {
    if (n < 1 || height < 1) throw std::invalid_argument("hadamard_disc_bound needs n >= 1 and H >= 1");
    mpz_class a, b;
    mpz_pow_ui(a.get_mpz_t(), height.get_mpz_t(), n * (n - 1));
    mpz_ui_pow_ui(b.get_mpz_t(), n, n * n);
    return a * b;
}

/// Determinant of a square integer matrix by Bareiss fraction-free elimination.
inline mpz_class det_bareiss(std::vector<mpz_class> a, std::size_t n) {
    if (n == 0) return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k * n + k] == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a[piv * n + k] == 0) ++piv;
            if (piv == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i * n + j] = a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j];
                mpz_divexact(a[i * n + j].get_mpz_t(), a[i * n + j].get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a[k * n + k];
    }
    return sign * a[(n - 1) * n + (n - 1)];
}

/// Resultant via the Sylvester determinant.
inline mpz_class resultant(const PolyZ& f, const PolyZ& g) {
    const int m = f.degree(), n = g.degree();
    if (m < 0 || n < 0) return 0;
    const std::size_t size = static_cast<std::size_t>(m + n);
    if (size == 0) return 1;
    std::vector<mpz_class> s(size * size, 0);
    // rows 0..n-1: shifts of f (highest coefficient first); rows n..n+m-1: shifts of g
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= m; ++i) s[static_cast<std::size_t>(r) * size + static_cast<std::size_t>(r + i)] = f[static_cast<std::size_t>(m - i)];
    for (int r = 0; r < m; ++r)
        for (int i = 0; i <= n; ++i)
            s[static_cast<std::size_t>(n + r) * size + static_cast<std::size_t>(r + i)] = g[static_cast<std::size_t>(n - i)];
    return det_bareiss(std::move(s), size);
}

/// disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f).
inline mpz_class discriminant(const PolyZ& f) {
    const int n = f.degree();
    if (n < 1) throw std::invalid_argument("discriminant needs degree >= 1");
    if (n == 1) return 1;
    mpz_class r = resultant(f, derivative(f));
    mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), f.leading().get_mpz_t());
    if ((static_cast<long>(n) * (n - 1) / 2) % 2) r = -r;
    return r;
}

/// Content-free part of f with positive leading coefficient.
inline PolyZ primitive_part(const PolyZ& f) {
    if (f.is_zero()) return f;
    mpz_class g = 0;
    for (const auto& c : f.coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (f.leading() < 0) g = -g;
    std::vector<mpz_class> r(f.coeffs());
    for (auto& c : r) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    return PolyZ(std::move(r));
}

/// Pseudo-remainder prem(a, b) = lc(b)^(deg a - deg b + 1) a mod b.
inline PolyZ pseudo_remainder(const PolyZ& a, const PolyZ& b) {
    if (b.is_zero()) throw std::domain_error("pseudo-remainder by zero");
    std::vector<mpz_class> r(a.coeffs());
    const int db = b.degree();
    const mpz_class& lb = b.leading();
    int steps = std::max(a.degree() - db + 1, 0);
    while (static_cast<int>(r.size()) - 1 >= db && !r.empty()) {
        const mpz_class lr = r.back();
        const std::size_t shift = r.size() - 1 - static_cast<std::size_t>(db);
        for (auto& c : r) c *= lb;
        for (int i = 0; i <= db; ++i) r[shift + static_cast<std::size_t>(i)] -= lr * b[static_cast<std::size_t>(i)];
        r.pop_back();
        while (!r.empty() && r.back() == 0) r.pop_back();
        --steps;
    }
    for (; steps > 0; --steps)
        for (auto& c : r) c *= lb;
    return PolyZ(std::move(r));
}

/// gcd over Q[t], returned primitive in Z[t] with positive leading coefficient
/// (primitive polynomial remainder sequence).
inline PolyZ gcd(PolyZ a, PolyZ b) {
    a = primitive_part(a);
    b = primitive_part(b);
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        PolyZ r = primitive_part(pseudo_remainder(a, b));
        a = std::move(b);
        b = std::move(r);
    }
    return primitive_part(a);
}

/// Exact quotient a / b in Z[t]; throws if b does not divide a.
inline PolyZ exact_div(const PolyZ& a, const PolyZ& b) {
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    std::vector<mpz_class> r(a.coeffs());
    const int db = b.degree();
    if (a.degree() < db) {
        if (a.is_zero()) return {};
        throw std::domain_error("inexact polynomial division");
    }
    std::vector<mpz_class> q(static_cast<std::size_t>(a.degree() - db + 1), 0);
    for (int k = a.degree() - db; k >= 0; --k) {
        mpz_class& top = r[static_cast<std::size_t>(k + db)];
        if (!mpz_divisible_p(top.get_mpz_t(), b.leading().get_mpz_t())) throw std::domain_error("inexact polynomial division");
        mpz_class c;
        mpz_divexact(c.get_mpz_t(), top.get_mpz_t(), b.leading().get_mpz_t());
        q[static_cast<std::size_t>(k)] = c;
        for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(k + i)] -= c * b[static_cast<std::size_t>(i)];
    }
    for (const auto& c : r)
        if (c != 0) throw std::domain_error("inexact polynomial division");
    return PolyZ(std::move(q));
}

/// Whether f has no repeated factor over Q. A squarefree reduction modulo a
/// prime not dividing lc(f) settles it; otherwise the exact gcd(f, f') decides.
inline bool is_squarefree(const PolyZ& f) {
    if (f.degree() < 1) return true;
    for (u64 p : {1000003ULL, 1000033ULL, 1000037ULL}) {
        if (mpz_divisible_ui_p(f.leading().get_mpz_t(), p)) continue;
        const Field fp(p);
        const PolyFq g = reduce(f, fp);
        if (gcd(g, derivative(g)).degree() == 0) return true;
    }
    return gcd(f, derivative(f)).degree() == 0;
}

/// f / gcd(f, f'), primitive with positive leading coefficient.
inline PolyZ squarefree_part(const PolyZ& f) {
    if (f.degree() < 1) return f;
    if (is_squarefree(f)) return primitive_part(f);
    return primitive_part(exact_div(primitive_part(f), gcd(f, derivative(f))));
}

}  // namespace cpl
