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

#include <charpoly_lab/linalg.hpp>

#include <gtest/gtest.h>

#include <random>
#include <vector>

using namespace cpl;

namespace {

// Oracle: det(tI - M) by Laplace expansion along the first row, with
// polynomial entries. Exponential, used for n <= 5.
template <class Poly, class Entry>
Poly laplace_det(const std::vector<std::vector<Poly>>& a) {
    const std::size_t n = a.size();
    if (n == 1) return a[0][0];
    Poly acc = a[0][0] - a[0][0];
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<Poly>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Poly> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(a[i][k]);
            minor.push_back(row);
        }
        const Poly term = a[0][j] * laplace_det<Poly, Entry>(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

PolyFq cofactor_charpoly(const MatFq& m) {
    const Field& f = m.field();
    std::vector<std::vector<PolyFq>> a(m.rows(), std::vector<PolyFq>(m.rows(), PolyFq(f)));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.rows(); ++j) {
            a[i][j] = PolyFq::constant(f, f.neg(m.at(i, j)));
            if (i == j) a[i][j] = a[i][j] + PolyFq::x(f);
        }
    return laplace_det<PolyFq, FieldElem>(a);
}

PolyZ cofactor_charpoly(const MatZ& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<PolyZ>> a(n, std::vector<PolyZ>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a[i][j] = PolyZ(std::vector<mpz_class>{-m.at(i, j)});
            if (i == j) a[i][j] = a[i][j] + PolyZ({0, 1});
        }
    return laplace_det<PolyZ, mpz_class>(a);
}

MatFq random_mat(const Field& f, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::vector<u64> c(rows * cols);
    for (auto& v : c) v = rng() % f.order();
    return MatFq::from_codes(f, rows, cols, std::move(c));
}

MatZ random_pm1(std::size_t n, std::mt19937_64& rng) {
    MatZ m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = (rng() & 1) ? 1 : -1;
    return m;
}

}  // namespace

TEST(Linalg, CharpolyFqExamples) {
    Field f2(2), f3(3);
    EXPECT_EQ(charpoly(MatFq::identity(f2, 2)), PolyFq::from_codes(f2, {1, 0, 1}));
    EXPECT_EQ(charpoly(parse_matrix(f3, "0,1;1,0")), PolyFq::from_codes(f3, {2, 0, 1}));
    EXPECT_EQ(charpoly(MatFq(f3, 0)), PolyFq::one(f3));
}

TEST(Linalg, CharpolyFqMatchesCofactorOracle) {
    std::mt19937_64 rng(1);
    for (u64 q : {2u, 3u, 4u, 7u, 9u}) {
        auto pk = detail::prime_power(q);
        Field f(pk->first, pk->second);
        for (std::size_t n = 1; n <= 5; ++n)
            for (int i = 0; i < 20; ++i) {
                const MatFq m = random_mat(f, n, n, rng);
                EXPECT_EQ(charpoly(m), cofactor_charpoly(m));
            }
    }
}

TEST(Linalg, CharpolyZExamples) {
    EXPECT_EQ(charpoly(parse_matrix_z("1,1;1,1")), PolyZ({0, -2, 1}));
    EXPECT_EQ(charpoly(parse_matrix_z("0,1;1,0")), PolyZ({-1, 0, 1}));
    MatZ d(4);
    for (int i = 0; i < 4; ++i) d.at(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = i + 1;
    EXPECT_EQ(charpoly(d), PolyZ({-1, 1}) * PolyZ({-2, 1}) * PolyZ({-3, 1}) * PolyZ({-4, 1}));
}

TEST(Linalg, CharpolyZMatchesCofactorOracle) {
    std::mt19937_64 rng(2);
    for (std::size_t n = 1; n <= 5; ++n)
        for (int i = 0; i < 20; ++i) {
            MatZ m(n);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) m.at(a, b) = static_cast<long>(rng() % 21) - 10;
            EXPECT_EQ(charpoly(m), cofactor_charpoly(m));
        }
}

TEST(Linalg, CharpolyZReducesToCharpolyFq) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const MatZ m = random_pm1(1 + rng() % 20, rng);
        const PolyZ phi = charpoly(m);
        EXPECT_TRUE(phi.is_monic());
        for (u64 p : {2u, 3u, 5u, 7u, 101u}) {
            const Field f(p);
            EXPECT_EQ(reduce(phi, f), charpoly(reduce(m, f)));
        }
    }
}

TEST(Linalg, DetMatchesConstantTerm) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 500; ++i) {
        const std::size_t n = 1 + rng() % 8;
        const u64 q = std::vector<u64>{2, 3, 4, 5, 9, 13}[rng() % 6];
        auto pk = detail::prime_power(q);
        const Field f(pk->first, pk->second);
        const MatFq m = random_mat(f, n, n, rng);
        const FieldElem c0 = charpoly(m)[0];
        EXPECT_EQ(det(m), n % 2 ? f.neg(c0) : c0);
        EXPECT_EQ(det(m) != f.zero(), rank(m) == n);
        EXPECT_EQ(is_nonsingular(m), rank(m) == n);

        const MatZ z = random_pm1(n, rng);
        const mpz_class dz = det_bareiss(z.entries(), n);
        const mpz_class cz = charpoly(z)[0];
        EXPECT_EQ(dz, n % 2 ? mpz_class(-cz) : cz);
    }
}

TEST(Linalg, RankExamples) {
    Field f2(2);
    EXPECT_EQ(rank(MatFq(f2, 3, 4)), 0u);
    EXPECT_EQ(kernel_dim(MatFq(f2, 3, 4)), 4u);
    for (std::size_t n : {1u, 4u, 7u}) {
        EXPECT_EQ(rank(MatFq::identity(f2, n)), n);
        EXPECT_EQ(det(MatFq::identity(Field(5), n)), FieldElem{1});
    }
    int full = 0;
    for (u64 code = 0; code < 16; ++code) {
        const MatFq m = MatFq::from_codes(f2, 2, 2, {code & 1, (code >> 1) & 1, (code >> 2) & 1, (code >> 3) & 1});
        full += rank(m) == 2;
    }
    EXPECT_EQ(full, 6);
}

TEST(Linalg, RankNullityAndKernelBasis) {
    std::mt19937_64 rng(5);
    for (u64 q : {2u, 3u, 4u, 8u}) {
        auto pk = detail::prime_power(q);
        const Field f(pk->first, pk->second);
        for (int i = 0; i < 50; ++i) {
            const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 6;
            MatFq m = random_mat(f, r, c, rng);
            if (i % 3 == 0 && r > 1)  // duplicate a row to force deficiency
                for (std::size_t j = 0; j < c; ++j) m.set(r - 1, j, m.at(0, j));
            const MatFq k = kernel_basis(m);
            EXPECT_EQ(rank(m) + kernel_dim(m), c);
            EXPECT_EQ(k.rows(), kernel_dim(m));
            EXPECT_EQ(rank(k), k.rows());
            for (std::size_t v = 0; v < k.rows(); ++v)
                for (std::size_t row = 0; row < r; ++row) {
                    FieldElem dot = f.zero();
                    for (std::size_t j = 0; j < c; ++j) dot = f.add(dot, f.mul(m.at(row, j), k.at(v, j)));
                    EXPECT_EQ(dot, f.zero());
                }
        }
    }
}

TEST(Linalg, EigenvaluesAreRootsOfCharpoly) {
    std::mt19937_64 rng(6);
    for (u64 q = 2; q <= 9; ++q) {
        auto pk = detail::prime_power(q);
        if (!pk) continue;
        const Field f(pk->first, pk->second);
        for (std::size_t n = 1; n <= 5; ++n)
            for (int i = 0; i < 10; ++i) {
                const MatFq m = random_mat(f, n, n, rng);
                const PolyFq phi = charpoly(m);
                for (u64 l = 0; l < q; ++l)
                    EXPECT_EQ(phi.evaluate({l}) == f.zero(), kernel_dim(m.shifted({l})) >= 1);
            }
    }
}

TEST(Linalg, HadamardBound) {
    EXPECT_EQ(hadamard_disc_bound(2, 1), 16);
    EXPECT_EQ(hadamard_disc_bound(1, 7), 1);
    EXPECT_EQ(discriminant(charpoly(parse_matrix_z("0,1;1,0"))), 4);
    EXPECT_THROW(hadamard_disc_bound(0, 1), std::invalid_argument);
}

TEST(Linalg, DiscriminantFormulas) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const long a = static_cast<long>(rng() % 11) - 5, b = static_cast<long>(rng() % 11) - 5,
                   c = 1 + static_cast<long>(rng() % 5), d = static_cast<long>(rng() % 11) - 5;
        EXPECT_EQ(discriminant(PolyZ({a, b, c})), b * b - 4 * a * c);
        // monic cubic t^3 + b t^2 + a t + d... use t^3 + p t + q form
        const mpz_class p = a, qq = d;
        EXPECT_EQ(discriminant(PolyZ({d, a, 0, 1})), -4 * p * p * p - 27 * qq * qq);
    }
}

TEST(Linalg, DiscriminantWithinHadamardBound) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 1 + rng() % 6;
        const long h = 1 + static_cast<long>(rng() % 3);
        MatZ m(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) m.at(a, b) = static_cast<long>(rng() % (2 * h + 1)) - h;
        const PolyZ phi = charpoly(m);
        const mpz_class bound = hadamard_disc_bound(n, m.height() == 0 ? mpz_class(1) : m.height());
        EXPECT_LE(abs(discriminant(phi)), bound);
        EXPECT_LE(abs(discriminant(squarefree_part(phi))), bound);
    }
}

TEST(Linalg, IntegerGcdAndSquarefreePart) {
    const PolyZ a({1, 0, 1}), b({-1, -1, 0, 1});
    EXPECT_EQ(gcd(a * a * b, a * PolyZ({3, 1})), a);
    EXPECT_TRUE(is_squarefree(a * b));
    EXPECT_FALSE(is_squarefree(a * a * b));
    EXPECT_EQ(squarefree_part(a * a * b * b * b), a * b);
    EXPECT_EQ(exact_div(a * b, b), a);
    EXPECT_THROW(exact_div(a, b), std::domain_error);
}
