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

#include <charpoly_lab/exact.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace cpl;

namespace {

Field field_of(u64 q) {
    auto pk = detail::prime_power(q);
    return Field(pk->first, pk->second);
}

mpz_class upow(u64 q, unsigned long e) { return mpz_pow(mpz_class(std::to_string(q)), e); }

// Set partitions of an m-set via Stirling numbers of the second kind.
mpz_class bell_oracle(unsigned m) {
    std::vector<std::vector<mpz_class>> s(m + 1, std::vector<mpz_class>(m + 1, 0));
    s[0][0] = 1;
    for (unsigned i = 1; i <= m; ++i)
        for (unsigned k = 1; k <= i; ++k) s[i][k] = k * s[i - 1][k] + s[i - 1][k - 1];
    mpz_class b = 0;
    for (unsigned k = 0; k <= m; ++k) b += s[m][k];
    return b;
}

}  // namespace

TEST(Exact, FqnExamples) {
    EXPECT_EQ(f_qn(2, 2), mpq_class(3, 8));
    EXPECT_EQ(f_qn(7, 0), 1);
    EXPECT_EQ(f_qn(2, 2) * 16, 6);
    const auto t = enumerate_types(Field(2), 2);
    EXPECT_EQ(t.total_gl, 6);
    EXPECT_EQ(f_qn(3, 2) * 81, enumerate_types(Field(3), 2).total_gl);
}

TEST(Exact, ReinerExamples) {
    EXPECT_EQ(reiner_count(2, 2, {{2, 1}}), 2);
    EXPECT_EQ(reiner_count(2, 2, {{1, 2}}), 4);
    EXPECT_EQ(reiner_count(2, 1, {{1, 1}}), 1);
    EXPECT_THROW(reiner_count(2, 3, {{1, 2}}), std::invalid_argument);
}

TEST(Exact, ReinerMatchesEnumeration) {
    for (auto [q, n] : std::vector<std::pair<u64, unsigned>>{{2, 1}, {2, 2}, {2, 3}, {3, 2}, {4, 2}, {2, 4}}) {
        const auto rows = reiner_verify(field_of(q), n);
        mpz_class total = 0;
        for (const auto& r : rows) {
            EXPECT_TRUE(r.match) << "q=" << q << " n=" << n << " shape " << shape_to_string(r.shape);
            total += r.formula;
        }
        EXPECT_EQ(rows.size(), upow(q, n).get_ui());
        EXPECT_EQ(total, upow(q, n * n));
    }
}

TEST(Exact, ShapeCountsSumToAllMatrices) {
    for (u64 q : {2u, 3u, 4u, 5u, 7u})
        for (unsigned n = 0; n <= 7; ++n) {
            mpz_class all = 0, gl = 0;
            for (const auto& s : enumerate_shapes(q, n)) all += reiner_count(q, n, s) * namings(q, s);
            for (const auto& s : enumerate_shapes(q, n, true)) gl += reiner_count(q, n, s) * namings(q, s, true);
            EXPECT_EQ(all, upow(q, n * n));
            EXPECT_EQ(mpq_class(gl), f_qn(mpz_class(static_cast<unsigned long>(q)), n) * mpq_class(upow(q, n * n)));
        }
}

TEST(Exact, EnumerateTypesExamples) {
    const auto t = enumerate_types(Field(2), 2);
    EXPECT_EQ(t.total, 16);
    EXPECT_EQ(t.named.at(NamedType{{{1, 1, 1}, 1}}), 2);
    EXPECT_EQ(t.partitions.at(Partition{1, 1}), 14);
    EXPECT_EQ(t.total_gl, 6);

    const auto t1 = enumerate_types(Field(2), 1);
    EXPECT_EQ(t1.named.size(), 2u);
    EXPECT_EQ(t1.named.at(NamedType{{{0, 1}, 1}}), 1);
    EXPECT_EQ(t1.named.at(NamedType{{{1, 1}, 1}}), 1);
    EXPECT_THROW(enumerate_types(Field(2), 5), std::invalid_argument);
}

TEST(Exact, EnumerationIndependentOfThreads) {
    const auto a = enumerate_types(Field(3), 2, 1), b = enumerate_types(Field(3), 2, 3);
    EXPECT_EQ(a.named, b.named);
    EXPECT_EQ(a.partitions_gl, b.partitions_gl);
}

TEST(Exact, PartitionLawMatchesEnumeration) {
    for (auto [q, n] : std::vector<std::pair<u64, unsigned>>{{2, 2}, {2, 3}, {3, 2}, {4, 2}, {2, 4}}) {
        const auto t = enumerate_types(field_of(q), n);
        EXPECT_EQ(partition_law(q, n), tally_law(t));
        EXPECT_EQ(partition_law(q, n, true), tally_law(t, true));
    }
}

TEST(Exact, BellNumbers) {
    EXPECT_EQ(bell(0), 1);
    EXPECT_EQ(bell(2), 2);
    EXPECT_EQ(bell(4), 15);
    for (unsigned m = 0; m <= 30; ++m) EXPECT_EQ(bell(m), bell_oracle(m));
}

TEST(Exact, ZetaExamples) {
    const auto z = zd_law(2, 1);
    EXPECT_NEAR(z.zeta, 3.4627466, 1e-7);
    EXPECT_NEAR(z.zeta, 1.0 / 0.2887880950866024, 1e-10);
    // zeta_d = 1 + Q^{-1} + 2 Q^{-2} + O(Q^{-3}) with Q = q^d.
    const double big_q = std::pow(2.0, 10);
    const auto z10 = zd_law(2, 10);
    EXPECT_GT(z10.zeta - 1 - 1 / big_q, 0.0);
    EXPECT_LT(z10.zeta - 1 - 1 / big_q, 3 / (big_q * big_q));
    EXPECT_NEAR(z.probability[0], std::pow(z.zeta, -z.irreducibles), 1e-15);
}

TEST(Exact, ZetaSeriesMatchesEulerProduct) {
    for (u64 q : {2u, 3u, 5u, 7u, 9u})
        for (unsigned d = 1; d <= 8; ++d) {
            const auto z = zd_law(q, d);
            EXPECT_NEAR(z.zeta, z.zeta_euler, 1e-10 * z.zeta);
        }
}

TEST(Exact, ZdLawIsAProbabilityLaw) {
    for (u64 q = 2; q <= 9; ++q) {
        if (!detail::prime_power(q)) continue;
        for (unsigned d = 1; d <= 12; ++d) {
            const auto z = zd_law(q, d);
            double sum = 0;
            for (double p : z.probability) {
                EXPECT_GE(p, 0.0);
                sum += p;
            }
            EXPECT_NEAR(sum, 1.0, 1e-10) << "q=" << q << " d=" << d;
        }
    }
}

TEST(Exact, ZdLawMatchesDirectPowerSeries) {
    // For small integer I(d), raise the normalized series to the I(d)-th power
    // by repeated convolution.
    for (auto [q, d] : std::vector<std::pair<u64, unsigned>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {4, 1}, {3, 2}}) {
        const auto z = zd_law(q, d, 30);
        const double big_q = std::pow(static_cast<double>(q), d);
        std::vector<double> a(31);
        double prod = 1;
        for (unsigned c = 0; c <= 30; ++c) {
            if (c) prod *= 1 - std::pow(big_q, -static_cast<double>(c));
            a[c] = std::pow(big_q, -static_cast<double>(c)) / prod / z.zeta;
        }
        std::vector<double> h(31, 0.0);
        h[0] = 1;
        for (int rep = 0; rep < static_cast<int>(z.irreducibles); ++rep) {
            std::vector<double> next(31, 0.0);
            for (unsigned i = 0; i <= 30; ++i)
                for (unsigned j = 0; i + j <= 30; ++j) next[i + j] += h[i] * a[j];
            h = next;
        }
        for (unsigned c = 0; c <= 30; ++c) EXPECT_NEAR(z.probability[c], h[c], 1e-14 + 1e-12 * h[c]);
    }
}

TEST(Exact, ConditioningRelationRatioIsConstant) {
    for (auto [q, n] : std::vector<std::pair<u64, unsigned>>{{2, 2}, {2, 3}, {3, 2}, {2, 4}}) {
        const auto r = cr_ratio_test(tally_law(enumerate_types(field_of(q), n)), q, n);
        EXPECT_GT(r.ratios.size(), 1u);
        EXPECT_LT(r.relative_spread, 1e-8);
        EXPECT_NEAR(r.min_ratio / r.beta_predicted, 1.0, 1e-10);
    }
    const auto big = cr_ratio_test(partition_law(3, 9), 3, 9);
    EXPECT_LT(big.relative_spread, 1e-8);
}

TEST(Exact, LimitConstants) {
    EXPECT_NEAR(euler_tail_product(3), 0.560126, 1e-6);
    EXPECT_NEAR(euler_tail_product(5), 0.760333, 1e-6);
    EXPECT_NEAR(euler_tail_product(2, 2), 0.577576, 1e-6);
    EXPECT_NEAR(euler_tail_product(2), 0.2887880950866024, 1e-15);
}

TEST(Exact, PartitionHelpers) {
    EXPECT_EQ(partition_of({{2, 1}, {1, 3}}), (Partition{2, 1, 1, 1}));
    EXPECT_EQ(truncate_partition({5, 3, 3, 1}, 3), (Partition{5, 3, 3}));
    EXPECT_TRUE(truncate_partition({2, 1}, 3).empty());
    EXPECT_EQ(partition_to_string({3, 1}), "(3,1)");
}
