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

#include <charpoly_lab/primes.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace cpl;

namespace {

// Roots of phi mod p by evaluating at every residue.
unsigned roots_by_evaluation(const PolyZ& phi, u64 p) {
    const Field f(p);
    const PolyFq red = reduce(phi, f);
    unsigned r = 0;
    for (u64 x = 0; x < p; ++x) r += red.evaluate({x}) == f.zero();
    return r;
}

}  // namespace

TEST(Primes, SieveWindowExamples) {
    EXPECT_EQ(sieve_window(std::log(10.0)).primes, (std::vector<u64>{7}));
    EXPECT_EQ(sieve_window(std::log(4.0)).primes, (std::vector<u64>{3}));
    EXPECT_EQ(sieve_window(std::log(8.0)).primes, (std::vector<u64>{5, 7}));
    EXPECT_TRUE(sieve_window(12).cross_checked);
    EXPECT_FALSE(sieve_window(15.5).cross_checked);
    EXPECT_THROW(sieve_window(16.01), std::invalid_argument);
    for (double x = std::log(3.0); x <= 12; x += 0.173) EXPECT_FALSE(sieve_window(x).primes.empty()) << x;
}

TEST(Primes, SieveMatchesPrimalityTest) {
    for (double x : {2.0, 5.5, 7.0, 9.3}) {
        const auto w = sieve_window(x);
        std::vector<u64> oracle;
        for (u64 n = 2; n <= static_cast<u64>(std::exp(x)); ++n)
            if (detail::is_prime_u64(n) && std::log(static_cast<double>(n)) > x - std::numbers::ln2) oracle.push_back(n);
        EXPECT_EQ(w.primes, oracle);
    }
    EXPECT_EQ(segmented_primes(90, 110, 7), (std::vector<u64>{97, 101, 103, 107, 109}));
    EXPECT_EQ(primes_up_to(1000).size(), 168u);
}

TEST(Primes, WeightFormula) {
    const double x = 9.0;
    EXPECT_DOUBLE_EQ(weight(x, x), 2 * x * std::exp(-x));
    EXPECT_EQ(weight(x - std::numbers::ln2, x), 0.0);
    EXPECT_EQ(weight(x / 2, x), 0.0);
    EXPECT_EQ(weight(x + 1e-9, x), 0.0);
    EXPECT_DOUBLE_EQ(weight(x - 0.1, x), (x - 0.1) * 2 * std::exp(-x));
}

TEST(Primes, PitUnitCheck) {
    EXPECT_NEAR(pit_unit_check(std::log(10.0)), 2 * std::log(7.0) / 10, 1e-12);
    const double v12 = pit_unit_check(12), v14 = pit_unit_check(14);
    EXPECT_NEAR(v12, 1.0, 0.02);
    EXPECT_NEAR(v12, 0.99810324498516778, 1e-12);  // regression anchor
    EXPECT_LT(std::abs(v14 - 1), std::abs(v12 - 1));
}

TEST(Primes, LinearPolynomialGivesUnitSum) {
    for (double x : {6.0, 9.0, 12.0}) {
        EXPECT_EQ(weighted_moment(PolyZ({-3, 1}), 1, x).weighted_sum, pit_unit_check(x));
        EXPECT_EQ(weighted_moment(PolyZ({5, 1}), 4, x).weighted_sum, pit_unit_check(x));
    }
}

TEST(Primes, RootCountsMatchEvaluation) {
    const std::vector<PolyZ> polys{PolyZ({1, 0, 1}), PolyZ({-1, -1, 0, 1}), PolyZ({1, 0, 1}) * PolyZ({-1, -1, 0, 1}), PolyZ({-2, 0, 1}),
                                   PolyZ({0, -1, 0, 1}), PolyZ({1, 1, 1, 1, 1})};
    for (const auto& phi : polys) {
        const auto rep = weighted_moment(phi, 1, 6.0, true);
        ASSERT_EQ(rep.per_prime.size(), rep.primes);
        for (const auto& r : rep.per_prime) {
            EXPECT_EQ(r.roots, roots_by_evaluation(phi, r.p)) << phi.to_string() << " p=" << r.p;
            EXPECT_LE(r.roots, static_cast<unsigned>(phi.degree()));
            EXPECT_EQ(r.squarefree, discriminant(phi) % static_cast<unsigned long>(r.p) != 0);
        }
    }
}

TEST(Primes, MomentExamples) {
    const PolyZ a({1, 0, 1}), b({-1, -1, 0, 1});
    const auto m1 = weighted_moment(a, 1, 12);
    EXPECT_NEAR(m1.weighted_sum, 1.0, 0.15);
    EXPECT_EQ(m1.bell_target, 1);
    const auto m2 = weighted_moment(a, 2, 12);
    EXPECT_NEAR(m2.weighted_sum, 2.0, 0.3);
    EXPECT_EQ(m2.bell_target, 2);
    EXPECT_NEAR(weighted_moment(a * b, 1, 13).weighted_sum, 2.0, 0.2);
    EXPECT_NEAR(weighted_moment(PolyZ({-2, 0, 1}), 1, 12).weighted_sum, 1.0, 0.15);
    EXPECT_LE(std::abs(weighted_moment(a, 1, 14).weighted_sum - 1), std::abs(weighted_moment(a, 1, 10).weighted_sum - 1));
}

TEST(Primes, DiscriminantPrimesCounted) {
    // (t - 1)(t - 4) has discriminant 9; the window (2, 4] holds only 3.
    const auto rep = weighted_moment(PolyZ({-1, 1}) * PolyZ({-4, 1}), 1, std::log(4.0), true);
    EXPECT_EQ(rep.discriminant_primes, 1u);
    EXPECT_EQ(rep.per_prime.at(0).roots, 1u);
}

TEST(Primes, DeterministicAcrossThreads) {
    const PolyZ phi({3, -1, 0, 2, 1});
    EXPECT_EQ(weighted_moment(phi, 3, 11, false, 1).weighted_sum, weighted_moment(phi, 3, 11, false, 3).weighted_sum);
}

TEST(Primes, RejectsBadInput) {
    EXPECT_THROW(weighted_moment(PolyZ({1, 0, 2}), 1, 5), std::invalid_argument);
    EXPECT_THROW(weighted_moment(PolyZ({1}), 1, 5), std::invalid_argument);
    EXPECT_THROW(weighted_moment(PolyZ({1, 1}), 0, 5), std::invalid_argument);
}
