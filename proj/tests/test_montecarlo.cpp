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

#include <charpoly_lab/montecarlo.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <map>
#include <vector>

using namespace cpl;

namespace {

// Exact law of a partition-valued sampler given as (partition -> probability).
void expect_matches_law(const std::vector<Partition>& samples, const std::map<Partition, double>& law, double sigmas) {
    std::map<Partition, u64> counts;
    for (const auto& p : samples) ++counts[p];
    const double n = static_cast<double>(samples.size());
    for (const auto& [p, c] : counts) EXPECT_TRUE(law.count(p)) << "impossible partition " << partition_to_string(p);
    for (const auto& [p, pr] : law) {
        const double freq = static_cast<double>(counts[p]) / n;
        const double se = std::sqrt(pr * (1 - pr) / n);
        EXPECT_LE(std::abs(freq - pr), sigmas * se + 1e-12) << partition_to_string(p);
    }
}

std::map<Partition, double> to_double(const std::map<Partition, mpq_class>& law) {
    std::map<Partition, double> out;
    for (const auto& [p, q] : law) out[p] = q.get_d();
    return out;
}

// Cycle-type law of S_n: P(lambda) = 1 / z_lambda.
std::map<Partition, double> cycle_type_law(unsigned n) {
    std::map<Partition, double> law;
    std::function<void(unsigned, unsigned, Partition&)> rec = [&](unsigned left, unsigned maxp, Partition& cur) {
        if (left == 0) {
            double z = 1;
            std::map<unsigned, unsigned> mult;
            for (unsigned x : cur) ++mult[x];
            for (auto [x, m] : mult) z *= std::pow(x, m) * std::tgamma(m + 1.0);
            law[cur] = 1 / z;
            return;
        }
        for (unsigned p = std::min(left, maxp); p >= 1; --p) {
            cur.push_back(p);
            rec(left - p, p, cur);
            cur.pop_back();
        }
    };
    Partition cur;
    rec(n, n, cur);
    return law;
}

// Factor-degree law of a uniformly random monic polynomial, by enumeration.
std::map<Partition, double> unipoly_law(const Field& f, unsigned n) {
    std::map<Partition, double> law;
    u64 total = 1;
    for (unsigned i = 0; i < n; ++i) total *= f.order();
    std::vector<u64> c(n + 1, 1);
    for (u64 idx = 0; idx < total; ++idx) {
        u64 r = idx;
        for (unsigned i = 0; i < n; ++i) {
            c[i] = r % f.order();
            r /= f.order();
        }
        law[factor_degrees(PolyFq::from_codes(f, c))] += 1.0 / static_cast<double>(total);
    }
    return law;
}

MeasureMatrix uniform_mm(u64 q, std::size_t n) { return MeasureMatrix::iid(n, MeasureFq::uniform(Field(q))); }

}  // namespace

TEST(MonteCarlo, SampleMatrixExamples) {
    const Field f5(5);
    const auto zero = sample_matrix(MeasureMatrix::iid(3, MeasureFq::point(f5, {0})), 9);
    EXPECT_EQ(zero, MatFq(f5, 3));
    EXPECT_EQ(sample_matrix(uniform_mm(5, 4), 3), sample_matrix(uniform_mm(5, 4), 3));

    const MatrixSampler s(uniform_mm(2, 2));
    std::vector<u64> freq(16, 0);
    const u64 trials = 100000;
    for (u64 i = 0; i < trials; ++i) {
        Rng rng = make_rng(42, i);
        const auto m = s.sample(rng);
        ++freq[m.codes()[0] | m.codes()[1] << 1 | m.codes()[2] << 2 | m.codes()[3] << 3];
    }
    const double se = std::sqrt(1.0 / 16 * 15 / 16 / trials);
    for (u64 c : freq) EXPECT_LE(std::abs(static_cast<double>(c) / trials - 1.0 / 16), 5 * se);
}

TEST(MonteCarlo, EntrySamplerFrequencies) {
    const Field f7(7);
    const auto mu = parse_measure("table:0:1/2,3:1/3,6:1/6", f7);
    const EntrySampler s(mu);
    std::vector<u64> freq(7, 0);
    Rng rng = make_rng(5, 0);
    const u64 trials = 200000;
    for (u64 i = 0; i < trials; ++i) ++freq[s(rng)];
    for (u64 x = 0; x < 7; ++x) {
        const double p = mu.weight({x}).get_d();
        EXPECT_LE(std::abs(static_cast<double>(freq[x]) / trials - p), 5 * std::sqrt(p * (1 - p) / trials) + 1e-12);
    }
    const IntegerSampler z(parse_measure_z("range:1..210"));
    for (int i = 0; i < 1000; ++i) {
        const long long v = z(rng);
        EXPECT_GE(v, 1);
        EXPECT_LE(v, 210);
    }
}

TEST(MonteCarlo, ShiftedDiagonal) {
    const Field f5(5);
    const auto pm = parse_measure("pm1", f5);
    const auto sh = shifted_diagonal(MeasureMatrix::iid(3, pm), {2});
    EXPECT_EQ(sh.at(1, 1), translate(pm, {3}));
    EXPECT_EQ(sh.at(1, 1).weight({2}), mpq_class(1, 2));
    EXPECT_EQ(sh.at(0, 1), pm);
}

TEST(MonteCarlo, NonsingularExactAndSampled) {
    EXPECT_EQ(exact_nonsingular(uniform_mm(2, 2)), mpq_class(3, 8));
    EXPECT_EQ(exact_nonsingular(uniform_mm(3, 2)), f_qn(3, 2));
    const Field f5(5);
    const auto biased = parse_measure("table:0:1/3,1:2/3", f5);
    EXPECT_EQ(exact_nonsingular(MeasureMatrix::iid(1, biased)), mpq_class(2, 3));
    const auto e = estimate_nonsingular(uniform_mm(2, 2), 100000, 7);
    EXPECT_LE(std::abs(e.value - 0.375), 4 * e.stderr_);
    EXPECT_NEAR(*e.target, 0.288788, 1e-6);
    const auto e1 = estimate_nonsingular(MeasureMatrix::iid(1, biased), 20000, 8);
    EXPECT_LE(std::abs(e1.value - 2.0 / 3), 4 * e1.stderr_);
    EXPECT_TRUE(e1.warnings.empty());
    EXPECT_FALSE(estimate_nonsingular(MeasureMatrix::iid(2, parse_measure("pm1", Field(2))), 10, 1).warnings.empty());
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
    const auto mm = uniform_mm(3, 8);
    const auto a = estimate_nonsingular(mm, 3000, 11, 1), b = estimate_nonsingular(mm, 3000, 11, 4);
    EXPECT_EQ(a.successes, b.successes);
    EXPECT_EQ(a.value, b.value);
    const auto pa = sample_partitions(PartitionSource::matrix, 6, Field(2), 500, 3, 1);
    const auto pb = sample_partitions(PartitionSource::matrix, 6, Field(2), 500, 3, 3);
    EXPECT_EQ(pa.partitions, pb.partitions);
    EXPECT_NE(estimate_nonsingular(mm, 3000, 12, 1).successes, a.successes);
}

TEST(MonteCarlo, RankFull) {
    const auto mm = uniform_mm(2, 6);
    EXPECT_EQ(estimate_rank_full(mm, 0, 100, 1).value, 1.0);
    EXPECT_EQ(estimate_rank_full(mm, 6, 4000, 9).successes, estimate_nonsingular(mm, 4000, 9).successes);
    EXPECT_NEAR(*estimate_rank_full(uniform_mm(2, 25), 24, 1, 1).target, 0.577576, 1e-6);
    // Rank k of k random rows of F_2^6: prod_{i=0}^{k-1} (1 - 2^{i-6}).
    const auto e = estimate_rank_full(mm, 3, 50000, 10);
    EXPECT_LE(std::abs(e.value - (1 - 1.0 / 64) * (1 - 2.0 / 64) * (1 - 4.0 / 64)), 4 * e.stderr_);
    EXPECT_THROW(estimate_rank_full(mm, 7, 10, 1), std::invalid_argument);
}

TEST(MonteCarlo, JointEigen) {
    const auto one = estimate_joint_eigen(uniform_mm(5, 1), {{3}}, 50000, 1);
    EXPECT_LE(std::abs(one.joint.value - 0.2), 4 * one.joint.stderr_);
    EXPECT_EQ(one.joint.successes, one.marginal[0].successes);

    const auto mm = uniform_mm(3, 4);
    const auto j = estimate_joint_eigen(mm, {{1}}, 40000, 2);
    const auto ns = estimate_nonsingular(shifted_diagonal(mm, {1}), 40000, 3);
    EXPECT_LE(std::abs(j.joint.value - (1 - ns.value)), 5 * std::hypot(j.joint.stderr_, ns.stderr_));

    const auto two = estimate_joint_eigen(uniform_mm(7, 6), {{1}, {2}}, 20000, 4);
    EXPECT_DOUBLE_EQ(two.reference, 1.0 / 36);
    EXPECT_LE(two.joint.successes, std::min(two.marginal[0].successes, two.marginal[1].successes));
    EXPECT_THROW(estimate_joint_eigen(mm, {{1}, {1}}, 10, 1), std::invalid_argument);
    EXPECT_THROW(estimate_joint_eigen(mm, {}, 10, 1), std::invalid_argument);
}

TEST(MonteCarlo, PartitionSamplerExamples) {
    for (u64 seed = 0; seed < 20; ++seed) EXPECT_EQ(sample_partition(PartitionSource::perm, 1, Field(2), seed), (Partition{1}));
    const auto s = sample_partitions(PartitionSource::unipoly, 2, Field(2), 40000, 1);
    expect_matches_law(s.partitions, {{{1, 1}, 0.75}, {{2}, 0.25}}, 4);
    EXPECT_EQ(parse_source("4"), PartitionSource::perm);
    EXPECT_EQ(parse_source("gl"), PartitionSource::gl);
    EXPECT_THROW(parse_source("x"), std::invalid_argument);
}

TEST(MonteCarlo, MatrixPartitionsMatchEnumeration) {
    const auto t = enumerate_types(Field(2), 3);
    expect_matches_law(sample_partitions(PartitionSource::matrix, 3, Field(2), 100000, 2).partitions, to_double(tally_law(t)), 4);
    expect_matches_law(sample_partitions(PartitionSource::gl, 3, Field(2), 50000, 3).partitions, to_double(tally_law(t, true)), 4);
    EXPECT_NEAR(tally_law(enumerate_types(Field(2), 2)).at({1, 1}).get_d(), 14.0 / 16, 1e-15);
}

TEST(MonteCarlo, PolynomialPermutationAndPoissonLaws) {
    const Field f3(3);
    expect_matches_law(sample_partitions(PartitionSource::unipoly, 4, f3, 50000, 4).partitions, unipoly_law(f3, 4), 4);
    const auto perm = cycle_type_law(6);
    expect_matches_law(sample_partitions(PartitionSource::perm, 6, f3, 50000, 5).partitions, perm, 4);
    // The conditioned Poisson law coincides with the cycle-type law.
    expect_matches_law(sample_partitions(PartitionSource::poisson, 6, f3, 50000, 6).partitions, perm, 4);
}

TEST(MonteCarlo, TvCompareBasics) {
    const Field f2(2);
    EXPECT_EQ(tv_compare(PartitionSource::perm, PartitionSource::perm, 10, f2, 1, 2000, 1).tv, 0.0);
    EXPECT_EQ(tv_compare(PartitionSource::perm, PartitionSource::poisson, 10, f2, 11, 2000, 1).tv, 0.0);
    const auto r = tv_compare(PartitionSource::unipoly, PartitionSource::perm, 6, f2, 1, 5000, 2);
    EXPECT_GT(r.tv, 0.0);
    EXPECT_GT(r.bootstrap_stderr, 0.0);
    EXPECT_THROW(tv_compare(PartitionSource::perm, PartitionSource::perm, 10, f2, 0, 10, 1), std::invalid_argument);
}

TEST(MonteCarlo, TruncationIsPushforward) {
    const auto s = sample_partitions(PartitionSource::perm, 12, Field(2), 3000, 8);
    for (unsigned r = 1; r <= 12; ++r) {
        const auto hr = truncated_histogram(s.partitions, r);
        std::map<Partition, u64> pushed;
        for (const auto& [p, c] : hr) pushed[truncate_partition(p, r + 1)] += c;
        EXPECT_EQ(pushed, truncated_histogram(s.partitions, r + 1));
    }
}
