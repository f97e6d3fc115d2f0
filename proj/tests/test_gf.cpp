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

#include <charpoly_lab/gf.hpp>

#include <gtest/gtest.h>

#include <complex>
#include <numbers>
#include <random>
#include <vector>

using namespace cpl;

namespace {

// Oracle: a monic polynomial of degree 2 or 3 over F_p is irreducible iff it
// has no root in F_p.
bool has_root(const std::vector<u64>& f, u64 p) {
    for (u64 x = 0; x < p; ++x) {
        u64 acc = 0;
        for (std::size_t i = f.size(); i-- > 0;) acc = (acc * x + f[i]) % p;
        if (acc == 0) return true;
    }
    return false;
}

std::vector<u64> least_by_root_search(u64 p, unsigned k) {
    // (c_0, ..., c_{k-1}) lexicographic, c_0 most significant
    std::vector<u64> best;
    for (u64 c0 = 0; c0 < p; ++c0)
        for (u64 c1 = 0; c1 < p; ++c1)
            for (u64 c2 = 0; c2 < (k == 3 ? p : 1); ++c2) {
                std::vector<u64> f = k == 2 ? std::vector<u64>{c0, c1, 1} : std::vector<u64>{c0, c1, c2, 1};
                if (!has_root(f, p)) return f;
            }
    return best;
}

}  // namespace

TEST(Field, PrimeFieldHasNoModulus) {
    Field f(2, 1);
    EXPECT_EQ(f.order(), 2u);
    EXPECT_TRUE(f.modulus().empty());
}

TEST(Field, ModulusIsLeastIrreducible) {
    EXPECT_EQ(Field(2, 2).modulus(), (std::vector<u64>{1, 1, 1}));
    EXPECT_EQ(Field(3, 2).modulus(), (std::vector<u64>{1, 0, 1}));
    for (u64 p : {2u, 3u, 5u, 7u})
        for (unsigned k : {2u, 3u}) EXPECT_EQ(Field(p, k).modulus(), least_by_root_search(p, k)) << p << "^" << k;
}

TEST(Field, RejectsBadParameters) {
    EXPECT_THROW(Field(4, 1), std::invalid_argument);
    EXPECT_THROW(Field(1, 1), std::invalid_argument);
    EXPECT_THROW(Field(2, 0), std::invalid_argument);
    EXPECT_THROW(Field(2, 63), std::invalid_argument);
    EXPECT_NO_THROW(Field(2, 62));
}

TEST(Field, ParseSpec) {
    EXPECT_EQ(parse_field_spec("q=3^2").order(), 9u);
    EXPECT_EQ(parse_field_spec("q=49").degree(), 2u);
    EXPECT_EQ(parse_field_spec("7").characteristic(), 7u);
    EXPECT_EQ(parse_field_spec("q=8").degree(), 3u);
    EXPECT_THROW(parse_field_spec("q=12"), std::invalid_argument);
    EXPECT_THROW(parse_field_spec("q=abc"), std::invalid_argument);
    EXPECT_THROW(parse_field_spec("q=6^1"), std::invalid_argument);
}

TEST(Field, Arithmetic) {
    Field f4(2, 2);
    const FieldElem t{2}, t1{3};  // t and t+1
    EXPECT_EQ(f4.mul(t, t1), f4.one());
    Field f5(5);
    EXPECT_EQ(f5.inv(f5.from_int(2)), f5.from_int(3));
    EXPECT_EQ(f5.from_int(-1), f5.from_int(4));
    EXPECT_THROW(f5.inv(f5.zero()), std::domain_error);
    for (u64 c = 0; c < 4; ++c) EXPECT_EQ(f4.add({c}, f4.zero()), FieldElem{c});
}

TEST(Field, LargePrime) {
    const u64 p = (1ULL << 61) - 1;
    Field f(p);
    const FieldElem a = f.from_int(123456789), b = f.sub(f.zero(), f.one());
    EXPECT_EQ(f.mul(b, b), f.one());
    EXPECT_EQ(f.mul(a, f.inv(a)), f.one());
    EXPECT_EQ(f.pow(a, p - 1), f.one());
}

TEST(Field, FrobeniusIdentityExhaustive) {
    for (u64 q = 2; q <= 64; ++q) {
        auto pk = detail::prime_power(q);
        if (!pk) continue;
        Field f(pk->first, pk->second);
        for (u64 c = 0; c < q; ++c) EXPECT_EQ(f.pow({c}, q), FieldElem{c}) << "q=" << q << " a=" << c;
    }
}

TEST(Field, RingAxiomsOnRandomTriples) {
    std::mt19937_64 rng(1);
    for (u64 q : {4u, 8u, 9u, 25u, 27u, 49u, 101u}) {
        auto pk = detail::prime_power(q);
        Field f(pk->first, pk->second);
        for (int i = 0; i < 300; ++i) {
            FieldElem a{rng() % q}, b{rng() % q}, c{rng() % q};
            EXPECT_EQ(f.mul(a, b), f.mul(b, a));
            EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            EXPECT_EQ(f.sub(f.add(a, b), b), a);
            if (a.code) {
                EXPECT_EQ(f.mul(f.inv(a), a), f.one());
            }
        }
    }
}

TEST(Field, Trace) {
    Field f4(2, 2);
    EXPECT_EQ(f4.trace(f4.zero()), 0u);
    EXPECT_EQ(f4.trace(f4.one()), 0u);
    EXPECT_EQ(f4.trace(FieldElem{2}), 1u);
    for (u64 c = 0; c < 4; ++c) {
        const FieldElem x{c};
        EXPECT_EQ(FieldElem{f4.trace(x)}, f4.add(x, f4.mul(x, x)));
    }
    Field f7(7);
    for (u64 c = 0; c < 7; ++c) EXPECT_EQ(f7.trace({c}), c);
}

TEST(Field, TraceMatchesFrobeniusSum) {
    for (u64 q : {8u, 9u, 27u, 16u, 25u}) {
        auto pk = detail::prime_power(q);
        Field f(pk->first, pk->second);
        for (u64 c = 0; c < q; ++c) {
            FieldElem acc = f.zero(), x{c};
            for (unsigned i = 0; i < f.degree(); ++i) {
                acc = f.add(acc, x);
                x = f.pow(x, f.characteristic());
            }
            EXPECT_EQ(acc.code, f.trace({c}));
        }
    }
}

TEST(Field, Character) {
    Field f2(2);
    EXPECT_EQ(f2.character(f2.zero()), std::complex<double>(1, 0));
    EXPECT_EQ(f2.character(f2.one()), std::complex<double>(-1, 0));
    Field f5(5);
    const auto z = f5.character(f5.one());
    EXPECT_NEAR(z.real(), std::cos(2 * std::numbers::pi / 5), 1e-15);
    EXPECT_NEAR(z.imag(), std::sin(2 * std::numbers::pi / 5), 1e-15);
    Field f4(2, 2);
    EXPECT_EQ(f4.character(FieldElem{2}), std::complex<double>(-1, 0));
}

TEST(Field, CharacterIsNontrivialAndAdditive) {
    for (u64 q = 2; q <= 64; ++q) {
        auto pk = detail::prime_power(q);
        if (!pk) continue;
        Field f(pk->first, pk->second);
        std::complex<double> sum = 0;
        for (u64 c = 0; c < q; ++c) sum += f.character({c});
        EXPECT_LT(std::abs(sum), 1e-12) << "q=" << q;
        for (u64 a = 0; a < q; a += 3)
            for (u64 b = 0; b < q; b += 5)
                EXPECT_LT(std::abs(f.character(f.add({a}, {b})) - f.character({a}) * f.character({b})), 1e-12);
    }
}
