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

#include <charpoly_lab/fqpoly.hpp>
#include <charpoly_lab/linalg.hpp>
#include <charpoly_lab/measures.hpp>
#include <charpoly_lab/montecarlo.hpp>
#include <charpoly_lab/primes.hpp>

#include <boost/dynamic_bitset.hpp>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpl {

/// Degrees of monic divisors of phi mod p: subset sums of the factor degrees
/// (with multiplicity).
struct DegreeSet {
    unsigned n = 0;
    u64 p = 0;
    bool squarefree = false;     // gcd(phi, phi') = 1 mod p
    Partition degrees;           // factor degrees mod p, descending
    boost::dynamic_bitset<> achievable;

    std::vector<unsigned> members() const {
        std::vector<unsigned> out;
        for (auto i = achievable.find_first(); i != boost::dynamic_bitset<>::npos; i = achievable.find_next(i))
            out.push_back(static_cast<unsigned>(i));
        return out;
    }
};

inline boost::dynamic_bitset<> subset_sums(unsigned n, const Partition& degrees) {
    boost::dynamic_bitset<> s(n + 1);
    s.set(0);
    for (unsigned d : degrees) s |= s << d;
    return s;
}

inline DegreeSet degree_set(const PolyZ& phi, u64 p) {
    if (!phi.is_monic()) throw std::invalid_argument("degree sets need a monic polynomial");
    if (phi.degree() < 1) throw std::invalid_argument("degree sets need degree >= 1");
    const Field f(p);
    const PolyFq red = reduce(phi, f);
    DegreeSet ds;
    ds.n = static_cast<unsigned>(phi.degree());
    ds.p = p;
    ds.squarefree = gcd(red, derivative(red)).degree() == 0;
    ds.degrees = factor_degrees(red);
    ds.achievable = subset_sums(ds.n, ds.degrees);
    return ds;
}

/// True iff the set is exactly {0, n}.
inline bool is_trivial(const boost::dynamic_bitset<>& s) {
    const std::size_t n = s.size() - 1;
    return s.count() == (n == 0 ? 1u : 2u) && s.test(0) && s.test(n);
}

enum class CertificateKind { none, irreducible, at_least_An };

inline std::string kind_name(CertificateKind k) {
    switch (k) {
        case CertificateKind::none: return "none";
        case CertificateKind::irreducible: return "irreducible";
        case CertificateKind::at_least_An: return "at_least_An";
    }
    return "?";
}

struct Witness {
    u64 p = 0;
    Partition degrees;
    bool squarefree = false;
    unsigned cycle = 0;  // prime cycle length, A_n witnesses only
};

struct Certificate {
    CertificateKind kind = CertificateKind::none;
    std::string poly;  // phi, low to high
    unsigned n = 0;
    std::vector<Witness> witnesses;
    std::vector<unsigned> residual;  // intersection of degree sets on refusal
    std::string reason;
    std::vector<std::string> justification;

    explicit operator bool() const { return kind != CertificateKind::none; }
};

/// Certifies irreducibility over Q by intersecting degree sets mod 2, 3, 5, ...
/// up to budget: a factor of degree 0 < d < n over Z would lie in every set.
inline Certificate certify_irreducible(const PolyZ& phi, u64 budget = 100) {
    if (!phi.is_monic()) throw std::invalid_argument("irreducibility certificates need a monic polynomial");
    if (phi.degree() < 1) throw std::invalid_argument("irreducibility certificates need degree >= 1");
    Certificate c;
    c.poly = phi.to_string();
    c.n = static_cast<unsigned>(phi.degree());
    if (!is_squarefree(phi)) {
        c.reason = "not squarefree over Z: gcd(phi, phi') is nonconstant";
        return c;
    }
    boost::dynamic_bitset<> acc(c.n + 1);
    acc.set();
    for (u64 p : primes_up_to(budget)) {
        const DegreeSet ds = degree_set(phi, p);
        c.witnesses.push_back({p, ds.degrees, ds.squarefree, 0});
        acc &= ds.achievable;
        if (is_trivial(acc)) {
            c.kind = CertificateKind::irreducible;
            c.justification = {"phi is monic, so by Gauss's lemma any factorization over Q is one into monic integer polynomials",
                               "a monic integer factor of degree d reduces to a divisor of degree d mod every prime",
                               "the witness degree sets intersect in {0, n}, so no 0 < d < n is possible"};
            return c;
        }
    }
    for (auto i = acc.find_first(); i != boost::dynamic_bitset<>::npos; i = acc.find_next(i)) c.residual.push_back(static_cast<unsigned>(i));
    c.reason = budget < 2 ? "prime budget below 2" : "degree sets up to the budget share a proper degree";
    return c;
}

namespace detail {

// Largest prime l with n/2 < l <= n - 3 among the parts, or 0.
inline unsigned jordan_cycle(const Partition& parts, unsigned n) {
    unsigned best = 0;
    for (unsigned l : parts)
        if (2 * l > n && l + 3 <= n && is_prime_u64(l)) best = std::max(best, l);
    return best;
}

// Independent re-check of an A_n witness: complete factorization (with
// equal-degree splitting) mod p, product check, irreducibility of each factor,
// squarefreeness, and the prime part.
inline bool verify_An_witness(const PolyZ& phi, const Witness& w) {
    const unsigned n = static_cast<unsigned>(phi.degree());
    if (w.cycle == 0 || !is_prime_u64(w.cycle) || 2 * w.cycle <= n || w.cycle + 3 > n) return false;
    const Field f(w.p);
    const PolyFq red = reduce(phi, f);
    if (gcd(red, derivative(red)).degree() != 0) return false;
    const Factorization fac = factor(red, 0x5eed);
    PolyFq prod = PolyFq::one(f);
    Partition degs;
    bool has_cycle = false;
    for (const auto& [g, m] : fac.factors) {
        if (m != 1 || !is_irreducible(g)) return false;
        for (unsigned k = 0; k < m; ++k) prod = prod * g;
        degs.push_back(static_cast<unsigned>(g.degree()));
        has_cycle = has_cycle || g.degree() == static_cast<int>(w.cycle);
    }
    std::sort(degs.rbegin(), degs.rend());
    return prod == red && has_cycle && degs == w.degrees;
}

}  // namespace detail

/// Certifies Gal(phi) >= A_n from an irreducibility certificate and a prime p
/// with phi mod p squarefree whose factor degrees include a prime l in
/// (n/2, n - 3].
inline Certificate certify_at_least_An(const PolyZ& phi, const Certificate& irreducible, u64 budget = 10000) {
    if (irreducible.kind != CertificateKind::irreducible || irreducible.poly != phi.to_string())
        throw std::invalid_argument("A_n certification needs an irreducibility certificate for the same polynomial");
    Certificate c;
    c.poly = phi.to_string();
    c.n = static_cast<unsigned>(phi.degree());
    if (c.n <= 6) {
        c.reason = "no prime l with n/2 < l <= n - 3 exists for n <= 6";
        return c;
    }
    unsigned skipped = 0;
    for (u64 p : primes_up_to(budget)) {
        const DegreeSet ds = degree_set(phi, p);
        if (!ds.squarefree) {
            ++skipped;
            continue;
        }
        const unsigned l = detail::jordan_cycle(ds.degrees, c.n);
        if (!l) continue;
        Witness w{p, ds.degrees, true, l};
        if (!detail::verify_An_witness(phi, w)) throw std::logic_error("A_n witness failed independent verification at p = " + std::to_string(p));
        c.kind = CertificateKind::at_least_An;
        c.witnesses.push_back(w);
        c.justification = {
            "Gal(phi) is transitive: phi is irreducible (certificate supplied)",
            "phi mod p is squarefree, so Frobenius at p has cycle type equal to the factor degrees",
            "raising it to the lcm of the other cycle lengths (coprime to the prime l > n/2) leaves an l-cycle",
            "a transitive group with a prime cycle of length l > n/2 is primitive",
            "a primitive group containing an l-cycle with l <= n - 3 contains A_n (Jordan)"};
        return c;
    }
    c.reason = "no squarefree reduction up to the budget has a prime part in (n/2, n-3] (" + std::to_string(skipped) +
               " primes skipped as non-squarefree)";
    return c;
}

struct FourPrimeOutcome {
    bool certified = false;    // intersection is exactly {0, n}
    bool large_common = false; // some d in [ceil(n^{1/4}), n) lies in all sets
    bool small_common = false; // some d in (0, ceil(n^{1/4})) lies in all sets
    // Degree sets are symmetric under d -> n - d, so a small common degree also
    // puts n - d into the range above; this flag asks for both d and n - d to
    // be at least the threshold.
    bool middle_common = false;
};

inline unsigned small_degree_threshold(unsigned n) {
    unsigned t = static_cast<unsigned>(std::ceil(std::pow(static_cast<double>(n), 0.25)));
    while (static_cast<double>(t) * t * t * t < n) ++t;
    while (t > 1 && static_cast<double>(t - 1) * (t - 1) * (t - 1) * (t - 1) >= n) --t;
    return t;
}

inline FourPrimeOutcome four_prime_outcome(const PolyZ& phi, const std::vector<u64>& primes) {
    const unsigned n = static_cast<unsigned>(phi.degree());
    boost::dynamic_bitset<> acc(n + 1);
    acc.set();
    for (u64 p : primes) acc &= degree_set(phi, p).achievable;
    FourPrimeOutcome o;
    o.certified = is_trivial(acc);
    const unsigned t = small_degree_threshold(n);
    for (unsigned d = 1; d < n; ++d) {
        if (!acc.test(d)) continue;
        (d >= t ? o.large_common : o.small_common) = true;
        if (d >= t && n - d >= t) o.middle_common = true;
    }
    return o;
}

struct FourPrimeReport {
    unsigned n = 0;
    std::vector<u64> primes;
    unsigned threshold = 0;     // ceil(n^{1/4})
    Estimate certified;         // raw intersection test
    Estimate large_common;      // the event E
    Estimate no_small_common;   // small-degree check passes
    Estimate thresholded;       // no common d with d, n - d >= threshold
    Estimate middle_common;     // some common d with d, n - d >= threshold
};

struct FourPrimeOptions {
    std::vector<u64> primes{2, 3, 5, 7};
    unsigned block = 0;  // > 0: M = diag(A, B) with A of this size
    unsigned threads = 0;
};

/// Samples M over Z with iid entries from mu and tests phi = det(t - M) at the
/// given primes.
inline FourPrimeReport four_prime_experiment(const MeasureZ& mu, unsigned n, u64 trials, u64 seed, const FourPrimeOptions& opt = {}) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (opt.block >= n && opt.block != 0) throw std::invalid_argument("block size must be below n");
    for (u64 p : opt.primes)
        if (!reduce_mod(mu, Field(p)).is_uniform()) throw std::invalid_argument("measure is not uniform mod " + std::to_string(p));
    const IntegerSampler sampler(mu);
    const auto counts = run_trials(trials, seed, opt.threads, 5, [&](Rng& rng, u64, std::vector<u64>& acc) {
        MatZ m(n);
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) {
                const bool off_block = opt.block && ((i < opt.block) != (j < opt.block));
                const long long v = sampler(rng);
                if (!off_block) m.at(i, j) = static_cast<long>(v);
            }
        const auto o = four_prime_outcome(charpoly(m), opt.primes);
        acc[0] += o.certified;
        acc[1] += o.large_common;
        acc[2] += !o.small_common;
        acc[3] += !o.middle_common;
        acc[4] += o.middle_common;
    });
    FourPrimeReport r;
    r.n = n;
    r.primes = opt.primes;
    r.threshold = small_degree_threshold(n);
    r.certified = indicator_estimate(counts[0], trials, seed);
    r.large_common = indicator_estimate(counts[1], trials, seed);
    r.no_small_common = indicator_estimate(counts[2], trials, seed);
    r.thresholded = indicator_estimate(counts[3], trials, seed);
    r.middle_common = indicator_estimate(counts[4], trials, seed);
    return r;
}

}  // namespace cpl
