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

#include <charpoly_lab/exact.hpp>
#include <charpoly_lab/fqpoly.hpp>
#include <charpoly_lab/linalg.hpp>
#include <charpoly_lab/parallel.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpl {

inline constexpr double kMaxSieveX = 16.0;

/// Primes up to limit, by the sieve of Eratosthenes.
inline std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

/// Primes in [lo, hi], segment by segment.
inline std::vector<u64> segmented_primes(u64 lo, u64 hi, u64 segment = 1u << 15) {
    std::vector<u64> out;
    if (hi < 2 || lo > hi) return out;
    lo = std::max<u64>(lo, 2);
    const u64 root = static_cast<u64>(std::sqrt(static_cast<double>(hi))) + 1;
    const auto base = primes_up_to(root);
    std::vector<bool> composite;
    for (u64 start = lo; start <= hi; start += segment) {
        const u64 end = std::min(hi, start + segment - 1);
        composite.assign(end - start + 1, false);
        for (u64 p : base) {
            if (p * p > end) break;
            u64 first = std::max(p * p, (start + p - 1) / p * p);
            for (u64 j = first; j <= end; j += p) composite[j - start] = true;
        }
        for (u64 x = start; x <= end; ++x)
            if (!composite[x - start]) out.push_back(x);
        if (end == hi) break;
    }
    return out;
}

/// Primes p with log p in (X - log 2, X], i.e. e^X / 2 < p <= e^X.
struct PrimeWindow {
    double x = 0;
    double upper = 0;  // e^X, snapped to an integer when within 1e-9 of one
    std::vector<u64> primes;
    bool cross_checked = false;  // confirmed by the segmented sieve
};

inline PrimeWindow sieve_window(double x) {
    if (!(x <= kMaxSieveX)) throw std::invalid_argument("X exceeds the desk-scale cap of 16");
    PrimeWindow w;
    w.x = x;
    double e = std::exp(x);
    if (std::abs(e - std::round(e)) < 1e-9 * std::max(1.0, e)) e = std::round(e);
    w.upper = e;
    const u64 hi = e < 2 ? 0 : static_cast<u64>(std::floor(e));
    for (u64 p : primes_up_to(hi))
        if (2.0 * static_cast<double>(p) > e) w.primes.push_back(p);
    if (x <= 15.0) {
        std::vector<u64> check;
        for (u64 p : segmented_primes(1, hi))
            if (2.0 * static_cast<double>(p) > e) check.push_back(p);
        if (check != w.primes) throw std::logic_error("prime sieves disagree on the window");
        w.cross_checked = true;
    }
    return w;
}

/// w_X(u) = u * 2 e^{-X} on (X - log 2, X], zero elsewhere.
inline double weight(double u, double x) {
    if (!(u > x - std::numbers::ln2 && u <= x)) return 0.0;
    return u * 2.0 * std::exp(-x);
}

namespace detail {

// Pairwise summation in index order.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

// Weight of a window prime. Membership is decided by the integer window, so
// the indicator is not re-tested in floating point.
inline double window_weight(u64 p, double x) { return std::log(static_cast<double>(p)) * 2.0 * std::exp(-x); }

}  // namespace detail

/// sum_p w_X(log p) over the window; tends to 1 as X grows.
inline double pit_unit_check(double x) {
    const auto w = sieve_window(x);
    std::vector<double> terms;
    for (u64 p : w.primes) terms.push_back(detail::window_weight(p, x));
    return detail::pairwise_sum(terms);
}

struct PrimeContribution {
    u64 p = 0;
    unsigned roots = 0;        // R_phi(p), distinct roots of phi mod p
    bool squarefree = true;    // phi mod p squarefree (false iff p divides the discriminant)
    double weight = 0;         // w_X(log p)
    double contribution = 0;   // R^m w_X(log p)
};

struct MomentReport {
    unsigned m = 1;
    double x = 0;
    double weighted_sum = 0;
    mpz_class bell_target;
    std::size_t primes = 0;
    std::size_t discriminant_primes = 0;
    unsigned max_roots = 0;
    std::vector<PrimeContribution> per_prime;  // filled on request
};

/// sum_p R_phi(p)^m w_X(log p) over the window primes, phi monic over Z.
inline MomentReport weighted_moment(const PolyZ& phi, unsigned m, double x, bool keep_per_prime = false, unsigned threads = 0) {
    if (phi.degree() < 1) throw std::invalid_argument("moment polynomial must have degree >= 1");
    if (!phi.is_monic()) throw std::invalid_argument("moment polynomial must be monic");
    if (m < 1) throw std::invalid_argument("moment order must be >= 1");
    const auto w = sieve_window(x);
    const unsigned deg = static_cast<unsigned>(phi.degree());
    std::vector<PrimeContribution> rows(w.primes.size());
    parallel_blocks(rows.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
            const Field f(w.primes[i]);
            const PolyFq red = reduce(phi, f);
            auto& r = rows[i];
            r.p = w.primes[i];
            r.roots = static_cast<unsigned>(count_roots(red));
            if (r.roots > deg) throw std::logic_error("root count exceeds the degree at p = " + std::to_string(r.p));
            r.squarefree = gcd(red, derivative(red)).degree() == 0;
            r.weight = detail::window_weight(r.p, x);
            r.contribution = std::pow(static_cast<double>(r.roots), static_cast<double>(m)) * r.weight;
        }
    });
    MomentReport rep;
    rep.m = m;
    rep.x = x;
    rep.bell_target = bell(m);
    rep.primes = rows.size();
    std::vector<double> terms;
    terms.reserve(rows.size());
    for (const auto& r : rows) {
        terms.push_back(r.contribution);
        rep.discriminant_primes += !r.squarefree;
        rep.max_roots = std::max(rep.max_roots, r.roots);
    }
    rep.weighted_sum = detail::pairwise_sum(terms);
    if (keep_per_prime) rep.per_prime = std::move(rows);
    return rep;
}

}  // namespace cpl
