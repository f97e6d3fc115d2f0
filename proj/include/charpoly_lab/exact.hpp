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
#include <charpoly_lab/parallel.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cpl {

/// Partition of n: weakly decreasing positive parts.
using Partition = std::vector<unsigned>;

/// Factorization shape: (degree, multiplicity) per distinct irreducible factor,
/// sorted descending.
using FactorShape = std::vector<std::pair<unsigned, unsigned>>;

/// Named factorization type: (coefficient codes of the monic irreducible,
/// multiplicity), in the canonical factor order of factor().
using NamedType = std::vector<std::pair<std::vector<u64>, unsigned>>;

inline Partition partition_of(const FactorShape& shape) {
    Partition p;
    for (auto [d, m] : shape) p.insert(p.end(), m, d);
    std::sort(p.rbegin(), p.rend());
    return p;
}

/// Parts of size at least r.
inline Partition truncate_partition(const Partition& p, unsigned r) {
    Partition out;
    for (unsigned x : p)
        if (x >= r) out.push_back(x);
    return out;
}

inline std::string partition_to_string(const Partition& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + ")";
}

inline std::string shape_to_string(const FactorShape& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i)
        out += (i ? " " : "") + std::to_string(s[i].first) + "^" + std::to_string(s[i].second);
    return out;
}

inline mpz_class mpz_pow(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

/// F(q, n) = (1 - 1/q) ... (1 - 1/q^n) = q^{-n^2} |GL_n(q)|.
inline mpq_class f_qn(const mpz_class& q, unsigned n) {
    if (q < 2) throw std::invalid_argument("F(q, n) needs q >= 2");
    mpz_class num = 1, den = 1, qi = 1;
    for (unsigned i = 1; i <= n; ++i) {
        qi *= q;
        num *= qi - 1;
        den *= qi;
    }
    mpq_class r(num, den);
    r.canonicalize();
    return r;
}

/// Number of n x n matrices over F_q with characteristic polynomial
/// f_1^{n_1} ... f_k^{n_k} for one fixed tuple of distinct monic irreducibles
/// of degrees d_i: q^{n^2 - n} F(q, n) / prod F(q^{d_i}, n_i).
inline mpz_class reiner_count(u64 q, unsigned n, const FactorShape& shape) {
    unsigned long total = 0;
    for (auto [d, m] : shape) {
        if (d == 0 || m == 0) throw std::invalid_argument("factor degrees and multiplicities must be positive");
        total += static_cast<unsigned long>(d) * m;
    }
    if (total != n) throw std::invalid_argument("factor degrees sum to " + std::to_string(total) + ", expected " + std::to_string(n));
    const mpz_class qz(std::to_string(q));
    mpq_class r = f_qn(qz, n) * mpq_class(mpz_pow(qz, static_cast<unsigned long>(n) * n - n));
    for (auto [d, m] : shape) r /= f_qn(mpz_pow(qz, d), m);
    r.canonicalize();
    if (r.get_den() != 1) throw std::logic_error("Reiner count is not an integer");
    return r.get_num();
}

/// Number of ways to name the factors of a shape with distinct irreducibles;
/// with exclude_t the factor t is unavailable (the GL_n(q) case).
inline mpz_class namings(u64 q, const FactorShape& shape, bool exclude_t = false) {
    std::map<unsigned, std::map<unsigned, unsigned>> by_degree;  // d -> multiplicity -> count
    for (auto [d, m] : shape) ++by_degree[d][m];
    mpz_class ways = 1;
    for (const auto& [d, mults] : by_degree) {
        mpz_class avail = count_irreducibles(d, q);
        if (d == 1 && exclude_t) avail -= 1;
        unsigned k = 0;
        for (const auto& [m, c] : mults) k += c;
        if (avail < k) return 0;
        mpz_class falling = 1;
        for (unsigned i = 0; i < k; ++i) falling *= avail - i;
        for (const auto& [m, c] : mults) {
            mpz_class f;
            mpz_fac_ui(f.get_mpz_t(), c);
            falling /= f;
        }
        ways *= falling;
    }
    return ways;
}

/// Every shape of degree n realizable over F_q.
inline std::vector<FactorShape> enumerate_shapes(u64 q, unsigned n, bool exclude_t = false) {
    std::vector<std::pair<unsigned, unsigned>> pairs;  // candidate (d, m), descending
    for (unsigned d = n; d >= 1; --d)
        for (unsigned m = n / d; m >= 1; --m) pairs.emplace_back(d, m);
    std::vector<FactorShape> out;
    FactorShape cur;
    std::map<unsigned, mpz_class> avail;
    for (unsigned d = 1; d <= n; ++d) avail[d] = count_irreducibles(d, q) - ((d == 1 && exclude_t) ? 1 : 0);
    std::map<unsigned, unsigned> used;
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t from, unsigned left) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = from; i < pairs.size(); ++i) {
            auto [d, m] = pairs[i];
            if (d * m > left || avail[d] <= used[d]) continue;
            ++used[d];
            cur.emplace_back(d, m);
            rec(i, left - d * m);
            cur.pop_back();
            --used[d];
        }
    };
    if (n == 0) return {FactorShape{}};
    rec(0, n);
    return out;
}

/// Exact law of the factor-degree partition of det(t - M), M uniform on
/// M_n(q) (or GL_n(q) with gl), from Reiner's count.
inline std::map<Partition, mpq_class> partition_law(u64 q, unsigned n, bool gl = false) {
    std::map<Partition, mpz_class> counts;
    mpz_class total = 0;
    for (const auto& s : enumerate_shapes(q, n, gl)) {
        const mpz_class c = reiner_count(q, n, s) * namings(q, s, gl);
        counts[partition_of(s)] += c;
        total += c;
    }
    std::map<Partition, mpq_class> law;
    for (auto& [p, c] : counts) {
        mpq_class r(c, total);
        r.canonicalize();
        law[p] = r;
    }
    return law;
}

/// Bell number B_m via the Bell triangle.
inline mpz_class bell(unsigned m) {
    std::vector<mpz_class> row{1};
    for (unsigned i = 0; i < m; ++i) {
        std::vector<mpz_class> next{row.back()};
        for (const auto& x : row) next.push_back(next.back() + x);
        row = std::move(next);
    }
    return row.front();
}

struct ZdLaw {
    u64 q = 2;
    unsigned d = 1;
    double irreducibles = 0;          // I(d)
    double zeta = 0;                  // series sum_c 1 / (q^{dc} F(q^d, c))
    double zeta_euler = 0;            // 1 / prod_i (1 - q^{-di})
    std::vector<double> probability;  // P(Z_d = c), c = 0, 1, ...
};

/// Law of Z_d with generating function (zeta_d^{-1} sum_c u^c / (q^{dc} F(q^d, c)))^{I(d)}.
/// With cmax = 0 the law is extended until its tail mass is below 1e-14.
inline ZdLaw zd_law(u64 q, unsigned d, unsigned cmax = 0) {
    if (d == 0) throw std::invalid_argument("d must be >= 1");
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    ZdLaw z;
    z.q = q;
    z.d = d;
    z.irreducibles = count_irreducibles(d, q).get_d();
    const double inv_big_q = std::pow(static_cast<double>(q), -static_cast<double>(d));

    // g_c = x^c / prod_{i<=c} (1 - x^i), x = q^{-d}; consecutive ratios fall
    // to x, so the tail after g_c is at most g_c r / (1 - r) with r the next ratio.
    // The excess zeta - 1 is summed on its own so that log zeta keeps full
    // relative precision when q^d is large.
    std::vector<double> g{1.0};
    double excess = 0.0, xi = 1.0;
    for (unsigned c = 1;; ++c) {
        xi *= inv_big_q;
        g.push_back(g.back() * inv_big_q / (1.0 - xi));
        excess += g.back();
        const double r = inv_big_q / (1.0 - xi * inv_big_q);
        if (g.back() * r / (1.0 - r) < 1e-15 * excess || c > 4000) break;
    }
    z.zeta = 1.0 + excess;
    const double log_zeta = std::log1p(excess);
    double log_prod = 0.0, xp = 1.0;
    for (unsigned i = 1; i < 100000; ++i) {
        xp *= inv_big_q;
        if (xp < 1e-300) break;
        log_prod += std::log1p(-xp);
        if (xp < 1e-18) break;
    }
    z.zeta_euler = std::exp(-log_prod);

    // h = a^N with a = g / zeta: h_0 = a_0^N and
    // h_m = (1 / (m a_0)) sum_{k=1}^m (N k - (m - k)) a_k h_{m-k}.
    const double big_n = z.irreducibles;
    auto a = [&](unsigned k) { return k < g.size() ? g[k] / z.zeta : 0.0; };
    auto& h = z.probability;
    h.push_back(std::exp(-big_n * log_zeta));
    double mass = h[0];
    for (unsigned m = 1;; ++m) {
        if (cmax && m > cmax) break;
        if (!cmax && (1.0 - mass < 1e-14 || m > 20000)) break;
        double acc = 0.0;
        for (unsigned k = 1; k <= m && k < g.size(); ++k) acc += (big_n * k - (m - k)) * a(k) * h[m - k];
        h.push_back(std::max(0.0, acc / (m * a(0))));
        mass += h.back();
    }
    return z;
}

/// Limit constant prod_{i >= from} (1 - q^{-i}).
inline double euler_tail_product(double q, unsigned from = 1) {
    double prod = 1.0;
    double x = std::pow(q, -static_cast<double>(from));
    for (int i = 0; i < 10000 && x > 1e-18; ++i, x /= q) prod *= 1.0 - x;
    return prod;
}

/// Exhaustive tallies of characteristic-polynomial factorization types over M_n(q).
struct TypeTally {
    u64 q = 0;
    unsigned n = 0;
    mpz_class total, total_gl;
    std::map<NamedType, mpz_class> named, named_gl;
    std::map<FactorShape, mpz_class> shapes, shapes_gl;
    std::map<Partition, mpz_class> partitions, partitions_gl;
};

/// Iterates every matrix in M_n(q). Requires q^{n^2} <= cap (default 2^24).
inline TypeTally enumerate_types(const Field& f, unsigned n, unsigned threads = 0, u64 cap = 1u << 24) {
    const u64 q = f.order();
    u64 count = 1;
    for (unsigned i = 0; i < n * n; ++i) {
        if (count > cap / q) throw std::invalid_argument("q^(n^2) exceeds the enumeration cap");
        count *= q;
    }
    const std::size_t blocks = block_count(count, threads);
    std::vector<std::map<std::vector<u64>, u64>> per_block(blocks);
    parallel_blocks(count, threads, [&](std::size_t begin, std::size_t end, std::size_t b) {
        auto& tally = per_block[b];
        std::vector<u64> codes(static_cast<std::size_t>(n) * n);
        for (std::size_t idx = begin; idx < end; ++idx) {
            u64 r = idx;
            for (auto& c : codes) {
                c = r % q;
                r /= q;
            }
            const PolyFq phi = charpoly(MatFq::from_codes(f, n, n, codes));
            std::vector<u64> key;
            for (auto e : phi.coeffs()) key.push_back(e.code);
            ++tally[key];
        }
    });
    std::map<std::vector<u64>, mpz_class> by_poly;
    for (const auto& t : per_block)
        for (const auto& [k, c] : t) by_poly[k] += static_cast<unsigned long>(c);

    TypeTally out;
    out.q = q;
    out.n = n;
    for (const auto& [key, c] : by_poly) {
        const PolyFq phi = PolyFq::from_codes(f, key);
        const Factorization fac = factor(phi);
        NamedType named;
        FactorShape shape;
        for (const auto& [g, m] : fac.factors) {
            std::vector<u64> gc;
            for (auto e : g.coeffs()) gc.push_back(e.code);
            named.emplace_back(std::move(gc), m);
            shape.emplace_back(static_cast<unsigned>(g.degree()), m);
        }
        std::sort(shape.rbegin(), shape.rend());
        const Partition part = partition_of(shape);
        out.total += c;
        out.named[named] += c;
        out.shapes[shape] += c;
        out.partitions[part] += c;
        if (n == 0 || key[0] != 0) {
            out.total_gl += c;
            out.named_gl[named] += c;
            out.shapes_gl[shape] += c;
            out.partitions_gl[part] += c;
        }
    }
    return out;
}

struct ReinerRow {
    NamedType type;
    FactorShape shape;
    mpz_class formula, enumerated;
    bool match = false;
};

/// Reiner's count against enumeration for every named type. Named types are
/// exactly the monic polynomials of degree n, so all q^n of them are listed,
/// including those no matrix realizes.
inline std::vector<ReinerRow> reiner_verify(const Field& f, unsigned n, unsigned threads = 0) {
    const TypeTally t = enumerate_types(f, n, threads);
    const u64 q = f.order();
    u64 polys = 1;
    for (unsigned i = 0; i < n; ++i) polys *= q;
    std::vector<ReinerRow> rows;
    std::vector<u64> codes(n + 1, 0);
    codes[n] = 1;
    for (u64 idx = 0; idx < polys; ++idx) {
        u64 r = idx;
        for (unsigned i = 0; i < n; ++i) {
            codes[i] = r % q;
            r /= q;
        }
        const Factorization fac = factor(PolyFq::from_codes(f, codes));
        ReinerRow row;
        for (const auto& [g, m] : fac.factors) {
            std::vector<u64> gc;
            for (auto e : g.coeffs()) gc.push_back(e.code);
            row.type.emplace_back(std::move(gc), m);
            row.shape.emplace_back(static_cast<unsigned>(g.degree()), m);
        }
        std::sort(row.shape.rbegin(), row.shape.rend());
        row.formula = reiner_count(q, n, row.shape);
        auto it = t.named.find(row.type);
        row.enumerated = it == t.named.end() ? mpz_class(0) : it->second;
        row.match = row.formula == row.enumerated;
        rows.push_back(std::move(row));
    }
    return rows;
}

struct CrRatioReport {
    std::vector<std::pair<Partition, double>> ratios;  // P(C = c) / prod_d P(Z_d = c_d)
    double min_ratio = 0, max_ratio = 0;
    double relative_spread = 0;  // (max - min) / min
    double beta_predicted = 0;   // F(q, n) prod_{d <= n} zeta_d^{I(d)}
};

/// Conditioning-relation check: the ratio must not depend on the tuple.
inline CrRatioReport cr_ratio_test(const std::map<Partition, mpq_class>& law, u64 q, unsigned n) {
    std::vector<ZdLaw> z;
    for (unsigned d = 1; d <= n; ++d) z.push_back(zd_law(q, d, n / d));
    CrRatioReport r;
    double log_beta = std::log(f_qn(mpz_class(std::to_string(q)), n).get_d());
    for (const auto& zd : z) log_beta += zd.irreducibles * std::log(zd.zeta);
    r.beta_predicted = std::exp(log_beta);
    for (const auto& [part, pr] : law) {
        if (pr == 0) continue;
        std::vector<unsigned> c(n + 1, 0);
        for (unsigned x : part) ++c[x];
        double denom = 1.0;
        for (unsigned d = 1; d <= n; ++d) denom *= z[d - 1].probability.at(c[d]);
        r.ratios.emplace_back(part, pr.get_d() / denom);
    }
    if (r.ratios.empty()) return r;
    r.min_ratio = r.max_ratio = r.ratios.front().second;
    for (const auto& [p, v] : r.ratios) {
        r.min_ratio = std::min(r.min_ratio, v);
        r.max_ratio = std::max(r.max_ratio, v);
    }
    r.relative_spread = (r.max_ratio - r.min_ratio) / r.min_ratio;
    return r;
}

/// Enumerated partition law of a tally.
inline std::map<Partition, mpq_class> tally_law(const TypeTally& t, bool gl = false) {
    std::map<Partition, mpq_class> law;
    const auto& src = gl ? t.partitions_gl : t.partitions;
    const mpz_class& total = gl ? t.total_gl : t.total;
    for (const auto& [p, c] : src) {
        mpq_class r(c, total);
        r.canonicalize();
        law[p] = r;
    }
    return law;
}

}  // namespace cpl
