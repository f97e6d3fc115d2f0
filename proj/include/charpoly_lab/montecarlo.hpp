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
#include <charpoly_lab/measures.hpp>
#include <charpoly_lab/parallel.hpp>
#include <charpoly_lab/rng.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cpl {

/// Monte Carlo result record.
struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    u64 trials = 0;
    u64 seed = 0;
    u64 successes = 0;
    std::optional<double> target;
    std::map<std::string, std::string> params;
    std::vector<std::string> warnings;
};

inline Estimate indicator_estimate(u64 successes, u64 trials, u64 seed) {
    if (trials == 0) throw std::invalid_argument("need at least one trial");
    Estimate e;
    e.successes = successes;
    e.trials = trials;
    e.seed = seed;
    e.value = static_cast<double>(successes) / static_cast<double>(trials);
    e.stderr_ = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(trials));
    return e;
}

/// Runs trial(rng, i) for i < trials with rng = make_rng(seed, i); each call
/// returns a count vector of fixed width, summed across trials.
template <class Trial>
std::vector<u64> run_trials(u64 trials, u64 seed, unsigned threads, std::size_t width, Trial&& trial) {
    const std::size_t blocks = block_count(trials, threads);
    std::vector<std::vector<u64>> partial(blocks, std::vector<u64>(width, 0));
    parallel_blocks(trials, threads, [&](std::size_t begin, std::size_t end, std::size_t b) {
        for (std::size_t i = begin; i < end; ++i) {
            Rng rng = make_rng(seed, i);
            trial(rng, static_cast<u64>(i), partial[b]);
        }
    });
    std::vector<u64> total(width, 0);
    for (const auto& p : partial)
        for (std::size_t k = 0; k < width; ++k) total[k] += p[k];
    return total;
}

namespace detail {

inline u64 mpz_to_u64(const mpz_class& z) {
    if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64) throw std::invalid_argument("value exceeds 64 bits");
    u64 v = 0;
    mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, z.get_mpz_t());
    return v;
}

// Inverse CDF over integer cumulative weights with common denominator L.
template <class Value>
class CdfSampler {
public:
    CdfSampler() = default;

    template <class Atoms, class Proj>
    CdfSampler(const Atoms& atoms, Proj value_of) {
        mpz_class l = 1;
        for (const auto& a : atoms) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a.second.get_den_mpz_t());
        if (mpz_sizeinbase(l.get_mpz_t(), 2) > 63) throw std::invalid_argument("weight denominators too large for exact sampling");
        denom_ = mpz_to_u64(l);
        u64 acc = 0;
        for (const auto& a : atoms) {
            const mpz_class num = a.second.get_num() * (l / a.second.get_den());
            acc += mpz_to_u64(num);
            cum_.push_back(acc);
            values_.push_back(value_of(a.first));
        }
        if (acc != denom_) throw std::logic_error("cumulative weights do not reach the denominator");
    }

    Value operator()(Rng& rng) const {
        if (values_.size() == 1) return values_[0];
        const u64 u = uniform_below(rng, denom_);
        const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
        return values_[static_cast<std::size_t>(it - cum_.begin())];
    }

private:
    u64 denom_ = 1;
    std::vector<u64> cum_;
    std::vector<Value> values_;
};

}  // namespace detail

/// Exact sampler for one entry measure on F_q.
class EntrySampler {
public:
    explicit EntrySampler(const MeasureFq& mu) : q_(mu.field().order()), uniform_(mu.is_uniform()) {
        if (!uniform_) cdf_ = detail::CdfSampler<u64>(mu.atoms(), [](FieldElem x) { return x.code; });
    }

    u64 operator()(Rng& rng) const { return uniform_ ? uniform_below(rng, q_) : cdf_(rng); }

private:
    u64 q_;
    bool uniform_;
    detail::CdfSampler<u64> cdf_;
};

/// Exact sampler for a measure on Z.
class IntegerSampler {
public:
    explicit IntegerSampler(const MeasureZ& mu) : cdf_(mu.atoms(), [](long long v) { return v; }) {}
    long long operator()(Rng& rng) const { return cdf_(rng); }

private:
    detail::CdfSampler<long long> cdf_;
};

/// Samples matrices with independent entries, cell (i, j) from its measure.
class MatrixSampler {
public:
    explicit MatrixSampler(const MeasureMatrix& mm) : field_(mm.field()), n_(mm.size()) {
        // Cells sharing a measure share a sampler.
        std::vector<const MeasureFq*> seen;
        for (std::size_t c = 0; c < n_ * n_; ++c) {
            const MeasureFq& m = mm.at(c / n_, c % n_);
            std::size_t k = 0;
            while (k < seen.size() && !(*seen[k] == m)) ++k;
            if (k == seen.size()) {
                seen.push_back(&m);
                samplers_.emplace_back(m);
            }
            cell_.push_back(k);
        }
    }

    const Field& field() const { return field_; }
    std::size_t size() const { return n_; }

    /// Fills the first rows x n entries, row-major.
    void fill(Rng& rng, std::vector<u64>& codes, std::size_t rows) const {
        codes.resize(rows * n_);
        for (std::size_t c = 0; c < rows * n_; ++c) codes[c] = samplers_[cell_[c]](rng);
    }

    MatFq sample(Rng& rng) const {
        std::vector<u64> codes;
        fill(rng, codes, n_);
        return MatFq::from_codes(field_, n_, n_, std::move(codes));
    }

private:
    Field field_;
    std::size_t n_;
    std::vector<EntrySampler> samplers_;
    std::vector<std::size_t> cell_;
};

inline MatFq sample_matrix(const MeasureMatrix& mm, u64 seed) {
    Rng rng = make_rng(seed, 0);
    return MatrixSampler(mm).sample(rng);
}

/// Entry laws of M - lambda I: diagonal cells translated by -lambda.
inline MeasureMatrix shifted_diagonal(const MeasureMatrix& mm, FieldElem lambda) {
    std::vector<MeasureFq> e;
    const FieldElem shift = mm.field().neg(lambda);
    for (std::size_t i = 0; i < mm.size(); ++i)
        for (std::size_t j = 0; j < mm.size(); ++j) e.push_back(i == j ? translate(mm.at(i, j), shift) : mm.at(i, j));
    return MeasureMatrix(mm.size(), std::move(e));
}

inline std::vector<std::string> balance_warnings(const MeasureMatrix& mm) {
    std::vector<std::string> w;
    for (std::size_t i = 0; i < mm.size(); ++i)
        for (std::size_t j = 0; j < mm.size(); ++j)
            if (balancedness(mm.at(i, j)) == 0) {
                w.push_back("entry measure at (" + std::to_string(i) + "," + std::to_string(j) + ") is supported on a proper coset (alpha = 0)");
                return w;
            }
    return w;
}

/// P(M nonsingular) by Monte Carlo; target is prod_{i >= 1} (1 - q^{-i}).
inline Estimate estimate_nonsingular(const MeasureMatrix& mm, u64 trials, u64 seed, unsigned threads = 0) {
    const MatrixSampler s(mm);
    const std::size_t n = mm.size();
    const auto hits = run_trials(trials, seed, threads, 1, [&](Rng& rng, u64, std::vector<u64>& acc) {
        std::vector<u64> codes;
        s.fill(rng, codes, n);
        acc[0] += is_nonsingular(MatFq::from_codes(s.field(), n, n, std::move(codes)));
    });
    Estimate e = indicator_estimate(hits[0], trials, seed);
    e.target = euler_tail_product(static_cast<double>(mm.field().order()));
    e.warnings = balance_warnings(mm);
    return e;
}

/// Exact P(M nonsingular) by enumerating the support of the entry product
/// measure; the support size is capped.
inline mpq_class exact_nonsingular(const MeasureMatrix& mm, u64 cap = 1u << 24) {
    const std::size_t n = mm.size(), cells = n * n;
    u64 total = 1;
    for (std::size_t c = 0; c < cells; ++c) {
        const u64 s = mm.at(c / n, c % n).atoms().size();
        if (total > cap / s) throw std::invalid_argument("support of the matrix law exceeds the enumeration cap");
        total *= s;
    }
    mpq_class p = 0;
    std::vector<std::size_t> pick(cells, 0);
    std::vector<u64> codes(cells);
    for (u64 idx = 0; idx < total; ++idx) {
        mpq_class w = 1;
        for (std::size_t c = 0; c < cells; ++c) {
            const auto& atom = mm.at(c / n, c % n).atoms()[pick[c]];
            codes[c] = atom.first.code;
            w *= atom.second;
        }
        if (is_nonsingular(MatFq::from_codes(mm.field(), n, n, codes))) p += w;
        for (std::size_t c = 0; c < cells; ++c) {
            if (++pick[c] < mm.at(c / n, c % n).atoms().size()) break;
            pick[c] = 0;
        }
    }
    return p;
}

/// P(top k x n block has rank k); target prod_{i >= n-k+1} (1 - q^{-i}).
inline Estimate estimate_rank_full(const MeasureMatrix& mm, std::size_t k, u64 trials, u64 seed, unsigned threads = 0) {
    const std::size_t n = mm.size();
    if (k > n) throw std::invalid_argument("k exceeds n");
    const MatrixSampler s(mm);
    const auto hits = run_trials(trials, seed, threads, 1, [&](Rng& rng, u64, std::vector<u64>& acc) {
        if (k == 0) {
            ++acc[0];
            return;
        }
        std::vector<u64> codes;
        s.fill(rng, codes, k);
        acc[0] += rank(MatFq::from_codes(s.field(), k, n, std::move(codes))) == k;
    });
    Estimate e = indicator_estimate(hits[0], trials, seed);
    e.target = euler_tail_product(static_cast<double>(mm.field().order()), static_cast<unsigned>(n - k + 1));
    e.warnings = balance_warnings(mm);
    return e;
}

struct JointEigenResult {
    Estimate joint;                  // all lambda_j are eigenvalues
    std::vector<Estimate> marginal;  // each lambda_j separately, same samples
    double product = 0.0;            // product of the marginal estimates
    double product_stderr = 0.0;     // delta-method stderr of that product
    double reference = 0.0;          // (q - 1)^{-m}
};

/// Joint eigenvalue events E_lambda = {det(M - lambda) = 0}; one sample serves
/// all lambdas.
inline JointEigenResult estimate_joint_eigen(const MeasureMatrix& mm, const std::vector<FieldElem>& lambdas, u64 trials, u64 seed,
                                             unsigned threads = 0) {
    if (lambdas.empty()) throw std::invalid_argument("need at least one eigenvalue");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        mm.field().element(lambdas[i].code);
        for (std::size_t j = 0; j < i; ++j)
            if (lambdas[i] == lambdas[j]) throw std::invalid_argument("eigenvalues must be distinct");
    }
    const MatrixSampler s(mm);
    const std::size_t m = lambdas.size();
    const auto hits = run_trials(trials, seed, threads, m + 1, [&](Rng& rng, u64, std::vector<u64>& acc) {
        const MatFq a = s.sample(rng);
        bool all = true;
        for (std::size_t j = 0; j < m; ++j) {
            const bool hit = !is_nonsingular(a.shifted(lambdas[j]));
            acc[j + 1] += hit;
            all = all && hit;
        }
        acc[0] += all;
    });
    JointEigenResult r;
    r.joint = indicator_estimate(hits[0], trials, seed);
    const double q = static_cast<double>(mm.field().order());
    r.reference = std::pow(q - 1.0, -static_cast<double>(m));
    r.joint.target = r.reference;
    r.joint.warnings = balance_warnings(mm);
    r.product = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
        r.marginal.push_back(indicator_estimate(hits[j + 1], trials, seed));
        r.product *= r.marginal.back().value;
    }
    double rel2 = 0.0;
    for (const auto& e : r.marginal)
        if (e.value > 0) rel2 += (e.stderr_ / e.value) * (e.stderr_ / e.value);
    r.product_stderr = r.product * std::sqrt(rel2);
    return r;
}

enum class PartitionSource { matrix, gl, unipoly, perm, poisson };

inline std::string source_name(PartitionSource s) {
    switch (s) {
        case PartitionSource::matrix: return "matrix";
        case PartitionSource::gl: return "gl";
        case PartitionSource::unipoly: return "unipoly";
        case PartitionSource::perm: return "perm";
        case PartitionSource::poisson: return "poisson";
    }
    return "?";
}

inline PartitionSource parse_source(const std::string& s) {
    for (auto src : {PartitionSource::matrix, PartitionSource::gl, PartitionSource::unipoly, PartitionSource::perm, PartitionSource::poisson})
        if (s == source_name(src)) return src;
    static const char* numbered[] = {"1", "2", "3", "4", "5"};
    for (int i = 0; i < 5; ++i)
        if (s == numbered[i]) return static_cast<PartitionSource>(i);
    throw std::invalid_argument("unknown partition source '" + s + "' (matrix|gl|unipoly|perm|poisson or 1..5)");
}

/// Samples one partition of n from the named law. Sources matrix, gl and
/// unipoly work over F_q; perm and poisson ignore the field.
class PartitionSampler {
public:
    static constexpr u64 kRejectionCap = 1000000;

    PartitionSampler(PartitionSource src, unsigned n, const Field& f) : src_(src), n_(n), field_(f) {
        if (n == 0) throw std::invalid_argument("partitions need n >= 1");
        for (unsigned i = 1; i <= n; ++i) poisson_zero_.push_back(std::exp(-1.0 / i));
    }

    PartitionSource source() const { return src_; }

    Partition operator()(Rng& rng) const {
        switch (src_) {
            case PartitionSource::matrix: return from_matrix(rng, false);
            case PartitionSource::gl: return from_matrix(rng, true);
            case PartitionSource::unipoly: {
                std::vector<u64> c(n_ + 1, 1);
                for (unsigned i = 0; i < n_; ++i) c[i] = uniform_below(rng, field_.order());
                return factor_degrees(PolyFq::from_codes(field_, c));
            }
            case PartitionSource::perm: return permutation(rng);
            case PartitionSource::poisson: return poisson(rng);
        }
        throw std::logic_error("bad partition source");
    }

private:
    Partition from_matrix(Rng& rng, bool gl) const {
        std::vector<u64> codes(static_cast<std::size_t>(n_) * n_);
        for (u64 attempt = 0; attempt < kRejectionCap; ++attempt) {
            for (auto& c : codes) c = uniform_below(rng, field_.order());
            const PolyFq phi = charpoly(MatFq::from_codes(field_, n_, n_, codes));
            if (gl && phi[0].code == 0) continue;
            return factor_degrees(phi);
        }
        throw std::runtime_error("rejection cap exceeded sampling GL_n(q)");
    }

    Partition permutation(Rng& rng) const {
        std::vector<unsigned> pi(n_);
        std::iota(pi.begin(), pi.end(), 0u);
        for (unsigned i = n_ - 1; i > 0; --i) std::swap(pi[i], pi[uniform_below(rng, i + 1)]);
        std::vector<bool> seen(n_, false);
        Partition p;
        for (unsigned s = 0; s < n_; ++s) {
            if (seen[s]) continue;
            unsigned len = 0;
            for (unsigned x = s; !seen[x]; x = pi[x]) {
                seen[x] = true;
                ++len;
            }
            p.push_back(len);
        }
        std::sort(p.rbegin(), p.rend());
        return p;
    }

    // Z_i ~ Poisson(1/i) independently, conditioned on sum i Z_i = n by rejection.
    Partition poisson(Rng& rng) const {
        std::vector<unsigned> z(n_ + 1);
        for (u64 attempt = 0; attempt < kRejectionCap; ++attempt) {
            unsigned long sum = 0;
            bool over = false;
            for (unsigned i = 1; i <= n_; ++i) {
                // Inversion with the cached e^{-1/i}.
                const double u = uniform_unit(rng);
                double p = poisson_zero_[i - 1], cdf = p;
                unsigned k = 0;
                while (u >= cdf && k < 1000) {
                    ++k;
                    p *= 1.0 / (static_cast<double>(i) * k);
                    cdf += p;
                }
                z[i] = k;
                sum += static_cast<unsigned long>(i) * k;
                if (sum > n_) {
                    over = true;
                    break;
                }
            }
            if (over || sum != n_) continue;
            Partition p;
            for (unsigned i = n_; i >= 1; --i) p.insert(p.end(), z[i], i);
            return p;
        }
        throw std::runtime_error("rejection cap exceeded sampling the conditioned Poisson law");
    }

    PartitionSource src_;
    unsigned n_;
    Field field_;
    std::vector<double> poisson_zero_;
};

inline Partition sample_partition(PartitionSource src, unsigned n, const Field& f, u64 seed) {
    Rng rng = make_rng(seed, 0);
    return PartitionSampler(src, n, f)(rng);
}

struct PartitionSample {
    PartitionSource source = PartitionSource::perm;
    unsigned n = 0;
    std::vector<Partition> partitions;
};

/// count partitions, partition i drawn from make_rng(seed, i).
inline PartitionSample sample_partitions(PartitionSource src, unsigned n, const Field& f, u64 count, u64 seed, unsigned threads = 0) {
    const PartitionSampler sampler(src, n, f);
    PartitionSample out;
    out.source = src;
    out.n = n;
    out.partitions.resize(count);
    parallel_blocks(count, threads, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
            Rng rng = make_rng(seed, i);
            out.partitions[i] = sampler(rng);
        }
    });
    return out;
}

/// Histogram of the parts >= r of each partition.
inline std::map<Partition, u64> truncated_histogram(const std::vector<Partition>& parts, unsigned r) {
    std::map<Partition, u64> h;
    for (const auto& p : parts) ++h[truncate_partition(p, r)];
    return h;
}

struct TvResult {
    double tv = 0.0;
    double bootstrap_stderr = 0.0;
    u64 samples = 0;
    std::size_t alphabet = 0;  // distinct truncated partitions seen
};

inline constexpr unsigned kBootstrapResamples = 200;

/// Plug-in TV distance between the empirical laws of the truncated partitions,
/// with a bootstrap standard error over resamples of both sample sets.
inline TvResult tv_from_samples(const std::vector<Partition>& a, const std::vector<Partition>& b, unsigned r, u64 seed) {
    if (r == 0) throw std::invalid_argument("r must be >= 1");
    if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
    std::map<Partition, std::size_t> ids;
    auto encode = [&](const std::vector<Partition>& s) {
        std::vector<std::size_t> out;
        out.reserve(s.size());
        for (const auto& p : s) out.push_back(ids.emplace(truncate_partition(p, r), ids.size()).first->second);
        return out;
    };
    const auto ea = encode(a), eb = encode(b);
    const std::size_t k = ids.size();
    auto tv_of = [&](const std::vector<u64>& ca, const std::vector<u64>& cb) {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            s += std::abs(static_cast<double>(ca[i]) / static_cast<double>(a.size()) - static_cast<double>(cb[i]) / static_cast<double>(b.size()));
        return s / 2.0;
    };
    std::vector<u64> ca(k, 0), cb(k, 0);
    for (auto x : ea) ++ca[x];
    for (auto x : eb) ++cb[x];
    TvResult res;
    res.tv = tv_of(ca, cb);
    res.samples = a.size();
    res.alphabet = k;
    Rng rng = make_rng(seed, 0xb007);
    double sum = 0.0, sum2 = 0.0;
    for (unsigned rep = 0; rep < kBootstrapResamples; ++rep) {
        std::fill(ca.begin(), ca.end(), 0);
        std::fill(cb.begin(), cb.end(), 0);
        for (std::size_t i = 0; i < ea.size(); ++i) ++ca[ea[uniform_below(rng, ea.size())]];
        for (std::size_t i = 0; i < eb.size(); ++i) ++cb[eb[uniform_below(rng, eb.size())]];
        const double t = tv_of(ca, cb);
        sum += t;
        sum2 += t * t;
    }
    const double mean = sum / kBootstrapResamples;
    res.bootstrap_stderr = std::sqrt(std::max(0.0, (sum2 - kBootstrapResamples * mean * mean) / (kBootstrapResamples - 1)));
    return res;
}

/// Each source draws from its own substream of seed, keyed by the source, so a
/// source compared with itself yields identical samples and TV 0.
inline TvResult tv_compare(PartitionSource a, PartitionSource b, unsigned n, const Field& f, unsigned r, u64 samples, u64 seed,
                           unsigned threads = 0) {
    const auto sa = sample_partitions(a, n, f, samples, substream_seed(seed, 100 + static_cast<u64>(a)), threads);
    const auto sb = sample_partitions(b, n, f, samples, substream_seed(seed, 100 + static_cast<u64>(b)), threads);
    return tv_from_samples(sa.partitions, sb.partitions, r, seed);
}

}  // namespace cpl
