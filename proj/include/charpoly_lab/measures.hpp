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

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cpl {

namespace detail {

inline mpq_class parse_rational(const std::string& text) {
    const std::string s = strip(text);
    mpq_class r;
    if (s.empty() || r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational '" + text + "'");
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
}

inline long long parse_ll(const std::string& text) {
    const std::string s = strip(text);
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed integer '" + text + "'");
    }
    if (used != s.size()) throw std::invalid_argument("malformed integer '" + text + "'");
    return v;
}

}  // namespace detail

/// Finitely supported probability measure on Z with exact rational weights.
class MeasureZ {
public:
    using Atom = std::pair<long long, mpq_class>;

    explicit MeasureZ(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
        if (atoms_.empty()) throw std::invalid_argument("measure has empty support");
        std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.first < b.first; });
        mpq_class total = 0;
        for (auto& a : atoms_) a.second.canonicalize();
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (i && atoms_[i].first == atoms_[i - 1].first) throw std::invalid_argument("repeated support value " + std::to_string(atoms_[i].first));
            if (atoms_[i].second <= 0) throw std::invalid_argument("support weights must be positive");
            total += atoms_[i].second;
        }
        if (total != 1) throw std::invalid_argument("weights sum to " + total.get_str() + ", not 1");
    }

    /// (delta_{-1} + delta_1) / 2.
    static MeasureZ pm1() { return MeasureZ({{-1, mpq_class(1, 2)}, {1, mpq_class(1, 2)}}); }

    /// Uniform on the integers a..b inclusive.
    static MeasureZ range(long long a, long long b) {
        if (a > b) throw std::invalid_argument("empty range");
        if (b - a >= (1LL << 24)) throw std::invalid_argument("range support too large");
        std::vector<Atom> atoms;
        const mpq_class w(1, static_cast<unsigned long>(b - a + 1));
        for (long long v = a; v <= b; ++v) atoms.emplace_back(v, w);
        return MeasureZ(std::move(atoms));
    }

    static MeasureZ point(long long v) { return MeasureZ({{v, mpq_class(1)}}); }

    const std::vector<Atom>& atoms() const { return atoms_; }

    /// Largest |value| in the support.
    long long height() const {
        long long h = 0;
        for (const auto& [v, w] : atoms_) h = std::max(h, v < 0 ? -v : v);
        return h;
    }

private:
    std::vector<Atom> atoms_;
};

/// Probability measure on F_q with exact rational weights. Atoms are sorted by
/// code and carry positive weight. Copies share the lazily built Fourier table.
class MeasureFq {
public:
    using Atom = std::pair<FieldElem, mpq_class>;
    /// Fields up to this order get a cached table of all transform values.
    static constexpr u64 kTableLimit = 1u << 16;

    MeasureFq(Field f, std::vector<Atom> atoms) : d_(std::make_shared<Data>()) {
        d_->field = std::move(f);
        std::map<u64, mpq_class> merged;
        for (auto& [x, w] : atoms) {
            w.canonicalize();
            if (x.code >= d_->field.order()) throw std::out_of_range("measure atom outside the field");
            if (w < 0) throw std::invalid_argument("negative measure weight");
            merged[x.code] += w;
        }
        mpq_class total = 0;
        for (auto& [c, w] : merged) {
            total += w;
            if (w > 0) d_->atoms.emplace_back(FieldElem{c}, w);
        }
        if (total != 1) throw std::invalid_argument("weights sum to " + total.get_str() + ", not 1");
        for (const auto& a : d_->atoms) d_->approx.emplace_back(a.first, a.second.get_d());
    }

    static MeasureFq uniform(const Field& f) {
        if (f.order() > (1u << 22)) throw std::invalid_argument("uniform measure on F_" + f.label() + " too large to tabulate");
        std::vector<Atom> atoms;
        const mpq_class w(1, static_cast<unsigned long>(f.order()));
        for (u64 c = 0; c < f.order(); ++c) atoms.emplace_back(FieldElem{c}, w);
        return MeasureFq(f, std::move(atoms));
    }

    static MeasureFq point(const Field& f, FieldElem x) { return MeasureFq(f, {{x, mpq_class(1)}}); }

    const Field& field() const { return d_->field; }
    const std::vector<Atom>& atoms() const { return d_->atoms; }
    /// Atoms with double weights, for floating-point kernels.
    const std::vector<std::pair<FieldElem, double>>& approx_atoms() const { return d_->approx; }

    mpq_class weight(FieldElem x) const {
        auto it = std::lower_bound(d_->atoms.begin(), d_->atoms.end(), x, [](const Atom& a, FieldElem v) { return a.first < v; });
        return it != d_->atoms.end() && it->first == x ? it->second : mpq_class(0);
    }

    bool is_uniform() const {
        const auto& a = d_->atoms;
        return a.size() == d_->field.order() && std::all_of(a.begin(), a.end(), [&](const Atom& t) { return t.second == a.front().second; });
    }

    /// mu^(u) = sum_x mu(x) chi(-ux), with mu^(0) = 1 exactly.
    std::complex<double> fourier(FieldElem u) const {
        if (u.code == 0) return {1.0, 0.0};
        if (d_->field.order() <= kTableLimit) return table()[u.code];
        return direct(u);
    }

    /// All transform values indexed by code; only for q <= kTableLimit.
    const std::vector<std::complex<double>>& table() const {
        if (d_->field.order() > kTableLimit) throw std::invalid_argument("Fourier table too large for F_" + d_->field.label());
        std::call_once(d_->once, [this] {
            auto& t = d_->table;
            t.resize(d_->field.order());
            t[0] = {1.0, 0.0};
            for (u64 c = 1; c < d_->field.order(); ++c) t[c] = direct({c});
        });
        return d_->table;
    }

    friend bool operator==(const MeasureFq& a, const MeasureFq& b) {
        return a.field() == b.field() && a.atoms() == b.atoms();
    }

private:
    struct Data {
        Field field;
        std::vector<Atom> atoms;
        std::vector<std::pair<FieldElem, double>> approx;
        std::once_flag once;
        std::vector<std::complex<double>> table;
    };

    std::complex<double> direct(FieldElem u) const {
        const Field& f = d_->field;
        const FieldElem mu = f.neg(u);
        std::complex<double> s = 0;
        for (const auto& [x, w] : d_->approx) s += w * f.character(f.mul(mu, x));
        return s;
    }

    std::shared_ptr<Data> d_;
};

inline std::complex<double> fourier(const MeasureFq& mu, FieldElem u) { return mu.fourier(u); }

/// Push-forward of mu under Z -> F_p. Extension fields are rejected.
inline MeasureFq reduce_mod(const MeasureZ& mu, const Field& f) {
    if (!f.is_prime_field()) throw std::invalid_argument("reduction mod p only targets prime fields, not F_" + f.label());
    std::vector<MeasureFq::Atom> atoms;
    for (const auto& [v, w] : mu.atoms()) atoms.emplace_back(f.from_int(v), w);
    return MeasureFq(f, std::move(atoms));
}

/// Push-forward of mu under x -> x + a.
inline MeasureFq translate(const MeasureFq& mu, FieldElem a) {
    std::vector<MeasureFq::Atom> atoms;
    for (const auto& [x, w] : mu.atoms()) atoms.emplace_back(mu.field().add(x, a), w);
    return MeasureFq(mu.field(), std::move(atoms));
}

/// Largest alpha with mu(x + H) <= 1 - alpha for all x and proper subgroups H.
/// A proper F_p-subspace lies in a hyperplane {x : Tr(ux) = 0}, u != 0, so
/// the worst coset is a coset of a hyperplane.
inline mpq_class balancedness(const MeasureFq& mu) {
    const Field& f = mu.field();
    const u64 p = f.characteristic();
    mpq_class worst = 0;
    std::vector<mpq_class> mass(p);
    for (u64 u = 1; u < f.order(); ++u) {
        for (auto& m : mass) m = 0;
        for (const auto& [x, w] : mu.atoms()) mass[f.trace(f.mul({u}, x))] += w;
        for (const auto& m : mass) worst = std::max(worst, m);
    }
    return 1 - worst;
}

/// Spec_t mu = {u : |mu^(u)| >= t}, by full scan. Comparisons allow 1e-12 of
/// floating-point slack.
inline std::vector<FieldElem> large_spectrum(const MeasureFq& mu, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("spectrum threshold must lie in [0, 1]");
    std::vector<FieldElem> out;
    for (u64 u = 0; u < mu.field().order(); ++u)
        if (std::abs(mu.fourier({u})) >= t - 1e-12) out.push_back({u});
    return out;
}

/// |Spec_{1 - eps alpha} mu \ {0}| / (eps^{1/2} q); a diagnostic with no asserted bound.
inline double spectrum_ratio(const MeasureFq& mu, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0, 1]");
    const double alpha = balancedness(mu).get_d();
    const auto spec = large_spectrum(mu, std::max(0.0, 1.0 - eps * alpha));
    return static_cast<double>(spec.size() - 1) / (std::sqrt(eps) * static_cast<double>(mu.field().order()));
}

/// nu = (1 - gamma) delta_0 + gamma mu * mu^-, so nu^ = 1 - gamma + gamma |mu^|^2.
inline MeasureFq smooth(const MeasureFq& mu, const mpq_class& gamma = mpq_class(1, 8)) {
    if (gamma <= 0 || gamma > mpq_class(1, 8)) throw std::invalid_argument("gamma must lie in (0, 1/8]");
    const Field& f = mu.field();
    std::vector<MeasureFq::Atom> atoms{{f.zero(), 1 - gamma}};
    for (const auto& [x, wx] : mu.atoms())
        for (const auto& [y, wy] : mu.atoms()) atoms.emplace_back(f.sub(x, y), gamma * wx * wy);
    return MeasureFq(f, std::move(atoms));
}

/// Independent entry measures of an n x n random matrix.
class MeasureMatrix {
public:
    MeasureMatrix(std::size_t n, std::vector<MeasureFq> entries) : n_(n), entries_(std::move(entries)) {
        if (entries_.size() != n * n) throw std::invalid_argument("measure matrix needs n^2 entries");
        for (const auto& m : entries_)
            if (!(m.field() == entries_.front().field())) throw std::invalid_argument("entry measures over different fields");
    }

    static MeasureMatrix iid(std::size_t n, const MeasureFq& mu) { return MeasureMatrix(n, std::vector<MeasureFq>(n * n, mu)); }

    /// Entries in row i follow rows[i].
    static MeasureMatrix by_row(const std::vector<MeasureFq>& rows) {
        const std::size_t n = rows.size();
        std::vector<MeasureFq> e;
        for (const auto& m : rows) e.insert(e.end(), n, m);
        return MeasureMatrix(n, std::move(e));
    }

    std::size_t size() const { return n_; }
    const Field& field() const { return entries_.front().field(); }
    const MeasureFq& at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    std::span<const MeasureFq> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }

private:
    std::size_t n_ = 0;
    std::vector<MeasureFq> entries_;
};

/// A subspace V of F_q^n, stored through a basis of V^perp for the dot product.
class Subspace {
public:
    /// V = {x : Bx = 0}; rows of B must be independent.
    static Subspace from_perp(MatFq b) {
        if (rank(b) != b.rows()) throw std::invalid_argument("annihilator rows are dependent");
        return Subspace(std::move(b));
    }

    /// V = row span of the generators.
    static Subspace span_of(const MatFq& generators) { return Subspace(kernel_basis(generators)); }

    static Subspace whole(const Field& f, std::size_t n) { return Subspace(MatFq(f, 0, n)); }

    const Field& field() const { return perp_.field(); }
    std::size_t ambient_dim() const { return perp_.cols(); }
    std::size_t codim() const { return perp_.rows(); }
    const MatFq& perp() const { return perp_; }

    /// Coordinates of Bx, identifying the coset x + V.
    std::vector<FieldElem> syndrome(std::span<const FieldElem> x) const {
        if (x.size() != ambient_dim()) throw std::invalid_argument("vector length does not match the subspace");
        const Field& f = field();
        std::vector<FieldElem> s(codim(), f.zero());
        for (std::size_t i = 0; i < codim(); ++i)
            for (std::size_t j = 0; j < ambient_dim(); ++j) s[i] = f.add(s[i], f.mul(perp_.at(i, j), x[j]));
        return s;
    }

    bool contains(std::span<const FieldElem> x) const {
        const auto s = syndrome(x);
        return std::all_of(s.begin(), s.end(), [](FieldElem e) { return e.code == 0; });
    }

    /// Base-q index of a syndrome vector.
    u64 coset_index(std::span<const FieldElem> s) const {
        u64 idx = 0;
        for (std::size_t i = s.size(); i-- > 0;) idx = idx * field().order() + s[i].code;
        return idx;
    }

    /// q^codim, or nullopt beyond cap.
    std::optional<u64> coset_count(u64 cap) const {
        u64 c = 1;
        for (std::size_t i = 0; i < codim(); ++i) {
            if (c > cap / field().order()) return std::nullopt;
            c *= field().order();
        }
        return c <= cap ? std::optional<u64>(c) : std::nullopt;
    }

private:
    explicit Subspace(MatFq b) : perp_(std::move(b)) {}
    MatFq perp_;
};

namespace detail {

inline u64 checked_cosets(const Subspace& v, u64 cap) {
    auto c = v.coset_count(cap);
    if (!c) throw std::invalid_argument("q^codim exceeds the coset cap " + std::to_string(cap));
    return *c;
}

// Law of Bx over F_q^d by dynamic programming over coordinates.
template <class W, class Weight>
std::vector<W> coset_law_dp(const Subspace& v, std::span<const MeasureFq> coords, u64 cosets, Weight weight) {
    const Field& f = v.field();
    const std::size_t d = v.codim(), n = v.ambient_dim();
    const u64 q = f.order();
    std::vector<W> law(cosets, W(0)), next(cosets);
    law[0] = W(1);
    std::vector<u64> digits(d);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(next.begin(), next.end(), W(0));
        for (const auto& atom : coords[j].atoms()) {
            const FieldElem x = atom.first;
            const W w = weight(atom);
            std::vector<FieldElem> shift(d);
            for (std::size_t i = 0; i < d; ++i) shift[i] = f.mul(v.perp().at(i, j), x);
            for (u64 s = 0; s < cosets; ++s) {
                if (law[s] == W(0)) continue;
                u64 rest = s, target = 0, scale = 1;
                for (std::size_t i = 0; i < d; ++i) {
                    target += f.add({rest % q}, shift[i]).code * scale;
                    rest /= q;
                    scale *= q;
                }
                next[target] += law[s] * w;
            }
        }
        law.swap(next);
    }
    return law;
}

}  // namespace detail

/// P(X in x + V) for every coset, X with independent coordinates, by direct
/// enumeration. Index is coset_index(Bx).
inline std::vector<double> coset_probabilities_enumerate(const Subspace& v, std::span<const MeasureFq> coords, u64 cap = 1000000) {
    if (coords.size() != v.ambient_dim()) throw std::invalid_argument("need one measure per coordinate");
    const u64 cosets = detail::checked_cosets(v, cap);
    return detail::coset_law_dp<double>(v, coords, cosets, [](const MeasureFq::Atom& a) { return a.second.get_d(); });
}

inline std::vector<mpq_class> coset_probabilities_exact(const Subspace& v, std::span<const MeasureFq> coords, u64 cap = 1000000) {
    if (coords.size() != v.ambient_dim()) throw std::invalid_argument("need one measure per coordinate");
    const u64 cosets = detail::checked_cosets(v, cap);
    return detail::coset_law_dp<mpq_class>(v, coords, cosets, [](const MeasureFq::Atom& a) { return a.second; });
}

/// Same law through P(X in x + V) = |V^perp|^-1 sum_c chi(c.s) prod_j mu_j^((B^T c)_j),
/// with s = Bx; the sum over c factors into one transform per axis.
inline std::vector<double> coset_probabilities_fourier(const Subspace& v, std::span<const MeasureFq> coords, u64 cap = 1000000) {
    if (coords.size() != v.ambient_dim()) throw std::invalid_argument("need one measure per coordinate");
    const u64 cosets = detail::checked_cosets(v, cap);
    const Field& f = v.field();
    const u64 q = f.order();
    const std::size_t d = v.codim(), n = v.ambient_dim();

    std::vector<std::complex<double>> g(cosets);
    std::vector<std::vector<FieldElem>> partial(d + 1, std::vector<FieldElem>(n, f.zero()));
    std::vector<u64> c(d, 0);
    for (u64 idx = 0; idx < cosets; ++idx) {
        // c is the base-q expansion of idx and partial[l] = sum_{i >= l} c_i B_i;
        // only levels at or below the highest changed digit need refreshing.
        std::size_t changed = d;
        if (idx) {
            std::size_t i = 0;
            while (++c[i] == q) c[i++] = 0;
            changed = i;
        }
        for (std::size_t lvl = idx ? changed + 1 : 0; lvl-- > 0;)
            for (std::size_t j = 0; j < n; ++j)
                partial[lvl][j] = f.add(partial[lvl + 1][j], f.mul({c[lvl]}, v.perp().at(lvl, j)));
        std::complex<double> prod = 1.0;
        for (std::size_t j = 0; j < n && prod != 0.0; ++j) prod *= coords[j].fourier(partial[0][j]);
        g[idx] = prod;
    }

    std::vector<std::complex<double>> chi(q * q);
    for (u64 a = 0; a < q; ++a)
        for (u64 b = 0; b < q; ++b) chi[a * q + b] = f.character(f.mul({a}, {b}));
    std::vector<std::complex<double>> line(q);
    u64 stride = 1;
    for (std::size_t axis = 0; axis < d; ++axis, stride *= q) {
        for (u64 base = 0; base < cosets; ++base) {
            if ((base / stride) % q != 0) continue;
            for (u64 s = 0; s < q; ++s) {
                std::complex<double> acc = 0;
                for (u64 a = 0; a < q; ++a) acc += chi[a * q + s] * g[base + a * stride];
                line[s] = acc;
            }
            for (u64 s = 0; s < q; ++s) g[base + s * stride] = line[s];
        }
    }
    std::vector<double> out(cosets);
    for (u64 i = 0; i < cosets; ++i) out[i] = g[i].real() / static_cast<double>(cosets);
    return out;
}

struct RhoResult {
    std::vector<double> per_row;  // rho_i(V)
    double rho = 0.0;             // max_i rho_i(V)
    bool cross_checked = false;   // both coset-law paths ran
    double path_gap = 0.0;        // largest disagreement between them
};

struct RhoOptions {
    u64 coset_cap = 1000000;
    // Upper bound on q^codim * q * codim for the Fourier path.
    u64 fourier_budget = 200000000;
    // Enumeration runs as a cross-check whenever q^n is at most this.
    u64 cross_check_cap = 1000000;
};

/// rho_i(V) = max_x |P(X_i in x + V) - q^-codim| for each row of the measure matrix.
inline RhoResult rho(const Subspace& v, const MeasureMatrix& mm, const RhoOptions& opt = {}) {
    if (mm.size() != v.ambient_dim()) throw std::invalid_argument("measure matrix and subspace dimensions differ");
    const u64 cosets = detail::checked_cosets(v, opt.coset_cap);
    const u64 q = v.field().order();
    const bool fourier_ok = cosets <= opt.fourier_budget / q / std::max<u64>(1, v.codim());
    bool small_space = true;
    u64 space = 1;
    for (std::size_t i = 0; i < v.ambient_dim() && small_space; ++i) {
        if (space > opt.cross_check_cap / q) small_space = false;
        space *= q;
    }
    RhoResult r;
    r.cross_checked = fourier_ok && small_space;
    const double target = 1.0 / static_cast<double>(cosets);
    for (std::size_t i = 0; i < mm.size(); ++i) {
        std::vector<double> law;
        if (fourier_ok) law = coset_probabilities_fourier(v, mm.row(i), opt.coset_cap);
        if (!fourier_ok || r.cross_checked) {
            auto direct = coset_probabilities_enumerate(v, mm.row(i), opt.coset_cap);
            if (fourier_ok)
                for (u64 s = 0; s < cosets; ++s) r.path_gap = std::max(r.path_gap, std::abs(direct[s] - law[s]));
            law = std::move(direct);
        }
        double dev = 0.0;
        for (double pr : law) dev = std::max(dev, std::abs(pr - target));
        r.per_row.push_back(dev);
        r.rho = std::max(r.rho, dev);
    }
    return r;
}

/// Row i has all entries distributed as row_measures[i].
inline RhoResult rho(const Subspace& v, const std::vector<MeasureFq>& row_measures, const RhoOptions& opt = {}) {
    return rho(v, MeasureMatrix::by_row(row_measures), opt);
}

struct OdlyzkoCheck {
    mpq_class probability;  // P(X in x + V), exact
    mpq_class alpha;        // min coordinate balancedness
    mpq_class bound;        // (1 - alpha)^codim
    bool holds = false;
};

/// Exact P(X in x + V) against the bound (1 - alpha)^codim V.
inline OdlyzkoCheck odlyzko_bound_check(const Subspace& v, std::span<const FieldElem> x, std::span<const MeasureFq> coords, u64 cap = 1000000) {
    OdlyzkoCheck r;
    const auto law = coset_probabilities_exact(v, coords, cap);
    r.probability = law[v.coset_index(v.syndrome(x))];
    r.alpha = 1;
    for (const auto& m : coords) r.alpha = std::min(r.alpha, balancedness(m));
    r.bound = 1;
    for (std::size_t i = 0; i < v.codim(); ++i) r.bound *= 1 - r.alpha;
    r.holds = r.probability <= r.bound;
    return r;
}

/// Measure grammar: "pm1", "uniform", "range:a..b", "table:v1:w1,v2:w2,...".
/// Only integer-valued specs ("uniform" excluded) have a measure on Z.
inline MeasureZ parse_measure_z(const std::string& spec) {
    const std::string s = detail::strip(spec);
    if (s == "pm1") return MeasureZ::pm1();
    if (s == "uniform") throw std::invalid_argument("'uniform' names a measure on F_q, not on Z");
    if (s.rfind("range:", 0) == 0) {
        const std::string body = s.substr(6);
        const auto dots = body.find("..");
        if (dots == std::string::npos) throw std::invalid_argument("range measure needs 'range:a..b'");
        return MeasureZ::range(detail::parse_ll(body.substr(0, dots)), detail::parse_ll(body.substr(dots + 2)));
    }
    if (s.rfind("table:", 0) == 0) {
        std::vector<MeasureZ::Atom> atoms;
        for (const auto& item : detail::split(s.substr(6), ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) throw std::invalid_argument("table entry '" + item + "' needs value:weight");
            atoms.emplace_back(detail::parse_ll(item.substr(0, colon)), detail::parse_rational(item.substr(colon + 1)));
        }
        return MeasureZ(std::move(atoms));
    }
    throw std::invalid_argument("unknown measure '" + spec + "'");
}

/// The measure on F_q named by spec. Integer specs are reduced mod p on prime
/// fields; on extension fields table values are element codes and only
/// "uniform" and "table" are accepted.
inline MeasureFq parse_measure(const std::string& spec, const Field& f) {
    const std::string s = detail::strip(spec);
    if (s == "uniform") return MeasureFq::uniform(f);
    if (f.is_prime_field()) return reduce_mod(parse_measure_z(s), f);
    if (s.rfind("table:", 0) != 0) throw std::invalid_argument("measure '" + spec + "' cannot be reduced to F_" + f.label());
    std::vector<MeasureFq::Atom> atoms;
    for (const auto& item : detail::split(s.substr(6), ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("table entry '" + item + "' needs value:weight");
        atoms.emplace_back(f.element(detail::parse_u64(detail::strip(item.substr(0, colon)), "element code")),
                           detail::parse_rational(item.substr(colon + 1)));
    }
    return MeasureFq(f, std::move(atoms));
}

}  // namespace cpl
