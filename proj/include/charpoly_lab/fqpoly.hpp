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

#include <algorithm>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "gf.hpp"
#include "rng.hpp"

namespace cpl {

/// Dense polynomial over F_q, coefficients low to high. Canonical: no trailing
/// zero coefficients, so the zero polynomial has an empty coefficient vector.
class PolyFq {
public:
    PolyFq() = default;
    explicit PolyFq(Field f) : field_(std::move(f)) {}
    PolyFq(Field f, std::vector<FieldElem> c) : field_(std::move(f)), c_(std::move(c)) {
        for (auto e : c_) field_.element(e.code);
        normalize();
    }

    static PolyFq from_codes(const Field& f, std::span<const u64> codes) {
        std::vector<FieldElem> c;
        c.reserve(codes.size());
        for (u64 v : codes) c.push_back(f.element(v));
        return PolyFq(f, std::move(c));
    }
    static PolyFq from_codes(const Field& f, std::initializer_list<u64> codes) {
        return from_codes(f, std::span<const u64>(codes.begin(), codes.size()));
    }
    static PolyFq constant(const Field& f, FieldElem c) { return PolyFq(f, {c}); }
    static PolyFq one(const Field& f) { return constant(f, f.one()); }
    /// c * t^deg
    static PolyFq monomial(const Field& f, FieldElem c, std::size_t deg) {
        std::vector<FieldElem> v(deg + 1, f.zero());
        v[deg] = c;
        return PolyFq(f, std::move(v));
    }
    static PolyFq x(const Field& f) { return monomial(f, f.one(), 1); }

    const Field& field() const { return field_; }
    const std::vector<FieldElem>& coeffs() const { return c_; }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == field_.one(); }
    bool is_monic() const { return !c_.empty() && c_.back() == field_.one(); }
    FieldElem leading() const { return c_.empty() ? field_.zero() : c_.back(); }
    FieldElem operator[](std::size_t i) const { return i < c_.size() ? c_[i] : field_.zero(); }

    FieldElem evaluate(FieldElem x) const {
        FieldElem acc = field_.zero();
        for (std::size_t i = c_.size(); i-- > 0;) acc = field_.add(field_.mul(acc, x), c_[i]);
        return acc;
    }

    friend bool operator==(const PolyFq& a, const PolyFq& b) { return a.field_ == b.field_ && a.c_ == b.c_; }

    /// Canonical order: by degree, then coefficients from the constant term up.
    friend std::strong_ordering operator<=>(const PolyFq& a, const PolyFq& b) {
        if (auto c = a.c_.size() <=> b.c_.size(); c != 0) return c;
        return std::lexicographical_compare_three_way(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
    }

    friend PolyFq operator+(const PolyFq& a, const PolyFq& b) { return combine(a, b, false); }
    friend PolyFq operator-(const PolyFq& a, const PolyFq& b) { return combine(a, b, true); }

    friend PolyFq operator*(const PolyFq& a, const PolyFq& b) {
        check_same(a, b);
        if (a.is_zero() || b.is_zero()) return PolyFq(a.field_);
        const Field& f = a.field_;
        std::vector<FieldElem> r(a.c_.size() + b.c_.size() - 1, f.zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].code == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a.c_[i], b.c_[j]));
        }
        return PolyFq(f, std::move(r), Trusted{});
    }

    PolyFq scaled(FieldElem s) const {
        if (s.code == 0) return PolyFq(field_);
        std::vector<FieldElem> r(c_);
        for (auto& e : r) e = field_.mul(e, s);
        return PolyFq(field_, std::move(r), Trusted{});
    }

    /// "c0,c1,...,cd" with element codes; "0" for the zero polynomial.
    std::string to_string() const {
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(c_[i].code);
        }
        return s;
    }

    static void check_same(const PolyFq& a, const PolyFq& b) {
        if (!(a.field_ == b.field_)) throw std::invalid_argument("polynomials over different fields");
    }

private:
    struct Trusted {};
    PolyFq(Field f, std::vector<FieldElem> c, Trusted) : field_(std::move(f)), c_(std::move(c)) { normalize(); }

    friend PolyFq divrem_impl(PolyFq, const PolyFq&, PolyFq*);

    void normalize() {
        while (!c_.empty() && c_.back().code == 0) c_.pop_back();
    }

    static PolyFq combine(const PolyFq& a, const PolyFq& b, bool subtract) {
        check_same(a, b);
        const Field& f = a.field_;
        std::vector<FieldElem> r(std::max(a.c_.size(), b.c_.size()), f.zero());
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = subtract ? f.sub(a[i], b[i]) : f.add(a[i], b[i]);
        return PolyFq(f, std::move(r), Trusted{});
    }

    Field field_;
    std::vector<FieldElem> c_;
};

// Returns the remainder of a / b; stores the quotient in *quot when given.
inline PolyFq divrem_impl(PolyFq a, const PolyFq& b, PolyFq* quot) {
    PolyFq::check_same(a, b);
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    const Field& f = a.field_;
    const std::size_t db = b.c_.size() - 1;
    const FieldElem lead_inv = f.inv(b.c_.back());
    std::vector<FieldElem> q;
    if (a.c_.size() > db) q.assign(a.c_.size() - db, f.zero());
    auto& r = a.c_;
    while (r.size() > db) {
        const std::size_t shift = r.size() - 1 - db;
        const FieldElem c = f.mul(r.back(), lead_inv);
        q[shift] = c;
        if (c.code != 0)
            for (std::size_t i = 0; i < db; ++i) r[shift + i] = f.sub(r[shift + i], f.mul(c, b.c_[i]));
        r.pop_back();
        a.normalize();
    }
    if (quot) *quot = PolyFq(f, std::move(q), PolyFq::Trusted{});
    return a;
}

inline std::pair<PolyFq, PolyFq> divrem(const PolyFq& a, const PolyFq& b) {
    PolyFq q;
    PolyFq r = divrem_impl(a, b, &q);
    return {std::move(q), std::move(r)};
}

inline PolyFq operator%(const PolyFq& a, const PolyFq& b) { return divrem_impl(a, b, nullptr); }

inline PolyFq operator/(const PolyFq& a, const PolyFq& b) {
    PolyFq q;
    divrem_impl(a, b, &q);
    return q;
}

/// a scaled to leading coefficient 1; zero stays zero.
inline PolyFq monic(const PolyFq& a) {
    if (a.is_zero() || a.is_monic()) return a;
    return a.scaled(a.field().inv(a.leading()));
}

inline PolyFq derivative(const PolyFq& a) {
    const Field& f = a.field();
    if (a.degree() < 1) return PolyFq(f);
    std::vector<FieldElem> r(a.coeffs().size() - 1);
    for (std::size_t i = 1; i < a.coeffs().size(); ++i)
        r[i - 1] = f.mul(f.from_int(static_cast<long long>(i % f.characteristic())), a.coeffs()[i]);
    return PolyFq(f, std::move(r));
}

/// Monic gcd; gcd(0, 0) = 0.
inline PolyFq gcd(PolyFq a, PolyFq b) {
    PolyFq::check_same(a, b);
    while (!b.is_zero()) {
        PolyFq r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

inline PolyFq mulmod(const PolyFq& a, const PolyFq& b, const PolyFq& m) { return (a * b) % m; }

/// base^e mod m by square-and-multiply.
inline PolyFq powmod(const PolyFq& base, const mpz_class& e, const PolyFq& m) {
    if (m.degree() < 1) throw std::invalid_argument("powmod needs a modulus of degree >= 1");
    if (e < 0) throw std::invalid_argument("negative exponent");
    PolyFq acc = PolyFq::one(m.field()) % m;
    const PolyFq b = base % m;
    const auto bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        acc = mulmod(acc, acc, m);
        if (mpz_tstbit(e.get_mpz_t(), i)) acc = mulmod(acc, b, m);
    }
    return acc;
}

inline PolyFq powmod(const PolyFq& base, u64 e, const PolyFq& m) {
    mpz_class ez;
    mpz_import(ez.get_mpz_t(), 1, 1, sizeof(e), 0, 0, &e);
    return powmod(base, ez, m);
}

namespace detail {

inline std::string strip(std::string s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    return s;
}

/// Splits on sep, keeping empty fields.
inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        out.push_back(strip(text.substr(start, pos - start)));
        if (pos == std::string::npos) return out;
        start = pos + 1;
    }
}

}  // namespace detail

/// One coefficient token: an integer reduced mod p for prime fields, an
/// element code in [0, q) for extension fields.
inline FieldElem parse_element(const Field& f, const std::string& token) {
    const std::string tok = detail::strip(token);
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad coefficient '" + tok + "'");
    }
    if (used != tok.size()) throw std::invalid_argument("bad coefficient '" + tok + "'");
    if (f.is_prime_field()) return f.from_int(v);
    if (v < 0) throw std::invalid_argument("extension-field coefficients are codes in [0, q)");
    return f.element(static_cast<u64>(v));
}

/// Parses "c0,c1,...,cd" (low to high).
inline PolyFq parse_poly(const Field& f, const std::string& text) {
    std::vector<FieldElem> c;
    for (const auto& tok : detail::split(text, ',')) c.push_back(parse_element(f, tok));
    return PolyFq(f, std::move(c));
}

/// Complete factorization: unit * prod factor^multiplicity.
struct Factorization {
    FieldElem unit;
    std::vector<std::pair<PolyFq, unsigned>> factors;

    /// Degrees of the irreducible factors, repeated by multiplicity, descending.
    std::vector<unsigned> degrees() const {
        std::vector<unsigned> d;
        for (const auto& [g, m] : factors) d.insert(d.end(), m, static_cast<unsigned>(g.degree()));
        std::sort(d.rbegin(), d.rend());
        return d;
    }

    bool squarefree() const {
        return std::all_of(factors.begin(), factors.end(), [](const auto& fm) { return fm.second == 1; });
    }

    PolyFq expand(const Field& f) const {
        PolyFq acc = PolyFq::constant(f, unit);
        for (const auto& [g, m] : factors)
            for (unsigned i = 0; i < m; ++i) acc = acc * g;
        return acc;
    }

    friend bool operator==(const Factorization&, const Factorization&) = default;
};

namespace detail {

// g(t) with g(t)^p = a(t); requires a' = 0. In F_q the p-th root of c is c^(q/p).
inline PolyFq pth_root(const PolyFq& a) {
    const Field& f = a.field();
    const u64 p = f.characteristic();
    const u64 root_exp = f.order() / p;
    std::vector<FieldElem> r(a.coeffs().size() / p + 1, f.zero());
    for (std::size_t i = 0; i < a.coeffs().size(); i += p) r[i / p] = f.pow(a.coeffs()[i], root_exp);
    return PolyFq(f, std::move(r));
}

/// Squarefree decomposition of a monic polynomial: pairs (g_i, i) with g_i
/// squarefree, pairwise coprime, prod g_i^i = a.
inline std::vector<std::pair<PolyFq, unsigned>> squarefree_decomposition(const PolyFq& a) {
    std::vector<std::pair<PolyFq, unsigned>> out;
    if (a.degree() < 1) return out;
    const unsigned p = static_cast<unsigned>(std::min<u64>(a.field().characteristic(), 1u << 30));
    const PolyFq da = derivative(a);
    PolyFq c = a;
    if (!da.is_zero()) {
        c = gcd(a, da);
        PolyFq w = a / c;
        unsigned i = 1;
        while (w.degree() > 0) {
            PolyFq y = gcd(w, c);
            PolyFq fac = w / y;
            if (fac.degree() > 0) out.emplace_back(monic(fac), i);
            w = std::move(y);
            c = c / w;
            ++i;
        }
    }
    if (c.degree() > 0) {
        for (auto& [g, m] : squarefree_decomposition(pth_root(c))) out.emplace_back(std::move(g), m * p);
    }
    return out;
}

/// Distinct-degree factorization of a squarefree monic polynomial: pairs
/// (product of all irreducible factors of degree d, d).
inline std::vector<std::pair<PolyFq, unsigned>> distinct_degree(PolyFq f) {
    std::vector<std::pair<PolyFq, unsigned>> out;
    const Field& F = f.field();
    const PolyFq x = PolyFq::x(F);
    PolyFq h = x % f;
    for (unsigned d = 1; f.degree() >= 2 * static_cast<int>(d); ++d) {
        h = powmod(h, F.order(), f);
        PolyFq g = gcd(h - x, f);
        if (g.degree() > 0) {
            f = f / g;
            h = h % f;
            out.emplace_back(std::move(g), d);
        }
    }
    if (f.degree() > 0) out.emplace_back(f, static_cast<unsigned>(f.degree()));
    return out;
}

inline PolyFq random_poly_below(const Field& F, int deg, Rng& rng) {
    std::vector<FieldElem> c(static_cast<std::size_t>(deg));
    for (auto& e : c) e = FieldElem{uniform_below(rng, F.order())};
    return PolyFq(F, std::move(c));
}

/// Cantor-Zassenhaus equal-degree splitting of a monic squarefree f whose
/// irreducible factors all have degree d.
inline void equal_degree(const PolyFq& f, unsigned d, Rng& rng, std::vector<PolyFq>& out) {
    if (f.degree() <= static_cast<int>(d)) {
        out.push_back(f);
        return;
    }
    const Field& F = f.field();
    const bool even = F.characteristic() == 2;
    mpz_class half;
    if (!even) {
        mpz_ui_pow_ui(half.get_mpz_t(), F.order(), d);  // fits: q < 2^63
        half = (half - 1) / 2;
    }
    for (;;) {
        const PolyFq a = random_poly_below(F, f.degree(), rng);
        if (a.degree() < 1) continue;
        PolyFq g = gcd(a, f);
        if (g.degree() <= 0) {
            PolyFq b;
            if (even) {
                // trace map a + a^2 + ... + a^(2^(kd-1)) onto F_2
                const unsigned steps = F.degree() * d;
                PolyFq term = a % f;
                b = term;
                for (unsigned i = 1; i < steps; ++i) {
                    term = mulmod(term, term, f);
                    b = b + term;
                }
            } else {
                b = powmod(a, half, f) - PolyFq::one(F);
            }
            g = gcd(b, f);
        }
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, rng, out);
            equal_degree(f / g, d, rng, out);
            return;
        }
    }
}

}  // namespace detail

/// Splits phi = unit * psi1 * psi2 with psi1 squarefree (the multiplicity-one
/// irreducible factors), psi2 square-full, gcd(psi1, psi2) = 1, both monic.
inline std::pair<PolyFq, PolyFq> squarefree_split(const PolyFq& phi) {
    if (phi.is_zero()) throw std::invalid_argument("squarefree_split of the zero polynomial");
    const Field& F = phi.field();
    const PolyFq m = monic(phi);
    PolyFq psi1 = PolyFq::one(F);
    for (const auto& [g, mult] : detail::squarefree_decomposition(m))
        if (mult == 1) psi1 = g;
    return {psi1, m / psi1};
}

/// Complete factorization into monic irreducibles, factors in canonical
/// order. The seed only drives equal-degree splitting; the result does not
/// depend on it.
inline Factorization factor(const PolyFq& phi, std::uint64_t seed = 0) {
    if (phi.degree() < 1) throw std::invalid_argument("factor needs degree >= 1");
    Rng rng(substream_seed(seed, 0xfac7));
    Factorization out{phi.leading(), {}};
    for (const auto& [g, mult] : detail::squarefree_decomposition(monic(phi))) {
        for (const auto& [block, d] : detail::distinct_degree(g)) {
            std::vector<PolyFq> pieces;
            detail::equal_degree(block, d, rng, pieces);
            for (auto& piece : pieces) out.factors.emplace_back(std::move(piece), mult);
        }
    }
    std::sort(out.factors.begin(), out.factors.end());
    return out;
}

/// Degree-only view: multiset of factor degrees with multiplicity, obtained
/// without equal-degree splitting.
inline std::vector<unsigned> factor_degrees(const PolyFq& phi) {
    if (phi.degree() < 1) throw std::invalid_argument("factor_degrees needs degree >= 1");
    std::vector<unsigned> out;
    for (const auto& [g, mult] : detail::squarefree_decomposition(monic(phi)))
        for (const auto& [block, d] : detail::distinct_degree(g))
            out.insert(out.end(), static_cast<std::size_t>(block.degree() / static_cast<int>(d)) * mult, d);
    std::sort(out.rbegin(), out.rend());
    return out;
}

/// Rabin-style test: f of degree n >= 1 is irreducible iff
/// gcd(t^(q^i) - t, f) = 1 for all i <= n/2.
inline bool is_irreducible(const PolyFq& f) {
    if (f.degree() < 1) return false;
    if (f.degree() == 1) return true;
    const PolyFq m = monic(f);
    const PolyFq x = PolyFq::x(f.field());
    PolyFq h = x % m;
    for (int i = 1; 2 * i <= m.degree(); ++i) {
        h = powmod(h, f.field().order(), m);
        if (gcd(h - x, m).degree() != 0) return false;
    }
    return true;
}

/// Number of distinct roots of phi in F_q, as deg gcd(phi, t^q - t).
inline u64 count_roots(const PolyFq& phi) {
    if (phi.is_zero()) throw std::invalid_argument("count_roots of the zero polynomial");
    if (phi.degree() == 0) return 0;
    const PolyFq m = monic(phi);
    const PolyFq x = PolyFq::x(phi.field());
    const PolyFq h = powmod(x, phi.field().order(), m);
    return static_cast<u64>(gcd(m, h - x).degree());
}

/// Moebius function of a small positive integer.
inline int moebius(u64 n) {
    int mu = 1;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

/// I(d): number of monic irreducible polynomials of degree d over F_q.
inline mpz_class count_irreducibles(unsigned d, u64 q) {
    if (d == 0) throw std::invalid_argument("degree must be >= 1");
    mpz_class sum = 0, term;
    mpz_class qz;
    mpz_import(qz.get_mpz_t(), 1, 1, sizeof(q), 0, 0, &q);
    for (unsigned e = 1; e <= d; ++e) {
        if (d % e) continue;
        const int mu = moebius(e);
        if (mu == 0) continue;
        mpz_pow_ui(term.get_mpz_t(), qz.get_mpz_t(), d / e);
        sum += mu > 0 ? term : mpz_class(-term);
    }
    return sum / d;
}

inline mpz_class count_irreducibles(unsigned d, const Field& f) { return count_irreducibles(d, f.order()); }

}  // namespace cpl
