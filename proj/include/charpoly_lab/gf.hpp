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

#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cpl {

using u64 = std::uint64_t;

namespace detail {

using u128 = unsigned __int128;

inline u64 mulmod64(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin; these bases are exact below 2^64.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 sp : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % sp == 0) return n == sp;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// If n = p^k with p prime, returns (p, k).
inline std::optional<std::pair<u64, unsigned>> prime_power(u64 n) {
    if (n < 2) return std::nullopt;
    for (unsigned k = 63; k >= 1; --k) {
        auto r = static_cast<u64>(std::llround(std::pow(static_cast<long double>(n), 1.0L / k)));
        for (u64 c = (r > 1 ? r - 1 : 1); c <= r + 1; ++c) {
            if (c < 2) continue;
            u128 acc = 1;
            bool over = false;
            for (unsigned i = 0; i < k; ++i) {
                acc *= c;
                if (acc > n) {
                    over = true;
                    break;
                }
            }
            if (!over && acc == n && is_prime_u64(c)) return std::pair{c, k};
        }
    }
    return std::nullopt;
}

/// Residue arithmetic mod a prime p < 2^63. For p < 2^32 products are reduced
/// with a Barrett step instead of a 128-bit division.
class ModP {
public:
    ModP() : ModP(2) {}
    explicit ModP(u64 p) : p_(p), small_(p < (1ULL << 32)), im_(~0ULL / p) {}

    u64 p() const { return p_; }

    u64 add(u64 a, u64 b) const {
        const u64 s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + (p_ - b); }
    u64 neg(u64 a) const { return a == 0 ? 0 : p_ - a; }

    u64 reduce(u64 x) const {
        if (!small_) return x % p_;
        const u64 q = static_cast<u64>((static_cast<u128>(x) * im_) >> 64);
        u64 r = x - q * p_;
        if (r >= p_) r -= p_;
        if (r >= p_) r -= p_;
        return r;
    }

    u64 mul(u64 a, u64 b) const {
        if (small_) return reduce(a * b);
        return mulmod64(a, b, p_);
    }

    u64 pow(u64 a, u64 e) const {
        u64 r = 1 % p_;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    u64 inv(u64 a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        // extended Euclid on signed 128-bit to cover p up to 2^63
        __int128 t = 0, nt = 1, r = p_, nr = a;
        while (nr != 0) {
            const __int128 q = r / nr;
            t -= q * nt;
            std::swap(t, nt);
            r -= q * nr;
            std::swap(r, nr);
        }
        if (t < 0) t += p_;
        return static_cast<u64>(t);
    }

    /// Reduces a signed integer into [0, p).
    u64 from_signed(long long v) const {
        const auto m = static_cast<long long>(p_);
        long long r = v % m;
        if (r < 0) r += m;
        return static_cast<u64>(r);
    }

private:
    u64 p_;
    bool small_;
    u64 im_;
};

// Dense polynomials over F_p as coefficient vectors (low to high). Only used to
// pick the defining modulus of an extension field; PolyFq does the real work.
namespace fp_poly {

inline void trim(std::vector<u64>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<u64> rem(std::vector<u64> a, const std::vector<u64>& m, const ModP& f) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    const u64 lead_inv = f.inv(m.back());
    while (a.size() > dm) {
        const u64 c = f.mul(a.back(), lead_inv);
        const std::size_t shift = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = f.sub(a[shift + i], f.mul(c, m[i]));
        trim(a);
    }
    return a;
}

inline std::vector<u64> mulmod(const std::vector<u64>& a, const std::vector<u64>& b,
                               const std::vector<u64>& m, const ModP& f) {
    if (a.empty() || b.empty()) return {};
    std::vector<u64> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    return rem(std::move(r), m, f);
}

inline std::vector<u64> gcd(std::vector<u64> a, std::vector<u64> b, const ModP& f) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = rem(a, b, f);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

/// f monic of degree k >= 1. f is irreducible iff it has no factor of
/// degree <= k/2, i.e. gcd(x^(p^i) - x, f) = 1 for i <= k/2.
inline bool is_irreducible(const std::vector<u64>& f, const ModP& mod) {
    const std::size_t k = f.size() - 1;
    if (k == 1) return true;
    std::vector<u64> x = rem({0, 1}, f, mod);
    std::vector<u64> h = x;
    for (std::size_t i = 1; i <= k / 2; ++i) {
        std::vector<u64> acc{1};
        std::vector<u64> base = h;
        for (u64 e = mod.p(); e; e >>= 1) {
            if (e & 1) acc = mulmod(acc, base, f, mod);
            base = mulmod(base, base, f, mod);
        }
        h = acc;
        std::vector<u64> d = h;
        d.resize(std::max<std::size_t>(d.size(), 2), 0);
        d[1] = mod.sub(d[1], 1);
        trim(d);
        if (gcd(d, f, mod).size() != 1) return false;
    }
    return true;
}

}  // namespace fp_poly
}  // namespace detail

/// An element of F_q in the polynomial basis over F_p, packed as the base-p
/// number c_0 + c_1 p + ... + c_{k-1} p^{k-1}. For prime fields the code is the
/// residue itself.
struct FieldElem {
    u64 code = 0;
    friend constexpr bool operator==(FieldElem, FieldElem) = default;
    friend constexpr auto operator<=>(FieldElem, FieldElem) = default;
};

/// The finite field F_q, q = p^k, realized as F_p[t]/(m(t)) where m is the
/// lexicographically least monic irreducible of degree k (coefficients compared
/// from the constant term upward). Cheap to copy; copies share state.
class Field {
public:
    /// Largest supported field order.
    static constexpr u64 kMaxOrder = 1ULL << 62;

    Field() : Field(2, 1) {}

    Field(u64 p, unsigned k = 1) {
        if (!detail::is_prime_u64(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
        if (k == 0) throw std::invalid_argument("extension degree must be >= 1");
        auto d = std::make_shared<Data>();
        d->p = p;
        d->k = k;
        d->mod = detail::ModP(p);
        if (k == 1) {
            if (p >= (1ULL << 63)) throw std::invalid_argument("prime exceeds 63 bits");
            d->q = p;
        } else {
            if (p >= (1ULL << 31)) throw std::invalid_argument("extension fields need p < 2^31");
            detail::u128 q = 1;
            for (unsigned i = 0; i < k; ++i) {
                q *= p;
                if (q > kMaxOrder) throw std::invalid_argument("field order p^k exceeds 2^62");
            }
            d->q = static_cast<u64>(q);
            d->modulus = least_irreducible(p, k, d->mod);
        }
        d_ = std::move(d);
        if (k > 1) init_trace();
    }

    u64 characteristic() const { return d_->p; }
    unsigned degree() const { return d_->k; }
    u64 order() const { return d_->q; }
    bool is_prime_field() const { return d_->k == 1; }
    /// Defining polynomial, low to high, monic; empty for prime fields.
    const std::vector<u64>& modulus() const { return d_->modulus; }
    const detail::ModP& prime_arith() const { return d_->mod; }

    friend bool operator==(const Field& a, const Field& b) {
        return a.d_ == b.d_ || (a.d_->p == b.d_->p && a.d_->k == b.d_->k && a.d_->modulus == b.d_->modulus);
    }

    FieldElem zero() const { return {0}; }
    FieldElem one() const { return {1}; }

    FieldElem element(u64 code) const {
        if (code >= d_->q) throw std::out_of_range("element code " + std::to_string(code) + " outside F_" + std::to_string(d_->q));
        return {code};
    }

    /// Image of an integer under Z -> F_p -> F_q.
    FieldElem from_int(long long v) const { return {d_->mod.from_signed(v)}; }

    FieldElem from_coefficients(std::span<const u64> c) const {
        if (c.size() > d_->k) throw std::invalid_argument("too many coefficients for F_q element");
        u64 code = 0;
        for (std::size_t i = c.size(); i-- > 0;) {
            if (c[i] >= d_->p) throw std::invalid_argument("coefficient not reduced mod p");
            code = code * d_->p + c[i];
        }
        return {code};
    }

    std::vector<u64> coefficients(FieldElem a) const {
        std::vector<u64> c(d_->k);
        for (unsigned i = 0; i < d_->k; ++i) {
            c[i] = a.code % d_->p;
            a.code /= d_->p;
        }
        return c;
    }

    FieldElem add(FieldElem a, FieldElem b) const {
        if (d_->k == 1) return {d_->mod.add(a.code, b.code)};
        return digitwise(a, b, [&](u64 x, u64 y) { return d_->mod.add(x, y); });
    }
    FieldElem sub(FieldElem a, FieldElem b) const {
        if (d_->k == 1) return {d_->mod.sub(a.code, b.code)};
        return digitwise(a, b, [&](u64 x, u64 y) { return d_->mod.sub(x, y); });
    }
    FieldElem neg(FieldElem a) const { return sub(zero(), a); }

    FieldElem mul(FieldElem a, FieldElem b) const {
        if (d_->k == 1) return {d_->mod.mul(a.code, b.code)};
        return mul_ext(a, b);
    }

    FieldElem pow(FieldElem a, u64 e) const {
        FieldElem r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    FieldElem inv(FieldElem a) const {
        if (a.code == 0) throw std::domain_error("inverse of zero in F_" + std::to_string(d_->q));
        if (d_->k == 1) return {d_->mod.inv(a.code)};
        return pow(a, d_->q - 2);
    }

    FieldElem div(FieldElem a, FieldElem b) const { return mul(a, inv(b)); }

    /// Absolute trace a + a^p + ... + a^(p^(k-1)), an element of F_p.
    u64 trace(FieldElem a) const {
        if (d_->k == 1) return a.code;
        u64 t = 0;
        for (unsigned i = 0; i < d_->k; ++i) {
            t = d_->mod.add(t, d_->mod.mul(a.code % d_->p, d_->trace_basis[i]));
            a.code /= d_->p;
        }
        return t;
    }

    /// The canonical nontrivial additive character exp(2 pi i Tr(a) / p).
    std::complex<double> character(FieldElem a) const {
        const u64 t = trace(a);
        if (t == 0) return {1.0, 0.0};
        if (2 * t == d_->p) return {-1.0, 0.0};
        return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(d_->p));
    }

    /// Compact label: "7" for F_7, "3^2" for F_9.
    std::string label() const {
        return d_->k == 1 ? std::to_string(d_->p) : std::to_string(d_->p) + "^" + std::to_string(d_->k);
    }

private:
    struct Data {
        u64 p = 2;
        u64 q = 2;
        unsigned k = 1;
        std::vector<u64> modulus;
        detail::ModP mod;
        std::vector<u64> trace_basis;  // Tr(t^i), i < k
    };

    template <class Op>
    FieldElem digitwise(FieldElem a, FieldElem b, Op op) const {
        u64 code = 0, scale = 1;
        for (unsigned i = 0; i < d_->k; ++i) {
            code += op(a.code % d_->p, b.code % d_->p) * scale;
            a.code /= d_->p;
            b.code /= d_->p;
            scale *= d_->p;
        }
        return {code};
    }

    FieldElem mul_ext(FieldElem a, FieldElem b) const {
        const auto& m = d_->mod;
        const unsigned k = d_->k;
        const auto ca = coefficients(a), cb = coefficients(b);
        std::vector<u64> r(2 * k - 1, 0);
        for (unsigned i = 0; i < k; ++i) {
            if (ca[i] == 0) continue;
            for (unsigned j = 0; j < k; ++j) r[i + j] = m.add(r[i + j], m.mul(ca[i], cb[j]));
        }
        for (unsigned top = 2 * k - 2; top >= k; --top) {
            const u64 c = r[top];
            if (c == 0) continue;
            r[top] = 0;
            for (unsigned i = 0; i < k; ++i) r[top - k + i] = m.sub(r[top - k + i], m.mul(c, d_->modulus[i]));
        }
        u64 code = 0;
        for (unsigned i = k; i-- > 0;) code = code * d_->p + r[i];
        return {code};
    }

    void init_trace() {
        auto d = std::const_pointer_cast<Data>(d_);
        d->trace_basis.assign(d->k, 0);
        FieldElem basis = one();
        const FieldElem t{d->p};
        for (unsigned i = 0; i < d->k; ++i) {
            FieldElem acc = zero(), frob = basis;
            for (unsigned j = 0; j < d->k; ++j) {
                acc = add(acc, frob);
                frob = pow(frob, d->p);
            }
            if (acc.code >= d->p) throw std::logic_error("trace left the prime field");
            d->trace_basis[i] = acc.code;
            basis = mul(basis, t);
        }
    }

    static std::vector<u64> least_irreducible(u64 p, unsigned k, const detail::ModP& mod) {
        // Tuples (c_0, ..., c_{k-1}) in lexicographic order: c_0 varies slowest.
        // c_0 = 0 is skipped since t divides such polynomials.
        std::vector<u64> c(k, 0);
        c[0] = 1;
        for (;;) {
            std::vector<u64> f(c);
            f.push_back(1);
            if (detail::fp_poly::is_irreducible(f, mod)) return f;
            std::size_t i = k;
            while (i-- > 0) {
                if (++c[i] < p) break;
                c[i] = 0;
                if (i == 0) throw std::logic_error("no irreducible polynomial found");
            }
        }
    }

    std::shared_ptr<const Data> d_;
};

namespace detail {

inline u64 parse_u64(const std::string& s, const char* what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument(std::string("malformed ") + what + " '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::out_of_range&) {
        throw std::invalid_argument(std::string(what) + " '" + s + "' out of range");
    }
}

}  // namespace detail

/// Parses "q=p^k", "q=N", "p^k" or "N" (N factored into a prime power).
inline Field parse_field_spec(std::string spec) {
    if (spec.rfind("q=", 0) == 0) spec = spec.substr(2);
    const auto caret = spec.find('^');
    if (caret != std::string::npos) {
        const u64 p = detail::parse_u64(spec.substr(0, caret), "field characteristic");
        const u64 k = detail::parse_u64(spec.substr(caret + 1), "extension degree");
        if (k > 64) throw std::invalid_argument("extension degree too large");
        return Field(p, static_cast<unsigned>(k));
    }
    const u64 n = detail::parse_u64(spec, "field order");
    auto pk = detail::prime_power(n);
    if (!pk) throw std::invalid_argument(std::to_string(n) + " is not a prime power");
    return Field(pk->first, pk->second);
}

}  // namespace cpl
