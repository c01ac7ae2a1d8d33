#pragma once

// Dense polynomials over Z/pZ for word-sized primes, plus the finite-field
// factoring steps (distinct-degree and Cantor-Zassenhaus equal-degree) used by
// the integer factorizer.

#include <algorithm>
#include <cstdint>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "integer.hpp"

namespace dehnfill::nmod {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct Field {
    u64 p;

    u64 add(u64 a, u64 b) const { u64 r = a + b; return r >= p ? r - p : r; }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }
    u64 neg(u64 a) const { return a == 0 ? 0 : p - a; }
    u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % p); }
    u64 pow(u64 a, u64 e) const {
        u64 r = 1 % p;
        a %= p;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    u64 inv(u64 a) const { return pow(a, p - 2); }
    u64 reduce(const Integer& x) const { return mpz_fdiv_ui(x.get_mpz_t(), p); }
    u64 from_signed(std::int64_t x) const {
        std::int64_t r = x % static_cast<std::int64_t>(p);
        return static_cast<u64>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
    }
};

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 sp : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % sp == 0) return n == sp;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    Field f{n};
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = f.pow(a, d);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = f.mul(x, x);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline u64 next_prime(u64 n) {
    while (!is_prime(n)) ++n;
    return n;
}

using Poly = std::vector<u64>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline Poly reduce(const Field& F, const std::vector<Integer>& coeffs) {
    Poly r(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) r[i] = F.reduce(coeffs[i]);
    trim(r);
    return r;
}

inline Poly add(const Field& F, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
    trim(r);
    return r;
}

inline Poly sub(const Field& F, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
    trim(r);
    return r;
}

inline Poly mul(const Field& F, const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    // accumulate in 128 bits and reduce once per output coefficient
    std::vector<u128> acc(a.size() + b.size() - 1, 0);
    const u128 limit = static_cast<u128>(1) << 126;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            acc[i + j] += static_cast<u128>(a[i]) * b[j];
            if (acc[i + j] >= limit) acc[i + j] %= F.p;
        }
    }
    Poly r(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) r[k] = static_cast<u64>(acc[k] % F.p);
    trim(r);
    return r;
}

inline Poly scale(const Field& F, const Poly& a, u64 c) {
    Poly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
    trim(r);
    return r;
}

inline Poly monic(const Field& F, const Poly& a) {
    if (a.empty()) return a;
    return scale(F, a, F.inv(a.back()));
}

/// Quotient and remainder; b must be nonzero.
inline std::pair<Poly, Poly> divrem(const Field& F, Poly a, const Poly& b) {
    const int db = degree(b);
    if (degree(a) < db) return {Poly{}, a};
    const u64 inv_lc = F.inv(b.back());
    Poly q(a.size() - b.size() + 1, 0);
    for (int i = degree(a); i >= db; --i) {
        u64 c = F.mul(a[i], inv_lc);
        q[i - db] = c;
        if (c == 0) continue;
        for (int j = 0; j <= db; ++j) a[i - db + j] = F.sub(a[i - db + j], F.mul(c, b[j]));
    }
    a.resize(db);
    trim(a);
    trim(q);
    return {q, a};
}

inline Poly rem(const Field& F, Poly a, const Poly& b) {
    const int db = degree(b);
    if (degree(a) < db) return a;
    const u64 inv_lc = F.inv(b.back());
    for (int i = degree(a); i >= db; --i) {
        u64 c = F.mul(a[i], inv_lc);
        if (c == 0) continue;
        for (int j = 0; j <= db; ++j) a[i - db + j] = F.sub(a[i - db + j], F.mul(c, b[j]));
    }
    a.resize(db);
    trim(a);
    return a;
}

/// Monic gcd (zero if both inputs are zero).
inline Poly gcd(const Field& F, Poly a, Poly b) {
    while (!b.empty()) {
        Poly r = rem(F, std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(F, a);
}

/// Returns (g, s, t) with s*a + t*b = g, g monic.
inline std::tuple<Poly, Poly, Poly> extended_gcd(const Field& F, const Poly& a, const Poly& b) {
    Poly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
        auto [q, r] = divrem(F, r0, r1);
        Poly s2 = sub(F, s0, mul(F, q, s1));
        Poly t2 = sub(F, t0, mul(F, q, t1));
        r0 = std::move(r1); r1 = std::move(r);
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (r0.empty()) return {r0, s0, t0};
    u64 inv = F.inv(r0.back());
    return {scale(F, r0, inv), scale(F, s0, inv), scale(F, t0, inv)};
}

inline Poly derivative(const Field& F, const Poly& a) {
    if (a.size() <= 1) return {};
    Poly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = F.mul(a[i], i % F.p);
    trim(r);
    return r;
}

inline Poly mulmod(const Field& F, const Poly& a, const Poly& b, const Poly& m) {
    return rem(F, mul(F, a, b), m);
}

inline Poly powmod(const Field& F, Poly base, const Integer& exponent, const Poly& m) {
    Poly result{1};
    result = rem(F, result, m);
    base = rem(F, base, m);
    const std::size_t bits = bit_length(exponent);
    for (std::size_t i = bits; i-- > 0;) {
        result = mulmod(F, result, result, m);
        if (mpz_tstbit(exponent.get_mpz_t(), i)) result = mulmod(F, result, base, m);
    }
    return result;
}

inline bool is_squarefree(const Field& F, const Poly& a) {
    Poly g = gcd(F, a, derivative(F, a));
    return degree(g) == 0;
}

/// Frobenius map h -> h^p mod f as a matrix: row j holds x^{jp} mod f.
class Frobenius {
public:
    Frobenius(const Field& F, const Poly& f) : F_(F), f_(f) {
        const int n = degree(f);
        rows_.resize(n);
        Poly xp = powmod(F, Poly{0, 1}, Integer(static_cast<unsigned long>(F.p)), f);
        Poly cur{1};
        for (int j = 0; j < n; ++j) {
            rows_[j] = cur;
            rows_[j].resize(n, 0);
            cur = mulmod(F, cur, xp, f);
        }
    }

    /// h^p mod f for h reduced mod f.
    Poly apply(const Poly& h) const {
        const std::size_t n = rows_.size();
        std::vector<u128> acc(n, 0);
        const u128 limit = static_cast<u128>(1) << 126;
        for (std::size_t j = 0; j < h.size() && j < n; ++j) {
            if (h[j] == 0) continue;
            const Poly& row = rows_[j];
            for (std::size_t k = 0; k < n; ++k) {
                acc[k] += static_cast<u128>(h[j]) * row[k];
                if (acc[k] >= limit) acc[k] %= F_.p;
            }
        }
        Poly r(n);
        for (std::size_t k = 0; k < n; ++k) r[k] = static_cast<u64>(acc[k] % F_.p);
        trim(r);
        return r;
    }

    const Poly& modulus() const { return f_; }

private:
    Field F_;
    Poly f_;
    std::vector<Poly> rows_;
};

/// Distinct-degree factorization of a monic squarefree polynomial.
/// Returns pairs (product of all irreducible factors of degree d, d).
inline std::vector<std::pair<Poly, int>> distinct_degree(const Field& F, const Poly& f, const Frobenius& frob) {
    std::vector<std::pair<Poly, int>> out;
    Poly rest = f;
    Poly h{0, 1};  // x^{p^i} mod f, tracked modulo the original f
    const Poly x{0, 1};
    for (int i = 1; 2 * i <= degree(rest); ++i) {
        h = frob.apply(h);
        Poly g = gcd(F, rest, sub(F, rem(F, h, rest), rem(F, x, rest)));
        if (degree(g) > 0) {
            out.emplace_back(g, i);
            rest = divrem(F, rest, g).first;
        }
    }
    if (degree(rest) > 0) out.emplace_back(monic(F, rest), degree(rest));
    return out;
}

/// Degree multiset of the irreducible factors (from distinct-degree data).
inline std::vector<int> degree_pattern(const std::vector<std::pair<Poly, int>>& ddf) {
    std::vector<int> degs;
    for (const auto& [g, d] : ddf) {
        for (int k = 0; k < degree(g) / d; ++k) degs.push_back(d);
    }
    std::sort(degs.begin(), degs.end());
    return degs;
}

/// Cantor-Zassenhaus splitting of g, a product of irreducibles of degree d.
inline void equal_degree(const Field& F, const Poly& g, int d, const Frobenius& frob, std::mt19937_64& rng,
                         std::vector<Poly>& out) {
    if (degree(g) == d) {
        out.push_back(monic(F, g));
        return;
    }
    const int n = degree(g);
    const Integer half = (Integer(static_cast<unsigned long>(F.p)) - 1) / 2;
    std::uniform_int_distribution<u64> coeff(0, F.p - 1);
    for (;;) {
        Poly a(n);
        for (auto& c : a) c = coeff(rng);
        trim(a);
        if (degree(a) < 1) continue;
        // a^{(p^d - 1)/2} = (a * a^p * ... * a^{p^{d-1}})^{(p-1)/2}
        Poly conj = rem(F, a, frob.modulus());
        Poly norm = rem(F, a, g);
        for (int k = 1; k < d; ++k) {
            conj = frob.apply(conj);
            norm = mulmod(F, norm, rem(F, conj, g), g);
        }
        Poly b = powmod(F, norm, half, g);
        Poly split = gcd(F, g, sub(F, b, Poly{1}));
        if (degree(split) > 0 && degree(split) < n) {
            equal_degree(F, split, d, frob, rng, out);
            equal_degree(F, divrem(F, g, split).first, d, frob, rng, out);
            return;
        }
    }
}

/// Monic irreducible factors of a monic squarefree polynomial mod p (odd p).
inline std::vector<Poly> factor_squarefree(const Field& F, const Poly& f, std::uint64_t seed) {
    std::vector<Poly> out;
    if (degree(f) <= 0) return out;
    Frobenius frob(F, f);
    std::mt19937_64 rng(seed);
    for (const auto& [g, d] : distinct_degree(F, f, frob)) equal_degree(F, g, d, frob, rng, out);
    std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    });
    return out;
}

} // namespace dehnfill::nmod
