#pragma once

// Quadratic Hensel lifting of a modular factorization f = lc * u_1 ... u_r (mod p)
// to f = lc * U_1 ... U_r (mod p^(2^k)), following the classical two-factor
// step applied along a balanced factor tree.

#include <vector>

#include "nmod.hpp"
#include "unipoly.hpp"

namespace dehnfill::hensel {

using ZPoly = std::vector<Integer>;  // coefficients reduced to [0, m)

inline void trim(ZPoly& a) {
    while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}

inline ZPoly reduce(ZPoly a, const Integer& m) {
    for (auto& c : a) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    trim(a);
    return a;
}

inline ZPoly from_nmod(const nmod::Poly& a) {
    ZPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<unsigned long>(a[i]);
    trim(r);
    return r;
}

inline ZPoly add(const ZPoly& a, const ZPoly& b, const Integer& m) {
    ZPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return reduce(std::move(r), m);
}

inline ZPoly sub(const ZPoly& a, const ZPoly& b, const Integer& m) {
    ZPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return reduce(std::move(r), m);
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b, const Integer& m) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    return reduce(std::move(r), m);
}

inline ZPoly scale(const ZPoly& a, const Integer& c, const Integer& m) {
    ZPoly r(a);
    for (auto& x : r) x *= c;
    return reduce(std::move(r), m);
}

/// Division by a monic polynomial modulo m.
inline std::pair<ZPoly, ZPoly> divrem_monic(ZPoly a, const ZPoly& b, const Integer& m) {
    const int db = static_cast<int>(b.size()) - 1;
    const int da = static_cast<int>(a.size()) - 1;
    if (da < db) return {ZPoly{}, a};
    ZPoly q(static_cast<std::size_t>(da - db + 1), 0);
    for (int i = da; i >= db; --i) {
        mpz_fdiv_r(a[i].get_mpz_t(), a[i].get_mpz_t(), m.get_mpz_t());
        const Integer c = a[i];
        q[i - db] = c;
        if (sgn(c) == 0) continue;
        for (int j = 0; j <= db; ++j) mpz_submul(a[i - db + j].get_mpz_t(), c.get_mpz_t(), b[j].get_mpz_t());
    }
    a.resize(db);
    return {reduce(std::move(q), m), reduce(std::move(a), m)};
}

struct PairLift {
    ZPoly g, h, s, t;
};

/// One quadratic step: from f = g h, s g + t h = 1 (mod m) to the same
/// relations mod m^2, h monic.
inline PairLift lift_step(const ZPoly& f, const PairLift& in, const Integer& m) {
    const Integer m2 = m * m;
    ZPoly e = sub(f, mul(in.g, in.h, m2), m2);
    auto [q, r] = divrem_monic(mul(in.s, e, m2), in.h, m2);
    ZPoly g1 = add(add(in.g, mul(in.t, e, m2), m2), mul(q, in.g, m2), m2);
    ZPoly h1 = add(in.h, r, m2);
    ZPoly b = sub(add(mul(in.s, g1, m2), mul(in.t, h1, m2), m2), ZPoly{Integer(1)}, m2);
    auto [c, d] = divrem_monic(mul(in.s, b, m2), h1, m2);
    ZPoly s1 = sub(in.s, d, m2);
    ZPoly t1 = sub(sub(in.t, mul(in.t, b, m2), m2), mul(c, g1, m2), m2);
    return {std::move(g1), std::move(h1), std::move(s1), std::move(t1)};
}

/// Lifts monic factors `u` of f / lc(f) mod p to monic factors mod `target`
/// (a power p^(2^k)). f must have leading coefficient invertible mod p.
inline std::vector<ZPoly> lift(const ZPoly& f, const std::vector<nmod::Poly>& u, const nmod::Field& F,
                               const Integer& target) {
    const Integer p = static_cast<unsigned long>(F.p);
    if (u.size() == 1) {
        Integer inv;
        Integer lc = f.back();
        mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), target.get_mpz_t());
        return {scale(f, inv, target)};
    }
    const std::size_t half = u.size() / 2;
    nmod::Poly g0{F.reduce(f.back())};
    for (std::size_t i = 0; i < half; ++i) g0 = nmod::mul(F, g0, u[i]);
    nmod::Poly h0{1};
    for (std::size_t i = half; i < u.size(); ++i) h0 = nmod::mul(F, h0, u[i]);
    auto [one, s0, t0] = nmod::extended_gcd(F, g0, h0);
    PairLift cur{from_nmod(g0), from_nmod(h0), from_nmod(s0), from_nmod(t0)};
    Integer m = p;
    while (m < target) {
        cur = lift_step(reduce(f, m * m), cur, m);
        m *= m;
    }
    std::vector<nmod::Poly> left(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<nmod::Poly> right(u.begin() + static_cast<std::ptrdiff_t>(half), u.end());
    auto lifted_left = lift(cur.g, left, F, target);
    auto lifted_right = lift(cur.h, right, F, target);
    lifted_left.insert(lifted_left.end(), lifted_right.begin(), lifted_right.end());
    return lifted_left;
}

} // namespace dehnfill::hensel
