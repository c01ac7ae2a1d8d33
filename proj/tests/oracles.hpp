#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond GMP's integer type.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using ZVec = std::vector<mpz_class>;  // index = exponent
using QVec = std::vector<mpq_class>;

inline void trim(ZVec& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}
inline void trim(QVec& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

inline ZVec mul(const ZVec& a, const ZVec& b) {
    if (a.empty() || b.empty()) return {};
    ZVec c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

/// a / b when b divides a over Z, by schoolbook division from the top.
inline std::optional<ZVec> divide(ZVec a, const ZVec& b) {
    trim(a);
    if (b.empty()) return std::nullopt;
    if (a.size() < b.size()) return a.empty() ? std::optional<ZVec>(ZVec{}) : std::nullopt;
    ZVec q(a.size() - b.size() + 1, 0);
    for (std::size_t k = q.size(); k-- > 0;) {
        const mpz_class& top = a[k + b.size() - 1];
        if (top % b.back() != 0) return std::nullopt;
        q[k] = top / b.back();
        for (std::size_t j = 0; j < b.size(); ++j) a[k + j] -= q[k] * b[j];
    }
    trim(a);
    if (!a.empty()) return std::nullopt;
    return q;
}

inline mpz_class content(const ZVec& v) {
    mpz_class g = 0;
    for (const auto& c : v) g = gcd(g, c);
    return g;
}

inline ZVec primitive_positive(ZVec v) {
    trim(v);
    mpz_class g = content(v);
    if (v.back() < 0) g = -g;
    for (auto& c : v) c /= g;
    return v;
}

// rational arithmetic for the squarefree step

inline QVec to_q(const ZVec& v) { return QVec(v.begin(), v.end()); }

inline QVec qmod(QVec a, const QVec& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        const mpq_class f = a.back() / b.back();
        const std::size_t s = a.size() - b.size();
        for (std::size_t j = 0; j < b.size(); ++j) a[s + j] -= f * b[j];
        trim(a);
    }
    return a;
}

inline QVec qgcd(QVec a, QVec b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        QVec r = qmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline ZVec from_q(const QVec& v) {
    mpz_class l = 1;
    for (const auto& c : v) l = lcm(l, c.get_den());
    ZVec out;
    for (const auto& c : v) out.push_back(mpz_class(c * l));
    return primitive_positive(out);
}

inline ZVec derivative(const ZVec& v) {
    ZVec d;
    for (std::size_t i = 1; i < v.size(); ++i) d.push_back(v[i] * static_cast<unsigned long>(i));
    return d;
}

/// Durand-Kerner in long double, Newton-polished.
inline std::vector<std::complex<long double>> roots(const ZVec& f) {
    using C = std::complex<long double>;
    const int n = static_cast<int>(f.size()) - 1;
    std::vector<long double> a(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) a[i] = static_cast<long double>(f[i].get_d()) / static_cast<long double>(f.back().get_d());
    auto eval = [&](C z) {
        C acc = 0;
        for (int i = n; i >= 0; --i) acc = acc * z + a[static_cast<std::size_t>(i)];
        return acc;
    };
    auto deval = [&](C z) {
        C acc = 0;
        for (int i = n; i >= 1; --i) acc = acc * z + a[static_cast<std::size_t>(i)] * static_cast<long double>(i);
        return acc;
    };
    long double radius = 1;
    for (int i = 0; i < n; ++i) radius = std::max(radius, 1 + std::abs(a[static_cast<std::size_t>(i)]));
    std::vector<C> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) z[static_cast<std::size_t>(k)] = std::polar(0.9L * radius, 2.0L * 3.14159265358979323846L * k / n + 0.4L);
    for (int it = 0; it < 2000; ++it) {
        long double moved = 0;
        for (int k = 0; k < n; ++k) {
            C den = 1;
            for (int j = 0; j < n; ++j)
                if (j != k) den *= z[static_cast<std::size_t>(k)] - z[static_cast<std::size_t>(j)];
            const C step = eval(z[static_cast<std::size_t>(k)]) / den;
            z[static_cast<std::size_t>(k)] -= step;
            moved = std::max(moved, std::abs(step) / std::max(1.0L, std::abs(z[static_cast<std::size_t>(k)])));
        }
        if (moved < 1e-17L) break;
    }
    for (auto& r : z) {
        for (int it = 0; it < 3; ++it) {
            const C d = deval(r);
            if (std::abs(d) == 0) break;
            r -= eval(r) / d;
        }
    }
    return z;
}

/// Rounded integer polynomial lead * prod (x - r) over the chosen roots, if
/// the imaginary parts cancel.
inline std::optional<ZVec> product_polynomial(const std::vector<std::complex<long double>>& rs, std::uint32_t mask,
                                              long double lead) {
    std::vector<std::complex<long double>> c{1};
    for (std::size_t k = 0; k < rs.size(); ++k) {
        if (!(mask >> k & 1u)) continue;
        std::vector<std::complex<long double>> n(c.size() + 1, 0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            n[i + 1] += c[i];
            n[i] -= c[i] * rs[k];
        }
        c = std::move(n);
    }
    ZVec out;
    for (auto& x : c) {
        x *= lead;
        if (std::abs(x.imag()) > 1e-3L * std::max(1.0L, std::abs(x.real()))) return std::nullopt;
        const long double r = std::round(x.real());
        if (std::abs(r) > 1e15L) return std::nullopt;
        out.push_back(mpz_class(static_cast<long>(r)));
    }
    return out;
}

struct Factored {
    mpz_class scalar = 1;  // sign * content
    std::size_t t_power = 0;
    std::map<ZVec, int> factors;  // primitive, positive leading coefficient
};

/// Irreducible factors of a squarefree primitive g with g(0) != 0: the
/// smallest divisor built from a subset of roots is split off repeatedly.
inline std::vector<ZVec> split_squarefree(ZVec g) {
    std::vector<ZVec> out;
    while (g.size() > 2) {
        const auto rs = roots(g);
        const int n = static_cast<int>(rs.size());
        std::optional<ZVec> found;
        for (int k = 1; k <= n / 2 && !found; ++k) {
            for (std::uint32_t mask = 0; mask < (1u << n) && !found; ++mask) {
                if (__builtin_popcount(mask) != k) continue;
                // lc(g) times a monic factor over Q is integral
                auto cand = product_polynomial(rs, mask, static_cast<long double>(mpz_class(abs(g.back())).get_d()));
                if (!cand) continue;
                auto prim = primitive_positive(*cand);
                if (prim.size() >= 2 && divide(g, prim)) found = prim;
            }
        }
        if (!found) break;
        out.push_back(*found);
        g = *divide(g, *found);
        g = primitive_positive(g);
    }
    if (g.size() >= 2) out.push_back(primitive_positive(g));
    return out;
}

inline Factored factor(ZVec f) {
    trim(f);
    Factored out;
    std::size_t z = 0;
    while (z < f.size() && f[z] == 0) ++z;
    out.t_power = z;
    f.erase(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(z));
    mpz_class c = content(f);
    if (f.back() < 0) c = -c;
    out.scalar = c;
    for (auto& x : f) x /= c;
    if (f.size() < 2) return out;
    // squarefree part over Q
    const QVec g = qgcd(to_q(f), to_q(derivative(f)));
    ZVec sf = f;
    if (g.size() > 1) sf = primitive_positive(*divide(f, from_q(g)));
    for (auto& irr : split_squarefree(primitive_positive(sf))) {
        int m = 0;
        ZVec rest = f;
        while (auto q = divide(rest, irr)) {
            rest = *q;
            ++m;
        }
        out.factors[irr] += m;
    }
    return out;
}

/// Largest finite slope di/dj over all pairs of support points.
inline std::optional<std::pair<std::int64_t, std::int64_t>> max_pair_slope(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& support) {
    std::optional<std::pair<std::int64_t, std::int64_t>> best;
    for (const auto& x : support) {
        for (const auto& y : support) {
            const auto dj = y.second - x.second;
            if (dj <= 0) continue;
            const auto di = y.first - x.first;
            if (!best || di * best->second > best->first * dj) best = std::make_pair(di, dj);
        }
    }
    return best;
}

/// Random integer polynomial with the given degree and coefficients in [-bound, bound].
inline ZVec random_poly(std::mt19937_64& rng, int degree, long bound) {
    std::uniform_int_distribution<long> dist(-bound, bound);
    ZVec v(static_cast<std::size_t>(degree) + 1);
    for (auto& c : v) c = dist(rng);
    while (v.back() == 0) v.back() = dist(rng);
    return v;
}

} // namespace oracle
