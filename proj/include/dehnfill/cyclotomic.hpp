#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "nmod.hpp"
#include "unipoly.hpp"

namespace dehnfill::cyclotomic {

/// Largest n that can satisfy phi(n) <= degree. Uses the lower bound
/// phi(n) > n / (e^gamma ln ln n + 3 / ln ln n), valid for n >= 3 and
/// increasing in n.
inline std::uint64_t order_bound(std::uint64_t degree) {
    if (degree < 2) return 6;
    auto lower = [](double n) {
        double ll = std::log(std::log(n));
        return n / (1.7810724179901979 * ll + 3.0 / ll);
    };
    double lo = 3, hi = 16;
    while (lower(hi) <= static_cast<double>(degree)) hi *= 2;
    while (hi - lo > 1) {
        double mid = std::floor((lo + hi) / 2);
        if (lower(mid) <= static_cast<double>(degree)) lo = mid; else hi = mid;
    }
    return static_cast<std::uint64_t>(hi) + 1;
}

/// Euler phi for 0..limit.
inline std::vector<std::uint64_t> totients(std::uint64_t limit) {
    std::vector<std::uint64_t> phi(limit + 1);
    for (std::uint64_t i = 0; i <= limit; ++i) phi[i] = i;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (phi[i] != i) continue;
        for (std::uint64_t j = i; j <= limit; j += i) phi[j] -= phi[j] / i;
    }
    return phi;
}

/// All n with phi(n) == degree, ascending.
inline std::vector<std::uint64_t> orders_with_degree(std::uint64_t degree) {
    std::vector<std::uint64_t> out;
    const auto bound = order_bound(degree);
    const auto phi = totients(bound);
    for (std::uint64_t n = 1; n <= bound; ++n) {
        if (phi[n] == degree) out.push_back(n);
    }
    return out;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> ps;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            ps.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

/// Phi_n(x), computed as Phi_rad(x^{n/rad}) with Phi_rad from the Moebius product.
inline UniIntPoly polynomial(std::uint64_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "cyclotomic order must be positive");
    const auto primes = prime_factors(n);
    std::uint64_t rad = 1;
    for (auto p : primes) rad *= p;
    // Phi_rad = prod_{d | rad} (x^{rad/d} - 1)^{mu(d)}; d ranges over squarefree subsets.
    const std::size_t k = primes.size();
    UniIntPoly num = UniIntPoly{1};
    std::vector<std::uint64_t> denominators;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::uint64_t d = 1;
        int bits = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (std::size_t{1} << i)) {
                d *= primes[i];
                ++bits;
            }
        }
        if (bits % 2 == 0) num = num * UniIntPoly::x_pow_minus_one(rad / d);
        else denominators.push_back(rad / d);
    }
    for (auto e : denominators) {
        auto q = divide_x_pow_minus_one(num, e);
        if (!q) throw Error(ErrorCode::InternalCheckFailed, "cyclotomic construction failed");
        num = std::move(*q);
    }
    if (n == rad) return num;
    const std::uint64_t stretch = n / rad;
    std::vector<Integer> v(static_cast<std::size_t>(num.degree()) * stretch + 1, 0);
    for (std::size_t i = 0; i < num.size(); ++i) v[i * stretch] = num[i];
    return UniIntPoly(std::move(v));
}

namespace detail {

/// A prime P = 1 mod n near 2^40 and a primitive n-th root of unity mod P.
struct RootOfUnity {
    nmod::u64 prime;
    nmod::u64 root;
};

inline RootOfUnity make_root_of_unity(std::uint64_t n) {
    nmod::u64 k = ((1ull << 40) / n) + 1;
    for (;; ++k) {
        nmod::u64 P = k * n + 1;
        if (!nmod::is_prime(P)) continue;
        nmod::Field F{P};
        const auto ps = prime_factors(n);
        for (nmod::u64 a = 2; a < 1000; ++a) {
            nmod::u64 w = F.pow(a, (P - 1) / n);
            bool primitive = (w != 0);
            for (auto p : ps) {
                if (F.pow(w, n / p) == 1) { primitive = false; break; }
            }
            if (n == 1) primitive = (w == 1);
            if (primitive) return {P, w};
        }
    }
}

inline RootOfUnity root_of_unity(std::uint64_t n) {
    static std::mutex mu;
    static std::map<std::uint64_t, RootOfUnity> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto r = make_root_of_unity(n);
    cache.emplace(n, r);
    return r;
}

inline UniIntPoly cached_polynomial(std::uint64_t n) {
    static std::mutex mu;
    static std::map<std::uint64_t, UniIntPoly> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    UniIntPoly p = polynomial(n);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(n, p);
    return p;
}

} // namespace detail

struct CyclotomicFactor {
    std::uint64_t order;
    UniIntPoly poly;
};

/// Splits a squarefree polynomial g with g(0) != 0 into its cyclotomic
/// factors (exact divisions) and the remaining cofactor. Candidates are
/// screened by evaluating g at a primitive n-th root of unity mod a large
/// prime; every hit is confirmed by exact division.
inline std::vector<CyclotomicFactor> extract(UniIntPoly& g) {
    std::vector<CyclotomicFactor> found;
    if (g.degree() < 1) return found;
    const auto bound = order_bound(static_cast<std::uint64_t>(g.degree()));
    const auto phi = totients(bound);
    for (std::uint64_t n = 1; n <= bound && g.degree() >= 1; ++n) {
        if (phi[n] > static_cast<std::uint64_t>(g.degree())) continue;
        const auto ru = detail::root_of_unity(n);
        nmod::Field F{ru.prime};
        nmod::u64 acc = 0;
        for (std::size_t i = g.size(); i-- > 0;) acc = F.add(F.mul(acc, ru.root), F.reduce(g[i]));
        if (acc != 0) continue;
        UniIntPoly phin = detail::cached_polynomial(n);
        if (auto q = exact_divide(g, phin)) {
            found.push_back({n, phin});
            g = std::move(*q);
        }
    }
    return found;
}

/// Order n if h equals Phi_n (up to sign), 0 otherwise.
inline std::uint64_t order_of(const UniIntPoly& h) {
    if (h.degree() < 1) return 0;
    UniIntPoly g = sgn(h.leading()) < 0 ? -h : h;
    if (g.leading() != 1 || abs(g[0]) != 1) return 0;
    for (std::uint64_t n : orders_with_degree(static_cast<std::uint64_t>(g.degree()))) {
        if (detail::cached_polynomial(n) == g) return n;
    }
    return 0;
}

} // namespace dehnfill::cyclotomic
