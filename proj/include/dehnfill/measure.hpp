#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "roots.hpp"
#include "zfactor.hpp"

namespace dehnfill {

enum class MeasureMethod { Roots, Graeffe, Both };

inline std::string to_string(MeasureMethod m) {
    switch (m) {
    case MeasureMethod::Roots: return "roots";
    case MeasureMethod::Graeffe: return "graeffe";
    case MeasureMethod::Both: return "both";
    }
    return "?";
}

struct MahlerEstimate {
    double value = 1;
    double abs_error = 0;
    MeasureMethod method = MeasureMethod::Roots;
    int precision_bits = 53;

    double lower() const { return value - abs_error; }
    double upper() const { return value + abs_error; }
};

struct MeasureOptions {
    RootOptions roots{};
    double target_relative_error = 1e-12;
};

/// Sum of absolute values of the coefficients.
inline Integer length(const UniIntPoly& f) { return f.sum_abs(); }

namespace detail {

/// Interval [lo, hi] for log max(1, |z|) over the disk of radius r around z.
inline std::pair<long double, long double> log_max1_range(std::complex<double> z, double r) {
    const long double m = std::abs(std::complex<long double>(z.real(), z.imag()));
    const long double lo = m - r, hi = m + r;
    return {lo > 1 ? std::log(lo) : 0.0L, hi > 1 ? std::log(hi) : 0.0L};
}

struct LogEnclosure {
    long double lo = 0, hi = 0;
    int bits = 53;
};

/// log M(g) for squarefree g with g(0) != 0 and no cyclotomic factors.
inline LogEnclosure log_measure_squarefree(const UniIntPoly& g, const MeasureOptions& opt) {
    LogEnclosure e;
    const long double llc = static_cast<long double>(log_abs(g.leading()));
    e.lo = e.hi = llc;
    if (g.degree() < 1) return e;
    RootOptions ro = opt.roots;
    for (int attempt = 0;; ++attempt) {
        RootSet rs = find_roots(g, ro);
        LogEnclosure cur{llc, llc, rs.precision_bits};
        for (const auto& r : rs.roots) {
            auto [lo, hi] = log_max1_range(r.z, r.radius);
            cur.lo += r.multiplicity * lo;
            cur.hi += r.multiplicity * hi;
        }
        e = cur;
        const long double width = std::expm1(e.hi - e.lo);
        if (!std::isfinite(static_cast<double>(width))) {
            if (rs.precision_bits >= ro.max_bits) {
                throw Error(ErrorCode::NonConvergence, "root inclusion disks are unbounded");
            }
        } else if (width <= opt.target_relative_error || rs.precision_bits >= ro.max_bits) {
            return e;
        }
        // tighten: raise the precision floor past the level just used
        ro.min_bits = rs.precision_bits + 1;
        ro.tolerance = std::min(ro.tolerance, opt.target_relative_error / std::max(1, g.degree()));
    }
}

} // namespace detail

/// M(f) = |a_n| prod max(1, |alpha_i|). Cyclotomic factors are removed
/// exactly first; the rest is measured from certified root disks.
inline MahlerEstimate mahler(const UniIntPoly& f, const MeasureOptions& opt = {}) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "Mahler measure of the zero polynomial");
    auto sq = squarefree_decompose(f);
    long double lo = static_cast<long double>(log_abs(sq.content));
    long double hi = lo;
    int bits = 53;
    for (auto& [part, mult] : sq.parts) {
        UniIntPoly rest = part;
        cyclotomic::extract(rest);
        if (rest.degree() < 1) {
            const long double l = static_cast<long double>(log_abs(rest.leading()));
            lo += mult * l;
            hi += mult * l;
            continue;
        }
        auto e = detail::log_measure_squarefree(rest, opt);
        lo += mult * e.lo;
        hi += mult * e.hi;
        bits = std::max(bits, e.bits);
    }
    MahlerEstimate out;
    const long double a = std::exp(lo), b = std::exp(hi);
    out.value = static_cast<double>((a + b) / 2);
    out.abs_error = static_cast<double>((b - a) / 2) + std::abs(out.value) * 4e-16;
    out.method = MeasureMethod::Roots;
    out.precision_bits = bits;
    return out;
}

/// Root-squaring estimate. f_{k+1}(y) = (-1)^d (E(y)^2 - y O(y)^2) where
/// f_k(x) = E(x^2) + x O(x^2). Coefficients are kept as truncated big
/// integers times a power of two with a tracked absolute error, and the
/// measure is enclosed by max_j |c_j| / C(d, j) <= M <= ||f_k||_2.
inline MahlerEstimate mahler_graeffe(const UniIntPoly& f, int iterations) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "Mahler measure of the zero polynomial");
    if (iterations < 0 || iterations > 64) throw Error(ErrorCode::InvalidArgument, "Graeffe iterations must be in 0..64");
    const UniIntPoly g0 = f.shift(-static_cast<std::int64_t>(f.lowest_degree()));
    const int d = g0.degree();
    MahlerEstimate out;
    out.method = MeasureMethod::Graeffe;
    if (d == 0) {
        out.value = static_cast<double>(std::exp(static_cast<long double>(log_abs(g0[0]))));
        out.abs_error = out.value * 2e-16;
        return out;
    }

    // working precision covers the worst-case loss per step
    const long loss_per_step = 2L * d + static_cast<long>(std::ceil(std::log2(2.0 * (d + 1)))) + 4;
    const long precision = 128 + static_cast<long>(iterations) * loss_per_step;
    out.precision_bits = static_cast<int>(precision);

    std::vector<Integer> h = g0.coeffs();
    Integer err = 0;          // absolute error bound per coefficient of h
    long double sigma = 0;    // log2 of the scale divided by 2^k
    long double weight = 1;   // 2^-k

    auto shift_down = [&](std::vector<Integer>& v, Integer& e, long& s) {
        std::size_t top = 0;
        for (const auto& c : v) top = std::max(top, bit_length(c));
        s = std::max(0L, static_cast<long>(top) - precision);
        if (s == 0) return;
        for (auto& c : v) mpz_tdiv_q_2exp(c.get_mpz_t(), c.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
        mpz_cdiv_q_2exp(e.get_mpz_t(), e.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
        e += 1;
    };

    for (int k = 0; k < iterations; ++k) {
        std::vector<Integer> E, O;
        for (int i = 0; i <= d; ++i) (i % 2 == 0 ? E : O).push_back(h[i]);
        std::vector<Integer> next(static_cast<std::size_t>(d) + 1, 0);
        for (std::size_t i = 0; i < E.size(); ++i) {
            for (std::size_t j = 0; j < E.size(); ++j) mpz_addmul(next[i + j].get_mpz_t(), E[i].get_mpz_t(), E[j].get_mpz_t());
        }
        for (std::size_t i = 0; i < O.size(); ++i) {
            for (std::size_t j = 0; j < O.size(); ++j) mpz_submul(next[i + j + 1].get_mpz_t(), O[i].get_mpz_t(), O[j].get_mpz_t());
        }
        if (d % 2 == 1) {
            for (auto& c : next) c = -c;
        }
        // |sum (x+dx)(y+dy) - xy| <= e (|x|+|y|) + e^2 summed over the
        // products contributing to one coefficient, for both squares
        Integer total = 0;
        for (const auto& c : h) total += abs(c);
        Integer new_err = 0;
        if (sgn(err) != 0) new_err = 2 * (2 * err * total + Integer(d + 1) * err * err);
        h = std::move(next);
        err = new_err;
        long s = 0;
        shift_down(h, err, s);
        weight /= 2;
        sigma += static_cast<long double>(s) * weight;
    }

    // enclosure of log M(h), then of log M(f)
    const long double ln2 = 0.693147180559945309417232121458L;
    long double log_lower = -INFINITY;
    Integer binom = 1;
    for (int j = 0; j <= d; ++j) {
        if (j > 0) {
            binom *= (d - j + 1);
            mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), static_cast<unsigned long>(j));
        }
        Integer c = abs(h[j]) - err;
        if (sgn(c) <= 0) continue;
        log_lower = std::max(log_lower, static_cast<long double>(log_abs(c)) - static_cast<long double>(log_abs(binom)));
    }
    Integer sumsq = 0;
    for (const auto& c : h) {
        Integer a = abs(c) + err;
        sumsq += a * a;
    }
    const long double log_upper = static_cast<long double>(log_abs(sumsq)) / 2;

    const long double base = sigma * ln2;
    const long double lo = std::isfinite(log_lower) ? base + log_lower * weight : 0.0L;
    const long double hi = base + log_upper * weight;
    const long double a = std::exp(std::max(lo, static_cast<long double>(log_abs(g0.leading())))), b = std::exp(hi);
    out.value = static_cast<double>((a + b) / 2);
    out.abs_error = static_cast<double>((b - a) / 2) + std::abs(out.value) * 4e-16;
    return out;
}

/// Runs both methods and checks that the enclosures overlap.
inline MahlerEstimate mahler_both(const UniIntPoly& f, int iterations = 40, const MeasureOptions& opt = {}) {
    auto r = mahler(f, opt);
    auto g = mahler_graeffe(f, iterations);
    if (r.upper() < g.lower() || g.upper() < r.lower()) {
        throw Error(ErrorCode::InternalCheckFailed, "root and Graeffe Mahler estimates disagree");
    }
    MahlerEstimate out = r.abs_error <= g.abs_error ? r : g;
    out.method = MeasureMethod::Both;
    out.precision_bits = std::max(r.precision_bits, g.precision_bits);
    return out;
}

struct LehmerEntry {
    std::size_t factor_index;
    MahlerEstimate measure;
    bool pass;
};

struct LehmerReport {
    double c = 1.17628;
    double tolerance = 1e-9;
    std::vector<LehmerEntry> entries;
    std::vector<std::size_t> violations;  // indices into entries

    bool passed() const { return violations.empty(); }
};

/// M(g) >= c - tolerance for every non-cyclotomic factor g.
inline LehmerReport lehmer_check(const Factorization& fac, double c = 1.17628, double tolerance = 1e-9) {
    const Factorization& split = fac;
    Factorization local;
    const Factorization* use = &split;
    if (!fac.split_done) {
        local = cyclotomic_split(fac);
        use = &local;
    }
    LehmerReport rep;
    rep.c = c;
    rep.tolerance = tolerance;
    for (auto idx : use->non_cyclotomic_part) {
        auto m = mahler(use->factors[idx].poly);
        const bool ok = m.upper() >= c - tolerance;
        rep.entries.push_back({idx, m, ok});
        if (!ok) rep.violations.push_back(rep.entries.size() - 1);
    }
    return rep;
}

} // namespace dehnfill
