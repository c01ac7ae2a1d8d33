#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bivar.hpp"
#include "fill.hpp"
#include "measure.hpp"
#include "roots.hpp"

namespace dehnfill {

struct ThresholdCount {
    double c;           // threshold 1 + c / |p|
    std::size_t count;  // roots with modulus above it
};

struct RootGeometryReport {
    std::int64_t p = 0, q = 0;
    std::vector<double> moduli;  // descending, squarefree part
    double max_modulus = 0;
    double fitted_D = 0;         // max(|q|,1) * (max_modulus - 1)
    std::vector<ThresholdCount> count_beyond;
    std::vector<double> product_top;  // k = 1.. : product of the 2k|q| largest moduli
    int precision_bits = 53;
    bool isolated = true;
};

inline UniIntPoly squarefree_part(const UniIntPoly& f) {
    if (f.degree() < 1) return f;
    UniIntPoly g = gcd(f, f.derivative());
    if (g.degree() < 1) return f.primitive_part();
    return exact_divide(f, g)->primitive_part();
}

inline std::vector<double> products_of_largest(const std::vector<double>& desc, std::size_t block) {
    std::vector<double> out;
    if (block == 0) return out;
    double acc = 1;
    for (std::size_t k = 1; k * block <= desc.size(); ++k) {
        for (std::size_t i = (k - 1) * block; i < k * block; ++i) acc *= desc[i];
        out.push_back(acc);
    }
    return out;
}

inline const std::vector<double>& default_threshold_grid() {
    static const std::vector<double> grid{0, 0.5, 1, 2, 4, 8, 16, 32};
    return grid;
}

inline RootGeometryReport root_geometry(const FillingPoly& fp, const RootOptions& opt = {}) {
    if (fp.poly.is_zero()) throw Error(ErrorCode::DegeneratePolynomial, "root_geometry of a zero polynomial");
    RootGeometryReport r;
    r.p = fp.p;
    r.q = fp.q;
    const UniIntPoly sf = squarefree_part(fp.poly);
    if (sf.degree() >= 1) {
        const RootSet rs = find_roots(sf, opt);
        r.moduli = rs.moduli();
        r.precision_bits = rs.precision_bits;
        r.isolated = rs.isolated;
    }
    std::sort(r.moduli.begin(), r.moduli.end(), std::greater<>());
    r.max_modulus = r.moduli.empty() ? 0 : r.moduli.front();
    const double qa = static_cast<double>(std::max<std::int64_t>(std::abs(fp.q), 1));
    const double pa = static_cast<double>(std::max<std::int64_t>(std::abs(fp.p), 1));
    r.fitted_D = r.moduli.empty() ? 0 : std::max(0.0, qa * (r.max_modulus - 1));
    for (double c : default_threshold_grid()) {
        const double t = 1 + c / pa;
        r.count_beyond.push_back({c, static_cast<std::size_t>(std::count_if(r.moduli.begin(), r.moduli.end(),
                                                                            [t](double m) { return m > t; }))});
    }
    r.product_top = products_of_largest(r.moduli, 2 * static_cast<std::size_t>(qa));
    return r;
}

// ---------------------------------------------------------------------------
// model equation z^q (1+z)^p = 1

struct ModelSolution {
    std::complex<double> z;
    std::complex<double> w;  // 1 + z
    double residual;         // |z^q (1+z)^p - 1|
    double radius;           // inclusion radius of z
};

struct ModelSolveReport {
    std::int64_t p = 0, q = 0;
    double epsilon = 0;
    std::vector<ModelSolution> solutions;   // |w| > 1 and |z| < epsilon, sorted by |w| descending
    std::size_t count = 0;
    std::size_t total_roots = 0;            // p + q
    std::vector<double> w_moduli;           // descending
    std::vector<double> product_top;        // k = 1.. : product of the 2kq largest |w|
    double max_residual = 0;
    std::optional<double> expanded_residual;  // max residual through the exact expansion
    bool converged = false;
    bool isolated = false;
};

/// The expanded polynomial z^q (1+z)^p - 1.
inline UniIntPoly model_polynomial(std::int64_t p, std::int64_t q) {
    std::vector<Integer> c(static_cast<std::size_t>(p + q) + 1, 0);
    Integer b = 1;
    for (std::int64_t k = 0; k <= p; ++k) {
        c[static_cast<std::size_t>(q + k)] = b;
        b *= (p - k);
        mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(k + 1));
    }
    c[0] -= 1;
    return UniIntPoly(std::move(c));
}

/// All p + q roots of z^q (1+z)^p = 1 with inclusion radii.
struct ModelRoots {
    std::vector<std::complex<long double>> z;
    std::vector<long double> radius;
    bool converged = false;
    bool isolated = false;
};

namespace detail {

struct ModelEval {
    std::complex<long double> ratio;  // g / g'
    long double abs_value;
    long double error;
};

inline ModelEval model_eval(std::int64_t p, std::int64_t q, const std::complex<long double>& z) {
    using C = std::complex<long double>;
    const C lz = std::log(z), lw = std::log(C(1) + z);
    const C e = static_cast<long double>(q) * lz + static_cast<long double>(p) * lw;
    const C h = std::exp(e);  // z^q (1+z)^p
    const C g = h - C(1);
    // g' = h * (q / z + p / (1 + z))
    const C dlog = static_cast<long double>(q) / z + static_cast<long double>(p) / (C(1) + z);
    ModelEval out;
    out.ratio = g / (h * dlog);
    out.abs_value = std::abs(g);
    const long double eps = std::numeric_limits<long double>::epsilon();
    out.error = 8 * eps * (1 + std::abs(h) * (1 + std::abs(e)) * (static_cast<long double>(p + q) + 2));
    return out;
}

} // namespace detail

inline ModelRoots model_roots(std::int64_t p, std::int64_t q, std::uint32_t seed = 0x2545f491u) {
    using C = std::complex<long double>;
    const std::size_t n = static_cast<std::size_t>(p + q);
    ModelRoots out;
    out.z.resize(n);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.25, 0.25);
    const long double two_pi = 6.283185307179586476925286766559L;
    for (std::size_t k = 0; k < n; ++k) {
        const long double th = two_pi * (static_cast<long double>(k) + 0.5L + jitter(rng)) / static_cast<long double>(n);
        out.z[k] = C(-1) + 1.1L * C(std::cos(th), std::sin(th));
    }
    const long double stop = 64 * std::numeric_limits<long double>::epsilon();
    std::vector<bool> done(n, false);
    std::size_t remaining = n;
    const int cap = 100 + 2 * static_cast<int>(n);
    for (int it = 0; it < cap && remaining > 0; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            const auto ev = detail::model_eval(p, q, out.z[i]);
            C sum = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) sum += C(1) / (out.z[i] - out.z[j]);
            }
            const C step = ev.ratio / (C(1) - ev.ratio * sum);
            out.z[i] -= step;
            if (std::abs(step) <= stop * std::abs(out.z[i])) {
                done[i] = true;
                --remaining;
            }
        }
    }
    out.converged = remaining == 0;
    out.radius.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ev = detail::model_eval(p, q, out.z[i]);
        long double ldist = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) ldist += std::log(std::abs(out.z[i] - out.z[j]));
        }
        out.radius[i] = static_cast<long double>(n) * (ev.abs_value + ev.error) * std::exp(-ldist);
    }
    out.isolated = true;
    for (const auto& comp : detail::disk_components(out.z, out.radius)) {
        if (comp.size() > 1) out.isolated = false;
    }
    return out;
}

/// Solutions of z^q w^p = 1 with w = 1 + z, |w| > 1, |z| < epsilon.
inline ModelSolveReport solve_model(std::int64_t p, std::int64_t q, double epsilon) {
    if (p <= 0 || q <= 0 || gcd64(p, q) != 1) throw Error(ErrorCode::InvalidArgument, "model needs coprime p, q > 0");
    if (!(epsilon > 0) || epsilon > 0.2) throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 0.2]");
    if (!(static_cast<double>(p) / static_cast<double>(q) > 1.0 / epsilon)) {
        throw Error(ErrorCode::InvalidArgument, "model needs p/q > 1/epsilon");
    }
    if (p + q > 4096) throw Error(ErrorCode::DegreeBoundExceeded, "p + q exceeds 4096");
    const auto roots = model_roots(p, q);
    ModelSolveReport r;
    r.p = p;
    r.q = q;
    r.epsilon = epsilon;
    r.total_roots = roots.z.size();
    r.converged = roots.converged;
    r.isolated = roots.isolated;
    for (std::size_t i = 0; i < roots.z.size(); ++i) {
        const auto& z = roots.z[i];
        const auto w = 1.0L + z;
        if (!(std::abs(w) > 1 && std::abs(z) < epsilon)) continue;
        const auto ev = detail::model_eval(p, q, z);
        r.solutions.push_back({{static_cast<double>(z.real()), static_cast<double>(z.imag())},
                               {static_cast<double>(w.real()), static_cast<double>(w.imag())},
                               static_cast<double>(ev.abs_value),
                               static_cast<double>(roots.radius[i])});
        r.max_residual = std::max(r.max_residual, static_cast<double>(ev.abs_value));
    }
    std::sort(r.solutions.begin(), r.solutions.end(),
              [](const ModelSolution& a, const ModelSolution& b) { return std::abs(a.w) > std::abs(b.w); });
    r.count = r.solutions.size();
    for (const auto& s : r.solutions) r.w_moduli.push_back(std::abs(s.w));
    r.product_top = products_of_largest(r.w_moduli, 2 * static_cast<std::size_t>(q));

    // independent residual through the exact expansion, when 512 bits cover the cancellation
    if (p + q <= 400 && !r.solutions.empty()) {
        using R = detail::Float512;
        const auto poly = model_polynomial(p, q);
        std::vector<R> a(poly.size());
        for (std::size_t k = 0; k < poly.size(); ++k) a[k] = detail::integer_to_real<R>(poly[k], 0);
        double worst = 0;
        for (const auto& s : r.solutions) {
            detail::Cx<R> z{R(s.z.real()), R(s.z.imag())}, v;
            for (std::size_t k = a.size(); k-- > 0;) v = v * z + detail::Cx<R>{a[k], R(0)};
            worst = std::max(worst, static_cast<double>(v.mod()));
        }
        r.expanded_residual = worst;
    }
    return r;
}

// ---------------------------------------------------------------------------
// bounds and fitted constants

/// Prod_{l=1..k} (1 + d log((p/q)/l) / (p/q))^exponent.
inline double product_bound_rhs(std::int64_t p, std::int64_t q, std::size_t k, double d, double exponent) {
    const double x = static_cast<double>(p) / static_cast<double>(q);
    double acc = 0;
    for (std::size_t l = 1; l <= k; ++l) acc += exponent * std::log1p(d * std::log(x / static_cast<double>(l)) / x);
    return std::exp(acc);
}

struct ProductBoundRow {
    std::size_t k;
    std::optional<double> lhs;  // empty when fewer than 2kq values are available
    double rhs;
    bool pass;  // true for N/A rows
};

/// Rows k = 1..k_max of LHS (product of the 2kq largest values) against the displayed product.
inline std::vector<ProductBoundRow> product_bound_check(const std::vector<double>& product_top, std::int64_t p,
                                                        std::int64_t q, double d, std::size_t k_max, double exponent) {
    std::vector<ProductBoundRow> rows;
    for (std::size_t k = 1; k <= k_max; ++k) {
        ProductBoundRow row{k, std::nullopt, product_bound_rhs(p, q, k, d, exponent), true};
        if (k <= product_top.size()) {
            row.lhs = product_top[k - 1];
            row.pass = *row.lhs <= row.rhs * (1 + 1e-12);
        }
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<ProductBoundRow> product_bound_check(const ModelSolveReport& r, double d, std::size_t k_max) {
    return product_bound_check(r.product_top, r.p, r.q, d, k_max, 2.0 * static_cast<double>(r.q));
}

inline std::vector<ProductBoundRow> product_bound_check(const RootGeometryReport& r, double d, std::size_t k_max) {
    return product_bound_check(r.product_top, r.p, std::max<std::int64_t>(std::abs(r.q), 1), d, k_max, 2.0);
}

/// ceil(C p / (2 pi q)): the number of k rows and half the count bound over q.
inline std::size_t model_k_max(std::int64_t p, std::int64_t q, double C) {
    const double x = C * static_cast<double>(p) / (2 * M_PI * static_cast<double>(q));
    return static_cast<std::size_t>(std::ceil(x));
}

inline std::size_t model_count_bound(std::int64_t p, std::int64_t q, double C) {
    return 2 * model_k_max(p, q, C) * static_cast<std::size_t>(q);
}

/// Smallest C with count <= 2 ceil(C p / (2 pi q)) q for this report.
inline double model_constant_needed(const ModelSolveReport& r) {
    if (r.count == 0) return 0;
    const std::size_t m = (r.count + 2 * static_cast<std::size_t>(r.q) - 1) / (2 * static_cast<std::size_t>(r.q));
    // ceil(x) >= m  <=>  x > m - 1
    const double x = static_cast<double>(m - 1);
    const double c = x * 2 * M_PI * static_cast<double>(r.q) / static_cast<double>(r.p);
    return std::max(c * (1 + 1e-12), 1e-300);
}

inline double fit_model_constant(const std::vector<ModelSolveReport>& training) {
    double c = 0;
    for (const auto& r : training) c = std::max(c, model_constant_needed(r));
    return c;
}

/// Smallest d >= 0 (to bisection accuracy, rounded up) with every row passing.
inline double fit_product_d(const std::vector<ModelSolveReport>& training, double C) {
    auto ok = [&](double d) {
        for (const auto& r : training) {
            for (const auto& row : product_bound_check(r, d, model_k_max(r.p, r.q, C))) {
                if (!row.pass) return false;
            }
        }
        return true;
    };
    if (ok(0)) return 0;
    double lo = 0, hi = 1;
    while (!ok(hi)) {
        hi *= 2;
        if (hi > 1e9) throw Error(ErrorCode::NonConvergence, "no finite d satisfies the product bound");
    }
    for (int it = 0; it < 60; ++it) {
        const double mid = (lo + hi) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

inline double fit_root_D(const std::vector<RootGeometryReport>& training) {
    double d = 0;
    for (const auto& r : training) d = std::max(d, r.fitted_D);
    return d;
}

// ---------------------------------------------------------------------------
// threshold classes for roots just outside the unit circle

enum class RootClass { Inside, SmallPower, AwayFromTop, Neither };

inline std::string to_string(RootClass c) {
    switch (c) {
    case RootClass::Inside: return "inside";
    case RootClass::SmallPower: return "small_power";
    case RootClass::AwayFromTop: return "away_from_top_only";
    case RootClass::Neither: return "neither";
    }
    return "?";
}

struct ThresholdStats {
    std::int64_t p = 0, q = 0;
    double epsilon = 0;
    bool zeta_set_empty = false;  // top row is a single monomial: the second hypothesis is vacuous
    std::vector<std::complex<double>> zetas;
    std::size_t total = 0;
    std::size_t inside = 0;         // |t| <= 1 within its radius
    std::size_t small_power = 0;    // 1 < |t|^p < 1/eps
    std::size_t away_only = 0;      // |t| > 1, |t^q - zeta| > eps for all zeta, not small_power
    std::size_t neither = 0;
    std::size_t away_total = 0;     // all roots meeting the second hypothesis
    double max_small_power = 0;     // max modulus in each class, 0 when empty
    double max_away = 0;
    double fitted_C1_small_power = 0;  // |p| (max - 1)
    double fitted_C1_away = 0;
    double fitted_C1 = 0;
};

/// Roots of sum_i c_{i,n} zeta^{-i} for the top row of f.
inline std::vector<std::complex<double>> top_row_roots(const BivarLaurentPoly& f) {
    const auto n = f.max_j();
    std::int64_t a = INT64_MAX, b = INT64_MIN;
    for (const auto& kv : f.terms()) {
        if (kv.first.j != n) continue;
        a = std::min(a, kv.first.i);
        b = std::max(b, kv.first.i);
    }
    if (a == b) return {};
    // zeta^b * sum c_i zeta^-i = sum c_i zeta^(b-i)
    std::vector<Integer> c(static_cast<std::size_t>(b - a) + 1, 0);
    for (const auto& [e, v] : f.terms()) {
        if (e.j == n) c[static_cast<std::size_t>(b - e.i)] = v;
    }
    const auto rs = find_roots(UniIntPoly(std::move(c)));
    std::vector<std::complex<double>> out;
    for (const auto& r : rs.roots) {
        for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.z);
    }
    return out;
}

inline ThresholdStats near_unit_threshold_stats(const FillingPoly& fp, const BivarLaurentPoly& source, double epsilon,
                                                const RootOptions& opt = {}) {
    if (!(epsilon > 0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    ThresholdStats st;
    st.p = fp.p;
    st.q = fp.q;
    st.epsilon = epsilon;
    st.zetas = top_row_roots(source);
    st.zeta_set_empty = st.zetas.empty();
    const UniIntPoly sf = squarefree_part(fp.poly);
    if (sf.degree() < 1) return st;
    const RootSet rs = find_roots(sf, opt);
    const double pa = static_cast<double>(std::max<std::int64_t>(std::abs(fp.p), 1));
    const double qd = static_cast<double>(fp.q);
    for (const auto& root : rs.roots) {
        for (int k = 0; k < root.multiplicity; ++k) {
            ++st.total;
            const double m = std::abs(root.z);
            if (m - root.radius <= 1) {
                ++st.inside;
                continue;
            }
            const bool small = std::pow(m, pa) < 1 / epsilon;
            bool away = true;
            if (!st.zeta_set_empty) {
                const std::complex<double> tq = std::exp(qd * std::log(root.z));
                for (const auto& z : st.zetas) {
                    if (!(std::abs(tq - z) > epsilon)) {
                        away = false;
                        break;
                    }
                }
            }
            if (small) {
                ++st.small_power;
                st.max_small_power = std::max(st.max_small_power, m);
            } else if (away) {
                ++st.away_only;
            } else {
                ++st.neither;
            }
            if (away) {
                ++st.away_total;
                st.max_away = std::max(st.max_away, m);
            }
        }
    }
    st.fitted_C1_small_power = st.max_small_power > 0 ? pa * (st.max_small_power - 1) : 0;
    st.fitted_C1_away = st.max_away > 0 ? pa * (st.max_away - 1) : 0;
    st.fitted_C1 = std::max(st.fitted_C1_small_power, st.fitted_C1_away);
    return st;
}

} // namespace dehnfill
