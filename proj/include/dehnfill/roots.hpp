#pragma once

// Simultaneous root finding (Aberth iteration, Gauss-Seidel updates) with
// a-posteriori inclusion disks. Precision escalates from double through
// software binary floats until every disk is isolated.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "unipoly.hpp"

namespace dehnfill {

struct Root {
    std::complex<double> z;
    double radius = 0;      // certified: the disk holds exactly `multiplicity` roots
    int multiplicity = 1;   // > 1 only for clusters that could not be separated
};

struct RootSet {
    std::vector<Root> roots;
    int degree_accounted = 0;  // deg f minus the multiplicity of the root 0
    int zero_multiplicity = 0;
    int precision_bits = 53;
    int iterations = 0;
    bool converged = false;
    bool isolated = false;  // every disk holds a single root

    std::vector<double> moduli() const {
        std::vector<double> m;
        for (const auto& r : roots) {
            for (int k = 0; k < r.multiplicity; ++k) m.push_back(std::abs(r.z));
        }
        return m;
    }
};

struct RootOptions {
    int min_bits = 53;        // precision floor
    int max_bits = 512;
    double tolerance = 1e-12; // target relative radius
    std::uint32_t seed = 0x9e3779b9u;
};

/// Precision floor from DEHNFILL_BITS, if set.
inline int env_precision_floor(int fallback = 53) {
    if (const char* s = std::getenv("DEHNFILL_BITS")) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s && v > 0) return static_cast<int>(std::min<long>(v, 512));
    }
    return fallback;
}

namespace detail {

namespace mp = boost::multiprecision;
using Float113 = mp::number<mp::cpp_bin_float<113, mp::digit_base_2>, mp::et_off>;
using Float256 = mp::number<mp::cpp_bin_float<256, mp::digit_base_2>, mp::et_off>;
using Float512 = mp::number<mp::cpp_bin_float<512, mp::digit_base_2>, mp::et_off>;

template <class R>
struct Cx {
    R re{0}, im{0};
    friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator*(const Cx& a, const Cx& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
    friend Cx operator*(const R& s, const Cx& a) { return {s * a.re, s * a.im}; }
    friend Cx operator/(const Cx& a, const Cx& b) {
        using std::abs;
        // Smith's algorithm
        if (abs(b.re) >= abs(b.im)) {
            R r = b.im / b.re, den = b.re + b.im * r;
            return {(a.re + a.im * r) / den, (a.im - a.re * r) / den};
        }
        R r = b.re / b.im, den = b.re * r + b.im;
        return {(a.re * r + a.im) / den, (a.im * r - a.re) / den};
    }
    R norm() const { return re * re + im * im; }
    R mod() const {
        using std::hypot;
        return hypot(re, im);
    }
};

template <class R>
R integer_to_real(const Integer& x, long scale_exp) {
    using std::ldexp;
    if (sgn(x) == 0) return R(0);
    const int keep = std::numeric_limits<R>::digits + 8;
    Integer y = abs(x);
    long shift = 0;
    const long bits = static_cast<long>(bit_length(y));
    if (bits > keep) {
        shift = bits - keep;
        mpz_fdiv_q_2exp(y.get_mpz_t(), y.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    }
    R acc(0);
    const long chunks = (static_cast<long>(bit_length(y)) + 31) / 32;
    for (long k = chunks - 1; k >= 0; --k) {
        Integer c;
        mpz_fdiv_q_2exp(c.get_mpz_t(), y.get_mpz_t(), static_cast<mp_bitcnt_t>(32 * k));
        mpz_fdiv_r_2exp(c.get_mpz_t(), c.get_mpz_t(), 32);
        acc = ldexp(acc, 32) + R(static_cast<unsigned long>(c.get_ui()));
    }
    acc = ldexp(acc, static_cast<int>(shift - scale_exp));
    return sgn(x) < 0 ? R(-acc) : acc;
}

template <class R>
struct Evaluation {
    Cx<R> ratio;       // f / f'
    R log_abs_value;   // log |f(z)|
    R log_abs_bound;   // log of sum |a_k| |z|^k
};

/// Newton correction and magnitudes at z. For |z| > 1 the reversed
/// polynomial is evaluated at 1/z.
template <class R>
Evaluation<R> evaluate(const std::vector<R>& a, const Cx<R>& z) {
    using std::log;
    const std::size_t n = a.size() - 1;
    const R modz = z.mod();
    Cx<R> v, dv;
    R bound(0);
    if (modz <= R(1)) {
        for (std::size_t k = n + 1; k-- > 0;) {
            dv = dv * z + v;
            v = v * z + Cx<R>{a[k], R(0)};
            bound = bound * modz + (a[k] < 0 ? R(-a[k]) : a[k]);
        }
        Evaluation<R> e;
        e.ratio = v / dv;
        e.log_abs_value = log(v.mod());
        e.log_abs_bound = log(bound);
        return e;
    }
    const Cx<R> w = Cx<R>{R(1), R(0)} / z;
    const R modw = R(1) / modz;
    for (std::size_t k = 0; k <= n; ++k) {
        dv = dv * w + v;
        v = v * w + Cx<R>{a[k], R(0)};
        bound = bound * modw + (a[k] < 0 ? R(-a[k]) : a[k]);
    }
    // f(z) = z^n V(w), f'(z) = z^(n-1) (n V(w) - w V'(w))
    Evaluation<R> e;
    const Cx<R> den = R(static_cast<double>(n)) * v - w * dv;
    e.ratio = (z * v) / den;
    const R nlog = R(static_cast<double>(n)) * log(modz);
    e.log_abs_value = nlog + log(v.mod());
    e.log_abs_bound = nlog + log(bound);
    return e;
}

template <class R>
struct AberthResult {
    std::vector<Cx<R>> z;
    std::vector<long double> log_radius;
    int iterations = 0;
    bool converged = false;
};

template <class R>
AberthResult<R> aberth(const std::vector<Integer>& coeffs, const std::vector<std::complex<long double>>* warm,
                       const RootOptions& opt) {
    using std::log;
    const std::size_t n = coeffs.size() - 1;
    long top = 0;
    for (const auto& c : coeffs) top = std::max<long>(top, static_cast<long>(bit_length(c)));
    std::vector<R> a(n + 1);
    for (std::size_t k = 0; k <= n; ++k) a[k] = integer_to_real<R>(coeffs[k], top);

    AberthResult<R> res;
    res.z.resize(n);
    if (warm && warm->size() == n) {
        for (std::size_t k = 0; k < n; ++k) res.z[k] = {R((*warm)[k].real()), R((*warm)[k].imag())};
    } else {
        const long double radius =
            std::exp((static_cast<long double>(log_abs(coeffs[0])) - static_cast<long double>(log_abs(coeffs[n]))) /
                     static_cast<long double>(n));
        std::mt19937 rng(opt.seed);
        std::uniform_real_distribution<double> jitter(-0.25, 0.25);
        const long double two_pi = 6.283185307179586476925286766559L;
        for (std::size_t k = 0; k < n; ++k) {
            const long double th = two_pi * (static_cast<long double>(k) + 0.5L + jitter(rng)) / static_cast<long double>(n);
            res.z[k] = {R(static_cast<double>(radius * std::cos(th))), R(static_cast<double>(radius * std::sin(th)))};
        }
    }

    const R eps = std::numeric_limits<R>::epsilon();
    const R stop = R(64) * eps;
    const int cap = (warm && warm->size() == n) ? 60 : 100 + 2 * static_cast<int>(n);
    std::vector<bool> done(n, false);
    std::size_t remaining = n;
    for (res.iterations = 0; res.iterations < cap && remaining > 0; ++res.iterations) {
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            auto ev = evaluate(a, res.z[i]);
            Cx<R> sum;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const Cx<R> d = res.z[i] - res.z[j];
                const R nd = d.norm();
                if (nd == R(0)) continue;
                sum = sum + Cx<R>{d.re / nd, -d.im / nd};
            }
            const Cx<R> one{R(1), R(0)};
            const Cx<R> step = ev.ratio / (one - ev.ratio * sum);
            res.z[i] = res.z[i] - step;
            if (step.mod() <= stop * res.z[i].mod() || !(ev.log_abs_value == ev.log_abs_value)) {
                done[i] = true;
                --remaining;
            }
        }
    }
    res.converged = remaining == 0;

    // Inclusion radii n |f(z_i)| / (|a_n| prod |z_i - z_j|), with a rounding
    // allowance on |f(z_i)|.
    const R gamma = R(static_cast<double>(4 * n + 4)) * eps;
    const long double log_n = std::log(static_cast<long double>(n));
    const long double log_an = static_cast<long double>(log(a[n] < 0 ? R(-a[n]) : a[n]));
    const long double log_gamma = static_cast<long double>(log(gamma));
    res.log_radius.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto ev = evaluate(a, res.z[i]);
        long double lv = static_cast<long double>(ev.log_abs_value);
        long double le = static_cast<long double>(ev.log_abs_bound) + log_gamma;
        if (!std::isfinite(lv)) lv = -std::numeric_limits<long double>::infinity();
        const long double hi = std::max(lv, le), lo = std::min(lv, le);
        long double lnum = std::isfinite(lo) ? hi + std::log1p(std::exp(lo - hi)) : hi;
        long double ldist = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            ldist += static_cast<long double>(log((res.z[i] - res.z[j]).mod()));
        }
        res.log_radius[i] = log_n + lnum - log_an - ldist;
    }
    return res;
}

/// Connected components of overlapping disks.
inline std::vector<std::vector<std::size_t>> disk_components(const std::vector<std::complex<long double>>& c,
                                                             const std::vector<long double>& r) {
    const std::size_t n = c.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&c, &r](std::size_t x, std::size_t y) { return c[x].real() - r[x] < c[y].real() - r[y]; });
    // sweep on the real axis to avoid the full quadratic pass on well separated sets
    for (std::size_t a = 0; a < n; ++a) {
        const auto i = order[a];
        const long double right = c[i].real() + r[i];
        for (std::size_t b = a + 1; b < n; ++b) {
            const auto j = order[b];
            if (c[j].real() - r[j] > right) break;
            if (std::abs(c[i] - c[j]) <= r[i] + r[j]) parent[find(i)] = find(j);
        }
    }
    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& g : groups) {
        if (!g.empty()) out.push_back(std::move(g));
    }
    return out;
}

struct LevelOutcome {
    RootSet set;
    std::vector<std::complex<long double>> approximations;
};

template <class R>
LevelOutcome run_level(const std::vector<Integer>& coeffs, const std::vector<std::complex<long double>>* warm,
                       const RootOptions& opt) {
    auto ab = aberth<R>(coeffs, warm, opt);
    const std::size_t n = ab.z.size();
    LevelOutcome out;
    out.set.precision_bits = std::numeric_limits<R>::digits;
    out.set.iterations = ab.iterations;
    out.set.converged = ab.converged;
    out.approximations.resize(n);
    std::vector<long double> radius(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.approximations[i] = {static_cast<long double>(ab.z[i].re), static_cast<long double>(ab.z[i].im)};
        const auto zd = std::complex<double>(static_cast<double>(ab.z[i].re), static_cast<double>(ab.z[i].im));
        // the reported centre is rounded to double; widen the disk accordingly
        const long double rounding = std::abs(out.approximations[i] - std::complex<long double>(zd.real(), zd.imag()));
        radius[i] = std::exp(ab.log_radius[i]) + rounding;
        if (!std::isfinite(radius[i])) radius[i] = std::numeric_limits<long double>::infinity();
    }
    auto comps = disk_components(out.approximations, radius);
    out.set.isolated = true;
    for (const auto& g : comps) {
        Root root;
        if (g.size() == 1) {
            const auto& z = out.approximations[g[0]];
            root.z = {static_cast<double>(z.real()), static_cast<double>(z.imag())};
            root.radius = static_cast<double>(radius[g[0]]);
        } else {
            out.set.isolated = false;
            std::complex<long double> centre = 0;
            for (auto i : g) centre += out.approximations[i];
            centre /= static_cast<long double>(g.size());
            long double rr = 0;
            for (auto i : g) rr = std::max(rr, std::abs(out.approximations[i] - centre) + radius[i]);
            root.z = {static_cast<double>(centre.real()), static_cast<double>(centre.imag())};
            root.radius = static_cast<double>(rr);
            root.multiplicity = static_cast<int>(g.size());
        }
        // keep the double radius conservative
        root.radius = std::nextafter(root.radius, std::numeric_limits<double>::infinity());
        out.set.roots.push_back(root);
    }
    std::sort(out.set.roots.begin(), out.set.roots.end(), [](const Root& x, const Root& y) {
        if (x.z.real() != y.z.real()) return x.z.real() < y.z.real();
        return x.z.imag() < y.z.imag();
    });
    return out;
}

inline bool level_good(const RootSet& s, const RootOptions& opt) {
    if (!s.converged || !s.isolated) return false;
    for (const auto& r : s.roots) {
        if (!(r.radius <= opt.tolerance * std::max(1.0, std::abs(r.z)) + 1e-300)) return false;
    }
    return true;
}

/// Precision the next level should have, extrapolating from how far the
/// radii at the current level are above the target.
inline int bits_wanted(const RootSet& s, const RootOptions& opt) {
    if (!s.converged) return s.precision_bits + 1;
    double worst = 0;
    for (const auto& r : s.roots) {
        const double target = opt.tolerance * std::max(1.0, std::abs(r.z));
        if (!std::isfinite(r.radius)) return s.precision_bits + 1;
        worst = std::max(worst, std::log2(r.radius / target));
    }
    return s.precision_bits + static_cast<int>(std::ceil(worst)) + 4;
}

} // namespace detail

/// Roots of f (squarefree for full isolation). Zero roots are split off and
/// counted in zero_multiplicity.
inline RootSet find_roots(const UniIntPoly& f, const RootOptions& opt = {}) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "find_roots of the zero polynomial");
    if (f.degree() < 1) throw Error(ErrorCode::InvalidArgument, "find_roots needs degree >= 1");
    const std::size_t z0 = f.lowest_degree();
    const UniIntPoly g = f.shift(-static_cast<std::int64_t>(z0));
    RootSet best;
    best.zero_multiplicity = static_cast<int>(z0);
    if (g.degree() == 0) {
        best.converged = best.isolated = true;
        return best;
    }
    if (g.degree() == 1) {
        // exact rational root
        const double x = -detail::integer_to_real<double>(g[0], 0) / detail::integer_to_real<double>(g[1], 0);
        best.roots.push_back({{x, 0.0}, std::abs(x) * 0x1p-52, 1});
        best.degree_accounted = 1;
        best.converged = best.isolated = true;
        return best;
    }
    const std::vector<Integer>& c = g.coeffs();
    std::vector<std::complex<long double>> warm;
    int wanted = std::max(opt.min_bits, 0);
    bool done = false;
    auto attempt = [&](auto tag) {
        using R = decltype(tag);
        const int bits = std::numeric_limits<R>::digits;
        if (done || (bits < wanted && bits < opt.max_bits)) return;
        auto out = detail::run_level<R>(c, warm.empty() ? nullptr : &warm, opt);
        warm = out.approximations;
        best.roots = std::move(out.set.roots);
        best.precision_bits = bits;
        best.iterations += out.set.iterations;
        best.converged = out.set.converged;
        best.isolated = out.set.isolated;
        done = detail::level_good(best, opt) || bits >= opt.max_bits;
        wanted = std::max(wanted, detail::bits_wanted(best, opt));
    };
    attempt(double{});
    attempt(static_cast<long double>(0));
    attempt(detail::Float113{});
    attempt(detail::Float256{});
    wanted = 0;
    attempt(detail::Float512{});
    best.degree_accounted = 0;
    for (const auto& r : best.roots) best.degree_accounted += r.multiplicity;
    return best;
}

} // namespace dehnfill
