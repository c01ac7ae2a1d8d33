#pragma once

#include <algorithm>
#include <bitset>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"
#include "hensel.hpp"
#include "nmod.hpp"
#include "unipoly.hpp"

namespace dehnfill {

struct FactorOptions {
    int degree_bound = 4096;
    int pattern_primes = 3;          // primes whose degree patterns are intersected
    std::uint64_t first_prime = 101;  // smallest admissible primes above 100
    std::uint64_t subset_cap = 1ull << 20;
};

struct FactorEntry {
    UniIntPoly poly;  // irreducible, primitive, positive leading coefficient
    int multiplicity = 1;
    std::uint64_t cyclotomic_order = 0;  // n when poly == Phi_n, 0 otherwise
};

/// unit * content * t^t_power * prod factors^multiplicity == input
struct Factorization {
    int unit = 1;
    Integer content = 1;
    std::size_t t_power = 0;
    std::vector<FactorEntry> factors;
    std::vector<std::size_t> cyclotomic_part;      // indices into factors
    std::vector<std::size_t> non_cyclotomic_part;  // indices into factors
    bool split_done = false;

    UniIntPoly expand() const {
        UniIntPoly acc = UniIntPoly::constant(Integer(unit) * content).shift(static_cast<std::int64_t>(t_power));
        for (const auto& f : factors) {
            for (int k = 0; k < f.multiplicity; ++k) acc = acc * f.poly;
        }
        return acc;
    }
};

struct SquarefreeDecomposition {
    int unit = 1;
    Integer content = 1;
    std::size_t t_power = 0;
    std::vector<std::pair<UniIntPoly, int>> parts;  // pairwise coprime, squarefree, primitive
};

/// Yun's algorithm over Z[x]; powers of x are split off into t_power.
inline SquarefreeDecomposition squarefree_decompose(const UniIntPoly& f) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "squarefree_decompose of zero");
    SquarefreeDecomposition out;
    out.unit = sgn(f.leading()) < 0 ? -1 : 1;
    out.content = f.content();
    out.t_power = f.lowest_degree();
    UniIntPoly g = f.primitive_part().shift(-static_cast<std::int64_t>(out.t_power));
    if (g.degree() < 1) return out;

    UniIntPoly a = gcd(g, g.derivative()).primitive_part();
    UniIntPoly b = *exact_divide(g, a);
    UniIntPoly c = *exact_divide(g.derivative(), a);
    UniIntPoly d = c - b.derivative();
    for (int i = 1; b.degree() >= 1; ++i) {
        UniIntPoly ai = gcd(b, d).primitive_part();
        UniIntPoly bn = *exact_divide(b, ai);
        UniIntPoly cn = *exact_divide(d, ai);
        if (ai.degree() >= 1) out.parts.emplace_back(ai, i);
        d = cn - bn.derivative();
        b = std::move(bn);
    }
    return out;
}

namespace detail {

/// Bitset of achievable subset sums of a degree multiset.
inline std::vector<bool> subset_sums(const std::vector<int>& degs, int total) {
    std::vector<bool> ok(static_cast<std::size_t>(total) + 1, false);
    ok[0] = true;
    for (int d : degs) {
        for (int s = total; s >= d; --s) {
            if (ok[s - d]) ok[s] = true;
        }
    }
    return ok;
}

struct PrimeChoice {
    nmod::Field field;
    nmod::Poly image;  // monic image of g
    std::vector<int> pattern;
};

inline Integer symmetric(Integer a, const Integer& m) {
    mpz_fdiv_r(a.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    if (a > m / 2) a -= m;
    return a;
}

/// Irreducible factors of a primitive squarefree g with deg >= 1, g(0) != 0,
/// positive leading coefficient, and no cyclotomic factors required.
inline std::vector<UniIntPoly> zassenhaus(UniIntPoly g, const FactorOptions& opt) {
    std::vector<UniIntPoly> result;
    const int n = g.degree();
    if (n <= 1) {
        result.push_back(g);
        return result;
    }

    // Prime selection and degree-pattern intersection.
    std::vector<PrimeChoice> choices;
    std::vector<bool> allowed(static_cast<std::size_t>(n) + 1, true);
    for (nmod::u64 p = nmod::next_prime(opt.first_prime);
         static_cast<int>(choices.size()) < opt.pattern_primes; p = nmod::next_prime(p + 1)) {
        nmod::Field F{p};
        if (F.reduce(g.leading()) == 0) continue;
        nmod::Poly img = nmod::monic(F, nmod::reduce(F, g.coeffs()));
        if (!nmod::is_squarefree(F, img)) continue;
        nmod::Frobenius frob(F, img);
        auto pattern = nmod::degree_pattern(nmod::distinct_degree(F, img, frob));
        auto sums = subset_sums(pattern, n);
        for (int s = 0; s <= n; ++s) allowed[s] = allowed[s] && sums[s];
        choices.push_back({F, img, pattern});
        bool irreducible = true;
        for (int s = 1; s < n; ++s) {
            if (allowed[s]) { irreducible = false; break; }
        }
        if (irreducible) {
            result.push_back(g);
            return result;
        }
    }
    auto best = std::min_element(choices.begin(), choices.end(), [](const PrimeChoice& a, const PrimeChoice& b) {
        return a.pattern.size() < b.pattern.size();
    });
    const nmod::Field F = best->field;
    std::vector<nmod::Poly> modular = nmod::factor_squarefree(F, best->image, 0x5eed0000ull + F.p);

    // Lift above twice the coefficient bound for lc * (any factor).
    Integer bound = Integer(1) << static_cast<unsigned long>(n);
    {
        Integer norm;
        mpz_sqrt(norm.get_mpz_t(), g.norm2_squared().get_mpz_t());
        bound *= (norm + 1);
    }
    bound *= 2 * abs(g.leading());
    const Integer p = static_cast<unsigned long>(F.p);
    Integer m = p;
    while (m <= bound) m *= m;
    auto lifted = hensel::lift(hensel::reduce(g.coeffs(), m), modular, F, m);

    std::vector<std::size_t> remaining(lifted.size());
    std::iota(remaining.begin(), remaining.end(), 0);
    std::uint64_t tried = 0;

    for (std::size_t s = 1; 2 * s <= remaining.size();) {
        bool found = false;
        std::vector<std::size_t> idx(s);
        std::iota(idx.begin(), idx.end(), 0);
        const Integer lc = g.leading();
        const Integer lc_g0 = lc * g[0];
        while (true) {
            int deg = 0;
            for (auto i : idx) deg += static_cast<int>(lifted[remaining[i]].size()) - 1;
            if (allowed[deg]) {
                if (++tried > opt.subset_cap) {
                    throw Error(ErrorCode::DegreeBoundExceeded, "Zassenhaus subset cap exceeded");
                }
                // trailing coefficient test before the full product
                Integer c0 = lc;
                for (auto i : idx) {
                    c0 *= lifted[remaining[i]][0];
                    mpz_fdiv_r(c0.get_mpz_t(), c0.get_mpz_t(), m.get_mpz_t());
                }
                c0 = symmetric(c0, m);
                if (sgn(c0) != 0 && mpz_divisible_p(lc_g0.get_mpz_t(), c0.get_mpz_t())) {
                    hensel::ZPoly prod{lc};
                    for (auto i : idx) prod = hensel::mul(prod, lifted[remaining[i]], m);
                    std::vector<Integer> sym(prod.size());
                    for (std::size_t k = 0; k < prod.size(); ++k) sym[k] = symmetric(prod[k], m);
                    UniIntPoly candidate = UniIntPoly(std::move(sym)).primitive_part();
                    if (auto q = exact_divide(g, candidate)) {
                        result.push_back(candidate);
                        g = q->primitive_part();
                        std::vector<std::size_t> next;
                        for (std::size_t k = 0; k < remaining.size(); ++k) {
                            if (std::find(idx.begin(), idx.end(), k) == idx.end()) next.push_back(remaining[k]);
                        }
                        remaining = std::move(next);
                        found = true;
                        break;
                    }
                }
            }
            // next combination
            int k = static_cast<int>(s) - 1;
            while (k >= 0 && idx[k] == remaining.size() - s + static_cast<std::size_t>(k)) --k;
            if (k < 0) break;
            ++idx[k];
            for (std::size_t j = static_cast<std::size_t>(k) + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!found) ++s;
    }
    if (g.degree() >= 1) result.push_back(g);
    return result;
}

} // namespace detail

/// Complete factorization over Z. Cyclotomic factors of each squarefree
/// part are split off exactly first; the cofactor goes through
/// Hensel/Zassenhaus. The result is checked by re-multiplication.
inline Factorization factor(const UniIntPoly& f, const FactorOptions& opt = {}) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "factor of the zero polynomial");
    if (f.degree() > opt.degree_bound) {
        throw Error(ErrorCode::DegreeBoundExceeded,
                    "degree " + std::to_string(f.degree()) + " exceeds bound " + std::to_string(opt.degree_bound));
    }
    auto sq = squarefree_decompose(f);
    Factorization fac;
    fac.unit = sq.unit;
    fac.content = sq.content;
    fac.t_power = sq.t_power;
    for (auto& [part, mult] : sq.parts) {
        UniIntPoly rest = part;
        for (auto& cf : cyclotomic::extract(rest)) fac.factors.push_back({cf.poly, mult, 0});
        if (rest.degree() >= 1) {
            for (auto& h : detail::zassenhaus(rest.primitive_part(), opt)) fac.factors.push_back({h, mult, 0});
        }
    }
    std::sort(fac.factors.begin(), fac.factors.end(), [](const FactorEntry& a, const FactorEntry& b) {
        if (a.poly != b.poly) return a.poly < b.poly;
        return a.multiplicity < b.multiplicity;
    });
    if (fac.expand() != f) throw Error(ErrorCode::InternalCheckFailed, "factor product does not reproduce the input");
    return fac;
}

/// Marks every factor that equals some Phi_n; such factors divide x^n - 1.
inline Factorization cyclotomic_split(Factorization fac) {
    fac.cyclotomic_part.clear();
    fac.non_cyclotomic_part.clear();
    for (std::size_t i = 0; i < fac.factors.size(); ++i) {
        auto& e = fac.factors[i];
        e.cyclotomic_order = cyclotomic::order_of(e.poly);
        if (e.cyclotomic_order != 0) {
            if (!exact_divide(UniIntPoly::x_pow_minus_one(e.cyclotomic_order), e.poly)) {
                throw Error(ErrorCode::InternalCheckFailed, "cyclotomic factor does not divide x^n - 1");
            }
            fac.cyclotomic_part.push_back(i);
        } else {
            fac.non_cyclotomic_part.push_back(i);
        }
    }
    fac.split_done = true;
    return fac;
}

/// True iff f = +-x^k * (product of cyclotomic polynomials).
inline bool is_cyclotomic_product(const UniIntPoly& f, const FactorOptions& opt = {}) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "is_cyclotomic_product of zero");
    auto fac = cyclotomic_split(factor(f, opt));
    return fac.content == 1 && fac.non_cyclotomic_part.empty();
}

} // namespace dehnfill
