#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bivar.hpp"

namespace dehnfill {

enum class Sector { AboveTop, Between, BelowAll, Axis };

inline std::string to_string(Sector s) {
    switch (s) {
    case Sector::AboveTop: return "above_sA";
    case Sector::Between: return "between";
    case Sector::BelowAll: return "below_all";
    case Sector::Axis: return "axis";
    }
    return "?";
}

struct FillingSlope {
    std::int64_t p = 1;
    std::int64_t q = 0;
    Sector sector = Sector::Axis;
    int edge = -1;  // Newton-polygon edge index for Between / BelowAll

    /// Coprime, not both zero.
    static FillingSlope make(std::int64_t p, std::int64_t q) {
        if (p == 0 && q == 0) throw Error(ErrorCode::InvalidArgument, "slope (0,0) is not allowed");
        if (gcd64(p, q) != 1) {
            throw Error(ErrorCode::InvalidArgument, "(" + std::to_string(p) + "," + std::to_string(q) + ") is not coprime");
        }
        return {p, q, Sector::Axis, -1};
    }
};

/// (p,q) and (-p,-q) give the same filling; keep p > 0, or (0,1).
inline std::pair<std::int64_t, std::int64_t> canonical_pair(std::int64_t p, std::int64_t q) {
    if (p < 0 || (p == 0 && q < 0)) return {-p, -q};
    return {p, q};
}

/// Slope as an extended rational; empty means infinite (q == 0).
using ExtSlope = std::optional<Rational>;

inline ExtSlope slope_of(std::int64_t p, std::int64_t q) {
    if (q == 0) return std::nullopt;
    return Rational(p, q);
}

inline std::string to_string(const ExtSlope& s) { return s ? to_string(*s) : std::string("inf"); }

struct LeadingPrediction {
    Exponent corner;
    std::int64_t exponent;
};

struct FillingPoly {
    std::int64_t p = 0, q = 0;
    UniIntPoly poly;           // nonzero constant term, positive leading coefficient
    UniIntPoly raw;            // sign * poly; coefficient k belongs to t^(k + t_shift)
    std::int64_t t_shift = 0;
    int sign = 1;
    bool collision = false;
    std::optional<LeadingPrediction> predicted_leading;  // absent on collisions or ties

    Integer leading_coeff() const { return raw.leading(); }
};

inline std::int64_t filling_exponent(const Exponent& e, std::int64_t p, std::int64_t q) {
    return checked_add(checked_mul(-q, e.i), checked_mul(p, e.j));
}

/// Corner maximizing -q i + p j. Throws Tie when two corners share the maximum.
inline LeadingPrediction predict_leading(const NewtonPolygon& np, std::int64_t p, std::int64_t q) {
    if (np.corners.empty()) throw Error(ErrorCode::ZeroPolynomial, "empty Newton polygon");
    std::optional<LeadingPrediction> best;
    bool tie = false;
    for (const auto& c : np.corners) {
        const auto v = filling_exponent(c, p, q);
        if (!best || v > best->exponent) {
            best = LeadingPrediction{c, v};
            tie = false;
        } else if (v == best->exponent) {
            tie = true;
        }
    }
    if (tie) {
        throw Error(ErrorCode::Tie, "leading exponent " + std::to_string(best->exponent) + " attained at two corners for (" +
                                        std::to_string(p) + "," + std::to_string(q) + ")");
    }
    return *best;
}

/// Degree of A_{p,q} as predicted from the corners: max - min of -q i + p j.
inline std::int64_t predicted_degree(const NewtonPolygon& np, std::int64_t p, std::int64_t q) {
    std::int64_t lo = INT64_MAX, hi = INT64_MIN;
    for (const auto& c : np.corners) {
        const auto v = filling_exponent(c, p, q);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

/// The values (i'-i)/(j'-j) over support pairs; infinity for pairs in one row.
inline std::set<ExtSlope> collision_slopes(const BivarLaurentPoly& f) {
    std::set<ExtSlope> out;
    const auto s = f.support();
    for (std::size_t x = 0; x < s.size(); ++x) {
        for (std::size_t y = x + 1; y < s.size(); ++y) {
            const auto dj = s[y].j - s[x].j;
            if (dj == 0) out.insert(std::nullopt);
            else out.insert(Rational(s[y].i - s[x].i, dj));
        }
    }
    return out;
}

/// m -> t^-q, l -> t^p, combining coinciding exponents.
inline FillingPoly specialize(const BivarLaurentPoly& f, std::int64_t p, std::int64_t q) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "specialize of the zero polynomial");
    FillingSlope::make(p, q);
    std::map<std::int64_t, Integer> acc;
    for (const auto& [e, c] : f.terms()) acc[filling_exponent(e, p, q)] += c;
    FillingPoly out;
    out.p = p;
    out.q = q;
    out.collision = acc.size() < f.term_count();
    std::erase_if(acc, [](const auto& kv) { return sgn(kv.second) == 0; });
    if (acc.empty()) {
        throw Error(ErrorCode::DegeneratePolynomial,
                    "A_{" + std::to_string(p) + "," + std::to_string(q) + "} vanishes identically");
    }
    out.t_shift = acc.begin()->first;
    const auto span = acc.rbegin()->first - out.t_shift;
    if (span > (std::int64_t{1} << 28)) throw Error(ErrorCode::DegreeBoundExceeded, "specialized degree too large");
    std::vector<Integer> v(static_cast<std::size_t>(span) + 1, 0);
    for (const auto& [k, c] : acc) v[static_cast<std::size_t>(k - out.t_shift)] = c;
    out.raw = UniIntPoly(std::move(v));
    out.sign = sgn(out.raw.leading()) < 0 ? -1 : 1;
    out.poly = out.sign < 0 ? -out.raw : out.raw;
    if (!out.collision) {
        try {
            out.predicted_leading = predict_leading(newton_polygon(f), p, q);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Tie) throw;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// slope sectors and basis change

struct SectorTransform {
    Matrix2 matrix;             // acts on exponent vectors (i, j)
    BivarLaurentPoly poly;      // normalized image of the source polynomial
    std::string description;
    ExtSlope edge_slope;        // a/b of the edge this transform straightens; empty for identity
    std::int64_t a = 0, b = 0, r = 1, s = 0;
    bool identity = true;

    /// (p', q') = (r p + s q, -b p + a q); the identity keeps (p, q).
    std::pair<std::int64_t, std::int64_t> transform_pair(std::int64_t p, std::int64_t q) const {
        if (identity) return {p, q};
        return {checked_add(checked_mul(r, p), checked_mul(s, q)), checked_add(checked_mul(-b, p), checked_mul(a, q))};
    }
};

/// Solves a r + b s = 1 for coprime (a, b) with |s| minimal (then |r| minimal).
inline std::pair<std::int64_t, std::int64_t> basis_change_coefficients(std::int64_t a, std::int64_t b) {
    if (gcd64(a, b) != 1) throw Error(ErrorCode::InvalidArgument, "edge direction is not primitive");
    if (a == 0) return {0, b};  // b = +-1, s = b
    std::int64_t x = 0, y = 0;
    extended_gcd(a, b, x, y);  // a x + b y = +-1 normalised below
    if (a * x + b * y == -1) {
        x = -x;
        y = -y;
    }
    // general solution: s = y + k a, r = x - k b
    const std::int64_t m = a < 0 ? -a : a;
    std::int64_t s = ((y % m) + m) % m;
    if (2 * s > m) s -= m;
    const std::int64_t k = (s - y) / a;
    const std::int64_t r = x - k * b;
    return {r, s};
}

inline SectorTransform make_sector_transform(const BivarLaurentPoly& f, const Rational& slope) {
    SectorTransform t;
    t.identity = false;
    t.a = slope.numerator();
    t.b = slope.denominator();
    auto [r, s] = basis_change_coefficients(t.a, t.b);
    t.r = r;
    t.s = s;
    t.matrix = {r, s, -t.b, t.a};
    t.edge_slope = slope;
    t.poly = normalize(monomial_substitute(f, t.matrix)).poly;
    t.description = "edge slope " + to_string(slope) + ", (a,b)=(" + std::to_string(t.a) + "," + std::to_string(t.b) +
                    "), (r,s)=(" + std::to_string(r) + "," + std::to_string(s) + ")";
    return t;
}

/// Identity first, then one transform per distinct finite edge slope in
/// increasing order.
inline std::vector<SectorTransform> sector_transform(const BivarLaurentPoly& f, const NewtonPolygon& np) {
    std::vector<SectorTransform> out;
    SectorTransform id;
    id.poly = f;
    id.description = "identity";
    out.push_back(std::move(id));
    std::set<Rational> slopes;
    for (const auto& e : np.edges) {
        if (e.slope) slopes.insert(*e.slope);
    }
    for (const auto& s : slopes) out.push_back(make_sector_transform(f, s));
    return out;
}

/// Sector of (p, q) relative to the Newton polygon's edge slopes.
inline FillingSlope classify(const NewtonPolygon& np, std::int64_t p, std::int64_t q) {
    FillingSlope fs = FillingSlope::make(p, q);
    if (p == 0 || q == 0) return fs;
    const Rational x(p, q);
    if (q > 0 && np.top_slope && x > *np.top_slope) {
        fs.sector = Sector::AboveTop;
        return fs;
    }
    int best = -1, lowest = -1, highest = -1;
    for (std::size_t k = 0; k < np.edges.size(); ++k) {
        const auto& s = np.edges[k].slope;
        if (!s) continue;
        const int ik = static_cast<int>(k);
        if (lowest < 0 || *s < *np.edges[lowest].slope) lowest = ik;
        if (highest < 0 || *s > *np.edges[highest].slope) highest = ik;
        if (*s >= x && (best < 0 || *s < *np.edges[best].slope)) best = ik;
    }
    if (lowest >= 0 && x < *np.edges[lowest].slope) {
        fs.sector = Sector::BelowAll;
        fs.edge = lowest;
    } else {
        fs.sector = Sector::Between;
        fs.edge = best >= 0 ? best : highest;
    }
    return fs;
}

/// Index into sector_transform() output used for a classified slope.
inline std::size_t transform_index(const NewtonPolygon& np, const std::vector<SectorTransform>& transforms,
                                   const FillingSlope& fs) {
    if (fs.sector == Sector::AboveTop || fs.sector == Sector::Axis || fs.edge < 0) return 0;
    const auto& s = np.edges[static_cast<std::size_t>(fs.edge)].slope;
    for (std::size_t k = 1; k < transforms.size(); ++k) {
        if (transforms[k].edge_slope == s) return k;
    }
    return 0;
}

} // namespace dehnfill
