#pragma once

#include <boost/rational.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "integer.hpp"
#include "unipoly.hpp"
#include "zfactor.hpp"

namespace dehnfill {

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

struct Exponent {
    std::int64_t i = 0;  // power of m
    std::int64_t j = 0;  // power of l
    friend auto operator<=>(const Exponent&, const Exponent&) = default;
};

/// Laurent polynomial in (m, l) with integer coefficients. Terms are keyed
/// by (i, j); no stored coefficient is zero.
class BivarLaurentPoly {
public:
    using TermMap = std::map<Exponent, Integer>;

    BivarLaurentPoly() = default;
    explicit BivarLaurentPoly(TermMap terms) : terms_(std::move(terms)) {
        std::erase_if(terms_, [](const auto& kv) { return sgn(kv.second) == 0; });
    }

    static BivarLaurentPoly monomial(Integer c, std::int64_t i, std::int64_t j) {
        TermMap t;
        t[{i, j}] = std::move(c);
        return BivarLaurentPoly(std::move(t));
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    Integer coeff(std::int64_t i, std::int64_t j) const {
        auto it = terms_.find({i, j});
        return it == terms_.end() ? Integer(0) : it->second;
    }

    void add_term(std::int64_t i, std::int64_t j, const Integer& c) {
        auto& slot = terms_[{i, j}];
        slot += c;
        if (sgn(slot) == 0) terms_.erase({i, j});
    }

    std::vector<Exponent> support() const {
        std::vector<Exponent> s;
        s.reserve(terms_.size());
        for (const auto& kv : terms_) s.push_back(kv.first);
        return s;
    }

    std::int64_t min_i() const { return extreme(&Exponent::i, false); }
    std::int64_t max_i() const { return extreme(&Exponent::i, true); }
    std::int64_t min_j() const { return extreme(&Exponent::j, false); }
    std::int64_t max_j() const { return extreme(&Exponent::j, true); }

    /// Sum of all coefficients, i.e. the value at m = l = 1.
    Integer value_at_one() const {
        Integer s = 0;
        for (const auto& kv : terms_) s += kv.second;
        return s;
    }

    /// f(1/m, 1/l).
    BivarLaurentPoly inverted() const {
        TermMap t;
        for (const auto& [e, c] : terms_) t[{checked_mul(e.i, -1), checked_mul(e.j, -1)}] = c;
        return BivarLaurentPoly(std::move(t));
    }

    BivarLaurentPoly shifted(std::int64_t di, std::int64_t dj) const {
        TermMap t;
        for (const auto& [e, c] : terms_) t[{checked_add(e.i, di), checked_add(e.j, dj)}] = c;
        return BivarLaurentPoly(std::move(t));
    }

    BivarLaurentPoly operator-() const {
        TermMap t = terms_;
        for (auto& kv : t) kv.second = -kv.second;
        return BivarLaurentPoly(std::move(t));
    }

    friend BivarLaurentPoly operator+(const BivarLaurentPoly& a, const BivarLaurentPoly& b) {
        BivarLaurentPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e.i, e.j, c);
        return r;
    }

    friend BivarLaurentPoly operator-(const BivarLaurentPoly& a, const BivarLaurentPoly& b) { return a + (-b); }

    friend BivarLaurentPoly operator*(const BivarLaurentPoly& a, const BivarLaurentPoly& b) {
        BivarLaurentPoly r;
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) r.add_term(checked_add(ea.i, eb.i), checked_add(ea.j, eb.j), ca * cb);
        }
        return r;
    }

    friend bool operator==(const BivarLaurentPoly& a, const BivarLaurentPoly& b) { return a.terms_ == b.terms_; }

private:
    std::int64_t extreme(std::int64_t Exponent::*field, bool want_max) const {
        if (terms_.empty()) throw Error(ErrorCode::ZeroPolynomial, "extreme exponent of the zero polynomial");
        std::int64_t best = terms_.begin()->first.*field;
        for (const auto& kv : terms_) {
            const auto v = kv.first.*field;
            best = want_max ? std::max(best, v) : std::min(best, v);
        }
        return best;
    }

    TermMap terms_;
};

// ---------------------------------------------------------------------------
// text I/O

namespace detail {

inline std::string render_monomial(std::int64_t i, std::int64_t j) {
    std::string s;
    auto var = [&s](char v, std::int64_t e) {
        if (e == 0) return;
        if (!s.empty()) s += '*';
        s += v;
        if (e != 1) s += '^' + std::to_string(e);
    };
    var('m', i);
    var('l', j);
    return s;
}

class TermParser {
public:
    explicit TermParser(std::string_view text) : s_(text) {}

    BivarLaurentPoly parse() {
        BivarLaurentPoly f;
        skip_ws();
        if (pos_ == s_.size()) fail("empty input");
        bool first = true;
        while (true) {
            skip_ws();
            if (pos_ == s_.size()) break;
            int sign = 1;
            if (s_[pos_] == '+' || s_[pos_] == '-') {
                sign = s_[pos_] == '-' ? -1 : 1;
                ++pos_;
                skip_ws();
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            first = false;
            auto [c, e] = term();
            f.add_term(e.i, e.j, sign * c);
        }
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::MalformedTerm, what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    std::string digits() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected digits");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::int64_t exponent() {
        skip_ws();
        bool paren = pos_ < s_.size() && s_[pos_] == '(';
        if (paren) ++pos_;
        skip_ws();
        bool neg = false;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
            neg = s_[pos_] == '-';
            ++pos_;
        }
        Integer v = parse_integer(digits());
        if (neg) v = -v;
        skip_ws();
        if (paren) {
            if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
            ++pos_;
        }
        if (!fits_int64(v)) throw Error(ErrorCode::ExponentOverflow, "exponent out of range");
        return to_int64(v);
    }

    std::pair<Integer, Exponent> term() {
        Integer c = 1;
        Exponent e;
        bool any = false;
        while (true) {
            skip_ws();
            if (pos_ >= s_.size()) fail("expected factor");
            char ch = s_[pos_];
            if (std::isdigit(static_cast<unsigned char>(ch))) {
                c *= parse_integer(digits());
            } else if (ch == 'm' || ch == 'l' || ch == 'L') {
                ++pos_;
                std::int64_t k = 1;
                skip_ws();
                if (pos_ < s_.size() && s_[pos_] == '^') {
                    ++pos_;
                    k = exponent();
                }
                if (ch == 'm') e.i = checked_add(e.i, k);
                else e.j = checked_add(e.j, k);
            } else {
                fail(std::string("unexpected character '") + ch + "'");
            }
            any = true;
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '*') {
                ++pos_;
                continue;
            }
            break;
        }
        if (!any) fail("empty term");
        return {c, e};
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

inline Integer json_coefficient(const nlohmann::json& v) {
    if (v.is_string()) return parse_integer(v.get<std::string>());
    if (v.is_number_integer()) return Integer(std::to_string(v.get<long long>()));
    throw Error(ErrorCode::MalformedTerm, "coefficient must be a decimal string or integer");
}

inline std::int64_t json_exponent(const nlohmann::json& v) {
    if (!v.is_number_integer()) throw Error(ErrorCode::MalformedTerm, "exponent must be an integer");
    return v.get<std::int64_t>();
}

} // namespace detail

struct Fixture {
    std::string name;
    BivarLaurentPoly poly;
};

/// Fixture JSON: {"name": ..., "variables": ["m","l"], "terms": [[i, j, "c"], ...]}.
inline Fixture parse_fixture_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("terms") || !doc["terms"].is_array()) {
        throw Error(ErrorCode::MalformedTerm, "fixture must be an object with a 'terms' array");
    }
    bool swapped = false;
    if (doc.contains("variables")) {
        const auto& vars = doc["variables"];
        if (!vars.is_array() || vars.size() != 2) throw Error(ErrorCode::MalformedTerm, "'variables' must list two names");
        auto a = vars[0].get<std::string>(), b = vars[1].get<std::string>();
        if (a == "l" && b == "m") swapped = true;
        else if (!(a == "m" && b == "l")) throw Error(ErrorCode::MalformedTerm, "variables must be m and l");
    }
    Fixture fx;
    fx.name = doc.value("name", std::string("unnamed"));
    BivarLaurentPoly::TermMap terms;
    for (const auto& t : doc["terms"]) {
        if (!t.is_array() || t.size() != 3) throw Error(ErrorCode::MalformedTerm, "term must be [i, j, coeff]");
        std::int64_t i = detail::json_exponent(t[0]), j = detail::json_exponent(t[1]);
        if (swapped) std::swap(i, j);
        Integer c = detail::json_coefficient(t[2]);
        if (sgn(c) == 0) continue;
        auto [it, fresh] = terms.emplace(Exponent{i, j}, c);
        if (!fresh && it->second != c) {
            throw Error(ErrorCode::DuplicateTerm,
                        "exponent (" + std::to_string(i) + "," + std::to_string(j) + ") listed with conflicting coefficients");
        }
    }
    fx.poly = BivarLaurentPoly(std::move(terms));
    if (fx.poly.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "fixture has no nonzero terms");
    return fx;
}

/// Accepts fixture JSON or the term syntax `c*m^i*l^j + ...`. Like terms in
/// the term syntax are summed.
inline BivarLaurentPoly parse(std::string_view text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::MalformedTerm, std::string("invalid JSON: ") + e.what());
        }
        return parse_fixture_json(doc).poly;
    }
    auto f = detail::TermParser(text).parse();
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "polynomial is zero");
    return f;
}

/// Reads a fixture file, or treats the argument itself as polynomial text
/// when no such file exists.
inline Fixture load_fixture(const std::string& path_or_text) {
    std::ifstream in(path_or_text);
    if (!in) return {"inline", parse(path_or_text)};
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string body = ss.str();
    auto first = body.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && body[first] == '{') {
        try {
            return parse_fixture_json(nlohmann::json::parse(body));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::MalformedTerm, path_or_text + ": invalid JSON: " + e.what());
        }
    }
    return {path_or_text, parse(body)};
}

/// Terms ordered by descending power of l, then descending power of m.
inline std::string render(const BivarLaurentPoly& f) {
    if (f.is_zero()) return "0";
    std::vector<std::pair<Exponent, Integer>> terms(f.terms().begin(), f.terms().end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        if (a.first.j != b.first.j) return a.first.j > b.first.j;
        return a.first.i > b.first.i;
    });
    std::string out;
    for (const auto& [e, c] : terms) {
        const Integer mag = abs(c);
        const std::string mono = detail::render_monomial(e.i, e.j);
        if (out.empty()) {
            if (sgn(c) < 0) out += '-';
        } else {
            out += sgn(c) < 0 ? " - " : " + ";
        }
        if (mono.empty()) out += to_decimal(mag);
        else if (mag == 1) out += mono;
        else out += to_decimal(mag) + "*" + mono;
    }
    return out;
}

inline nlohmann::json to_fixture_json(const BivarLaurentPoly& f, const std::string& name) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : f.terms()) terms.push_back({e.i, e.j, to_decimal(c)});
    return {{"name", name}, {"variables", {"m", "l"}}, {"terms", terms}};
}

// ---------------------------------------------------------------------------
// normalization

struct Normalized {
    BivarLaurentPoly poly;
    Integer content = 1;
    std::int64_t i_shift = 0;
    std::int64_t j_shift = 0;
    int sign = 1;
};

/// f = sign * content * m^i_shift * l^j_shift * poly, where poly has
/// coprime coefficients, minimal exponents zero, and a positive coefficient
/// on its first rendered term (highest l, then highest m).
inline Normalized normalize(const BivarLaurentPoly& f) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "cannot normalize the zero polynomial");
    Normalized out;
    out.i_shift = f.min_i();
    out.j_shift = f.min_j();
    Integer g = 0;
    for (const auto& kv : f.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), kv.second.get_mpz_t());
    out.content = g;
    Exponent top{f.terms().begin()->first};
    for (const auto& kv : f.terms()) {
        const auto& e = kv.first;
        if (e.j > top.j || (e.j == top.j && e.i > top.i)) top = e;
    }
    out.sign = sgn(f.coeff(top.i, top.j)) < 0 ? -1 : 1;
    BivarLaurentPoly::TermMap t;
    for (const auto& [e, c] : f.terms()) {
        Integer q;
        mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        if (out.sign < 0) q = -q;
        t[{e.i - out.i_shift, e.j - out.j_shift}] = q;
    }
    out.poly = BivarLaurentPoly(std::move(t));
    return out;
}

inline bool is_normalized(const BivarLaurentPoly& f) {
    if (f.is_zero()) return false;
    auto n = normalize(f);
    return n.content == 1 && n.i_shift == 0 && n.j_shift == 0 && n.sign == 1;
}

// ---------------------------------------------------------------------------
// Newton polygon

struct NewtonEdge {
    Exponent from;  // counterclockwise orientation
    Exponent to;
    std::optional<Rational> slope;  // di/dj; empty for horizontal edges (dj == 0)
    std::int64_t lattice_steps = 1;
    UniIntPoly polynomial;  // read from the lexicographically smaller endpoint
};

struct RowData {
    std::int64_t j;
    std::int64_t a;  // min i in row j
    std::int64_t b;  // max i in row j
};

struct NewtonPolygon {
    std::vector<Exponent> corners;  // counterclockwise, strictly convex
    std::vector<NewtonEdge> edges;
    std::vector<RowData> rows;      // occupied rows only, ascending j
    std::int64_t n = 0;             // max j (after normalization the rows span 0..n)
    std::optional<Rational> top_slope;
    bool is_point = false;
    bool is_segment = false;

    const RowData* row(std::int64_t j) const {
        for (const auto& r : rows) {
            if (r.j == j) return &r;
        }
        return nullptr;
    }
};

namespace detail {

inline __int128 cross(const Exponent& o, const Exponent& a, const Exponent& b) {
    return static_cast<__int128>(a.i - o.i) * (b.j - o.j) - static_cast<__int128>(a.j - o.j) * (b.i - o.i);
}

/// Andrew's monotone chain; collinear boundary points are dropped.
inline std::vector<Exponent> convex_hull(std::vector<Exponent> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    std::vector<Exponent> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t idx = pts.size() - 1, lower = k + 1; idx-- > 0;) {
        const auto& p = pts[idx];
        while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace detail

/// Coefficients of f at the lattice points of the segment [from, to], starting
/// at the lexicographically smaller endpoint and stepping by the primitive
/// direction vector.
inline UniIntPoly edge_polynomial(const BivarLaurentPoly& f, Exponent from, Exponent to) {
    if (to < from) std::swap(from, to);
    const std::int64_t di = to.i - from.i, dj = to.j - from.j;
    const std::int64_t g = gcd64(di, dj);
    if (g == 0) return UniIntPoly::constant(f.coeff(from.i, from.j));
    std::vector<Integer> c(static_cast<std::size_t>(g) + 1);
    for (std::int64_t k = 0; k <= g; ++k) c[k] = f.coeff(from.i + k * (di / g), from.j + k * (dj / g));
    return UniIntPoly(std::move(c));
}

inline UniIntPoly edge_polynomial(const BivarLaurentPoly& f, const NewtonEdge& e) {
    return edge_polynomial(f, e.from, e.to);
}

inline NewtonPolygon newton_polygon(const BivarLaurentPoly& f) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "Newton polygon of the zero polynomial");
    NewtonPolygon np;
    auto support = f.support();

    std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> rows;
    for (const auto& e : support) {
        auto [it, fresh] = rows.emplace(e.j, std::make_pair(e.i, e.i));
        if (!fresh) {
            it->second.first = std::min(it->second.first, e.i);
            it->second.second = std::max(it->second.second, e.i);
        }
    }
    for (const auto& [j, ab] : rows) np.rows.push_back({j, ab.first, ab.second});
    np.n = rows.rbegin()->first;
    const std::int64_t j0 = rows.begin()->first;
    if (np.n > j0) {
        const std::int64_t an = rows.rbegin()->second.first;
        std::optional<Rational> best;
        for (const auto& [j, ab] : rows) {
            if (j == np.n) continue;
            Rational s(an - ab.first, np.n - j);
            if (!best || s > *best) best = s;
        }
        np.top_slope = best;
    }

    np.corners = detail::convex_hull(support);
    if (np.corners.size() == 1) {
        np.is_point = true;
        return np;
    }
    auto make_edge = [&f](Exponent a, Exponent b) {
        NewtonEdge e;
        e.from = a;
        e.to = b;
        const std::int64_t di = b.i - a.i, dj = b.j - a.j;
        if (dj != 0) e.slope = Rational(di, dj);
        e.lattice_steps = gcd64(di, dj);
        e.polynomial = edge_polynomial(f, a, b);
        return e;
    };
    if (np.corners.size() == 2) {
        np.is_segment = true;
        np.edges.push_back(make_edge(np.corners[0], np.corners[1]));
        return np;
    }
    for (std::size_t k = 0; k < np.corners.size(); ++k) {
        np.edges.push_back(make_edge(np.corners[k], np.corners[(k + 1) % np.corners.size()]));
    }
    return np;
}

// ---------------------------------------------------------------------------
// validation

struct ValidationReport {
    bool reciprocal = false;
    int reciprocity_sign = 0;       // f(1/m,1/l) = sign * m^-a * l^-b * f(m,l)
    Exponent reciprocity_shift{};   // (a, b)
    bool corner_units = false;
    bool edges_cyclotomic = false;
    bool vanishes_at_one = false;
    std::vector<std::string> failures;

    bool passed() const { return reciprocal && corner_units && edges_cyclotomic && vanishes_at_one; }
};

/// Checks reciprocity up to sign and monomial, unit corner coefficients,
/// cyclotomic edge polynomials, and f(1,1) = 0. Failures are reported, not thrown.
inline ValidationReport validate_apoly(const BivarLaurentPoly& f) {
    if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "validate_apoly of the zero polynomial");
    ValidationReport r;

    const Exponent shift{f.min_i() + f.max_i(), f.min_j() + f.max_j()};
    r.reciprocity_shift = shift;
    const auto& [e0, c0] = *f.terms().begin();
    const Integer mirror0 = f.coeff(shift.i - e0.i, shift.j - e0.j);
    if (mirror0 == c0) r.reciprocity_sign = 1;
    else if (mirror0 == -c0) r.reciprocity_sign = -1;
    r.reciprocal = r.reciprocity_sign != 0;
    if (r.reciprocal) {
        for (const auto& [e, c] : f.terms()) {
            if (f.coeff(shift.i - e.i, shift.j - e.j) != r.reciprocity_sign * c) {
                r.reciprocal = false;
                break;
            }
        }
    }
    if (!r.reciprocal) {
        r.reciprocity_sign = 0;
        r.failures.push_back("f(1/m,1/l) is not +-f(m,l) up to a monomial");
    }

    const auto np = newton_polygon(f);
    r.corner_units = true;
    for (const auto& c : np.corners) {
        if (abs(f.coeff(c.i, c.j)) != 1) {
            r.corner_units = false;
            r.failures.push_back("corner (" + std::to_string(c.i) + "," + std::to_string(c.j) +
                                 ") has coefficient " + to_decimal(f.coeff(c.i, c.j)));
        }
    }

    r.edges_cyclotomic = true;
    for (const auto& e : np.edges) {
        if (!is_cyclotomic_product(e.polynomial)) {
            r.edges_cyclotomic = false;
            r.failures.push_back("edge (" + std::to_string(e.from.i) + "," + std::to_string(e.from.j) + ")-(" +
                                 std::to_string(e.to.i) + "," + std::to_string(e.to.j) + ") polynomial " +
                                 e.polynomial.to_string() + " is not a product of cyclotomics");
        }
    }

    r.vanishes_at_one = sgn(f.value_at_one()) == 0;
    if (!r.vanishes_at_one) r.failures.push_back("f(1,1) = " + to_decimal(f.value_at_one()) + ", not 0");
    return r;
}

// ---------------------------------------------------------------------------
// monomial substitution

/// 2x2 integer matrix [[a, b], [c, d]].
struct Matrix2 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    std::int64_t det() const { return checked_add(checked_mul(a, d), -checked_mul(b, c)); }
    bool unimodular() const { return det() == 1 || det() == -1; }

    Matrix2 inverse() const {
        const std::int64_t dt = det();
        if (dt != 1 && dt != -1) throw Error(ErrorCode::NonUnimodular, "matrix is not invertible over Z");
        return {d * dt, -b * dt, -c * dt, a * dt};
    }

    friend Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
        return {checked_add(checked_mul(x.a, y.a), checked_mul(x.b, y.c)), checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.d)),
                checked_add(checked_mul(x.c, y.a), checked_mul(x.d, y.c)), checked_add(checked_mul(x.c, y.b), checked_mul(x.d, y.d))};
    }

    friend bool operator==(const Matrix2&, const Matrix2&) = default;

    static Matrix2 identity() { return {}; }
};

inline std::string to_string(const Matrix2& u) {
    return "[[" + std::to_string(u.a) + "," + std::to_string(u.b) + "],[" + std::to_string(u.c) + "," + std::to_string(u.d) + "]]";
}

/// Sends the term c*m^i*l^j to c*m^(a i + b j)*l^(c i + d j). Unnormalized.
inline BivarLaurentPoly monomial_substitute(const BivarLaurentPoly& f, const Matrix2& u) {
    if (!u.unimodular()) throw Error(ErrorCode::NonUnimodular, "substitution matrix " + to_string(u) + " has det != +-1");
    BivarLaurentPoly::TermMap t;
    for (const auto& [e, c] : f.terms()) {
        const std::int64_t i2 = checked_add(checked_mul(u.a, e.i), checked_mul(u.b, e.j));
        const std::int64_t j2 = checked_add(checked_mul(u.c, e.i), checked_mul(u.d, e.j));
        t[{i2, j2}] = c;
    }
    return BivarLaurentPoly(std::move(t));
}

} // namespace dehnfill
