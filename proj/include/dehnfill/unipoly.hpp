#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "integer.hpp"
#include "nmod.hpp"

namespace dehnfill {

/// Dense univariate polynomial with arbitrary-precision integer coefficients.
/// Index = exponent; the leading coefficient is nonzero and the zero
/// polynomial is the empty coefficient vector.
class UniIntPoly {
public:
    UniIntPoly() = default;
    explicit UniIntPoly(std::vector<Integer> coeffs) : c_(std::move(coeffs)) { trim(); }
    UniIntPoly(std::initializer_list<long> coeffs) {
        c_.reserve(coeffs.size());
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }

    static UniIntPoly constant(const Integer& c) { return UniIntPoly(std::vector<Integer>{c}); }

    static UniIntPoly monomial(const Integer& c, std::size_t exponent) {
        std::vector<Integer> v(exponent + 1, 0);
        v[exponent] = c;
        return UniIntPoly(std::move(v));
    }

    /// x^n - 1
    static UniIntPoly x_pow_minus_one(std::size_t n) {
        std::vector<Integer> v(n + 1, 0);
        v[0] = -1;
        v[n] += 1;
        return UniIntPoly(std::move(v));
    }

    bool is_zero() const noexcept { return c_.empty(); }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    std::size_t size() const noexcept { return c_.size(); }

    const std::vector<Integer>& coeffs() const noexcept { return c_; }
    const Integer& operator[](std::size_t i) const { return c_[i]; }
    Integer coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Integer(0); }
    const Integer& leading() const { return c_.back(); }

    /// Number of nonzero coefficients.
    std::size_t term_count() const {
        return static_cast<std::size_t>(std::count_if(c_.begin(), c_.end(), [](const Integer& a) { return sgn(a) != 0; }));
    }

    /// Exponent of the lowest nonzero term (0 for the zero polynomial).
    std::size_t lowest_degree() const {
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (sgn(c_[i]) != 0) return i;
        }
        return 0;
    }

    Integer content() const {
        Integer g = 0;
        for (const auto& a : c_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
            if (g == 1) break;
        }
        return g;
    }

    /// Primitive part with positive leading coefficient.
    UniIntPoly primitive_part() const {
        if (is_zero()) return {};
        Integer g = content();
        if (sgn(leading()) < 0) g = -g;
        return exact_div(g);
    }

    UniIntPoly exact_div(const Integer& d) const {
        std::vector<Integer> v(c_);
        for (auto& a : v) mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
        return UniIntPoly(std::move(v));
    }

    /// Multiply by x^k (k >= 0) or divide by x^{-k} (k < 0, lowest terms must vanish).
    UniIntPoly shift(std::int64_t k) const {
        if (is_zero()) return {};
        std::vector<Integer> v;
        if (k >= 0) {
            v.assign(static_cast<std::size_t>(k), Integer(0));
            v.insert(v.end(), c_.begin(), c_.end());
        } else {
            v.assign(c_.begin() + static_cast<std::ptrdiff_t>(-k), c_.end());
        }
        return UniIntPoly(std::move(v));
    }

    UniIntPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Integer> v(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * static_cast<unsigned long>(i);
        return UniIntPoly(std::move(v));
    }

    /// x^deg f(1/x)
    UniIntPoly reversed() const {
        std::vector<Integer> v(c_.rbegin(), c_.rend());
        return UniIntPoly(std::move(v));
    }

    /// f(-x)
    UniIntPoly negate_variable() const {
        std::vector<Integer> v(c_);
        for (std::size_t i = 1; i < v.size(); i += 2) v[i] = -v[i];
        return UniIntPoly(std::move(v));
    }

    Integer evaluate(const Integer& x) const {
        Integer acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    Integer sum_abs() const {
        Integer s = 0;
        for (const auto& a : c_) s += abs(a);
        return s;
    }

    Integer max_abs() const {
        Integer m = 0;
        for (const auto& a : c_) {
            if (abs(a) > m) m = abs(a);
        }
        return m;
    }

    /// Squared Euclidean norm of the coefficient vector.
    Integer norm2_squared() const {
        Integer s = 0;
        for (const auto& a : c_) s += a * a;
        return s;
    }

    UniIntPoly operator-() const {
        std::vector<Integer> v(c_);
        for (auto& a : v) a = -a;
        return UniIntPoly(std::move(v));
    }

    friend UniIntPoly operator+(const UniIntPoly& a, const UniIntPoly& b) {
        std::vector<Integer> v(std::max(a.size(), b.size()), 0);
        for (std::size_t i = 0; i < a.size(); ++i) v[i] = a.c_[i];
        for (std::size_t i = 0; i < b.size(); ++i) v[i] += b.c_[i];
        return UniIntPoly(std::move(v));
    }

    friend UniIntPoly operator-(const UniIntPoly& a, const UniIntPoly& b) {
        std::vector<Integer> v(std::max(a.size(), b.size()), 0);
        for (std::size_t i = 0; i < a.size(); ++i) v[i] = a.c_[i];
        for (std::size_t i = 0; i < b.size(); ++i) v[i] -= b.c_[i];
        return UniIntPoly(std::move(v));
    }

    friend UniIntPoly operator*(const UniIntPoly& a, const UniIntPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Integer> v(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (sgn(a.c_[i]) == 0) continue;
            for (std::size_t j = 0; j < b.size(); ++j) {
                mpz_addmul(v[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
            }
        }
        return UniIntPoly(std::move(v));
    }

    friend UniIntPoly operator*(const Integer& s, const UniIntPoly& a) {
        if (sgn(s) == 0) return {};
        std::vector<Integer> v(a.c_);
        for (auto& x : v) x *= s;
        return UniIntPoly(std::move(v));
    }

    friend bool operator==(const UniIntPoly& a, const UniIntPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UniIntPoly& a, const UniIntPoly& b) { return !(a == b); }

    /// Canonical ordering: degree first, then coefficients from the top.
    friend bool operator<(const UniIntPoly& a, const UniIntPoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (std::size_t i = a.size(); i-- > 0;) {
            if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
        }
        return false;
    }

    /// Human-readable form in the variable `var`, highest degree first.
    std::string to_string(char var = 't') const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = c_.size(); i-- > 0;) {
            const Integer& a = c_[i];
            if (sgn(a) == 0) continue;
            Integer mag = abs(a);
            if (first) {
                if (sgn(a) < 0) os << "-";
            } else {
                os << (sgn(a) < 0 ? " - " : " + ");
            }
            first = false;
            if (i == 0) {
                os << mag.get_str();
                continue;
            }
            if (mag != 1) os << mag.get_str() << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const UniIntPoly& p) { return os << p.to_string(); }

private:
    void trim() {
        while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
    }

    std::vector<Integer> c_;
};

/// Exact quotient a / b over Z, or nullopt if b does not divide a.
inline std::optional<UniIntPoly> exact_divide(const UniIntPoly& a, const UniIntPoly& b) {
    if (b.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "division by the zero polynomial");
    if (a.is_zero()) return UniIntPoly{};
    if (a.degree() < b.degree()) return std::nullopt;
    std::vector<Integer> r(a.coeffs());
    const int db = b.degree();
    std::vector<Integer> q(static_cast<std::size_t>(a.degree() - db + 1), 0);
    const Integer& lc = b.leading();
    Integer t;
    for (int i = a.degree(); i >= db; --i) {
        if (sgn(r[i]) == 0) continue;
        if (!mpz_divisible_p(r[i].get_mpz_t(), lc.get_mpz_t())) return std::nullopt;
        mpz_divexact(t.get_mpz_t(), r[i].get_mpz_t(), lc.get_mpz_t());
        q[i - db] = t;
        for (int j = 0; j <= db; ++j) mpz_submul(r[i - db + j].get_mpz_t(), t.get_mpz_t(), b[j].get_mpz_t());
    }
    for (int i = 0; i < db; ++i) {
        if (sgn(r[i]) != 0) return std::nullopt;
    }
    return UniIntPoly(std::move(q));
}

/// Division by x^k - 1 (k >= 1), exact or nullopt.
inline std::optional<UniIntPoly> divide_x_pow_minus_one(const UniIntPoly& a, std::size_t k) {
    if (a.is_zero()) return UniIntPoly{};
    if (a.degree() < static_cast<int>(k)) return std::nullopt;
    const std::size_t n = a.size();
    std::vector<Integer> q(n - k, 0);
    // a = q * (x^k - 1): a_i = q_{i-k} - q_i  =>  q_{i-k} = a_i + q_i
    for (std::size_t i = n; i-- > k;) {
        q[i - k] = a[i] + (i < q.size() ? q[i] : Integer(0));
    }
    for (std::size_t i = 0; i < k; ++i) {
        Integer expect = (i < q.size() ? -q[i] : Integer(0));
        if (a[i] != expect) return std::nullopt;
    }
    return UniIntPoly(std::move(q));
}

namespace detail {

inline UniIntPoly lift_symmetric(const std::vector<Integer>& residues, const Integer& modulus) {
    std::vector<Integer> v(residues);
    Integer half = modulus / 2;
    for (auto& a : v) {
        mpz_fdiv_r(a.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t());
        if (a > half) a -= modulus;
    }
    return UniIntPoly(std::move(v));
}

} // namespace detail

/// Greatest common divisor over Z[x], returned primitive-times-content with a
/// positive leading coefficient. Modular algorithm: gcds mod word primes are
/// combined by CRT until the lifted candidate divides both inputs.
inline UniIntPoly gcd(const UniIntPoly& a, const UniIntPoly& b) {
    if (a.is_zero()) return sgn(b.is_zero() ? Integer(0) : b.leading()) < 0 ? -b : b;
    if (b.is_zero()) return sgn(a.leading()) < 0 ? -a : a;
    Integer content_gcd;
    {
        Integer ca = a.content(), cb = b.content();
        mpz_gcd(content_gcd.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    }
    const UniIntPoly A = a.primitive_part();
    const UniIntPoly B = b.primitive_part();
    if (A.degree() == 0 || B.degree() == 0) return UniIntPoly::constant(content_gcd);

    Integer lc_gcd;
    mpz_gcd(lc_gcd.get_mpz_t(), A.leading().get_mpz_t(), B.leading().get_mpz_t());

    int best_degree = std::min(A.degree(), B.degree()) + 1;
    std::vector<Integer> acc;
    Integer modulus = 1;
    std::optional<UniIntPoly> previous;
    nmod::u64 prime = (1ull << 61) - 1;
    for (int rounds = 0; rounds < 100000; ++rounds) {
        prime = nmod::next_prime(prime + 2);
        const nmod::Field F{prime};
        if (F.reduce(A.leading()) == 0 || F.reduce(B.leading()) == 0) continue;
        nmod::Poly g = nmod::gcd(F, nmod::reduce(F, A.coeffs()), nmod::reduce(F, B.coeffs()));
        const int dg = nmod::degree(g);
        if (dg == 0) return UniIntPoly::constant(content_gcd);
        if (dg > best_degree) continue;
        g = nmod::scale(F, g, F.reduce(lc_gcd));
        if (dg < best_degree) {
            best_degree = dg;
            acc.assign(g.size(), Integer(0));
            for (std::size_t i = 0; i < g.size(); ++i) acc[i] = static_cast<unsigned long>(g[i]);
            modulus = static_cast<unsigned long>(prime);
            previous.reset();
        } else {
            // CRT: x = acc mod modulus, x = g mod prime
            const Integer P = static_cast<unsigned long>(prime);
            Integer inv;
            mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), P.get_mpz_t());
            for (std::size_t i = 0; i < acc.size(); ++i) {
                Integer target = static_cast<unsigned long>(g[i]);
                Integer diff = target - acc[i];
                diff = diff * inv;
                mpz_fdiv_r(diff.get_mpz_t(), diff.get_mpz_t(), P.get_mpz_t());
                acc[i] += modulus * diff;
            }
            modulus *= P;
        }
        UniIntPoly candidate = detail::lift_symmetric(acc, modulus).primitive_part();
        if (previous && *previous == candidate) {
            if (exact_divide(A, candidate) && exact_divide(B, candidate)) {
                return content_gcd * candidate;
            }
        }
        previous = candidate;
    }
    throw Error(ErrorCode::InternalCheckFailed, "modular gcd did not stabilize");
}

/// Parses "x^2 - x - 1" style input (any single letter variable) or a
/// bracketed coefficient list "[c0, c1, ..., cd]" (index = exponent).
inline UniIntPoly parse_unipoly(std::string_view text) {
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    }
    if (s.empty()) throw Error(ErrorCode::MalformedTerm, "empty polynomial");
    if (s.front() == '[') {
        if (s.back() != ']') throw Error(ErrorCode::MalformedTerm, "unterminated coefficient list");
        std::vector<Integer> v;
        std::string body = s.substr(1, s.size() - 2);
        std::size_t pos = 0;
        while (pos <= body.size()) {
            std::size_t comma = body.find(',', pos);
            std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (!tok.empty() && tok.front() == '"' && tok.back() == '"' && tok.size() >= 2) tok = tok.substr(1, tok.size() - 2);
            v.push_back(parse_integer(tok));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return UniIntPoly(std::move(v));
    }
    std::vector<Integer> v;
    char var = 0;
    std::size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            throw Error(ErrorCode::MalformedTerm, "expected '+' or '-' in '" + s + "'");
        }
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        Integer coeff = (i > start) ? parse_integer(s.substr(start, i - start)) : Integer(1);
        bool had_number = i > start;
        if (i < s.size() && s[i] == '*') {
            if (!had_number) throw Error(ErrorCode::MalformedTerm, "dangling '*'");
            ++i;
        }
        std::size_t exponent = 0;
        if (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) {
            if (var == 0) var = s[i];
            if (s[i] != var) throw Error(ErrorCode::MalformedTerm, "more than one variable in univariate input");
            ++i;
            exponent = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t es = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (i == es) throw Error(ErrorCode::MalformedTerm, "missing exponent");
                exponent = std::stoul(s.substr(es, i - es));
            }
        } else if (!had_number) {
            throw Error(ErrorCode::MalformedTerm, "malformed term in '" + s + "'");
        }
        if (v.size() <= exponent) v.resize(exponent + 1, Integer(0));
        v[exponent] += sign * coeff;
    }
    return UniIntPoly(std::move(v));
}

} // namespace dehnfill
