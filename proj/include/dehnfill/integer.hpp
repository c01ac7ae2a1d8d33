#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "error.hpp"

namespace dehnfill {

using Integer = mpz_class;

inline Integer parse_integer(std::string_view text) {
    std::string s(text);
    if (!s.empty() && s.front() == '+') s.erase(s.begin());
    if (s.empty() || s == "-") throw Error(ErrorCode::MalformedTerm, "empty integer literal");
    for (std::size_t i = (s.front() == '-') ? 1 : 0; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw Error(ErrorCode::MalformedTerm, "bad integer literal '" + s + "'");
    }
    return Integer(s, 10);
}

inline std::string to_decimal(const Integer& x) { return x.get_str(10); }

inline std::size_t bit_length(const Integer& x) {
    return sgn(x) == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

/// Natural log of |x| without overflowing a double, -inf for zero.
inline double log_abs(const Integer& x) {
    if (sgn(x) == 0) return -INFINITY;
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

inline bool fits_int64(const Integer& x) {
    return mpz_sizeinbase(x.get_mpz_t(), 2) <= 62;
}

inline std::int64_t to_int64(const Integer& x) {
    if (!fits_int64(x)) throw Error(ErrorCode::InvalidArgument, "integer does not fit in 64 bits");
    return static_cast<std::int64_t>(mpz_get_si(x.get_mpz_t()));
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::ExponentOverflow, "exponent addition overflow");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::ExponentOverflow, "exponent multiplication overflow");
    return r;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

/// Extended gcd: returns g = gcd(a,b) >= 0 and sets x,y with a*x + b*y = g.
inline std::int64_t extended_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
    std::int64_t old_r = a, r = b, old_x = 1, cur_x = 0, old_y = 0, cur_y = 1;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::int64_t t = old_r - q * r; old_r = r; r = t;
        t = old_x - q * cur_x; old_x = cur_x; cur_x = t;
        t = old_y - q * cur_y; old_y = cur_y; cur_y = t;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_x = -old_x;
        old_y = -old_y;
    }
    x = old_x;
    y = old_y;
    return old_r;
}

} // namespace dehnfill
