#include <gtest/gtest.h>

#include <dehnfill/cyclotomic.hpp>
#include <dehnfill/integer.hpp>
#include <dehnfill/unipoly.hpp>
#include <dehnfill/zfactor.hpp>

#include <random>

#include "oracles.hpp"

using namespace dehnfill;

namespace {

UniIntPoly P(const char* s) { return parse_unipoly(s); }

UniIntPoly from_oracle(const oracle::ZVec& v) { return UniIntPoly(std::vector<Integer>(v.begin(), v.end())); }

const char* kLehmer = "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1";

} // namespace

TEST(Integer, ParseAndPrint) {
    EXPECT_EQ(to_decimal(parse_integer("-123456789012345678901234567890")), "-123456789012345678901234567890");
    EXPECT_EQ(to_decimal(parse_integer("+7")), "7");
    EXPECT_THROW(parse_integer("12a"), Error);
    EXPECT_THROW(parse_integer(""), Error);
}

TEST(Integer, CheckedArithmetic) {
    EXPECT_EQ(checked_add(1, 2), 3);
    EXPECT_THROW(checked_mul(INT64_MAX, 2), Error);
    EXPECT_EQ(gcd64(-12, 18), 6);
    std::int64_t x = 0, y = 0;
    const auto g = extended_gcd(9, 2, x, y);
    EXPECT_EQ(9 * x + 2 * y, g);
}

TEST(UniPoly, ParseForms) {
    EXPECT_EQ(P("x^2 - x - 1"), P("[-1, -1, 1]"));
    EXPECT_EQ(P("3"), UniIntPoly::constant(3));
    EXPECT_EQ(P("[\"5\", 0, \"-2\"]").degree(), 2);
    EXPECT_THROW(P("x^2+"), Error);
    try {
        P("x^^2");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MalformedTerm);
    }
}

TEST(UniPoly, ArithmeticAndDivision) {
    const auto a = P("x^3 - 2x + 5"), b = P("2x^2 + 7");
    const auto c = a * b;
    EXPECT_EQ(*exact_divide(c, b), a);
    EXPECT_FALSE(exact_divide(c + UniIntPoly::constant(1), b).has_value());
    EXPECT_EQ(c.evaluate(2), a.evaluate(2) * b.evaluate(2));
    EXPECT_EQ(P("x^6-1"), *exact_divide(P("x^6-1"), UniIntPoly::constant(1)));
}

TEST(UniPoly, Gcd) {
    const auto g = P("x^2+x+1"), a = g * P("x-3"), b = g * P("2x+5");
    EXPECT_EQ(gcd(a, b), g);
    EXPECT_EQ(gcd(a, UniIntPoly{}), a.primitive_part());
    EXPECT_EQ(gcd(P("x-1"), P("x+1")).degree(), 0);
}

TEST(Cyclotomic, SmallPolynomials) {
    EXPECT_EQ(cyclotomic::polynomial(1), P("x-1"));
    EXPECT_EQ(cyclotomic::polynomial(6), P("x^2-x+1"));
    EXPECT_EQ(cyclotomic::polynomial(12), P("x^4-x^2+1"));
    // x^n - 1 = prod over d | n
    for (std::uint64_t n = 1; n <= 40; ++n) {
        UniIntPoly acc = UniIntPoly::constant(1);
        for (std::uint64_t d = 1; d <= n; ++d)
            if (n % d == 0) acc = acc * cyclotomic::polynomial(d);
        EXPECT_EQ(acc, UniIntPoly::x_pow_minus_one(n)) << n;
    }
    EXPECT_EQ(cyclotomic::polynomial(105).coeff(7), Integer(-2));
}

TEST(Cyclotomic, OrderDetection) {
    EXPECT_EQ(cyclotomic::order_of(cyclotomic::polynomial(30)), 30u);
    EXPECT_EQ(cyclotomic::order_of(P(kLehmer)), 0u);
    EXPECT_EQ(cyclotomic::order_of(P("x^2-3x+1")), 0u);
}

TEST(ZFactor, LehmerIrreducible) {
    const auto f = factor(P(kLehmer));
    ASSERT_EQ(f.factors.size(), 1u);
    EXPECT_EQ(f.factors[0].poly, P(kLehmer));
    EXPECT_EQ(f.factors[0].cyclotomic_order, 0u);
}

TEST(ZFactor, XToTheTwelveMinusOne) {
    auto f = cyclotomic_split(factor(P("x^12 - 1")));
    EXPECT_EQ(f.factors.size(), 6u);
    EXPECT_EQ(f.cyclotomic_part.size(), 6u);
    EXPECT_TRUE(f.non_cyclotomic_part.empty());
    EXPECT_EQ(f.expand(), P("x^12 - 1"));
}

TEST(ZFactor, ContentSignTPowerAndMultiplicity) {
    const auto in = P("-6x^3") * P("x^2-x-1") * P("x^2-x-1") * P("x+1");
    const auto f = factor(in);
    EXPECT_EQ(f.unit, -1);
    EXPECT_EQ(f.content, Integer(6));
    EXPECT_EQ(f.t_power, 3u);
    EXPECT_EQ(f.expand(), in);
    bool seen = false;
    for (const auto& e : f.factors)
        if (e.poly == P("x^2-x-1")) seen = e.multiplicity == 2;
    EXPECT_TRUE(seen);
}

TEST(ZFactor, SwinnertonDyerStyle) {
    // irreducible over Z, splits into quadratics modulo every prime
    const auto f = factor(P("x^4 - 10x^2 + 1"));
    ASSERT_EQ(f.factors.size(), 1u);
    EXPECT_EQ(f.factors[0].poly.degree(), 4);
}

TEST(ZFactor, ZeroAndConstants) {
    EXPECT_THROW(factor(UniIntPoly{}), Error);
    const auto f = factor(UniIntPoly::constant(-5));
    EXPECT_EQ(f.unit, -1);
    EXPECT_EQ(f.content, Integer(5));
    EXPECT_TRUE(f.factors.empty());
}

TEST(ZFactor, DegreeBoundEnforced) {
    FactorOptions opt;
    opt.degree_bound = 3;
    try {
        factor(P("x^5 + x + 3"), opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegreeBoundExceeded);
    }
}

TEST(ZFactor, SquarefreePartsCoprime) {
    const auto in = P("x-2") * P("x-2") * P("x-2") * P("x^2+1") * P("x^2+1") * P("3x+1");
    const auto sq = squarefree_decompose(in);
    UniIntPoly acc = UniIntPoly::constant(Integer(sq.unit) * sq.content);
    for (const auto& [part, mult] : sq.parts)
        for (int k = 0; k < mult; ++k) acc = acc * part;
    EXPECT_EQ(acc.shift(static_cast<std::int64_t>(sq.t_power)), in);
    for (std::size_t a = 0; a < sq.parts.size(); ++a)
        for (std::size_t b = a + 1; b < sq.parts.size(); ++b) EXPECT_EQ(gcd(sq.parts[a].first, sq.parts[b].first).degree(), 0);
}

TEST(ZFactor, AgreesWithOracleSample) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        oracle::ZVec v = oracle::random_poly(rng, 1 + trial % 4, 9);
        v = oracle::mul(v, oracle::random_poly(rng, 1 + trial % 5, 9));
        const auto want = oracle::factor(v);
        const auto got = factor(from_oracle(v));
        EXPECT_EQ(got.t_power, want.t_power);
        EXPECT_EQ(Integer(got.unit) * got.content, want.scalar);
        std::map<oracle::ZVec, int> mine;
        for (const auto& e : got.factors) mine[oracle::ZVec(e.poly.coeffs().begin(), e.poly.coeffs().end())] += e.multiplicity;
        EXPECT_EQ(mine, want.factors) << from_oracle(v).to_string('x');
    }
}

TEST(ZFactor, IsCyclotomicProduct) {
    EXPECT_TRUE(is_cyclotomic_product(P("x^12-1") * P("x+1")));
    EXPECT_FALSE(is_cyclotomic_product(P("x^2-3x+1")));
}
