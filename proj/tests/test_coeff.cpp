#include "cheb/field_elem.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cheb;

namespace {

LaurentPoly lp(std::initializer_list<std::pair<int, int>> t) {
    std::vector<std::pair<int, Integer>> v;
    for (auto [e, c] : t) v.emplace_back(e, c);
    return LaurentPoly::from_terms(v);
}

FieldElem random_elem(std::mt19937& rng) {
    std::uniform_int_distribution<int> coef(-5, 5), exp(-4, 4), len(1, 4);
    auto rp = [&] {
        LaurentPoly p;
        int k = len(rng);
        for (int i = 0; i < k; ++i) p += LaurentPoly::monomial(exp(rng), coef(rng));
        return p;
    };
    LaurentPoly d = rp();
    while (d.is_zero()) d = rp();
    return FieldElem(rp(), d);
}

}  // namespace

TEST(Coeff, QuantumIntegers) {
    EXPECT_EQ(quantum_integer(1), LaurentPoly(1));
    EXPECT_EQ(quantum_integer(2), lp({{1, 1}, {-1, 1}}));
    EXPECT_EQ(quantum_integer(4), lp({{3, 1}, {1, 1}, {-1, 1}, {-3, 1}}));
    EXPECT_TRUE(quantum_integer(0).is_zero());
    for (int n = 1; n <= 32; ++n)
        EXPECT_EQ(quantum_integer(n + 1), quantum_integer(2) * quantum_integer(n) - quantum_integer(n - 1));
}

TEST(Coeff, Arithmetic) {
    FieldElem two = qint(2);
    EXPECT_TRUE((two.inverse() * two).is_one());
    EXPECT_EQ(two * two - FieldElem(1), qint(3));
    FieldElem a = FieldElem(1) / (FieldElem(1) - FieldElem::q_power(2));
    FieldElem b = FieldElem(1) / (FieldElem(1) - FieldElem::q_power(-2));
    EXPECT_TRUE((a + b).is_one());
    EXPECT_THROW(FieldElem(0).inverse(), DivisionByZero);
}

TEST(Coeff, CanonicalForm) {
    FieldElem x(lp({{2, 2}, {0, -2}}), lp({{1, 4}, {0, 4}}));  // (2q^2-2)/(4q+4) = (q-1)/2
    EXPECT_EQ(x.num(), lp({{1, 1}, {0, -1}}));
    EXPECT_EQ(x.den(), LaurentPoly(2));
    FieldElem y(LaurentPoly(1), lp({{-1, -1}}));  // 1/(-q^-1) = -q
    EXPECT_EQ(y.num(), lp({{1, -1}}));
    EXPECT_TRUE(y.den().is_one());
}

TEST(Coeff, RandomCancellation) {
    std::mt19937 rng(7);
    for (int i = 0; i < 10000; ++i) {
        FieldElem a = random_elem(rng);
        EXPECT_TRUE((a - a).is_zero());
    }
}

TEST(Coeff, FieldAxiomsRandom) {
    std::mt19937 rng(11);
    for (int i = 0; i < 300; ++i) {
        FieldElem a = random_elem(rng), b = random_elem(rng), c = random_elem(rng);
        EXPECT_EQ((a + b) * c, a * c + b * c);
        EXPECT_EQ((a * b) * c, a * (b * c));
        if (!b.is_zero()) {
            EXPECT_EQ((a / b) * b, a);
        }
    }
}

TEST(Coeff, Specialize) {
    EXPECT_EQ(qint(3).specialize(1), Rational(3));
    EXPECT_EQ(qint(2).specialize(2), Rational(5, 2));
    FieldElem p = FieldElem(1) / (FieldElem(1) - FieldElem::q_power(2));
    EXPECT_THROW(p.specialize(1), PoleAtPoint);
    std::mt19937 rng(3);
    for (int i = 0; i < 200; ++i) {
        FieldElem a = random_elem(rng), b = random_elem(rng);
        Rational q0(3, 7);
        try {
            EXPECT_EQ((a * b).specialize(q0), a.specialize(q0) * b.specialize(q0));
        } catch (const PoleAtPoint&) {
        }
    }
}

TEST(Coeff, Genericity) {
    EXPECT_TRUE(genericity_check(4).all_invertible);
    EXPECT_TRUE(genericity_check(0).all_invertible);
    genericity_check(6);
    EXPECT_EQ(session_genericity_bound().load(), 6);
}

TEST(Coeff, GcdAgainstPrs) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> coef(-9, 9);
    for (int i = 0; i < 200; ++i) {
        auto rp = [&](int deg) {
            std::vector<Integer> c;
            for (int j = 0; j <= deg; ++j) c.push_back(coef(rng));
            c[0] = c[0] == 0 ? 1 : c[0];
            c.back() = c.back() == 0 ? 1 : c.back();
            return LaurentPoly::from_dense(0, c);
        };
        LaurentPoly g = rp(3), a = rp(4) * g, b = rp(5) * g;
        LaurentPoly h = gcd(a, b);
        EXPECT_EQ(poly::primitive_part(h), poly::gcd_prs(a, b));
        EXPECT_TRUE(poly::divide(poly::normalize_low(a), h).has_value());
    }
}
