#include "catch_amalgamated.hpp"

#include "kptau/surd.hpp"
#include "kptau/tpolynomial.hpp"

#include <random>

using namespace kptau;

TEST_CASE("rational normal form", "[rational]") {
    Rational r(6, -4);
    CHECK(r.to_string() == "-3/2");
    CHECK(r.denominator() == 2);
    CHECK(Rational(4, 2).to_string() == "2");
    CHECK(Rational::parse("-10/4") == Rational(-5, 2));
    CHECK(Rational::parse("7") == Rational(7));
    CHECK_THROWS(Rational::parse("1/0"));
    CHECK_THROWS(Rational::parse("x"));
    CHECK_THROWS(Rational(1) / Rational(0));
    CHECK(factorial(5) == Rational(120));
    CHECK(pow(Rational(2, 3), -2) == Rational(9, 4));
}

TEST_CASE("NPoly arithmetic", "[npoly]") {
    NPoly zero;
    CHECK(zero.degree() == -1);
    CHECK(zero.is_zero());
    NPoly a{1, 2};  // 1 + 2N
    NPoly b{-1, 0, 3};
    CHECK((a * b) == NPoly{-1, -2, 3, 6});
    CHECK((a - a).is_zero());
    CHECK((a - a).degree() == -1);
    CHECK((a + NPoly{0, -2}).degree() == 0);
    CHECK(b.eval(Rational(2)) == Rational(11));
    CHECK(NPoly::n() * NPoly::n() == NPoly::monomial(1, 2));
    CHECK(NPoly{Rational(1, 8), 0, Rational(3, 2)}.to_string().find("N^2") != std::string::npos);
}

TEST_CASE("monomial weight", "[monomial]") {
    CHECK(TMonomial::var(3).weight() == 3);
    CHECK(TMonomial{{1, 2}, {2, 1}}.weight() == 4);
    CHECK(TMonomial{}.weight() == 0);
    TMonomial m{{1, 2}, {5, 1}}, n{{2, 3}};
    CHECK((m * n).weight() == m.weight() + n.weight());
    // partitions of 6
    CHECK(monomials_of_weight(6).size() == 11);
    CHECK(monomial_basis(4).size() == 1 + 1 + 2 + 3 + 5);
}

TEST_CASE("truncated products", "[tpolynomial]") {
    TPolynomial one_t1 = TPolynomial::one() + TPolynomial(TMonomial::var(1));
    TPolynomial expect = TPolynomial::one() + TPolynomial(TMonomial::var(1), NPoly(2)) +
                         TPolynomial(TMonomial::var(1, 2));
    CHECK(mul_truncated(one_t1, one_t1, 2) == expect);
    CHECK(mul_truncated(TPolynomial(TMonomial::var(3)), TPolynomial(TMonomial::var(1)), 3).is_zero());
    TPolynomial nt2(TMonomial::var(2), NPoly::n());
    CHECK(mul_truncated(nt2, nt2, 4) == TPolynomial(TMonomial::var(2, 2), NPoly::monomial(1, 2)));

    auto bounded = TPolynomial::bounded(2);
    bounded.add(TMonomial::var(3), NPoly(1));
    CHECK(bounded.is_zero());
}

TEST_CASE("eval_N", "[tpolynomial]") {
    TPolynomial t3(TMonomial::var(3), NPoly{Rational(1, 8), 0, Rational(3, 2)});
    CHECK(eval_N(t3, Rational(0)) == TPolynomial(TMonomial::var(3), NPoly(Rational(1, 8))));
    TPolynomial x(TMonomial{{1, 1}, {2, 1}}, NPoly{0, 2});
    CHECK(eval_N(x, Rational(1)) == TPolynomial(TMonomial{{1, 1}, {2, 1}}, NPoly(2)));
    CHECK(eval_N(x, Rational(0)).is_zero());
}

namespace {

TPolynomial random_poly(std::mt19937& rng, int max_weight) {
    std::uniform_int_distribution<int> coin(0, 3), small(-3, 3);
    TPolynomial p;
    for (const auto& m : monomial_basis(max_weight)) {
        if (coin(rng) != 0) continue;
        p.add(m, NPoly{Rational(small(rng)), Rational(small(rng), 2)});
    }
    return p;
}

}  // namespace

TEST_CASE("ring axioms on random polynomials", "[tpolynomial][property]") {
    std::mt19937 rng(20241);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_poly(rng, 4), b = random_poly(rng, 4), c = random_poly(rng, 3);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK((a - a).is_zero());
        const int W = 5;
        CHECK(mul_truncated(a, b, W) == (a * b).truncated(W));
    }
}

TEST_CASE("surds", "[surd]") {
    Surd r2 = Surd::sqrt_of(Rational(1, 2));
    CHECK(r2 * r2 == Surd(Rational(1, 2)));
    Surd r32 = Surd::sqrt_of(Rational(3, 2));
    Surd r23 = Surd::sqrt_of(Rational(2, 3));
    CHECK(r32 * r23 == Surd(1));
    CHECK(!r32.is_rational());
    CHECK((r2 * Surd::sqrt_of(Rational(3))).part(Surd::sqrt6) == NPoly(Rational(1, 2)));
    CHECK_THROWS(Surd::sqrt_of(Rational(5)));
    CHECK_THROWS(Surd::sqrt_of(Rational(-1)));
}
