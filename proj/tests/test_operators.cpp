#include "catch_amalgamated.hpp"

#include "kptau/algebra_checks.hpp"
#include "kptau/tau_engine.hpp"

using namespace kptau;

namespace {

// L_m = (1/2) sum_{a+b=-m} a b t_a t_b + sum_k k t_k d_{k+m} + (1/2) sum_{a+b=m} d_a d_b,
// written out term by term.
Operator virasoro_direct(int m, int W) {
    Operator op(-m);
    for (int a = 1; a < -m; ++a) op.add_term(NPoly(Rational(a * (-m - a), 2)), {a, -m - a}, {});
    for (int k = 1; k <= W + 2 * std::abs(m); ++k)
        if (k + m >= 1 && k + m <= W) op.add_term(NPoly(k), {k}, {k + m});
    for (int a = 1; a < m; ++a) op.add_term(NPoly(Rational(1, 2)), {}, {a, m - a});
    return op;
}

TPolynomial t(std::initializer_list<std::pair<int, int>> fs, NPoly c = NPoly(1)) {
    return TPolynomial(TMonomial(fs), c);
}

}  // namespace

TEST_CASE("Virasoro modes of the KP current", "[operators]") {
    const int W = 10;
    for (int m = -5; m <= 5; ++m) {
        Operator L = build_L(m, W);
        Operator direct = virasoro_direct(m, W);
        for (const auto& mono : monomial_basis(W)) CHECK(apply(L, mono, W) == apply(direct, mono, W));
    }
    // MKP: L_m + N J_m + N^2/2 delta
    for (int m = -3; m <= 3; ++m) {
        Operator expect = build_L(m, W) + NPoly::n() * build_J(m, W);
        if (m == 0) expect.add_term(NPoly::monomial(Rational(1, 2), 2), {}, {});
        for (const auto& mono : monomial_basis(6)) CHECK(apply(build_L(m, W, true), mono) == apply(expect, mono));
    }
}

TEST_CASE("current modes", "[operators]") {
    Operator J5 = build_J(5, 20);
    REQUIRE(J5.size() == 1);
    CHECK(J5.coefficient({}, {5}) == NPoly(1));
    CHECK(build_J(-3, 20).coefficient({3}, {}) == NPoly(3));
    CHECK(build_J(0, 20).is_zero());
    CHECK(build_J(0, 20, true) == Operator::scalar(NPoly::n()));
}

TEST_CASE("constraints on the constant", "[operators]") {
    // L_{-2} quadratic part plus the explicit 2N t_2
    CHECK(apply(build_Lsf(-1, 6), TPolynomial::one()) == t({{1, 2}}, NPoly(Rational(1, 2))) + t({{2, 1}}, NPoly{0, 2}));
    // zero mode of CalL_N: (1/2)(1/8 + (3/2) N^2)
    CHECK(apply(build_CalL_N(0, 6), TPolynomial::one()) == TPolynomial(NPoly{Rational(1, 16), 0, Rational(3, 4)}));
    CHECK(apply(build_D(6), t({{1, 1}, {2, 1}})) == t({{1, 1}, {2, 1}}));
    CHECK(apply(Operator::derivative(3), t({{3, 2}})) == t({{3, 1}}, NPoly(2)));
}

TEST_CASE("Lsf_0 fixes the t_3 coefficient", "[operators]") {
    // weight-0 part of Lsf_0 (1 + c t_3 + ...) is 1/8 + 3N^2/2 - c
    TPolynomial trial = TPolynomial::one() + t({{3, 1}}, NPoly{Rational(1, 8), 0, Rational(3, 2)});
    CHECK(apply(build_Lsf(0, 6), trial, 0).is_zero());
    TPolynomial wrong = TPolynomial::one() + t({{3, 1}}, NPoly{Rational(1, 8)});
    CHECK(!apply(build_Lsf(0, 6), wrong, 0).is_zero());
}

TEST_CASE("free-field generators match the constraints up to normalisation", "[operators]") {
    const int W = 12;
    for (int k = -1; k <= 4; ++k) {
        auto c = proportionality(build_CalL_N(k, W), build_Lsf(k, W));
        REQUIRE(c.has_value());
        CHECK(*c == Rational(1, 2));
    }
    // below k = -1 the free-field mode picks up terms the constraint family lacks
    CHECK(!proportionality(build_CalL_N(-2, W), build_Lsf(-2, W)).has_value());
    for (int k = -2; k <= 3; ++k) {
        auto c = proportionality(build_CalM_N(k, W), build_Mstar(k, W));
        REQUIRE(c.has_value());
        CHECK(*c == Rational(1, 4));
    }
    CHECK(!proportionality(build_CalM_N(0, W), build_Msf(0, W)).has_value());
}

TEST_CASE("square roots cancel in every applied operator", "[operators]") {
    for (int k = -3; k <= 3; ++k) {
        CHECK_NOTHROW(build_CalL_N(k, 10));
        CHECK_NOTHROW(build_CalM_N(k, 10));
        CHECK_NOTHROW(build_R3_M(k, 10));
    }
    CHECK_NOTHROW(build_W1(10));
    CHECK_NOTHROW(build_W2(10));
}

TEST_CASE("weight shifts", "[operators]") {
    const int W = 12;
    for (int k = -1; k <= 3; ++k) {
        for (const Operator& op : {build_Lsf(k, W), build_Msf(k, W), build_Mprime(k, W), build_Mstar(k, W)}) {
            CHECK(op.weight_shift() == -2 * k);
            CHECK(op.is_graded_homogeneous());
        }
    }
    CHECK(shifts_weight_by(build_W1(12), 3, 9));
    CHECK(shifts_weight_by(build_W2(12), 6, 9));
    CHECK(shifts_weight_by(build_D(12), 0, 9));
}

TEST_CASE("Witten-Kontsevich Virasoro operators are the N = 0 constraints", "[operators]") {
    const int W = 12;
    std::vector<TMonomial> odd;
    for (const auto& m : monomial_basis(W)) {
        bool ok = true;
        for (auto [k, e] : m.factors()) ok = ok && k % 2 == 1;
        if (ok) odd.push_back(m);
    }
    for (int k = -1; k <= 3; ++k) {
        Operator kw = build_KW_CalL(k, W);
        Operator half = eval_N(build_Lsf(k, W), Rational(0)) * NPoly(Rational(1, 2));
        for (const auto& m : odd) CHECK(apply(kw, m, W) == apply(half, m, W));
    }
}

TEST_CASE("operator names", "[operators]") {
    CHECK(op_name(Family::Lsf, -1).to_string() == "Lsf_-1");
    CHECK(op_name(Family::W1).to_string() == "W1");
    CHECK_THROWS_AS(build(op_name(Family::Mstar, -3), 6), std::invalid_argument);
    CHECK_THROWS_AS(build(op_name(Family::Lsf, 0), -1), std::invalid_argument);
}

TEST_CASE("Miura construction reproduces the free-field generators", "[operators][miura]") {
    for (const auto& r : check_miura_match(6)) {
        INFO(r.name << " " << r.detail);
        CHECK(r.pass);
    }
}
