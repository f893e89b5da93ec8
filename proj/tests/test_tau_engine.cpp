#include "catch_amalgamated.hpp"

#include "kptau/correlators.hpp"
#include "kptau/tau_engine.hpp"

using namespace kptau;

namespace {

NPoly coeff(const TauSeries& s, TMonomial m) { return s.layer(m.weight() / 3).coefficient(m); }

const TauSeries& tau4() {
    static const TauSeries t = compute_tau_cutjoin(4);
    return t;
}

// weight-9 residuals of index-3 operators need layers through g = 6
const TauSeries& tau6() {
    static const TauSeries t = compute_tau_cutjoin(6, &tau4());
    return t;
}

}  // namespace

TEST_CASE("initial condition", "[tau]") {
    TauSeries t0 = compute_tau_cutjoin(0);
    REQUIRE(t0.gmax() == 0);
    CHECK(t0.layer(0) == TPolynomial::one());
    CHECK(compute_tau_linear(0).tau == t0);
    CHECK_THROWS(compute_tau_cutjoin(-1));
}

TEST_CASE("first layer", "[tau]") {
    const auto& tau = tau4();
    CHECK(coeff(tau, TMonomial{{1, 3}}) == NPoly(Rational(1, 6)));
    CHECK(coeff(tau, TMonomial{{1, 1}, {2, 1}}) == NPoly{0, 2});
    CHECK(coeff(tau, TMonomial{{3, 1}}) == NPoly{Rational(1, 8), 0, Rational(3, 2)});
    CHECK(tau.layer(1).size() == 3);
    for (int g = 0; g <= tau.gmax(); ++g) CHECK(tau.layer(g).is_homogeneous(3 * g));
}

TEST_CASE("the two routes agree", "[tau][oracle]") {
    LinearTau lin = compute_tau_linear(4);
    CHECK(lin.tau == tau4());
    REQUIRE(lin.manifest.size() == 5);
    for (const auto& m : lin.manifest) {
        INFO("g=" << m.g << " " << m.status);
        CHECK(m.unique);
        if (m.g > 0) CHECK(m.rank == m.unknowns);
    }
    CHECK(lin.manifest[1].unknowns == 3);
    CHECK(lin.manifest[4].unknowns == 77);
}

TEST_CASE("resume reproduces a fresh run", "[tau]") {
    TauSeries part = compute_tau_cutjoin(2);
    std::vector<int> seen;
    TauSeries resumed = compute_tau_cutjoin(4, &part, [&](const TauSeries&, int g) { seen.push_back(g); });
    CHECK(resumed == tau4());
    CHECK(seen == std::vector<int>{3, 4});
    CHECK(compute_tau_cutjoin(2, &resumed) == part);
}

TEST_CASE("annihilation", "[tau]") {
    const auto& tau = tau6();
    auto rep = verify_annihilation(tau, constraint_operators({-1, 3}, {-2, 2}), 9);
    for (const auto& e : rep.entries) {
        INFO(e.op.to_string() << " checked to " << e.max_weight_checked << " " << e.residual.to_string());
        CHECK(e.pass);
        CHECK(e.complete);
    }
    // asking for more than the layers can cover is reported incomplete
    auto far = residual(op_name(Family::Lsf, 3), tau4(), 9);
    CHECK(!far.complete);
    CHECK(!far.pass);
    CHECK(far.residual.is_zero());
    CHECK(max_complete_weight(op_name(Family::Lsf, 3), 4) < 9);
    CHECK(residual(op_name(Family::Lsf, 3), tau4(), max_complete_weight(op_name(Family::Lsf, 3), 4)).pass);
}

TEST_CASE("a perturbed coefficient is caught", "[tau]") {
    TauSeries bad = tau4();
    bad.layers[2].add(TMonomial{{3, 2}}, NPoly(1));
    auto rep = verify_annihilation(bad, constraint_operators({-1, 1}, {-2, 0}, false), 6);
    CHECK(!rep.pass());
    REQUIRE(rep.first_failure() != nullptr);
    CHECK(!rep.first_failure()->residual.is_zero());
}

TEST_CASE("series evaluated at fixed N", "[tau]") {
    const Rational n(3, 2);
    TauSeries at = eval_N(tau4(), n);
    auto rep = verify_annihilation(at, constraint_operators({-1, 2}, {-2, 1}), 6, n);
    CHECK(rep.pass());
    auto wrong = verify_annihilation(at, constraint_operators({-1, 2}, {-2, 1}), 6, Rational(1));
    CHECK(!wrong.pass());
}

TEST_CASE("N = 0 is the Witten-Kontsevich series", "[tau][kw]") {
    TauSeries kw = kw_specialize(tau6());
    CHECK(coeff(kw, TMonomial{{3, 1}}) == NPoly(Rational(1, 8)));
    CHECK(coeff(kw, TMonomial{{1, 3}}) == NPoly(Rational(1, 6)));
    for (int k = -1; k <= 3; ++k) {
        auto e = residual(op_name(Family::KW_CalL, k), kw, 9);
        INFO("KW_CalL_" << k << ": " << e.residual.to_string());
        CHECK(e.pass);
    }
    TauSeries even = tau4();
    even.layers[1].add(TMonomial{{2, 1}, {1, 1}}, NPoly(1));
    CHECK_THROWS_AS(kw_specialize(even), std::logic_error);
}

TEST_CASE("grading", "[tau]") {
    for (const auto& d : degree_check(tau4())) CHECK(d.pass);
    Operator W1 = build_W1(12), W2 = build_W2(12);
    for (int g = 1; g <= 3; ++g) {
        CHECK(apply(W1, tau4().layer(g)).is_homogeneous(3 * g + 3));
        CHECK(apply(W2, tau4().layer(g)).is_homogeneous(3 * g + 6));
    }
}
