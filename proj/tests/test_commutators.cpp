#include "catch_amalgamated.hpp"

#include "kptau/algebra_checks.hpp"

using namespace kptau;

namespace {

Builder of(Family f, int k) { return builder(op_name(f, k)); }

bool all_pass(const std::vector<CheckResult>& rs) {
    bool ok = true;
    for (const auto& r : rs) {
        INFO(r.name << " " << r.detail);
        CHECK(r.pass);
        ok = ok && r.pass;
    }
    return ok;
}

}  // namespace

TEST_CASE("Heisenberg and Virasoro samples", "[commutators]") {
    const int W = 8;
    auto jj = commutator_on_basis(of(Family::J_KP, 1), of(Family::J_KP, -1), W);
    for (const auto& [m, v] : jj) CHECK(v == TPolynomial(m));

    auto ll = commutator_on_basis(of(Family::L_KP, 2), of(Family::L_KP, -2), W);
    CHECK(compare_on_basis("[L2,L-2]", ll, linear_action({{NPoly(4), build_L(0, W)}}, NPoly(Rational(1, 2))), W).pass);

    // central charge 2 for the free-field generators
    auto cl = commutator_on_basis(of(Family::CalL_N, 2), of(Family::CalL_N, -2), W);
    CHECK(compare_on_basis("[CalL2,CalL-2]", cl, linear_action({{NPoly(4), build_CalL_N(0, W)}}, NPoly(1)), W).pass);
}

TEST_CASE("W_{1+infinity} relations", "[commutators]") {
    CHECK(all_pass(wcomr_suite(false, -2, 2, 6)));
    CHECK(all_pass(wcomr_suite(true, -2, 2, 6)));
}

TEST_CASE("free-field Virasoro and [L,M]", "[commutators]") {
    auto rs = mastcr_suite(-2, 2, {}, 6);
    CHECK(rs[0].pass);
    CHECK(rs[1].pass);
}

TEST_CASE("[Lsf_k, Mstar_l] = 2(2k - l) Mstar_{k+l}", "[commutators]") {
    const int W = 6;
    for (int k = -1; k <= 2; ++k) {
        for (int l = -2; l <= 2; ++l) {
            if (k + l < -2) continue;
            auto lhs = commutator_on_basis(of(Family::Lsf, k), of(Family::Mstar, l), W);
            auto r = compare_on_basis("(" + std::to_string(k) + "," + std::to_string(l) + ")", lhs,
                                      linear_action({{NPoly(2 * (2 * k - l)), build_Mstar(k + l, W)}}), W);
            INFO(r.name << " " << r.detail);
            CHECK(r.pass);
        }
    }
}

// [CalM_k, CalM_m] against the W_3 relation with the composite Lambda: the
// commutator comes out as exactly 2/3 of the right-hand side, central term
// included. The relation holds once CalM is rescaled by sqrt(3/2).
TEST_CASE("[CalM, CalM] is 2/3 of the W_3 right-hand side", "[commutators]") {
    const int W = 6;
    LambdaComposite lambda;
    for (auto [k, m] : std::vector<std::pair<int, int>>{{1, -1}, {2, -2}, {3, -2}, {3, -3}, {2, -1}, {0, 1}}) {
        const int s = k + m;
        Rational central = s == 0 ? Rational(k * (k * k - 1) * (k * k - 4), 180) : Rational(0);
        Rational lcoef = Rational(k - m) * (Rational((s + 3) * (s + 2), 15) - Rational((k + 2) * (m + 2), 6));
        Operator Ls = build_CalL_N(s, W);
        auto lhs = commutator_on_basis(of(Family::CalM_N, k), of(Family::CalM_N, m), W);
        auto rhs = [&](const TMonomial& mono) {
            TPolynomial p(mono);
            TPolynomial r = lambda(s, p) * NPoly(Rational(k - m, 2)) + p * NPoly(central) + apply(Ls, p) * NPoly(lcoef);
            return r * NPoly(Rational(2, 3));
        };
        auto res = compare_on_basis("(" + std::to_string(k) + "," + std::to_string(m) + ")", lhs, rhs, W);
        INFO(res.name << " " << res.detail);
        CHECK(res.pass);
    }
    // the literal relation fails, and so does the reading with the second sum
    // over n > 2 (empty k, m range: only the [M,M] pairs run)
    CHECK(!mastcr_suite(1, 0, {{1, -1}}, W)[2].pass);
    CHECK(!mastcr_suite(1, 0, {{2, -2}}, W, 2)[2].pass);
}

TEST_CASE("commutator cutoffs", "[commutators]") {
    // raising and lowering operators: the truncated commutator must not depend on W
    auto small = commutator_on_basis(of(Family::CalL_N, -2), of(Family::CalL_N, 3), 6);
    auto big = commutator_on_basis(of(Family::CalL_N, -2), of(Family::CalL_N, 3), 8);
    for (const auto& [m, v] : small) CHECK(v == big.at(m).truncated(6));
}
