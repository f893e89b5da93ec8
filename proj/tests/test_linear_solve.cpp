#include "catch_amalgamated.hpp"

#include "kptau/linear_solve.hpp"

using namespace kptau;

namespace {

SparseRow row(std::initializer_list<std::pair<int, NPoly>> entries, NPoly rhs) {
    SparseRow r;
    for (const auto& [c, v] : entries) r.entries.emplace(c, v);
    r.rhs = std::move(rhs);
    return r;
}

}  // namespace

TEST_CASE("constant pivots", "[solve]") {
    // x + y = N, x - y = 1
    LinearSystem sys{2, {row({{0, 1}, {1, 1}}, NPoly::n()), row({{0, 1}, {1, -1}}, 1)}};
    auto res = solve(sys);
    REQUIRE(res.status == SolveResult::Status::unique);
    CHECK(!res.sampled);
    CHECK(res.solution[0] == NPoly{Rational(1, 2), Rational(1, 2)});
    CHECK(res.solution[1] == NPoly{Rational(-1, 2), Rational(1, 2)});
    CHECK(res.rank == 2);
}

TEST_CASE("N-dependent pivots fall back to sampling", "[solve]") {
    // (N + 1) x = N^2 + N, (N + 1) y = 2N + 2, plus a redundant row
    LinearSystem sys{2,
                     {row({{0, NPoly{1, 1}}}, NPoly{0, 1, 1}), row({{1, NPoly{1, 1}}}, NPoly{2, 2}),
                      row({{0, NPoly{1, 1}}, {1, NPoly{1, 1}}}, NPoly{2, 3, 1})}};
    auto res = solve(sys);
    REQUIRE(res.status == SolveResult::Status::unique);
    CHECK(res.sampled);
    CHECK(res.solution[0] == NPoly::n());
    CHECK(res.solution[1] == NPoly(2));
}

TEST_CASE("non-polynomial solutions are rejected", "[solve]") {
    // (N + 1) x = 1 has solution 1/(N+1)
    LinearSystem sys{1, {row({{0, NPoly{1, 1}}}, 1)}};
    auto res = solve(sys);
    CHECK(res.status != SolveResult::Status::unique);
}

TEST_CASE("inconsistent and underdetermined systems", "[solve]") {
    LinearSystem bad{1, {row({{0, 1}}, 1), row({{0, 1}}, 2)}};
    CHECK(solve(bad).status == SolveResult::Status::inconsistent);
    LinearSystem under{2, {row({{0, 1}, {1, 1}}, 1)}};
    auto res = solve(under);
    CHECK(res.status == SolveResult::Status::underdetermined);
    CHECK(res.rank == 1);
}

TEST_CASE("Newton interpolation", "[solve]") {
    NPoly p{3, -1, Rational(1, 2), 2};
    std::vector<Rational> xs, ys;
    for (int i = 0; i < 4; ++i) {
        xs.emplace_back(i * 2 - 1);
        ys.push_back(p.eval(xs.back()));
    }
    CHECK(detail::interpolate(xs, ys) == p);
}
