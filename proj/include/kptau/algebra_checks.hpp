#pragma once

#include "kptau/operators.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kptau {

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;  // first failure, empty on success

    CheckResult(std::string n = {}, bool ok = true, std::string d = {})
        : name(std::move(n)), pass(ok), detail(std::move(d)) {}
};

using BasisMap = std::map<TMonomial, TPolynomial>;

// (AB - BA)(m) for every monomial m of weight <= W, truncated to weight W.
// Each factor is built with a cutoff large enough for the polynomial it acts on.
inline BasisMap commutator_on_basis(const Builder& a, const Builder& b, int W) {
    Operator Aw = a(W);
    Operator Bw = b(W);
    Operator A_big = a(W + std::max(0, Bw.max_t_shift()));
    Operator B_big = b(W + std::max(0, Aw.max_t_shift()));
    auto basis = monomial_basis(W);
    auto parts = parallel_chunks<BasisMap>(basis.size(), [&](std::size_t lo, std::size_t hi, std::size_t) {
        BasisMap local;
        for (std::size_t i = lo; i < hi; ++i) {
            TPolynomial m(basis[i]);
            TPolynomial ab = apply(A_big, apply(Bw, m), W);
            TPolynomial ba = apply(B_big, apply(Aw, m), W);
            local.emplace(basis[i], ab - ba);
        }
        return local;
    }, 16);
    BasisMap out;
    for (auto& p : parts) out.merge(p);
    return out;
}

inline BasisMap commutator_on_basis(const OperatorName& a, const OperatorName& b, int W) {
    return commutator_on_basis(builder(a), builder(b), W);
}

// Compares lhs(m) against rhs(m) truncated to W for every basis monomial.
inline CheckResult compare_on_basis(std::string name, const BasisMap& lhs,
                                    const std::function<TPolynomial(const TMonomial&)>& rhs, int W) {
    CheckResult r{std::move(name), true, {}};
    for (const auto& [m, value] : lhs) {
        TPolynomial expected = rhs(m).truncated(W);
        if (!(value == expected)) {
            r.pass = false;
            r.detail = "on " + m.to_string() + ": got " + value.to_string() + ", expected " + expected.to_string();
            return r;
        }
    }
    return r;
}

// m -> (c * op)(m) + scalar * m, with op built once at cutoff W.
inline std::function<TPolynomial(const TMonomial&)> linear_action(std::vector<std::pair<NPoly, Operator>> ops,
                                                                   NPoly scalar = NPoly{}) {
    return [ops = std::move(ops), scalar](const TMonomial& m) {
        TPolynomial out = TPolynomial(m) * scalar;
        for (const auto& [c, op] : ops) out += apply(op, m) * c;
        return out;
    };
}

namespace detail {

inline void fold(CheckResult& total, const CheckResult& one) {
    if (one.pass || !total.pass) return;
    total.pass = false;
    total.detail = one.name + " " + one.detail;
}

}  // namespace detail

// The five W_{1+infinity} relations for k, m in [lo, hi].
inline std::vector<CheckResult> wcomr_suite(bool mkp, int lo, int hi, int W) {
    const std::string tag = mkp ? " MKP" : " KP";
    auto J = [mkp](int k) -> Builder { return [=](int w) { return build_J(k, w, mkp); }; };
    auto L = [mkp](int k) -> Builder { return [=](int w) { return build_L(k, w, mkp); }; };
    auto M = [mkp](int k) -> Builder { return [=](int w) { return build_M(k, w, mkp); }; };
    std::vector<CheckResult> out = {{"[J,J]" + tag}, {"[J,L]" + tag}, {"[L,L]" + tag}, {"[L,M]" + tag},
                                    {"[J,M]" + tag}};
    for (int k = lo; k <= hi; ++k) {
        for (int m = lo; m <= hi; ++m) {
            std::string at = "(" + std::to_string(k) + "," + std::to_string(m) + ")";
            const int s = k + m;
            const NPoly delta = s == 0 ? NPoly(1) : NPoly{};
            detail::fold(out[0], compare_on_basis(at, commutator_on_basis(J(k), J(m), W),
                                                  linear_action({}, delta * Rational(k)), W));
            detail::fold(out[1], compare_on_basis(at, commutator_on_basis(J(k), L(m), W),
                                                  linear_action({{NPoly(k), J(s)(W)}}), W));
            detail::fold(out[2], compare_on_basis(at, commutator_on_basis(L(k), L(m), W),
                                                  linear_action({{NPoly(k - m), L(s)(W)}},
                                                                delta * Rational(k * (k * k - 1), 12)),
                                                  W));
            detail::fold(out[3], compare_on_basis(at, commutator_on_basis(L(k), M(m), W),
                                                  linear_action({{NPoly(2 * k - m), M(s)(W)},
                                                                 {NPoly(Rational(k * (k * k - 1), 6)), J(s)(W)}}),
                                                  W));
            detail::fold(out[4], compare_on_basis(at, commutator_on_basis(J(k), M(m), W),
                                                  linear_action({{NPoly(2 * k), L(s)(W)}}), W));
        }
    }
    return out;
}

// Lambda_s(p) = sum_{n<=-2} L_n L_{s-n} p + sum_{n>split} L_{s-n} L_n p
//               - (3/10)(s+3)(s+2) L_s p, with L = CalL_N. split = -2 is the
// standard composite; other values exist to test alternative readings.
class LambdaComposite {
public:
    explicit LambdaComposite(int split = -2) : split_(split) {}

    TPolynomial operator()(int s, const TPolynomial& p) {
        TPolynomial out;
        int w = std::max(0, p.max_weight());
        for (int n = s - w / 2 - 1; n <= -2; ++n) out += L(n, L(s - n, p));
        for (int n = split_ + 1; 2 * n <= w + 2; ++n) out += L(s - n, L(n, p));
        out -= L(s, p) * NPoly(Rational(3 * (s + 3) * (s + 2), 10));
        return out;
    }

private:
    TPolynomial L(int n, const TPolynomial& p) {
        if (p.is_zero()) return p;
        int w = std::max(0, p.max_weight());
        auto key = std::make_pair(n, w);
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, build_CalL_N(n, w)).first;
        return apply(it->second, p);
    }

    int split_;
    std::map<std::pair<int, int>, Operator> cache_;
};

// Free-field W^(3) relations: Virasoro (c = 2) and [L, M] for k, m in [lo, hi];
// [M, M] with the composite for the listed pairs.
inline std::vector<CheckResult> mastcr_suite(int lo, int hi, const std::vector<std::pair<int, int>>& mm_pairs, int W,
                                             int lambda_split = -2) {
    auto CL = [](int k) -> Builder { return [=](int w) { return build_CalL_N(k, w); }; };
    auto CM = [](int k) -> Builder { return [=](int w) { return build_CalM_N(k, w); }; };
    std::vector<CheckResult> out = {{"[CalL,CalL]"}, {"[CalL,CalM]"}, {"[CalM,CalM]"}};
    for (int k = lo; k <= hi; ++k) {
        for (int m = lo; m <= hi; ++m) {
            std::string at = "(" + std::to_string(k) + "," + std::to_string(m) + ")";
            const int s = k + m;
            const NPoly delta = s == 0 ? NPoly(1) : NPoly{};
            detail::fold(out[0], compare_on_basis(at, commutator_on_basis(CL(k), CL(m), W),
                                                  linear_action({{NPoly(k - m), CL(s)(W)}},
                                                                delta * Rational(k * (k * k - 1), 6)),
                                                  W));
            detail::fold(out[1], compare_on_basis(at, commutator_on_basis(CL(k), CM(m), W),
                                                  linear_action({{NPoly(2 * k - m), CM(s)(W)}}), W));
        }
    }
    LambdaComposite lambda(lambda_split);
    for (auto [k, m] : mm_pairs) {
        std::string at = "(" + std::to_string(k) + "," + std::to_string(m) + ")";
        const int s = k + m;
        Rational central = s == 0 ? Rational(k * (k * k - 1) * (k * k - 4), 180) : Rational(0);
        Rational lcoef = Rational(k - m) * (Rational((s + 3) * (s + 2), 15) - Rational((k + 2) * (m + 2), 6));
        Operator Ls = build_CalL_N(s, W);
        auto rhs = [&](const TMonomial& mono) {
            TPolynomial p(mono);
            TPolynomial r = lambda(s, p) * NPoly(Rational(k - m, 2));
            r += p * NPoly(central);
            r += apply(Ls, p) * NPoly(lcoef);
            return r;
        };
        detail::fold(out[2], compare_on_basis(at, commutator_on_basis(CM(k), CM(m), W), rhs, W));
    }
    return out;
}

// Miura construction against the free-field generators, operator by operator
// and on the monomial basis of weight <= W.
inline std::vector<CheckResult> check_miura_match(int W, int lo = -3, int hi = 3) {
    CheckResult dots{"h_i.h_j = delta_ij - 1/3, sum h = 0"};
    auto h = miura_weight_vectors();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Surd d = h[i][0] * h[j][0] + h[i][1] * h[j][1];
            Surd want(Rational(i == j ? 2 : -1, 3));
            if (!(d == want)) {
                dots.pass = false;
                dots.detail = "h" + std::to_string(i + 1) + ".h" + std::to_string(j + 1) + " = " + d.to_string();
            }
        }
    for (int c = 0; c < 2; ++c)
        if (!(h[0][c] + h[1][c] + h[2][c]).is_zero()) {
            dots.pass = false;
            dots.detail = "sum of weight vectors is nonzero";
        }
    CheckResult shape{"R3 = -u^3 + u L + M"};
    for (const auto& [e, c] : miura_R3()) {
        bool ok = (e[0] == 3 && c == Surd(-1)) || e[0] == 1 || e[0] == 0;
        if (!ok) {
            shape.pass = false;
            shape.detail = "unexpected u^" + std::to_string(e[0]) + " coefficient " + c.to_string();
        }
    }
    CheckResult L{"R3_L vs CalL_N"}, M{"R3_M vs CalM_N"};
    auto basis = monomial_basis(W);
    auto compare = [&](CheckResult& res, const Operator& a, const Operator& b, const std::string& what) {
        if (!res.pass) return;
        for (const auto& m : basis) {
            TPolynomial x = apply(a, m, W), y = apply(b, m, W);
            if (!(x == y)) {
                res.pass = false;
                res.detail = what + " on " + m.to_string() + ": " + x.to_string() + " vs " + y.to_string();
                return;
            }
        }
        if (!(a == b)) {
            res.pass = false;
            res.detail = what + ": operators differ term by term";
        }
    };
    for (int k = lo; k <= hi; ++k) {
        compare(L, build_R3_L(k, W), build_CalL_N(k, W), "k=" + std::to_string(k));
        compare(M, build_R3_M(k, W), build_CalM_N(k, W), "k=" + std::to_string(k));
    }
    return {dots, shape, L, M};
}

// c with a == c * b, if one exists.
inline std::optional<Rational> proportionality(const Operator& a, const Operator& b) {
    if (b.is_zero()) return a.is_zero() ? std::optional<Rational>(Rational(0)) : std::nullopt;
    const auto& [key, cb] = *b.terms().begin();
    NPoly ca = a.coefficient(key.mults, key.derivs);
    int d = cb.degree();
    if (ca.degree() != d) return std::nullopt;
    Rational c = ca.coefficient(d) / cb.coefficient(d);
    if (!(a == b * NPoly(c))) return std::nullopt;
    return c;
}

}  // namespace kptau
