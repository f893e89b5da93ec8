#pragma once

#include "kptau/mode_algebra.hpp"

#include <array>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>

namespace kptau {

enum class Family {
    J_KP, L_KP, M_KP,
    J_MKP, L_MKP, M_MKP,
    Lsf, Msf, Mprime, Mstar,
    CalL_N, CalM_N,
    KW_CalL,
    R3_L, R3_M,
    D, W1, W2,
};

struct OperatorName {
    Family family = Family::D;
    int index = 0;  // ignored for D, W1, W2

    [[nodiscard]] bool indexed() const {
        return family != Family::D && family != Family::W1 && family != Family::W2;
    }
    [[nodiscard]] std::string to_string() const {
        static const std::map<Family, std::string> names = {
            {Family::J_KP, "J"},        {Family::L_KP, "L"},        {Family::M_KP, "M"},
            {Family::J_MKP, "J^MKP"},   {Family::L_MKP, "L^MKP"},   {Family::M_MKP, "M^MKP"},
            {Family::Lsf, "Lsf"},       {Family::Msf, "Msf"},       {Family::Mprime, "Mprime"},
            {Family::Mstar, "Mstar"},   {Family::CalL_N, "CalL_N"}, {Family::CalM_N, "CalM_N"},
            {Family::KW_CalL, "KW_CalL"}, {Family::R3_L, "R3_L"},   {Family::R3_M, "R3_M"},
            {Family::D, "D"},           {Family::W1, "W1"},         {Family::W2, "W2"},
        };
        std::string s = names.at(family);
        if (indexed()) s += "_" + std::to_string(index);
        return s;
    }
};

inline OperatorName op_name(Family f, int index = 0) { return OperatorName{f, index}; }

namespace detail {

inline Operator deriv_or_zero(int b, int shift, const NPoly& c = NPoly(1)) {
    Operator op(shift);
    if (b >= 1) op.add_term(c, {}, {b});
    return op;
}

// t~_a = t_a - delta_{a,3}/3 as an affine operator
inline Operator shifted_time(int a) {
    Operator op = Operator::multiply(a);
    if (a == 3) op.add_term(NPoly(Rational(-1, 3)), {}, {});
    return op;
}

inline Operator mode_product(CurrentId id, int count, int total, int W, const Rational& c) {
    std::vector<CurrentSpec> cs(count, CurrentSpec::of(id));
    return rationalize(normal_ordered_product(cs, ModeIndex::integer(total), W, Surd(c)));
}

}  // namespace detail

// W_{1+infinity} modes of the (M)KP current: coefficients of J, J^2/2, J^3/3.
inline Operator build_J(int k, int W, bool mkp = false) {
    return detail::mode_product(mkp ? CurrentId::J_MKP : CurrentId::J_KP, 1, k, W, 1);
}
inline Operator build_L(int m, int W, bool mkp = false) {
    return detail::mode_product(mkp ? CurrentId::J_MKP : CurrentId::J_KP, 2, m, W, Rational(1, 2));
}
inline Operator build_M(int k, int W, bool mkp = false) {
    return detail::mode_product(mkp ? CurrentId::J_MKP : CurrentId::J_KP, 3, k, W, Rational(1, 3));
}

// Virasoro constraints of the Kontsevich-Penner model. Explicit d/dt_j with
// j <= 0 vanish; J, L keep their KP meaning for every index.
inline Operator build_Lsf(int k, int W) {
    const NPoly N = NPoly::n();
    Operator op = build_L(2 * k, W);
    op -= detail::deriv_or_zero(2 * k + 3, -2 * k - 3);
    op += detail::deriv_or_zero(2 * k, -2 * k, N * Rational(3));
    for (int j = 1; j <= k - 1; ++j) op.add_term(NPoly(1), {}, {2 * j, 2 * k - 2 * j});
    if (k == 0) op.add_term(NPoly{Rational(1, 8), 0, Rational(3, 2)}, {}, {});
    if (k == -1) op.add_term(N * Rational(2), {2}, {});
    op.set_weight_shift(-2 * k);
    return op.restricted_to(W);
}

// W_3 constraints of the Kontsevich-Penner model (same boundary convention).
inline Operator build_Msf(int k, int W) {
    const NPoly N = NPoly::n();
    const NPoly N2 = N * N;
    Operator op = build_M(2 * k, W);
    op -= NPoly(2) * build_L(2 * k + 3, W);
    op += build_J(2 * k + 6, W);
    op += (N2 * Rational(3 * (k + 1)) + NPoly(Rational(1, 4))) * build_J(2 * k, W);
    op += (N * Rational(k + 4)) * (build_L(2 * k, W) - build_J(2 * k + 3, W));
    if (k == 0) op.add_term((N2 + NPoly(Rational(1, 4))) * N * Rational(2), {}, {});
    if (k == -1) op.add_term(N2 * Rational(4), {2}, {});
    if (k == -2) op.add_term(N2 * Rational(16), {4}, {});
    for (int j = 1; j <= k - 1; ++j) op.add_term(N * Rational(k - 2), {}, {2 * j, 2 * k - 2 * j});
    for (int i = 1; i <= k; ++i)
        for (int j = 1; i + j <= k - 1; ++j) op.add_term(NPoly(Rational(-4, 3)), {}, {2 * i, 2 * j, 2 * (k - i - j)});
    op.set_weight_shift(-2 * k);
    return op.restricted_to(W);
}

inline Operator build_Mprime(int k, int W) {
    Operator op = build_Msf(k, W) - (NPoly::n() * Rational(k + 2)) * build_Lsf(k, W);
    op.set_weight_shift(-2 * k);
    return op;
}

// M*_k = M'_k - (8/3) sum_{i>=1} i t_{2i} Lsf_{k+i}
inline Operator build_Mstar(int k, int W) {
    Operator op = build_Mprime(k, W);
    for (int i = 1; 2 * (k + i) <= W || k + i <= 0; ++i) {
        if (k + i < -1) continue;
        op -= build_Lsf(k + i, W).times_var(2 * i, NPoly(Rational(8 * i, 3)));
    }
    op.set_weight_shift(-2 * k);
    return op;
}

// ---- free-field generating functions ---------------------------------------

// (1/2)(:J_o^2: + 1/(8x^2) + :J_e^2:)
inline FieldPoly calL_field(bool dilaton = true) {
    auto Jo = FieldPoly::current(dilaton ? CurrentId::CalJ_o : CurrentId::CalJ_o_noshift);
    auto Je = FieldPoly::current(CurrentId::CalJ_e);
    return Surd(Rational(1, 2)) * (Jo * Jo + FieldPoly::constant(Rational(1, 8), -4) + Je * Je);
}

// (1/sqrt6)(:J_e (J_o^2 + 1/(8x^2)): - (1/3):J_e^3:)
inline FieldPoly calM_field(bool dilaton = true) {
    auto Jo = FieldPoly::current(dilaton ? CurrentId::CalJ_o : CurrentId::CalJ_o_noshift);
    auto Je = FieldPoly::current(CurrentId::CalJ_e);
    FieldPoly inner = Je * (Jo * Jo + FieldPoly::constant(Rational(1, 8), -4)) - Surd(Rational(1, 3)) * (Je * Je * Je);
    return Surd::sqrt_of(Rational(1, 6)) * inner;
}

inline Operator build_CalL_N(int k, int W, bool dilaton = true) {
    return rationalize(calL_field(dilaton).coefficient(-2 * (k + 2), W, -2 * k));
}
inline Operator build_CalM_N(int k, int W, bool dilaton = true) {
    return rationalize(calM_field(dilaton).coefficient(-2 * (k + 3), W, -2 * k));
}

// Virasoro operators of the closed (N = 0, odd-time) theory, summed directly.
inline Operator build_KW_CalL(int m, int W) {
    Operator op(-2 * m);
    for (int a = 0; a <= -1 - m; ++a) {
        int b = -1 - m - a;
        op += Rational((2 * a + 1) * (2 * b + 1), 4) * compose(detail::shifted_time(2 * a + 1),
                                                                 detail::shifted_time(2 * b + 1));
    }
    for (int k = 0; 2 * k + 2 * m + 1 <= W; ++k) {
        int d = 2 * k + 2 * m + 1;
        if (d < 1) continue;
        op += Rational(2 * k + 1, 2) * compose(detail::shifted_time(2 * k + 1), Operator::derivative(d));
    }
    for (int a = 0; a <= m - 1; ++a) op.add_term(NPoly(Rational(1, 4)), {}, {2 * a + 1, 2 * (m - 1 - a) + 1});
    if (m == 0) op.add_term(NPoly(Rational(1, 16)), {}, {});
    op.set_weight_shift(-2 * m);
    return op.restricted_to(W);
}

// ---- Miura construction for n = 3 -------------------------------------------

// Weight vectors of the fundamental representation of sl(3).
inline std::array<std::array<Surd, 2>, 3> miura_weight_vectors() {
    Surd r2 = Surd::sqrt_of(Rational(1, 2));
    Surd r6 = Surd::sqrt_of(Rational(1, 6));
    return {{{r2, r6}, {-r2, r6}, {Surd(0), Surd(-2) * r6}}};
}

// Coefficients of R_3(u) = -:prod_m (u - h_m.J): as a polynomial in
// (u, J1, J2), keyed by exponents.
inline std::map<std::array<int, 3>, Surd> miura_R3() {
    using Poly = std::map<std::array<int, 3>, Surd>;
    Poly acc{{{0, 0, 0}, Surd(-1)}};
    for (const auto& h : miura_weight_vectors()) {
        Poly factor{{{1, 0, 0}, Surd(1)}, {{0, 1, 0}, -h[0]}, {{0, 0, 1}, -h[1]}};
        Poly next;
        for (const auto& [ea, ca] : acc)
            for (const auto& [eb, cb] : factor) {
                std::array<int, 3> e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
                next[e] += ca * cb;
            }
        acc.clear();
        for (auto& [e, c] : next)
            if (!c.is_zero()) acc.emplace(e, c);
    }
    return acc;
}

// u^power coefficient of R_3 with J1^2 -> J_o^2 + 1/(8x^2), J2 -> J_e.
inline FieldPoly miura_field(int u_power) {
    auto Jo = FieldPoly::current(CurrentId::CalJ_o);
    auto Je = FieldPoly::current(CurrentId::CalJ_e);
    FieldPoly J1sq = Jo * Jo + FieldPoly::constant(Rational(1, 8), -4);
    FieldPoly out;
    for (const auto& [e, c] : miura_R3()) {
        if (e[0] != u_power) continue;
        if (e[1] % 2 != 0) throw std::logic_error("miura_field: odd power of the twisted current");
        FieldPoly term = FieldPoly::constant(c);
        for (int i = 0; i < e[1] / 2; ++i) term = term * J1sq;
        for (int i = 0; i < e[2]; ++i) term = term * Je;
        out += term;
    }
    return out;
}

inline Operator build_R3_L(int k, int W) { return rationalize(miura_field(1).coefficient(-2 * (k + 2), W, -2 * k)); }
inline Operator build_R3_M(int k, int W) { return rationalize(miura_field(0).coefficient(-2 * (k + 3), W, -2 * k)); }

// ---- grading and cut-and-join ------------------------------------------------

inline Operator build_D(int W) {
    Operator op(0);
    for (int k = 1; k <= W; ++k) op.add_term(NPoly(Rational(k, 3)), {k}, {k});
    return op;
}

// W1 = (1/3)[ sum_{k>=-1} (2k+3) t_{2k+3} 2L'_k
//            + sum_{k>=-2} (2k+6) t_{2k+6} (4/sqrt3) [x^{-k-7/2}] :J_e J_o': ]
// where L' is built from the odd current without dilaton shift. Solving the
// free-field constraints for d/dt_{2k+3} and d/dt_{2k+6} and feeding them to
// the degree operator gives D tau = (hbar W1 + hbar^2 W2) tau.
inline Operator build_W1(int W) {
    Operator op(3);
    FieldPoly Lp = calL_field(false);
    for (int k = -1; 2 * k <= W; ++k) {
        Operator Lk = rationalize(Lp.coefficient(-2 * (k + 2), W, -2 * k));
        op += Lk.times_var(2 * k + 3, NPoly(Rational(2 * (2 * k + 3), 3)));
    }
    FieldPoly cross = FieldPoly::current(CurrentId::CalJ_e) * FieldPoly::current(CurrentId::CalJ_o_noshift);
    Surd four_over_sqrt3 = Surd::basis(Surd::sqrt3, NPoly(Rational(4, 3)));
    for (int k = -2; 2 * k + 3 <= W; ++k) {
        Operator Bk = rationalize(four_over_sqrt3 * cross.coefficient(-2 * k - 7, W, -(2 * k + 3)));
        op += Bk.times_var(2 * k + 6, NPoly(Rational(2 * k + 6, 3)));
    }
    op.set_weight_shift(3);
    return op;
}

// W2 = -(4/3) sum_{k>=-2} (2k+6) t_{2k+6} M'_k
inline Operator build_W2(int W) {
    Operator op(6);
    FieldPoly Mp = calM_field(false);
    for (int k = -2; 2 * k <= W; ++k) {
        Operator Mk = rationalize(Mp.coefficient(-2 * (k + 3), W, -2 * k));
        op += Mk.times_var(2 * k + 6, NPoly(Rational(-4 * (2 * k + 6), 3)));
    }
    op.set_weight_shift(6);
    return op;
}

inline Operator build(const OperatorName& name, int W) {
    if (W < 0) throw std::invalid_argument("build: negative weight cutoff");
    const int k = name.index;
    switch (name.family) {
        case Family::J_KP: return build_J(k, W);
        case Family::L_KP: return build_L(k, W);
        case Family::M_KP: return build_M(k, W);
        case Family::J_MKP: return build_J(k, W, true);
        case Family::L_MKP: return build_L(k, W, true);
        case Family::M_MKP: return build_M(k, W, true);
        case Family::Lsf: return build_Lsf(k, W);
        case Family::Msf: return build_Msf(k, W);
        case Family::Mprime: return build_Mprime(k, W);
        case Family::Mstar:
            if (k < -2) throw std::invalid_argument("build: Mstar is defined for k >= -2");
            return build_Mstar(k, W);
        case Family::CalL_N: return build_CalL_N(k, W);
        case Family::CalM_N: return build_CalM_N(k, W);
        case Family::KW_CalL: return build_KW_CalL(k, W);
        case Family::R3_L: return build_R3_L(k, W);
        case Family::R3_M: return build_R3_M(k, W);
        case Family::D: return build_D(W);
        case Family::W1: return build_W1(W);
        case Family::W2: return build_W2(W);
    }
    throw std::invalid_argument("build: unknown operator family");
}

using Builder = std::function<Operator(int)>;

inline Builder builder(const OperatorName& name) {
    return [name](int W) { return build(name, W); };
}

}  // namespace kptau
