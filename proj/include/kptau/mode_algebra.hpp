#pragma once

#include "kptau/operator_expr.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace kptau {

// Mode index m stored as 2m so the half-integer modes of the twisted odd
// current are exact.
struct ModeIndex {
    int doubled = 0;

    static constexpr ModeIndex integer(int m) { return ModeIndex{2 * m}; }
    static constexpr ModeIndex from_doubled(int d) { return ModeIndex{d}; }
    [[nodiscard]] constexpr bool is_half_integer() const { return doubled % 2 != 0; }
    friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

struct ElementaryOp {
    enum class Kind { multiply, derivative, scalar };

    Kind kind = Kind::scalar;
    int var = 0;  // t-variable index, unused for scalars
    Surd scale;
    int graded_weight = 0;  // t_a: a, d/dt_b: -b, dilaton constant: 3

    static ElementaryOp mult(int a, const Surd& s) { return {Kind::multiply, a, s, a}; }
    static ElementaryOp deriv(int b, const Surd& s) { return {Kind::derivative, b, s, -b}; }
    static ElementaryOp constant(const Surd& s, int graded_weight = 0) {
        return {Kind::scalar, 0, s, graded_weight};
    }
};

// Sum of elementary operators attached to one mode (a dilaton-shifted mode
// carries a multiplication plus a constant).
using ModeOp = std::vector<ElementaryOp>;

enum class CurrentId {
    J_KP,            // KP current, J_0 = 0
    J_MKP,           // MKP current, J_0 = N
    J_o,             // odd-time current in z: v_o(z) + nabla_o(z)
    J_e,             // even-time current in z: v_e(z) + nabla_e(z)
    Nabla_e,         // nabla_e(z) = N/z + sum z^{-2k-1} d/dt_{2k}
    V_e,             // v_e(z) = sum 2k z^{2k-1} t_{2k}
    CalJ_o,          // twisted odd current in x = z^2, half-integer modes
    CalJ_o_noshift,  // same without the dilaton shift
    CalJ_e,          // even current in x
};

struct CurrentSpec {
    CurrentId id = CurrentId::J_KP;
    bool dilaton_shift = false;

    static CurrentSpec of(CurrentId id) {
        bool shifted = id == CurrentId::J_o || id == CurrentId::CalJ_o;
        return {id, shifted};
    }
    // x-currents (expansion in x = z^2) weigh a mode d/2 as -d, z-currents as -d/2.
    [[nodiscard]] bool in_x() const {
        return id == CurrentId::CalJ_o || id == CurrentId::CalJ_o_noshift || id == CurrentId::CalJ_e;
    }
    [[nodiscard]] bool half_integer_modes() const {
        return id == CurrentId::CalJ_o || id == CurrentId::CalJ_o_noshift;
    }
    [[nodiscard]] int graded_weight(ModeIndex m) const { return in_x() ? -m.doubled : -m.doubled / 2; }
    // Largest doubled mode whose operator can act nontrivially below weight W.
    [[nodiscard]] int max_doubled_mode(int W) const {
        int d = in_x() ? W : 2 * W;
        if (half_integer_modes() && d % 2 == 0) --d;
        if (!half_integer_modes() && d % 2 != 0) --d;
        return d;
    }
    [[nodiscard]] std::string name() const {
        switch (id) {
            case CurrentId::J_KP: return "J_KP";
            case CurrentId::J_MKP: return "J_MKP";
            case CurrentId::J_o: return dilaton_shift ? "J_o" : "J_o'";
            case CurrentId::J_e: return "J_e";
            case CurrentId::Nabla_e: return "nabla_e";
            case CurrentId::V_e: return "v_e";
            case CurrentId::CalJ_o: return dilaton_shift ? "CalJ_o" : "CalJ_o'";
            case CurrentId::CalJ_o_noshift: return "CalJ_o'";
            case CurrentId::CalJ_e: return "CalJ_e";
        }
        return "?";
    }
    friend auto operator<=>(const CurrentSpec&, const CurrentSpec&) = default;
};

namespace detail {

// Mult by c*t_a, plus the dilaton constant when t_a is shifted (t~_3 = t_3 - 1/3).
inline ModeOp shifted_time(int a, const Surd& c, bool dilaton) {
    ModeOp op{ElementaryOp::mult(a, c)};
    if (dilaton && a == 3) op.push_back(ElementaryOp::constant(c * Surd(Rational(-1, 3)), 3));
    return op;
}

}  // namespace detail

// Elementary operator(s) attached to mode m of the current.
inline ModeOp current_mode(const CurrentSpec& c, ModeIndex m) {
    if (m.is_half_integer() != c.half_integer_modes())
        throw std::invalid_argument("current_mode: mode parity does not match current " + c.name());
    const int d = m.doubled;
    const Surd one(1);
    switch (c.id) {
        case CurrentId::J_KP:
        case CurrentId::J_MKP: {
            int k = d / 2;
            if (k > 0) return {ElementaryOp::deriv(k, one)};
            if (k < 0) return detail::shifted_time(-k, Surd(Rational(-k)), c.dilaton_shift);
            if (c.id == CurrentId::J_MKP) return {ElementaryOp::constant(Surd(NPoly::n()))};
            return {};
        }
        case CurrentId::J_o: {
            int k = d / 2;
            if (k % 2 == 0) return {};
            if (k > 0) return {ElementaryOp::deriv(k, one)};
            return detail::shifted_time(-k, Surd(Rational(-k)), c.dilaton_shift);
        }
        case CurrentId::J_e:
        case CurrentId::Nabla_e:
        case CurrentId::V_e: {
            int k = d / 2;
            if (k % 2 != 0) return {};
            bool lower = c.id != CurrentId::V_e;
            bool upper = c.id != CurrentId::Nabla_e;
            if (k > 0) return lower ? ModeOp{ElementaryOp::deriv(k, one)} : ModeOp{};
            if (k == 0) return lower ? ModeOp{ElementaryOp::constant(Surd(NPoly::n()))} : ModeOp{};
            return upper ? ModeOp{ElementaryOp::mult(-k, Surd(Rational(-k)))} : ModeOp{};
        }
        case CurrentId::CalJ_o:
        case CurrentId::CalJ_o_noshift: {
            Surd inv_sqrt2 = Surd::sqrt_of(Rational(1, 2));
            bool shift = c.id == CurrentId::CalJ_o && c.dilaton_shift;
            if (d > 0) return {ElementaryOp::deriv(d, inv_sqrt2)};
            return detail::shifted_time(-d, inv_sqrt2 * Surd(Rational(-d)), shift);
        }
        case CurrentId::CalJ_e: {
            int k = d / 2;
            Surd up = Surd::sqrt_of(Rational(3, 2));
            if (k > 0) return {ElementaryOp::deriv(2 * k, up)};
            if (k == 0) return {ElementaryOp::constant(up * Surd(NPoly::n()))};
            return {ElementaryOp::mult(-2 * k, Surd::sqrt_of(Rational(2, 3)) * Surd(Rational(-k)))};
        }
    }
    throw std::invalid_argument("current_mode: unknown current");
}

namespace detail {

// Adds the normal-ordered expansion of c * prod_i ops[i] to out. Returns
// false if some expanded term has graded weight != expected.
inline bool add_normal_ordered(SurdOperator& out, const Surd& c, const std::vector<const ModeOp*>& ops, int W,
                               int expected) {
    bool consistent = true;
    std::vector<int> mults, derivs;
    auto rec = [&](auto&& self, std::size_t i, Surd acc, int graded, int dweight) -> void {
        if (dweight > W) return;
        if (i == ops.size()) {
            if (graded != expected) consistent = false;
            out.add_term(acc, mults, derivs);
            return;
        }
        for (const auto& e : *ops[i]) {
            switch (e.kind) {
                case ElementaryOp::Kind::multiply:
                    mults.push_back(e.var);
                    self(self, i + 1, acc * e.scale, graded + e.graded_weight, dweight);
                    mults.pop_back();
                    break;
                case ElementaryOp::Kind::derivative:
                    derivs.push_back(e.var);
                    self(self, i + 1, acc * e.scale, graded + e.graded_weight, dweight + e.var);
                    derivs.pop_back();
                    break;
                case ElementaryOp::Kind::scalar:
                    self(self, i + 1, acc * e.scale, graded + e.graded_weight, dweight);
                    break;
            }
        }
    };
    rec(rec, 0, c, 0, 0);
    return consistent;
}

}  // namespace detail

// Mode `total` of the normal-ordered product :c_1(x) ... c_r(x): (r <= 3):
// the sum over mode tuples with m_1 + ... + m_r = total, each tuple normal
// ordered, keeping only terms whose derivatives can act below weight W.
inline SurdOperator normal_ordered_product(const std::vector<CurrentSpec>& cs, ModeIndex total, int W,
                                           const Surd& coeff = Surd(1)) {
    if (cs.empty() || cs.size() > 3) throw std::invalid_argument("normal_ordered_product: unsupported arity");
    bool in_x = cs.front().in_x();
    for (const auto& c : cs)
        if (c.in_x() != in_x) throw std::invalid_argument("normal_ordered_product: mixed expansion variables");
    int expected = in_x ? -total.doubled : -total.doubled / 2;
    if (!in_x && total.doubled % 2 != 0) throw std::invalid_argument("normal_ordered_product: half-integer total");
    int half_count = 0;
    for (const auto& c : cs) half_count += c.half_integer_modes() ? 1 : 0;
    if ((total.doubled % 2 != 0) != (half_count % 2 != 0)) return SurdOperator(expected);

    SurdOperator out(expected);
    std::size_t r = cs.size();
    std::vector<int> hi(r), lo(r);
    int sum_hi = 0;
    for (std::size_t i = 0; i < r; ++i) {
        hi[i] = cs[i].max_doubled_mode(W);
        sum_hi += hi[i];
    }
    for (std::size_t i = 0; i < r; ++i) lo[i] = total.doubled - (sum_hi - hi[i]);

    std::vector<int> modes(r);
    std::vector<ModeOp> storage(r);
    auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
        if (i + 1 == r) {
            int d = remaining;
            if (d < lo[i] || d > hi[i]) return;
            if ((d % 2 != 0) != cs[i].half_integer_modes()) return;
            modes[i] = d;
            std::vector<const ModeOp*> ops;
            for (std::size_t j = 0; j < r; ++j) {
                storage[j] = current_mode(cs[j], ModeIndex::from_doubled(modes[j]));
                if (storage[j].empty()) return;
                ops.push_back(&storage[j]);
            }
            if (!detail::add_normal_ordered(out, coeff, ops, W, expected))
                throw std::logic_error("normal_ordered_product: inhomogeneous graded weight");
            return;
        }
        int step = 2;
        int start = lo[i];
        if ((start % 2 != 0) != cs[i].half_integer_modes()) ++start;
        for (int d = start; d <= hi[i]; d += step) {
            modes[i] = d;
            self(self, i + 1, remaining - d);
        }
    };
    rec(rec, 0, total.doubled);
    return out;
}

// Finite linear combination of  c * x^{s} * :current_1(x) ... current_r(x):
// with exponents stored doubled (x^{1/2} appears for the twisted current).
class FieldPoly {
public:
    struct Term {
        std::vector<CurrentSpec> currents;  // sorted
        int shift2 = 0;                     // doubled power of the expansion variable
        friend auto operator<=>(const Term&, const Term&) = default;
    };

    FieldPoly() = default;
    static FieldPoly current(const CurrentSpec& c, const Surd& coeff = Surd(1)) {
        FieldPoly f;
        f.add(Term{{c}, 0}, coeff);
        return f;
    }
    static FieldPoly current(CurrentId id, const Surd& coeff = Surd(1)) {
        return current(CurrentSpec::of(id), coeff);
    }
    // c * x^{shift2/2}
    static FieldPoly constant(const Surd& c, int shift2 = 0) {
        FieldPoly f;
        f.add(Term{{}, shift2}, c);
        return f;
    }

    [[nodiscard]] const std::map<Term, Surd>& terms() const { return terms_; }

    FieldPoly& operator+=(const FieldPoly& o) {
        for (const auto& [t, c] : o.terms_) add(t, c);
        return *this;
    }
    FieldPoly& operator-=(const FieldPoly& o) {
        for (const auto& [t, c] : o.terms_) add(t, -c);
        return *this;
    }
    friend FieldPoly operator+(FieldPoly a, const FieldPoly& b) { return a += b; }
    friend FieldPoly operator-(FieldPoly a, const FieldPoly& b) { return a -= b; }
    friend FieldPoly operator*(const Surd& s, const FieldPoly& f) {
        FieldPoly out;
        for (const auto& [t, c] : f.terms_) out.add(t, s * c);
        return out;
    }
    // Normal-ordered product (normal ordering makes the currents commute).
    friend FieldPoly operator*(const FieldPoly& a, const FieldPoly& b) {
        FieldPoly out;
        for (const auto& [ta, ca] : a.terms_) {
            for (const auto& [tb, cb] : b.terms_) {
                Term t{ta.currents, ta.shift2 + tb.shift2};
                t.currents.insert(t.currents.end(), tb.currents.begin(), tb.currents.end());
                std::sort(t.currents.begin(), t.currents.end());
                out.add(t, ca * cb);
            }
        }
        return out;
    }

    // Coefficient of x^{exponent2/2}; expected_shift is the graded weight every
    // contributing term must carry.
    [[nodiscard]] SurdOperator coefficient(int exponent2, int W, int expected_shift) const {
        SurdOperator out(expected_shift);
        for (const auto& [t, c] : terms_) {
            int r = static_cast<int>(t.currents.size());
            if (r == 0) {
                if (t.shift2 == exponent2) out.add_term(c, {}, {});
                continue;
            }
            int total = t.shift2 - exponent2 - 2 * r;
            SurdOperator piece = normal_ordered_product(t.currents, ModeIndex::from_doubled(total), W, c);
            if (!piece.is_zero() && piece.weight_shift() != expected_shift)
                throw std::logic_error("FieldPoly::coefficient: graded weight mismatch");
            out += piece;
        }
        out.set_weight_shift(expected_shift);
        return out;
    }

private:
    void add(const Term& t, const Surd& c) {
        if (c.is_zero()) return;
        auto [it, ins] = terms_.try_emplace(t, c);
        if (!ins) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    std::map<Term, Surd> terms_;
};

// Exponent of the expansion variable attached to index k: -(slope*k + offset),
// e.g. slope 1, offset 2 for L(x) = sum L_k x^{-k-2}.
struct LaurentIndexing {
    int slope = 1;
    int offset = 2;
    [[nodiscard]] int exponent(int k) const { return -(slope * k + offset); }
};

// Keeps the members of the family that sit at negative powers of the
// expansion variable.
template <class T>
std::map<int, T> laurent_negative_part(const std::map<int, T>& family, LaurentIndexing idx) {
    std::map<int, T> out;
    for (const auto& [k, v] : family)
        if (idx.exponent(k) <= -1) out.emplace(k, v);
    return out;
}

}  // namespace kptau
