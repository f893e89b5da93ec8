#pragma once

#include "kptau/parallel.hpp"
#include "kptau/surd.hpp"
#include "kptau/tpolynomial.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kptau {

// Shape of one normal-ordered term: multiplications by t_a (left) and
// derivatives d/dt_b (right), each stored as a sorted multiset of indices.
struct TermKey {
    std::vector<int> mults;
    std::vector<int> derivs;

    [[nodiscard]] int mult_weight() const {
        int w = 0;
        for (int a : mults) w += a;
        return w;
    }
    [[nodiscard]] int deriv_weight() const {
        int w = 0;
        for (int b : derivs) w += b;
        return w;
    }
    [[nodiscard]] int t_shift() const { return mult_weight() - deriv_weight(); }

    // Ordered by derivatives first so that apply() can walk runs sharing them.
    friend auto operator<=>(const TermKey& a, const TermKey& b) {
        if (auto c = a.derivs <=> b.derivs; c != 0) return c;
        return a.mults <=> b.mults;
    }
    friend bool operator==(const TermKey&, const TermKey&) = default;
};

// Finite normal-ordered differential operator
//     sum_terms  c * t_{a1} ... t_{ar} * d/dt_{b1} ... d/dt_{bs}
// with coefficients in C (NPoly, or Surd while irrational normalisations are
// still present). weight_shift is the graded shift: t_k has weight k and the
// dilaton shift constant carries the weight of t_3, so a term whose plain
// t-shift differs from weight_shift by -3h carries hbar^{-h}.
template <class C>
class OperatorExpr {
public:
    using TermMap = std::map<TermKey, C>;

    OperatorExpr() = default;
    explicit OperatorExpr(int weight_shift) : shift_(weight_shift) {}

    static OperatorExpr scalar(const C& c) {
        OperatorExpr op(0);
        op.add_term(c, {}, {});
        return op;
    }
    static OperatorExpr multiply(int a, const C& c = C(1)) {
        OperatorExpr op(a);
        op.add_term(c, {a}, {});
        return op;
    }
    static OperatorExpr derivative(int b, const C& c = C(1)) {
        OperatorExpr op(-b);
        op.add_term(c, {}, {b});
        return op;
    }

    [[nodiscard]] int weight_shift() const { return shift_; }
    void set_weight_shift(int s) { shift_ = s; }
    [[nodiscard]] const TermMap& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }

    void add_term(const C& c, std::vector<int> mults, std::vector<int> derivs) {
        if (c.is_zero()) return;
        std::sort(mults.begin(), mults.end());
        std::sort(derivs.begin(), derivs.end());
        TermKey key{std::move(mults), std::move(derivs)};
        auto [it, inserted] = terms_.try_emplace(std::move(key), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    [[nodiscard]] C coefficient(const std::vector<int>& mults, const std::vector<int>& derivs) const {
        TermKey key{mults, derivs};
        std::sort(key.mults.begin(), key.mults.end());
        std::sort(key.derivs.begin(), key.derivs.end());
        auto it = terms_.find(key);
        return it == terms_.end() ? C{} : it->second;
    }

    // hbar power attached to a term under the graded weight convention (<= 0).
    [[nodiscard]] std::optional<int> hbar_power(const TermKey& key) const {
        int diff = key.t_shift() - shift_;
        if (diff % 3 != 0 || diff > 0) return std::nullopt;
        return diff / 3;
    }
    [[nodiscard]] bool is_graded_homogeneous() const {
        for (const auto& [k, c] : terms_)
            if (!hbar_power(k)) return false;
        return true;
    }
    // True when every term has plain t-shift equal to weight_shift.
    [[nodiscard]] bool is_t_homogeneous() const {
        for (const auto& [k, c] : terms_)
            if (k.t_shift() != shift_) return false;
        return true;
    }
    [[nodiscard]] std::vector<int> hbar_powers() const {
        std::vector<int> hs;
        for (const auto& [k, c] : terms_) {
            auto h = hbar_power(k);
            if (!h) throw std::logic_error("OperatorExpr: term not graded-homogeneous");
            if (std::find(hs.begin(), hs.end(), *h) == hs.end()) hs.push_back(*h);
        }
        std::sort(hs.begin(), hs.end());
        return hs;
    }
    [[nodiscard]] OperatorExpr hbar_part(int h) const {
        OperatorExpr out(shift_);
        for (const auto& [k, c] : terms_)
            if (hbar_power(k) == h) out.terms_.emplace(k, c);
        return out;
    }
    [[nodiscard]] int max_t_shift() const {
        int s = shift_;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            s = first ? k.t_shift() : std::max(s, k.t_shift());
            first = false;
        }
        return s;
    }
    [[nodiscard]] int min_t_shift() const {
        int s = shift_;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            s = first ? k.t_shift() : std::min(s, k.t_shift());
            first = false;
        }
        return s;
    }
    [[nodiscard]] int max_deriv_weight() const {
        int w = 0;
        for (const auto& [k, c] : terms_) w = std::max(w, k.deriv_weight());
        return w;
    }

    // Drops terms whose derivatives cannot act below weight w.
    [[nodiscard]] OperatorExpr restricted_to(int w) const {
        OperatorExpr out(shift_);
        for (const auto& [k, c] : terms_)
            if (k.deriv_weight() <= w) out.terms_.emplace(k, c);
        return out;
    }

    OperatorExpr& operator+=(const OperatorExpr& o) {
        if (terms_.empty() && !o.terms_.empty()) shift_ = o.shift_;
        for (const auto& [k, c] : o.terms_) add_key(k, c);
        return *this;
    }
    OperatorExpr& operator-=(const OperatorExpr& o) {
        if (terms_.empty() && !o.terms_.empty()) shift_ = o.shift_;
        for (const auto& [k, c] : o.terms_) add_key(k, -c);
        return *this;
    }
    OperatorExpr& operator*=(const C& s) {
        for (auto it = terms_.begin(); it != terms_.end();) {
            it->second = it->second * s;
            it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
        }
        return *this;
    }
    friend OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) { return a += b; }
    friend OperatorExpr operator-(OperatorExpr a, const OperatorExpr& b) { return a -= b; }
    friend OperatorExpr operator*(const C& s, OperatorExpr a) { return a *= s; }
    friend OperatorExpr operator*(OperatorExpr a, const C& s) { return a *= s; }

    // Left multiplication by c * t_a (stays normal-ordered).
    [[nodiscard]] OperatorExpr times_var(int a, const C& c = C(1)) const {
        OperatorExpr out(shift_ + a);
        for (const auto& [k, v] : terms_) {
            auto m = k.mults;
            m.push_back(a);
            out.add_term(v * c, std::move(m), k.derivs);
        }
        return out;
    }

    // Equality of term maps; the declared shift only matters for nonzero operators.
    friend bool operator==(const OperatorExpr& a, const OperatorExpr& b) {
        if (a.terms_ != b.terms_) return false;
        return a.terms_.empty() || a.shift_ == b.shift_;
    }

    // Canonical dump: one term per line, sorted by (multiplications, derivatives).
    [[nodiscard]] std::string to_text() const {
        std::vector<std::pair<TermKey, const C*>> rows;
        for (const auto& [k, c] : terms_) rows.emplace_back(k, &c);
        std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
            if (x.first.mults != y.first.mults) return x.first.mults < y.first.mults;
            return x.first.derivs < y.first.derivs;
        });
        std::ostringstream os;
        os << "# weight_shift " << shift_ << "\n";
        for (const auto& [k, c] : rows) {
            os << "[" << c->to_string() << "]";
            for (int a : k.mults) os << " t" << a;
            os << " |";
            for (int b : k.derivs) os << " d" << b;
            os << "\n";
        }
        return os.str();
    }

private:
    void add_key(const TermKey& k, const C& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    TermMap terms_;
    int shift_ = 0;
};

using Operator = OperatorExpr<NPoly>;
using SurdOperator = OperatorExpr<Surd>;

// Strips the surd basis; throws if any sqrt2, sqrt3 or sqrt6 part survives.
inline Operator rationalize(const SurdOperator& op) {
    Operator out(op.weight_shift());
    for (const auto& [k, c] : op.terms()) {
        if (!c.is_rational())
            throw std::domain_error("rationalize: irrational coefficient " + c.to_string() + " survives");
        out.add_term(c.rational_part(), k.mults, k.derivs);
    }
    return out;
}

inline SurdOperator to_surd(const Operator& op) {
    SurdOperator out(op.weight_shift());
    for (const auto& [k, c] : op.terms()) out.add_term(Surd(c), k.mults, k.derivs);
    return out;
}

inline Operator eval_N(const Operator& op, const Rational& n) {
    Operator out(op.weight_shift());
    for (const auto& [k, c] : op.terms()) out.add_term(NPoly(c.eval(n)), k.mults, k.derivs);
    return out;
}

namespace detail {

struct CompiledGroup {
    std::vector<std::pair<int, int>> derivs;  // (variable, multiplicity)
    std::vector<std::pair<TMonomial, const NPoly*>> products;
};

inline std::vector<CompiledGroup> compile(const Operator& op) {
    std::vector<CompiledGroup> groups;
    const std::vector<int>* current = nullptr;
    for (const auto& [k, c] : op.terms()) {
        if (current == nullptr || *current != k.derivs) {
            CompiledGroup g;
            for (int b : k.derivs) {
                if (!g.derivs.empty() && g.derivs.back().first == b) ++g.derivs.back().second;
                else g.derivs.emplace_back(b, 1);
            }
            groups.push_back(std::move(g));
            current = &k.derivs;
        }
        TMonomial m;
        for (int a : k.mults) m.multiply_var(a, 1);
        groups.back().products.emplace_back(std::move(m), &c);
    }
    return groups;
}

inline void apply_monomial(const std::vector<CompiledGroup>& groups, const TMonomial& mono, const NPoly& coeff,
                           TPolynomial& out) {
    for (const auto& g : groups) {
        TMonomial reduced = mono;
        long factor = 1;
        bool alive = true;
        for (auto [b, r] : g.derivs) {
            int e = reduced.exponent(b);
            if (e < r) {
                alive = false;
                break;
            }
            for (int i = 0; i < r; ++i) factor *= (e - i);
            reduced.multiply_var(b, -r);
        }
        if (!alive) continue;
        NPoly base = coeff * Rational(factor);
        for (const auto& [m, c] : g.products) out.add(m * reduced, base * *c);
    }
}

}  // namespace detail

// Exact action on p (derivatives first, then multiplications), optionally
// truncated to weight max_weight. Exact whenever op was built with a cutoff
// at least p.max_weight().
inline TPolynomial apply(const Operator& op, const TPolynomial& p, std::optional<int> max_weight = std::nullopt) {
    auto groups = detail::compile(op);
    std::vector<std::pair<const TMonomial*, const NPoly*>> items;
    items.reserve(p.size());
    for (const auto& [m, c] : p.terms()) items.emplace_back(&m, &c);
    auto partial = parallel_chunks<TPolynomial>(items.size(), [&](std::size_t b, std::size_t e, std::size_t) {
        auto local = TPolynomial::bounded(max_weight);
        for (std::size_t i = b; i < e; ++i) detail::apply_monomial(groups, *items[i].first, *items[i].second, local);
        return local;
    });
    auto out = TPolynomial::bounded(max_weight);
    for (auto& part : partial) out += part;
    return out;
}

inline TPolynomial apply(const Operator& op, const TMonomial& m, std::optional<int> max_weight = std::nullopt) {
    return apply(op, TPolynomial(m), max_weight);
}

// Weyl-algebra composition A*B re-normal-ordered: d_a t_a = t_a d_a + 1.
template <class C>
OperatorExpr<C> compose(const OperatorExpr<C>& a, const OperatorExpr<C>& b) {
    OperatorExpr<C> out(a.weight_shift() + b.weight_shift());
    for (const auto& [ka, ca] : a.terms()) {
        for (const auto& [kb, cb] : b.terms()) {
            // Move each multiplication of B left through A's derivatives.
            std::map<TermKey, C> partial{{TermKey{ka.mults, ka.derivs}, ca * cb}};
            for (int t : kb.mults) {
                std::map<TermKey, C> next;
                auto put = [&next](TermKey k, const C& c) {
                    std::sort(k.mults.begin(), k.mults.end());
                    auto [it, ins] = next.try_emplace(std::move(k), c);
                    if (!ins) it->second += c;
                };
                for (const auto& [k, c] : partial) {
                    TermKey moved = k;
                    moved.mults.push_back(t);
                    put(moved, c);
                    long r = std::count(k.derivs.begin(), k.derivs.end(), t);
                    if (r > 0) {
                        TermKey contracted = k;
                        contracted.derivs.erase(std::find(contracted.derivs.begin(), contracted.derivs.end(), t));
                        put(contracted, c * C(Rational(r)));
                    }
                }
                partial = std::move(next);
            }
            for (const auto& [k, c] : partial) {
                auto d = k.derivs;
                d.insert(d.end(), kb.derivs.begin(), kb.derivs.end());
                out.add_term(c, k.mults, d);
            }
        }
    }
    return out;
}

}  // namespace kptau
