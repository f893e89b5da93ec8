#pragma once

#include "kptau/monomial.hpp"
#include "kptau/npoly.hpp"

#include <map>
#include <optional>
#include <string>

namespace kptau {

// Sparse polynomial in t_1, t_2, ... with NPoly coefficients. Zero
// coefficients are never stored. An optional weight bound drops every
// monomial heavier than the bound as it is inserted.
class TPolynomial {
public:
    using TermMap = std::map<TMonomial, NPoly>;

    TPolynomial() = default;
    static TPolynomial bounded(std::optional<int> weight_bound) {
        TPolynomial p;
        p.bound_ = weight_bound;
        return p;
    }
    TPolynomial(const NPoly& c) { add(TMonomial{}, c); }  // NOLINT(google-explicit-constructor)
    TPolynomial(const TMonomial& m, const NPoly& c = NPoly(1)) { add(m, c); }

    static TPolynomial one() { return TPolynomial(NPoly(1)); }

    [[nodiscard]] const TermMap& terms() const { return terms_; }
    [[nodiscard]] std::optional<int> weight_bound() const { return bound_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }

    [[nodiscard]] NPoly coefficient(const TMonomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? NPoly{} : it->second;
    }

    void add(const TMonomial& m, const NPoly& c) {
        if (c.is_zero()) return;
        if (bound_ && m.weight() > *bound_) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    // Largest weight present, or -1 for the zero polynomial.
    [[nodiscard]] int max_weight() const {
        int w = -1;
        for (const auto& [m, c] : terms_) w = std::max(w, m.weight());
        return w;
    }
    [[nodiscard]] bool is_homogeneous(int w) const {
        for (const auto& [m, c] : terms_)
            if (m.weight() != w) return false;
        return true;
    }

    [[nodiscard]] TPolynomial truncated(int w) const {
        auto out = TPolynomial::bounded(w);
        for (const auto& [m, c] : terms_) out.add(m, c);
        return out;
    }
    [[nodiscard]] TPolynomial weight_part(int w) const {
        TPolynomial out;
        for (const auto& [m, c] : terms_)
            if (m.weight() == w) out.add(m, c);
        return out;
    }

    TPolynomial& operator+=(const TPolynomial& o) {
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    TPolynomial& operator-=(const TPolynomial& o) {
        for (const auto& [m, c] : o.terms_) add(m, -c);
        return *this;
    }
    TPolynomial& operator*=(const NPoly& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto it = terms_.begin(); it != terms_.end();) {
            it->second *= s;
            it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
        }
        return *this;
    }
    friend TPolynomial operator+(TPolynomial a, const TPolynomial& b) { return a += b; }
    friend TPolynomial operator-(TPolynomial a, const TPolynomial& b) { return a -= b; }
    friend TPolynomial operator-(TPolynomial a) { return a *= NPoly(-1); }
    friend TPolynomial operator*(TPolynomial a, const NPoly& s) { return a *= s; }
    friend TPolynomial operator*(const NPoly& s, TPolynomial a) { return a *= s; }

    friend bool operator==(const TPolynomial& a, const TPolynomial& b) { return a.terms_ == b.terms_; }

    [[nodiscard]] std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += "(" + c.to_string() + ")";
            if (!m.is_one()) out += "*" + m.to_string();
        }
        return out;
    }

private:
    TermMap terms_;
    std::optional<int> bound_;
};

// Product with every monomial of weight > max_weight dropped.
inline TPolynomial mul_truncated(const TPolynomial& a, const TPolynomial& b, int max_weight) {
    auto out = TPolynomial::bounded(max_weight);
    for (const auto& [ma, ca] : a.terms()) {
        if (ma.weight() > max_weight) continue;
        for (const auto& [mb, cb] : b.terms()) {
            if (ma.weight() + mb.weight() > max_weight) continue;
            out.add(ma * mb, ca * cb);
        }
    }
    return out;
}

inline TPolynomial operator*(const TPolynomial& a, const TPolynomial& b) {
    TPolynomial out;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) out.add(ma * mb, ca * cb);
    return out;
}

// Every NPoly coefficient evaluated at N = n (result has constant coefficients).
inline TPolynomial eval_N(const TPolynomial& p, const Rational& n) {
    auto out = TPolynomial::bounded(p.weight_bound());
    for (const auto& [m, c] : p.terms()) out.add(m, NPoly(c.eval(n)));
    return out;
}

}  // namespace kptau
