#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kptau {

// Monomial prod_k t_k^{e_k} in the times t_1, t_2, ...; stored as sorted
// (k, e_k) pairs with e_k > 0. The weight sum_k k*e_k is cached.
class TMonomial {
public:
    using Factor = std::pair<int, int>;  // (variable index, exponent)

    TMonomial() = default;
    TMonomial(std::initializer_list<Factor> factors) {
        for (auto [k, e] : factors) multiply_var(k, e);
    }

    static TMonomial var(int k, int e = 1) {
        TMonomial m;
        m.multiply_var(k, e);
        return m;
    }

    [[nodiscard]] int weight() const { return weight_; }
    [[nodiscard]] bool is_one() const { return factors_.empty(); }
    [[nodiscard]] const std::vector<Factor>& factors() const { return factors_; }
    [[nodiscard]] int degree() const {
        int d = 0;
        for (auto [k, e] : factors_) d += e;
        return d;
    }
    [[nodiscard]] int exponent(int k) const {
        auto it = std::lower_bound(factors_.begin(), factors_.end(), Factor{k, 0},
                                   [](const Factor& a, const Factor& b) { return a.first < b.first; });
        return (it != factors_.end() && it->first == k) ? it->second : 0;
    }
    [[nodiscard]] int max_variable() const { return factors_.empty() ? 0 : factors_.back().first; }

    // Multiplies by t_k^e; e may be negative as long as the result stays a monomial.
    void multiply_var(int k, int e) {
        if (k < 1) throw std::invalid_argument("TMonomial: variable index must be >= 1");
        if (e == 0) return;
        auto it = std::lower_bound(factors_.begin(), factors_.end(), Factor{k, 0},
                                   [](const Factor& a, const Factor& b) { return a.first < b.first; });
        if (it != factors_.end() && it->first == k) {
            it->second += e;
            if (it->second < 0) throw std::invalid_argument("TMonomial: negative exponent");
            if (it->second == 0) factors_.erase(it);
        } else {
            if (e < 0) throw std::invalid_argument("TMonomial: negative exponent");
            factors_.insert(it, Factor{k, e});
        }
        weight_ += k * e;
    }

    friend TMonomial operator*(const TMonomial& a, const TMonomial& b) {
        TMonomial out;
        out.factors_.reserve(a.factors_.size() + b.factors_.size());
        auto i = a.factors_.begin();
        auto j = b.factors_.begin();
        while (i != a.factors_.end() || j != b.factors_.end()) {
            if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) {
                out.factors_.push_back(*i++);
            } else if (i == a.factors_.end() || j->first < i->first) {
                out.factors_.push_back(*j++);
            } else {
                out.factors_.emplace_back(i->first, i->second + j->second);
                ++i;
                ++j;
            }
        }
        out.weight_ = a.weight_ + b.weight_;
        return out;
    }

    friend bool operator==(const TMonomial& a, const TMonomial& b) { return a.factors_ == b.factors_; }

    // Canonical order: by weight, then lexicographically on the dense
    // exponent vector (e_1, e_2, ...).
    friend std::strong_ordering operator<=>(const TMonomial& a, const TMonomial& b) {
        if (auto c = a.weight_ <=> b.weight_; c != 0) return c;
        auto i = a.factors_.begin();
        auto j = b.factors_.begin();
        while (i != a.factors_.end() || j != b.factors_.end()) {
            if (i == a.factors_.end()) return std::strong_ordering::less;     // a has e=0 at j's var
            if (j == b.factors_.end()) return std::strong_ordering::greater;
            if (i->first != j->first)
                return i->first < j->first ? std::strong_ordering::greater : std::strong_ordering::less;
            if (i->second != j->second) return i->second <=> j->second;
            ++i;
            ++j;
        }
        return std::strong_ordering::equal;
    }

    // e.g. "t1^2*t3", or "1" for the empty monomial.
    [[nodiscard]] std::string to_string() const {
        if (factors_.empty()) return "1";
        std::string out;
        for (auto [k, e] : factors_) {
            if (!out.empty()) out += "*";
            out += "t" + std::to_string(k);
            if (e != 1) out += "^" + std::to_string(e);
        }
        return out;
    }

private:
    std::vector<Factor> factors_;
    int weight_ = 0;
};

// All monomials of exactly the given weight, in canonical order.
inline std::vector<TMonomial> monomials_of_weight(int w) {
    std::vector<TMonomial> out;
    std::vector<int> parts;
    // partitions of w into parts, largest part first, then converted to monomials
    auto rec = [&](auto&& self, int remaining, int max_part) -> void {
        if (remaining == 0) {
            TMonomial m;
            for (int p : parts) m.multiply_var(p, 1);
            out.push_back(std::move(m));
            return;
        }
        for (int p = std::min(remaining, max_part); p >= 1; --p) {
            parts.push_back(p);
            self(self, remaining - p, p);
            parts.pop_back();
        }
    };
    if (w >= 0) rec(rec, w, w);
    std::sort(out.begin(), out.end());
    return out;
}

// All monomials of weight <= w, in canonical order.
inline std::vector<TMonomial> monomial_basis(int max_weight) {
    std::vector<TMonomial> out;
    for (int w = 0; w <= max_weight; ++w) {
        auto layer = monomials_of_weight(w);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

}  // namespace kptau
