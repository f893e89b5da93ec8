#pragma once

#include "kptau/rational.hpp"

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace kptau {

// Polynomial in the deformation parameter N with rational coefficients.
// coeffs_[i] is the coefficient of N^i; trailing zeros are never stored.
class NPoly {
public:
    static constexpr int zero_degree = -1;

    NPoly() = default;
    NPoly(const Rational& c) : coeffs_{c} { trim(); }  // NOLINT(google-explicit-constructor)
    NPoly(long c) : NPoly(Rational(c)) {}              // NOLINT
    NPoly(int c) : NPoly(Rational(c)) {}               // NOLINT
    NPoly(std::initializer_list<Rational> cs) : coeffs_(cs) { trim(); }
    explicit NPoly(std::vector<Rational> cs) : coeffs_(std::move(cs)) { trim(); }

    // c * N^k
    static NPoly monomial(const Rational& c, int k) {
        std::vector<Rational> cs(static_cast<std::size_t>(k) + 1);
        cs[static_cast<std::size_t>(k)] = c;
        return NPoly(std::move(cs));
    }
    static NPoly n() { return monomial(1, 1); }

    [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
    [[nodiscard]] bool is_constant() const { return coeffs_.size() <= 1; }
    [[nodiscard]] const std::vector<Rational>& coefficients() const { return coeffs_; }
    [[nodiscard]] Rational coefficient(int k) const {
        if (k < 0 || k > degree()) return Rational(0);
        return coeffs_[static_cast<std::size_t>(k)];
    }
    [[nodiscard]] Rational constant_term() const { return coefficient(0); }

    [[nodiscard]] Rational eval(const Rational& n) const {
        Rational acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc *= n;
            acc += *it;
        }
        return acc;
    }

    NPoly& operator+=(const NPoly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        trim();
        return *this;
    }
    NPoly& operator-=(const NPoly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        trim();
        return *this;
    }
    NPoly& operator*=(const Rational& r) {
        if (r.is_zero()) {
            coeffs_.clear();
            return *this;
        }
        for (auto& c : coeffs_) c *= r;
        return *this;
    }
    NPoly& operator*=(const NPoly& o) { return *this = *this * o; }

    friend NPoly operator+(NPoly a, const NPoly& b) { return a += b; }
    friend NPoly operator-(NPoly a, const NPoly& b) { return a -= b; }
    friend NPoly operator-(NPoly a) {
        for (auto& c : a.coeffs_) c = -c;
        return a;
    }
    friend NPoly operator*(NPoly a, const Rational& r) { return a *= r; }
    friend NPoly operator*(const Rational& r, NPoly a) { return a *= r; }
    friend NPoly operator*(const NPoly& a, const NPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return NPoly(std::move(out));
    }

    friend bool operator==(const NPoly& a, const NPoly& b) { return a.coeffs_ == b.coeffs_; }

    // Human-readable form, e.g. "1/8 + 3/2*N^2".
    [[nodiscard]] std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        for (int k = 0; k <= degree(); ++k) {
            const Rational& c = coeffs_[static_cast<std::size_t>(k)];
            if (c.is_zero()) continue;
            std::string term;
            if (k == 0) {
                term = c.to_string();
            } else {
                if (c == Rational(1)) term = "";
                else if (c == Rational(-1)) term = "-";
                else term = c.to_string() + "*";
                term += k == 1 ? "N" : "N^" + std::to_string(k);
            }
            if (out.empty()) out = term;
            else if (term.front() == '-') out += " - " + term.substr(1);
            else out += " + " + term;
        }
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const NPoly& p) { return os << p.to_string(); }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

}  // namespace kptau
