#pragma once

#include "kptau/npoly.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace kptau {

// Element of Q(sqrt2, sqrt3)[N], stored on the basis {1, sqrt2, sqrt3, sqrt6}.
// Holds the irrational normalisations of the free-field currents; every
// operator that acts on the tau-function must come out with zero surd parts.
class Surd {
public:
    enum Basis { one = 0, sqrt2 = 1, sqrt3 = 2, sqrt6 = 3 };

    Surd() = default;
    Surd(const NPoly& rational_part) { parts_[one] = rational_part; }  // NOLINT
    Surd(const Rational& r) : Surd(NPoly(r)) {}                        // NOLINT
    Surd(long r) : Surd(Rational(r)) {}                                // NOLINT
    Surd(int r) : Surd(Rational(r)) {}                                 // NOLINT

    static Surd basis(Basis b, const NPoly& c = NPoly(1)) {
        Surd s;
        s.parts_[b] = c;
        return s;
    }

    // Exact square root of a positive rational whose square-free part divides 6.
    static Surd sqrt_of(const Rational& r) {
        if (r.sign() <= 0) throw std::domain_error("Surd::sqrt_of: non-positive argument");
        // sqrt(p/q) = sqrt(p*q)/q
        mpz_class pq = r.numerator() * r.denominator();
        mpz_class root_part = 1;
        mpz_class rest = pq;
        for (unsigned long f = 2; f * f <= rest; ++f) {
            while (mpz_divisible_ui_p(rest.get_mpz_t(), f * f)) {
                rest /= f * f;
                root_part *= f;
            }
        }
        Basis b;
        if (rest == 1) b = one;
        else if (rest == 2) b = sqrt2;
        else if (rest == 3) b = sqrt3;
        else if (rest == 6) b = sqrt6;
        else throw std::domain_error("Surd::sqrt_of: square-free part outside {1,2,3,6} for " + r.to_string());
        return basis(b, NPoly(Rational(root_part, r.denominator())));
    }

    [[nodiscard]] const NPoly& part(Basis b) const { return parts_[b]; }
    [[nodiscard]] bool is_zero() const {
        return parts_[0].is_zero() && parts_[1].is_zero() && parts_[2].is_zero() && parts_[3].is_zero();
    }
    [[nodiscard]] bool is_rational() const {
        return parts_[sqrt2].is_zero() && parts_[sqrt3].is_zero() && parts_[sqrt6].is_zero();
    }
    [[nodiscard]] const NPoly& rational_part() const { return parts_[one]; }

    Surd& operator+=(const Surd& o) {
        for (int i = 0; i < 4; ++i) parts_[i] += o.parts_[i];
        return *this;
    }
    Surd& operator-=(const Surd& o) {
        for (int i = 0; i < 4; ++i) parts_[i] -= o.parts_[i];
        return *this;
    }
    friend Surd operator+(Surd a, const Surd& b) { return a += b; }
    friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
    friend Surd operator-(Surd a) {
        for (auto& p : a.parts_) p = -p;
        return a;
    }

    friend Surd operator*(const Surd& a, const Surd& b) {
        // sqrt(i)*sqrt(j) = factor * sqrt(k), basis indices as bit masks {sqrt2 -> 1, sqrt3 -> 2}
        Surd out;
        for (int i = 0; i < 4; ++i) {
            if (a.parts_[i].is_zero()) continue;
            for (int j = 0; j < 4; ++j) {
                if (b.parts_[j].is_zero()) continue;
                int k = i ^ j;
                long factor = 1;
                if ((i & j & 1) != 0) factor *= 2;
                if ((i & j & 2) != 0) factor *= 3;
                out.parts_[k] += (a.parts_[i] * b.parts_[j]) * Rational(factor);
            }
        }
        return out;
    }
    Surd& operator*=(const Surd& o) { return *this = *this * o; }

    friend bool operator==(const Surd& a, const Surd& b) { return a.parts_ == b.parts_; }

    [[nodiscard]] std::string to_string() const {
        static const char* names[4] = {"", "sqrt2", "sqrt3", "sqrt6"};
        std::string out;
        for (int i = 0; i < 4; ++i) {
            if (parts_[i].is_zero()) continue;
            std::string t = "(" + parts_[i].to_string() + ")";
            if (i != 0) t += "*" + std::string(names[i]);
            out += out.empty() ? t : " + " + t;
        }
        return out.empty() ? "0" : out;
    }

private:
    std::array<NPoly, 4> parts_{};
};

}  // namespace kptau
