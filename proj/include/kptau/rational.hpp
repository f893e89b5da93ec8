#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kptau {

// Exact rational number backed by GMP. Always kept in lowest terms with a
// positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(int v) : v_(static_cast<long>(v)) {}  // NOLINT
    Rational(long num, long den) : v_(num, den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }
    explicit Rational(const mpz_class& num, const mpz_class& den = 1) : v_(num, den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_.canonicalize();
    }

    // Accepts "p" or "p/q" with optional leading sign.
    static Rational parse(std::string_view text) {
        std::string s(text);
        if (s.empty()) throw std::invalid_argument("Rational: empty string");
        auto slash = s.find('/');
        mpz_class num, den = 1;
        auto read = [](const std::string& part, mpz_class& out) {
            if (part.empty() || out.set_str(part, 10) != 0)
                throw std::invalid_argument("Rational: malformed integer '" + part + "'");
        };
        if (slash == std::string::npos) {
            read(s, num);
        } else {
            read(s.substr(0, slash), num);
            read(s.substr(slash + 1), den);
        }
        if (den == 0) throw std::invalid_argument("Rational: zero denominator in '" + s + "'");
        return Rational(num, den);
    }

    [[nodiscard]] std::string to_string() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    [[nodiscard]] const mpq_class& value() const { return v_; }
    [[nodiscard]] mpz_class numerator() const { return v_.get_num(); }
    [[nodiscard]] mpz_class denominator() const { return v_.get_den(); }
    [[nodiscard]] bool is_zero() const { return sgn(v_) == 0; }
    [[nodiscard]] int sign() const { return sgn(v_); }
    [[nodiscard]] bool is_integer() const { return v_.get_den() == 1; }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    mpq_class v_{0};
};

inline Rational factorial(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(f);
}

inline Rational pow(const Rational& base, int exp) {
    Rational r(1);
    Rational b = exp < 0 ? Rational(1) / base : base;
    for (int i = 0; i < (exp < 0 ? -exp : exp); ++i) r *= b;
    return r;
}

}  // namespace kptau
