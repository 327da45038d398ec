#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace obs {

// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(int v) : q_(v) {}   // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    // Accepts "a/b" or "a" (optionally signed). Throws std::invalid_argument
    // on malformed text or a zero denominator.
    static Rational parse(std::string_view text);

    const mpq_class& raw() const { return q_; }
    mpz_class num() const { return q_.get_num(); }
    mpz_class den() const { return q_.get_den(); }

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    double to_double() const { return q_.get_d(); }

    // "a/b" always, including integers ("1/1"). Used for serialization.
    std::string to_fraction() const;
    // "a/b", or "a" when the denominator is 1. Used for display.
    std::string to_string() const;
    // Decimal rendering with a fixed number of digits after the point.
    std::string to_decimal(int digits = 6) const;

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    mpq_class q_{0};
};

Rational abs(const Rational& r);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

}  // namespace obs
