#include "obs/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace obs {

Rational::Rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

namespace {

bool valid_integer(std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
    auto slash = text.find('/');
    std::string_view n = text.substr(0, slash);
    std::string_view d = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!valid_integer(n, true) || !valid_integer(d, false))
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    std::string ns(n);
    if (ns[0] == '+') ns.erase(0, 1);
    mpz_class num(ns, 10), den(std::string(d), 10);
    if (den == 0) throw std::invalid_argument("rational '" + std::string(text) + "' has zero denominator");
    Rational r;
    r.q_ = mpq_class(num, den);
    r.q_.canonicalize();
    return r;
}

std::string Rational::to_fraction() const {
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::to_string() const {
    if (is_integer()) return q_.get_num().get_str();
    return to_fraction();
}

std::string Rational::to_decimal(int digits) const {
    mpz_class scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    mpq_class scaled = q_ * scale;
    bool neg = sgn(scaled) < 0;
    mpq_class a = neg ? mpq_class(-scaled) : scaled;
    // round half up on the magnitude
    mpz_class n = (a.get_num() * 2 + a.get_den()) / (a.get_den() * 2);
    std::string s = n.get_str();
    if (digits > 0) {
        if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, digits + 1 - s.size(), '0');
        s.insert(s.size() - digits, ".");
    }
    if (neg && n != 0) s.insert(0, "-");
    return s;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero rational");
    q_ /= o.q_;
    return *this;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace obs
