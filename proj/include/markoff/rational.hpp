#ifndef MARKOFF_RATIONAL_HPP
#define MARKOFF_RATIONAL_HPP

#include <string>

#include "markoff/intops.hpp"

namespace markoff {

// Exact rational on checked 128-bit integers, always stored reduced with den > 0.
// All operations throw OverflowError rather than wrapping.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(i128 n) : num_(n), den_(1) {}  // NOLINT: implicit by design
    Rational(i128 n, i128 d) : num_(n), den_(d) { normalize(); }

    i128 num() const { return num_; }
    i128 den() const { return den_; }

    Rational operator+(const Rational& o) const {
        return Rational(checked_add(checked_mul(num_, o.den_), checked_mul(o.num_, den_)),
                        checked_mul(den_, o.den_));
    }
    Rational operator-(const Rational& o) const {
        return Rational(checked_sub(checked_mul(num_, o.den_), checked_mul(o.num_, den_)),
                        checked_mul(den_, o.den_));
    }
    Rational operator*(const Rational& o) const {
        return Rational(checked_mul(num_, o.num_), checked_mul(den_, o.den_));
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::invalid_argument("rational division by zero");
        return Rational(checked_mul(num_, o.den_), checked_mul(den_, o.num_));
    }
    Rational operator-() const { return Rational(-num_, den_); }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const {
        return checked_mul(num_, o.den_) < checked_mul(o.num_, den_);
    }
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    bool is_zero() const { return num_ == 0; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    // "num/den", or just "num" for integers; the CSV/JSON rational format.
    std::string str() const {
        if (den_ == 1) return to_string_i128(num_);
        return to_string_i128(num_) + "/" + to_string_i128(den_);
    }

    static Rational parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(parse_i128(s));
        return Rational(parse_i128(s.substr(0, slash)), parse_i128(s.substr(slash + 1)));
    }

    // p^e for e of either sign.
    static Rational pow_int(i128 base, int exp) {
        Rational r(1);
        Rational b = exp >= 0 ? Rational(base) : Rational(1, base);
        int e = exp >= 0 ? exp : -exp;
        for (int i = 0; i < e; ++i) r *= b;
        return r;
    }

private:
    void normalize() {
        if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
        if (den_ < 0) {
            num_ = checked_neg(num_);
            den_ = checked_neg(den_);
        }
        i128 a = iabs(num_), b = den_;
        while (b) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            num_ /= a;
            den_ /= a;
        }
        if (num_ == 0) den_ = 1;
    }

    i128 num_;
    i128 den_;
};

}  // namespace markoff

#endif
