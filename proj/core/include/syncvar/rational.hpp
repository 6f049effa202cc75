#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

#include "syncvar/errors.hpp"

namespace syncvar {

// Arbitrary-precision rational, always kept in lowest terms with a
// positive denominator.  Thin wrapper over GMP's mpq_class adding exact
// string parsing ("p/q", integer, or decimal forms), hashing, and
// throwing division.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}               // NOLINT: implicit by design
    Rational(long num, long den);
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    explicit Rational(const mpz_class& num, const mpz_class& den);

    // Accepts "7", "-3/4", "0.45", "+1.25".  Exact: decimal digits become
    // a power-of-ten denominator.  Throws ValidationError on anything else.
    static Rational parse(std::string_view text);

    const mpq_class& raw() const { return v_; }
    mpq_class& raw() { return v_; }
    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational abs() const { return Rational(mpq_class(::abs(v_))); }
    Rational inverse() const;
    Rational pow(unsigned long e) const;

    double to_double() const { return v_.get_d(); }
    // "p/q" when the denominator is not 1, plain integer otherwise.
    std::string str() const;
    // Shortest decimal rendering with the given significant digits.
    std::string decimal_str(int significant_digits = 15) const;

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) != 0; }
    friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) >= 0; }

    std::size_t hash() const;

private:
    mpq_class v_;
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

} // namespace syncvar

template <>
struct std::hash<syncvar::Rational> {
    std::size_t operator()(const syncvar::Rational& r) const { return r.hash(); }
};
