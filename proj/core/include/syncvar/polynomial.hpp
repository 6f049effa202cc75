#pragma once

#include <string>
#include <vector>

#include "syncvar/rational.hpp"

namespace syncvar {

// Dense univariate polynomial with exact rational coefficients.
// Invariant: coefficient list is empty (the zero polynomial) or ends with
// a nonzero leading coefficient.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs);
    static Polynomial constant(Rational c);
    static Polynomial monomial(Rational coeff, int degree);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    Rational coeff(int i) const;
    const std::vector<Rational>& coeffs() const { return c_; }

    Rational eval(const Rational& x) const;
    Polynomial derivative() const;

    Polynomial operator-() const;
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial scaled(const Rational& s) const;

    // Coefficient equality; the trimmed representation is canonical.
    bool operator==(const Polynomial& o) const { return c_ == o.c_; }

    // Exact division; throws InternalError when the remainder is nonzero.
    Polynomial divided_by(const Polynomial& d) const;
    // Divide out (x - r); r must be a root.
    Polynomial deflate_root(const Rational& r) const;

    // Integer primitive form with positive leading coefficient (unique
    // representative up to sign of the rational scaling class).
    Polynomial normalized() const;
    // Multiplicity of the root at 0.
    int trailing_zero_order() const;
    Polynomial strip_zero_roots() const;

    std::string str(const std::string& var = "g") const;

private:
    void trim();
    std::vector<Rational> c_;
};

Polynomial poly_gcd(Polynomial a, Polynomial b);
Polynomial square_free_part(const Polynomial& p);

// Certified root bracket: the polynomial has exactly one root in [lo, hi];
// either lo == hi (exact rational root) or the signs at lo and hi differ.
struct RootEnclosure {
    Rational lo, hi;
    bool exact = false;
    Rational mid() const { return (lo + hi) * Rational(1, 2); }
};

// Isolates all real roots in the open window (lo, hi) by sign-variation
// bisection on the square-free part and refines each bracket below
// max_width.  Roots exactly at the window ends are excluded.
std::vector<RootEnclosure> isolate_roots(const Polynomial& p, const Rational& window_lo,
                                         const Rational& window_hi,
                                         const Rational& max_width = Rational(1, 1000000000000L));

// Quotient of two polynomials in the formal variable; no common-factor
// cancellation is attempted (numerators stay small here).
struct RationalFunction {
    Polynomial num;
    Polynomial den = Polynomial::constant(Rational(1));

    static RationalFunction from_poly(Polynomial p) { return {std::move(p), Polynomial::constant(Rational(1))}; }

    Rational eval(const Rational& x) const;
    bool defined_at(const Rational& x) const { return !den.eval(x).is_zero(); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend bool operator==(const RationalFunction& a, const RationalFunction& b);
};

} // namespace syncvar
