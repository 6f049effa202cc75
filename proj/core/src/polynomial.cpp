#include "syncvar/polynomial.hpp"

#include <algorithm>
#include <sstream>

#include "syncvar/errors.hpp"

namespace syncvar {

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(Rational c) {
    Polynomial p;
    if (!c.is_zero()) p.c_.push_back(std::move(c));
    return p;
}

Polynomial Polynomial::monomial(Rational coeff, int degree) {
    if (degree < 0) throw InternalError("monomial degree must be nonnegative");
    Polynomial p;
    if (coeff.is_zero()) return p;
    p.c_.assign(static_cast<size_t>(degree) + 1, Rational(0));
    p.c_.back() = std::move(coeff);
    return p;
}

void Polynomial::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rational Polynomial::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return Rational(0);
    return c_[static_cast<size_t>(i)];
}

Rational Polynomial::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<Rational> d;
    d.reserve(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Rational(static_cast<long>(i)));
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator-() const {
    Polynomial r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] = c[i] + a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] + b.c_[i];
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::scaled(const Rational& s) const {
    if (s.is_zero()) return Polynomial();
    Polynomial r = *this;
    for (auto& c : r.c_) c = c * s;
    return r;
}

Polynomial Polynomial::divided_by(const Polynomial& d) const {
    if (d.is_zero()) throw InternalError("polynomial division by zero");
    std::vector<Rational> rem = c_;
    const int dn = d.degree();
    const int qn = degree() - dn;
    if (qn < 0) {
        if (!is_zero()) throw InternalError("polynomial division left a remainder");
        return Polynomial();
    }
    std::vector<Rational> q(static_cast<size_t>(qn) + 1, Rational(0));
    for (int k = qn; k >= 0; --k) {
        Rational f = rem[static_cast<size_t>(k + dn)] / d.c_.back();
        q[static_cast<size_t>(k)] = f;
        if (f.is_zero()) continue;
        for (int j = 0; j <= dn; ++j)
            rem[static_cast<size_t>(k + j)] = rem[static_cast<size_t>(k + j)] - f * d.c_[static_cast<size_t>(j)];
    }
    for (const auto& r : rem)
        if (!r.is_zero()) throw InternalError("polynomial division left a remainder");
    return Polynomial(std::move(q));
}

Polynomial Polynomial::deflate_root(const Rational& r) const {
    return divided_by(Polynomial({-r, Rational(1)}));
}

Polynomial Polynomial::normalized() const {
    if (is_zero()) return Polynomial();
    // Common denominator, then divide out the integer content.
    mpz_class den_lcm = 1;
    for (const auto& c : c_) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.den().get_mpz_t());
    mpz_class content = 0;
    std::vector<mpz_class> ints;
    ints.reserve(c_.size());
    for (const auto& c : c_) {
        mpz_class v = c.num() * (den_lcm / c.den());
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
        ints.push_back(std::move(v));
    }
    if (ints.back() < 0) content = -content;
    std::vector<Rational> out;
    out.reserve(ints.size());
    for (auto& v : ints) out.emplace_back(mpq_class(v / content));
    return Polynomial(std::move(out));
}

int Polynomial::trailing_zero_order() const {
    if (is_zero()) return 0;
    int k = 0;
    while (c_[static_cast<size_t>(k)].is_zero()) ++k;
    return k;
}

Polynomial Polynomial::strip_zero_roots() const {
    int k = trailing_zero_order();
    if (k == 0) return *this;
    return Polynomial(std::vector<Rational>(c_.begin() + k, c_.end()));
}

std::string Polynomial::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rational& c = c_[static_cast<size_t>(i)];
        if (c.is_zero()) continue;
        Rational a = c.abs();
        if (first) {
            if (c.sign() < 0) os << "-";
            first = false;
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        bool unit = (a == Rational(1));
        if (i == 0 || !unit) os << a.str();
        if (i > 0) {
            if (!unit) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

Polynomial poly_gcd(Polynomial a, Polynomial b) {
    if (a.is_zero()) return b.is_zero() ? b : b.normalized();
    if (b.is_zero()) return a.normalized();
    a = a.normalized();
    b = b.normalized();
    while (!b.is_zero()) {
        // Remainder of a mod b, renormalized each round to keep the
        // coefficients small.
        std::vector<Rational> rem = a.coeffs();
        const int dn = b.degree();
        for (int k = a.degree() - dn; k >= 0; --k) {
            Rational f = rem[static_cast<size_t>(k + dn)] / b.coeff(dn);
            if (f.is_zero()) continue;
            for (int j = 0; j <= dn; ++j)
                rem[static_cast<size_t>(k + j)] = rem[static_cast<size_t>(k + j)] - f * b.coeff(j);
        }
        rem.resize(static_cast<size_t>(std::max(dn, 0)));
        Polynomial r{std::move(rem)};
        a = std::move(b);
        b = r.is_zero() ? r : r.normalized();
    }
    return a;
}

Polynomial square_free_part(const Polynomial& p) {
    if (p.is_zero()) return p;
    if (p.degree() == 0) return Polynomial::constant(Rational(1));
    Polynomial g = poly_gcd(p, p.derivative());
    return p.divided_by(g).normalized();
}

namespace {

// q(a + b*t), exact.
Polynomial compose_affine(const Polynomial& q, const Rational& a, const Rational& b) {
    Polynomial lin({a, b});
    Polynomial acc;
    for (int i = q.degree(); i >= 0; --i) acc = acc * lin + Polynomial::constant(q.coeff(i));
    return acc;
}

// Sign variations of the coefficients of (1+t)^n q(1/(1+t)), which bound the
// number of roots of q in the open unit interval (Descartes after the
// standard Moebius substitution).
int unit_interval_variation_bound(const Polynomial& q) {
    int n = q.degree();
    std::vector<Rational> rev(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) rev[static_cast<size_t>(n - i)] = q.coeff(i);
    // Taylor shift by 1 in place.
    for (int i = 0; i < n; ++i)
        for (int j = n - 1; j >= i; --j)
            rev[static_cast<size_t>(j)] = rev[static_cast<size_t>(j)] + rev[static_cast<size_t>(j + 1)];
    int variations = 0;
    int last = 0;
    for (const auto& c : rev) {
        int s = c.sign();
        if (s == 0) continue;
        if (last != 0 && s != last) ++variations;
        last = s;
    }
    return variations;
}

struct IsolationState {
    Polynomial q;   // square-free; discovered exact roots are deflated out
    std::vector<RootEnclosure> found;
    int nodes = 0;
};

void isolate_recursive(IsolationState& st, const Rational& lo, const Rational& hi) {
    if (++st.nodes > 100000) throw InternalError("root isolation did not terminate");
    Polynomial local = compose_affine(st.q, lo, hi - lo);
    int bound = unit_interval_variation_bound(local);
    if (bound == 0) return;
    if (bound == 1) {
        st.found.push_back({lo, hi, false});
        return;
    }
    Rational mid = (lo + hi) * Rational(1, 2);
    if (st.q.eval(mid).is_zero()) {
        st.found.push_back({mid, mid, true});
        // Subdivision endpoints become bracket endpoints, so the working
        // polynomial must stay nonzero there for the sign refinement below.
        st.q = st.q.deflate_root(mid);
    }
    isolate_recursive(st, lo, mid);
    isolate_recursive(st, mid, hi);
}

} // namespace

std::vector<RootEnclosure> isolate_roots(const Polynomial& p, const Rational& window_lo,
                                         const Rational& window_hi, const Rational& max_width) {
    if (p.is_zero()) throw InternalError("cannot isolate roots of the zero polynomial");
    if (!(window_lo < window_hi)) throw InternalError("root isolation window is empty");
    Polynomial q = square_free_part(p);
    if (q.degree() <= 0) return {};
    // Exclude roots sitting exactly on the window boundary.
    while (q.degree() > 0 && q.eval(window_lo).is_zero()) q = q.deflate_root(window_lo);
    while (q.degree() > 0 && q.eval(window_hi).is_zero()) q = q.deflate_root(window_hi);
    if (q.degree() <= 0) return {};

    IsolationState st{q, {}, 0};
    isolate_recursive(st, window_lo, window_hi);

    // Refine every open bracket by exact-sign bisection, against the working
    // polynomial (exact roots found along the way are already deflated out).
    for (auto& r : st.found) {
        if (r.exact) continue;
        int slo = st.q.eval(r.lo).sign();
        int shi = st.q.eval(r.hi).sign();
        if (slo == 0 || shi == 0 || slo == shi)
            throw InternalError("isolated bracket lost its sign change");
        while (max_width < r.hi - r.lo) {
            Rational mid = (r.lo + r.hi) * Rational(1, 2);
            int sm = st.q.eval(mid).sign();
            if (sm == 0) {
                r.lo = r.hi = mid;
                r.exact = true;
                break;
            }
            if (sm == slo)
                r.lo = mid;
            else
                r.hi = mid;
        }
    }
    std::sort(st.found.begin(), st.found.end(),
              [](const RootEnclosure& a, const RootEnclosure& b) { return a.lo < b.lo; });
    return st.found;
}

Rational RationalFunction::eval(const Rational& x) const {
    Rational d = den.eval(x);
    if (d.is_zero()) throw InternalError("rational function evaluated at a pole");
    return num.eval(x) / d;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return {a.num * b.num, a.den * b.den};
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return (a.num * b.den - b.num * a.den).is_zero();
}

} // namespace syncvar
