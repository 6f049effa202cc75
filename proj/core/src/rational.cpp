#include "syncvar/rational.hpp"

#include <cctype>
#include <cstdio>

namespace syncvar {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rational::Rational(long num, long den) {
    if (den == 0) throw InternalError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw InternalError("rational with zero denominator");
    v_ = mpq_class(num);
    v_ /= mpq_class(den);
}

Rational Rational::parse(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) throw ValidationError("malformed rational: '" + std::string(text) + "'");

    mpq_class value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view ns = s.substr(0, slash), ds = s.substr(slash + 1);
        if (!all_digits(ns) || !all_digits(ds))
            throw ValidationError("malformed rational: '" + std::string(text) + "'");
        mpz_class num(std::string(ns), 10), den(std::string(ds), 10);
        if (den == 0)
            throw ValidationError("zero denominator in rational: '" + std::string(text) + "'");
        value = mpq_class(num) / mpq_class(den);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view is = s.substr(0, dot), fs = s.substr(dot + 1);
        if ((is.empty() && fs.empty()) || (!is.empty() && !all_digits(is)) ||
            (!fs.empty() && !all_digits(fs)))
            throw ValidationError("malformed rational: '" + std::string(text) + "'");
        mpz_class ipart = is.empty() ? mpz_class(0) : mpz_class(std::string(is), 10);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, fs.size());
        mpz_class fpart = fs.empty() ? mpz_class(0) : mpz_class(std::string(fs), 10);
        value = mpq_class(ipart * scale + fpart) / mpq_class(scale);
    } else {
        if (!all_digits(s))
            throw ValidationError("malformed rational: '" + std::string(text) + "'");
        value = mpq_class(mpz_class(std::string(s), 10));
    }
    if (negative) value = -value;
    Rational r;
    r.v_ = value;
    r.v_.canonicalize();
    return r;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw InternalError("rational division by zero");
    v_ /= o.v_;
    return *this;
}

Rational Rational::inverse() const {
    if (is_zero()) throw InternalError("inverse of zero");
    return Rational(mpq_class(1) / v_);
}

Rational Rational::pow(unsigned long e) const {
    mpq_class r;
    mpz_pow_ui(r.get_num_mpz_t(), v_.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), v_.get_den_mpz_t(), e);
    // powers of a canonical fraction are canonical
    Rational out;
    out.v_ = r;
    return out;
}

std::string Rational::str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rational::decimal_str(int significant_digits) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant_digits, to_double());
    return buf;
}

std::size_t Rational::hash() const {
    auto mix = [](std::size_t h, std::size_t x) {
        h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    };
    auto hash_mpz = [&](const mpz_class& z) {
        std::size_t h = static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()));
        for (std::size_t i = 0, n = mpz_size(z.get_mpz_t()); i < n; ++i)
            h = mix(h, static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), i)));
        return h;
    };
    return mix(hash_mpz(v_.get_num()), hash_mpz(v_.get_den()));
}

} // namespace syncvar
