#include "syncvar/sync.hpp"

#include <cmath>

#include "syncvar/errors.hpp"

namespace syncvar {

Gamma::Gamma(Rational v) : v_(std::move(v)) {
    if (v_.sign() <= 0 || !(v_ < Rational(1)))
        throw ValidationError("gamma must lie strictly between 0 and 1, got " + v_.str());
}

namespace {

double padded_double(const Rational& exact_bound, double value_scale) {
    // Conversion of the exact value and of the bound each costs at most a
    // few ulps; fold them into the returned bound.
    double b = exact_bound.to_double();
    return b + (std::abs(value_scale) + std::abs(b) + 1.0) * 1e-15;
}

} // namespace

SyncValue eval_sync(const PiecewiseAffineMap& map, const SidedPoint& start, const Gamma& gamma,
                    const Rational& tol, long max_terms) {
    if (tol.sign() <= 0) throw ValidationError("tolerance must be positive");
    const Rational& g = gamma.value();
    const Rational one_minus = Rational(1) - g;

    // Smallest n with gamma^n <= tol * (1 - gamma).
    Rational target = tol * one_minus;
    long n = 0;
    Rational pw(1);
    while (target < pw) {
        pw = pw * g;
        if (++n > max_terms)
            throw ValidationError("series needs more than " + std::to_string(max_terms) +
                                  " terms at this tolerance");
    }

    Rational sum(0), gp(1);
    SidedPoint cur = start;
    for (long k = 0; k < n; ++k) {
        cur = map.step(cur);
        sum = sum + gp * cur.x;
        gp = gp * g;
    }

    SyncValue out;
    out.exact_value = sum;
    out.exact_error = gp / one_minus;
    out.value = sum.to_double();
    out.error_bound = padded_double(*out.exact_error, out.value);
    return out;
}

Rational sync_on_orbit(const EventualOrbit& orbit, const Gamma& gamma) {
    const Rational& g = gamma.value();
    const int q = orbit.preperiod, p = orbit.period;

    Rational sum(0), gp(1);
    for (int k = 0; k < q; ++k) {
        sum = sum + gp * orbit.at(k + 1).x;
        gp = gp * g;
    }
    // gp == gamma^q; one lap around the cycle starting after the head.
    Rational cyc(0), cp(1);
    for (int m = 0; m < p; ++m) {
        cyc = cyc + cp * orbit.at(q + m + 1).x;
        cp = cp * g;
    }
    return sum + gp * cyc / (Rational(1) - cp);
}

SyncValue eval_sync_closed(const PiecewiseAffineMap& map, const SidedPoint& start,
                           const Gamma& gamma, int orbit_cap) {
    EventualOrbit orbit = detect_eventual_orbit(map, start, orbit_cap);
    Rational exact = sync_on_orbit(orbit, gamma);

    SyncValue out;
    out.exact_value = exact;
    out.exact_error = Rational(0);
    out.value = exact.to_double();
    out.error_bound = (std::abs(out.value) + 1.0) * 1e-15;
    return out;
}

Rational sync_at_periodic(const PiecewiseAffineMap& map, const std::vector<SidedPoint>& cycle,
                          const Gamma& gamma) {
    if (cycle.empty()) throw ValidationError("empty cycle");
    const int p = static_cast<int>(cycle.size());
    for (int i = 0; i < p; ++i) {
        SidedPoint next = map.step(cycle[static_cast<size_t>(i)]);
        const SidedPoint& claimed = cycle[static_cast<size_t>((i + 1) % p)];
        if (!(next == claimed)) {
            auto describe = [](const SidedPoint& s) {
                return "(" + s.x.str() + ", " + side_char(s.side) + ")";
            };
            throw ValidationError("claimed cycle is not invariant: T" +
                                  describe(cycle[static_cast<size_t>(i)]) + " = " +
                                  describe(next) + ", expected " + describe(claimed));
        }
    }
    const Rational& g = gamma.value();
    Rational cyc(0), cp(1);
    for (int m = 0; m < p; ++m) {
        cyc = cyc + cp * cycle[static_cast<size_t>((m + 1) % p)].x;
        cp = cp * g;
    }
    return cyc / (Rational(1) - cp);
}

Rational conjugacy_residual(const PiecewiseAffineMap& map, const std::vector<SidedPoint>& points,
                            const Gamma& gamma, const Rational& tol) {
    Rational worst(0);
    for (const SidedPoint& p : points) {
        SyncValue at_x = eval_sync(map, p, gamma, tol);
        SidedPoint tx = map.step(p);
        SyncValue at_tx = eval_sync(map, tx, gamma, tol);
        Rational r = (*at_x.exact_value - tx.x - gamma.value() * *at_tx.exact_value).abs();
        if (worst < r) worst = r;
    }
    return worst;
}

FilteredSync eval_sync_filtered(const PiecewiseAffineMap& map, const SidedPoint& start,
                                const Gamma& gamma, const std::function<double(double)>& observable,
                                double sup_bound, double tol, long max_terms) {
    if (!(tol > 0)) throw ValidationError("tolerance must be positive");
    if (!(sup_bound >= 0)) throw ValidationError("observable bound must be nonnegative");
    const double g = gamma.to_double();
    if (g >= 1.0) throw ValidationError("gamma rounds to 1 in double precision; use exact evaluation");

    long n = 0;
    double gp = 1.0;
    while (sup_bound * gp / (1.0 - g) > tol) {
        gp *= g;
        if (++n > max_terms)
            throw ValidationError("series needs more than " + std::to_string(max_terms) +
                                  " terms at this tolerance");
    }

    double acc = 0.0, w = 1.0;
    SidedPoint cur = start;
    for (long k = 0; k < n; ++k) {
        cur = map.step(cur);
        acc += w * observable(cur.x.to_double());
        w *= g;
    }

    FilteredSync out;
    out.value = acc;
    // Tail bound plus accumulated rounding: n multiply-adds on terms bounded
    // by sup_bound/(1-gamma).
    out.error_bound = sup_bound * gp / (1.0 - g) +
                      static_cast<double>(n + 1) * (sup_bound / (1.0 - g) + 1.0) * 3e-16;
    return out;
}

} // namespace syncvar
