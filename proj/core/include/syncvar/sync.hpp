#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "syncvar/orbit.hpp"

namespace syncvar {

// Coupling strength, valid strictly between 0 and 1.
class Gamma {
public:
    explicit Gamma(Rational v);
    const Rational& value() const { return v_; }
    double to_double() const { return v_.to_double(); }

private:
    Rational v_;
};

// Evaluation of phi(x) = sum_{k>=0} gamma^k T^{k+1}(x) with a guaranteed
// bracket.  The exact fields always satisfy
//   exact_value <= phi(x) <= exact_value + exact_error,
// and the doubles mirror them with conversion slop folded into error_bound.
struct SyncValue {
    double value = 0;
    double error_bound = 0;
    std::optional<Rational> exact_value;
    std::optional<Rational> exact_error;
};

// Truncated series with the fewest terms whose tail bound gamma^n/(1-gamma)
// is at most tol; the partial sum is accumulated in exact arithmetic.
SyncValue eval_sync(const PiecewiseAffineMap& map, const SidedPoint& start, const Gamma& gamma,
                    const Rational& tol, long max_terms = 200000);

// Exact closed form along an already detected eventually periodic orbit:
// geometric head plus cycle sum over 1 - gamma^p.
Rational sync_on_orbit(const EventualOrbit& orbit, const Gamma& gamma);

// Detects the orbit of start and evaluates the closed form; error is zero.
SyncValue eval_sync_closed(const PiecewiseAffineMap& map, const SidedPoint& start,
                           const Gamma& gamma, int orbit_cap = 10000);

// phi at the first point of an exact cycle x_0 -> x_1 -> ... -> x_0; the
// cycle is verified by stepping before the formula is applied.
Rational sync_at_periodic(const PiecewiseAffineMap& map, const std::vector<SidedPoint>& cycle,
                          const Gamma& gamma);

// Largest residual |phi(x) - T(x) - gamma*phi(T(x))| over the sample points,
// each phi evaluated through eval_sync at the given tolerance.  The true
// sync function satisfies the identity exactly, so the residual is bounded
// by the two truncation tails.
Rational conjugacy_residual(const PiecewiseAffineMap& map, const std::vector<SidedPoint>& points,
                            const Gamma& gamma, const Rational& tol);

// Series with a bounded observable applied to the iterates, evaluated in
// floating point: sum gamma^k f(T^{k+1} x) with |f| <= sup_bound.
struct FilteredSync {
    double value = 0;
    double error_bound = 0;
};

FilteredSync eval_sync_filtered(const PiecewiseAffineMap& map, const SidedPoint& start,
                                const Gamma& gamma, const std::function<double(double)>& observable,
                                double sup_bound, double tol, long max_terms = 200000);

} // namespace syncvar
