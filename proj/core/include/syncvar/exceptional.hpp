#pragma once

#include <vector>

#include "syncvar/orbit.hpp"
#include "syncvar/polynomial.hpp"

namespace syncvar {

// The two ways an interior breakpoint can be singular: the map is continuous
// there but changes slope, or its one-sided limits differ.
enum class WitnessKind { SlopeMismatch, Discontinuity };

// A singular breakpoint a together with an interior point z of minimal depth
// n such that T^n(z) = a and the intermediate images avoid singular points.
// Near z, T^n is affine on each side, so the obstruction at a transports to
// a clean one at z.
struct ExceptionalWitness {
    WitnessKind kind = WitnessKind::SlopeMismatch;
    Rational a;
    SidedPoint z;
    int n = 0;
    std::vector<Rational> path;   // z, T z, ..., T^n z = a

    EventualOrbit orbit_a;        // slope-mismatch case: orbit of a
    EventualOrbit orbit_minus;    // discontinuity case: orbit of T(a-0)
    EventualOrbit orbit_plus;     // discontinuity case: orbit of T(a+0)
};

// Enumerates the singular breakpoints and pulls each back through branch
// inverses, breadth-first, until an interior non-breakpoint preimage with a
// clean path appears.  Discontinuity witnesses come first, then kinks, each
// group ordered by the breakpoint.  Throws ValidationError when some
// singular point has no interior preimage within depth_cap.
std::vector<ExceptionalWitness> find_witnesses(const PiecewiseAffineMap& map, int depth_cap = 24);

// One-sided derivative sum, sum_k gamma^k (T^{k+1})'(z +- 0), as an exact
// rational function of gamma.  The sided orbit of z is eventually periodic,
// so the sum is a polynomial head plus a geometric cycle tail.  Requires a
// slope-mismatch witness.
RationalFunction formal_derivative_series(const PiecewiseAffineMap& map,
                                          const ExceptionalWitness& witness, Side side,
                                          int orbit_cap = 10000);

// phi(start) = sum_k gamma^k T^{k+1}(start) as an exact rational function of
// gamma, via the eventually periodic sided orbit of start.
RationalFunction sync_series_in_gamma(const PiecewiseAffineMap& map, const SidedPoint& start,
                                      int orbit_cap = 10000);

// The cleared obstruction equation at one witness.  Roots of poly inside
// (0,1) are the only coupling values at which the obstruction vanishes.
struct GammaPolynomial {
    Polynomial poly;              // primitive integer form, roots at 0 stripped
    int stripped_zero_order = 0;  // multiplicity removed at gamma = 0
    int degree_bound = 0;         // N for kinks, 2N-1 for jumps
    ExceptionalWitness witness;
    std::vector<RootEnclosure> roots_in_window;
};

// Builds the witness equation:
//   slope-mismatch: derivative series at z-0 equals the one at z+0;
//   discontinuity:  phi(a-0) equals phi(a+0).
// Denominators are cleared, common factors with the denominator cancelled,
// and the degree bound asserted (InternalError on violation).
GammaPolynomial exceptional_polynomial(const PiecewiseAffineMap& map,
                                       const ExceptionalWitness& witness, int orbit_cap = 10000);

// Isolates the real roots of g.poly inside (lo, hi) into g.roots_in_window.
void isolate_roots(GammaPolynomial& g, const Rational& lo, const Rational& hi,
                   const Rational& max_width = Rational(1, 1000000000000L));

// Full pipeline: witnesses, their polynomials, roots isolated in (lo, hi).
std::vector<GammaPolynomial> exceptional_analysis(const PiecewiseAffineMap& map, const Rational& lo,
                                                  const Rational& hi, int depth_cap = 24);

// True when every witness polynomial vanishes at gamma; a single failing
// witness rules the value out.  Empty input yields false.
bool vanishes_on_all(const std::vector<GammaPolynomial>& polys, const Rational& gamma);

// Root enclosures common to every witness polynomial.
std::vector<RootEnclosure> common_candidate_roots(const std::vector<GammaPolynomial>& polys);

} // namespace syncvar
