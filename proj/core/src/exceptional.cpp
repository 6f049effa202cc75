#include "syncvar/exceptional.hpp"

#include <algorithm>
#include <set>

#include "syncvar/errors.hpp"

namespace syncvar {

namespace {

bool is_kink_point(const PiecewiseAffineMap& map, int breakpoint_index) {
    int left = breakpoint_index - 1, right = breakpoint_index;
    if (map.is_jump_point(map.breakpoint(breakpoint_index))) return false;
    return map.slope(left) != map.slope(right);
}

bool is_singular(const PiecewiseAffineMap& map, const Rational& x) {
    if (x.sign() == 0 || x == Rational(1) || !map.is_breakpoint(x)) return false;
    const auto& bps = map.breakpoints();
    int idx = static_cast<int>(std::lower_bound(bps.begin(), bps.end(), x) - bps.begin());
    return map.is_jump_point(x) || is_kink_point(map, idx);
}

// All solutions of T(w) = y, one per branch whose closed atom contains the
// preimage.  Duplicates at shared atom endpoints are collapsed by the
// caller's set.
void preimages_of(const PiecewiseAffineMap& map, const Rational& y, std::set<Rational>& out) {
    for (int i = 0; i < map.atom_count(); ++i) {
        Rational w = (y - map.intercept(i)) / map.slope(i);
        if (!(w < map.breakpoint(i)) && !(map.breakpoint(i + 1) < w)) out.insert(w);
    }
}

ExceptionalWitness witness_for(const PiecewiseAffineMap& map, const Rational& a, bool jump,
                               int depth_cap) {
    // Breadth-first pullback of a.  A point in level d satisfies T^d(w) = a
    // with every intermediate image avoiding singular points; extending dead
    // intermediates would break the local affinity of T^n around z.
    constexpr size_t kNodeCap = 200000;
    std::set<Rational> level{a};
    size_t visited = 1;
    for (int d = 1; d <= depth_cap; ++d) {
        std::set<Rational> next;
        for (const Rational& y : level) {
            if (d > 1 && is_singular(map, y)) continue;
            preimages_of(map, y, next);
        }
        visited += next.size();
        if (visited > kNodeCap)
            throw ValidationError("witness search for breakpoint " + a.str() + " exceeded " +
                                  std::to_string(kNodeCap) + " nodes at depth " +
                                  std::to_string(d));
        for (const Rational& z : next) {
            if (z.sign() <= 0 || !(z < Rational(1)) || map.is_breakpoint(z)) continue;

            ExceptionalWitness w;
            w.kind = jump ? WitnessKind::Discontinuity : WitnessKind::SlopeMismatch;
            w.a = a;
            w.z = SidedPoint{z, Side::Right};
            w.n = d;
            Rational cur = z;
            w.path.push_back(cur);
            for (int k = 0; k < d; ++k) {
                cur = map.eval(default_sided(cur));
                w.path.push_back(cur);
            }
            if (!(w.path.back() == a))
                throw InternalError("pullback chain for breakpoint " + a.str() +
                                    " does not map back onto it");
            if (jump) {
                w.orbit_minus = detect_eventual_orbit(map, map.step(SidedPoint{a, Side::Left}));
                w.orbit_plus = detect_eventual_orbit(map, map.step(SidedPoint{a, Side::Right}));
            } else {
                w.orbit_a = detect_eventual_orbit(map, SidedPoint{a, Side::Right});
            }
            return w;
        }
        level = std::move(next);
    }
    throw ValidationError("no interior preimage of singular point " + a.str() + " within depth " +
                          std::to_string(depth_cap) +
                          "; every candidate hit a breakpoint, try a larger depth cap");
}

} // namespace

std::vector<ExceptionalWitness> find_witnesses(const PiecewiseAffineMap& map, int depth_cap) {
    std::vector<ExceptionalWitness> jumps, kinks;
    for (int j = 1; j + 1 <= map.atom_count(); ++j) {
        const Rational& c = map.breakpoint(j);
        if (map.is_jump_point(c))
            jumps.push_back(witness_for(map, c, true, depth_cap));
        else if (is_kink_point(map, j))
            kinks.push_back(witness_for(map, c, false, depth_cap));
    }
    if (jumps.empty() && kinks.empty())
        throw ValidationError("map has no singular breakpoints; the sync function is affine-regular");
    jumps.insert(jumps.end(), kinks.begin(), kinks.end());
    return jumps;
}

namespace {

// Head-plus-geometric-tail assembly shared by the derivative and value
// series: coefficient k of the head is term(k) for k < q, and the tail
// collects one period window q..q+p-1 over 1 - ratio * gamma^p.
template <typename TermFn>
RationalFunction eventually_periodic_series(int q, int p, const Rational& cycle_ratio,
                                            TermFn&& term) {
    std::vector<Rational> head(static_cast<size_t>(q), Rational(0));
    for (int k = 0; k < q; ++k) head[static_cast<size_t>(k)] = term(k);
    std::vector<Rational> tail(static_cast<size_t>(q + p), Rational(0));
    for (int k = q; k < q + p; ++k) tail[static_cast<size_t>(k)] = term(k);

    Polynomial den = Polynomial::constant(Rational(1)) - Polynomial::monomial(cycle_ratio, p);
    RationalFunction out = RationalFunction::from_poly(Polynomial(std::move(head)));
    return out + RationalFunction{Polynomial(std::move(tail)), std::move(den)};
}

} // namespace

RationalFunction formal_derivative_series(const PiecewiseAffineMap& map,
                                          const ExceptionalWitness& witness, Side side,
                                          int orbit_cap) {
    if (witness.kind != WitnessKind::SlopeMismatch)
        throw ValidationError("derivative series requires a slope-mismatch witness");
    EventualOrbit orbit = detect_eventual_orbit(map, SidedPoint{witness.z.x, side}, orbit_cap);
    const int q = orbit.preperiod, p = orbit.period;

    // Cumulative slope products along the sided orbit; coefficient k is the
    // one-sided slope of T^{k+1} at z.
    std::vector<Rational> lam(static_cast<size_t>(q + p));
    Rational cycle_ratio(1), acc(1);
    for (int k = 0; k < q + p; ++k) {
        const Rational& s = map.slope(map.atom_of(orbit.points[static_cast<size_t>(k)]));
        acc = acc * s;
        lam[static_cast<size_t>(k)] = acc;
        if (k >= q) cycle_ratio = cycle_ratio * s;
    }
    return eventually_periodic_series(q, p, cycle_ratio,
                                      [&](int k) { return lam[static_cast<size_t>(k)]; });
}

RationalFunction sync_series_in_gamma(const PiecewiseAffineMap& map, const SidedPoint& start,
                                      int orbit_cap) {
    EventualOrbit orbit = detect_eventual_orbit(map, start, orbit_cap);
    return eventually_periodic_series(orbit.preperiod, orbit.period, Rational(1),
                                      [&](int k) { return orbit.at(k + 1).x; });
}

GammaPolynomial exceptional_polynomial(const PiecewiseAffineMap& map,
                                       const ExceptionalWitness& witness, int orbit_cap) {
    const int n_atoms = map.atom_count();
    RationalFunction diff;
    int bound;
    if (witness.kind == WitnessKind::SlopeMismatch) {
        diff = formal_derivative_series(map, witness, Side::Left, orbit_cap) -
               formal_derivative_series(map, witness, Side::Right, orbit_cap);
        bound = n_atoms;
    } else {
        diff = sync_series_in_gamma(map, SidedPoint{witness.a, Side::Left}, orbit_cap) -
               sync_series_in_gamma(map, SidedPoint{witness.a, Side::Right}, orbit_cap);
        bound = 2 * n_atoms - 1;
    }

    std::string where = " (breakpoint " + witness.a.str() + ", preimage " + witness.z.x.str() +
                        ", depth " + std::to_string(witness.n) + ")";
    if (diff.num.is_zero())
        throw InternalError("degenerate witness equation: both sides agree identically" + where);

    // Clearing denominators must not manufacture roots at the poles of the
    // two series, so cancel the common factor first.
    Polynomial common = poly_gcd(diff.num, diff.den);
    Polynomial cleared = diff.num.divided_by(common).normalized();

    GammaPolynomial out;
    out.stripped_zero_order = cleared.trailing_zero_order();
    out.poly = cleared.strip_zero_roots().normalized();
    out.degree_bound = bound;
    out.witness = witness;
    if (out.poly.degree() > bound)
        throw InternalError("witness equation has degree " + std::to_string(out.poly.degree()) +
                            ", above the asserted bound " + std::to_string(bound) + where);
    return out;
}

void isolate_roots(GammaPolynomial& g, const Rational& lo, const Rational& hi,
                   const Rational& max_width) {
    if (g.poly.degree() <= 0) {
        g.roots_in_window.clear();
        return;
    }
    g.roots_in_window = isolate_roots(g.poly, lo, hi, max_width);
}

std::vector<GammaPolynomial> exceptional_analysis(const PiecewiseAffineMap& map, const Rational& lo,
                                                  const Rational& hi, int depth_cap) {
    std::vector<GammaPolynomial> out;
    for (const ExceptionalWitness& w : find_witnesses(map, depth_cap)) {
        GammaPolynomial g = exceptional_polynomial(map, w);
        isolate_roots(g, lo, hi);
        out.push_back(std::move(g));
    }
    return out;
}

bool vanishes_on_all(const std::vector<GammaPolynomial>& polys, const Rational& gamma) {
    if (polys.empty()) return false;
    for (const GammaPolynomial& g : polys)
        if (!g.poly.eval(gamma).is_zero()) return false;
    return true;
}

std::vector<RootEnclosure> common_candidate_roots(const std::vector<GammaPolynomial>& polys) {
    if (polys.empty()) return {};
    std::vector<RootEnclosure> common = polys.front().roots_in_window;
    for (size_t i = 1; i < polys.size() && !common.empty(); ++i) {
        std::vector<RootEnclosure> kept;
        for (const RootEnclosure& r : common)
            for (const RootEnclosure& s : polys[i].roots_in_window)
                if (!(s.hi < r.lo) && !(r.hi < s.lo)) {
                    kept.push_back({max(r.lo, s.lo), min(r.hi, s.hi), r.exact || s.exact});
                    break;
                }
        common = std::move(kept);
    }
    return common;
}

} // namespace syncvar
