#pragma once

#include <vector>

#include "syncvar/interval_map.hpp"

namespace syncvar {

// Eventually periodic orbit of a one-sided point: points[0..q+p-1] with
// preperiod q and period p, where stepping points[q+p-1] returns points[q].
struct EventualOrbit {
    int preperiod = 0;
    int period = 1;
    std::vector<SidedPoint> points;

    // Orbit point for any index, wrapping into the cycle.
    const SidedPoint& at(long k) const {
        long qp = static_cast<long>(points.size());
        if (k < qp) return points[static_cast<size_t>(k)];
        long q = preperiod, p = period;
        return points[static_cast<size_t>(q + (k - q) % p)];
    }
    bool purely_periodic() const { return preperiod == 0; }
};

// Follows one-sided steps until a (value, side) pair repeats.  Rationals
// whose orbits keep growing denominators exceed the cap and are rejected.
EventualOrbit detect_eventual_orbit(const PiecewiseAffineMap& map, const SidedPoint& start,
                                    int cap = 10000);

} // namespace syncvar
