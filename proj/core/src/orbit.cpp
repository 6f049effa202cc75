#include "syncvar/orbit.hpp"

#include <unordered_map>

#include "syncvar/errors.hpp"

namespace syncvar {

EventualOrbit detect_eventual_orbit(const PiecewiseAffineMap& map, const SidedPoint& start,
                                    int cap) {
    std::unordered_map<SidedPoint, int> seen;
    std::vector<SidedPoint> trail;
    SidedPoint cur = start;
    for (int i = 0; i <= cap; ++i) {
        auto [it, fresh] = seen.emplace(cur, i);
        if (!fresh) {
            EventualOrbit orbit;
            orbit.preperiod = it->second;
            orbit.period = i - it->second;
            trail.resize(static_cast<size_t>(i));
            orbit.points = std::move(trail);
            return orbit;
        }
        trail.push_back(cur);
        cur = map.step(cur);
    }
    throw ValidationError("orbit of " + start.x.str() + " did not become periodic within " +
                          std::to_string(cap) + " steps");
}

} // namespace syncvar
