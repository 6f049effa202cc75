#include "syncvar/interval_map.hpp"

#include <algorithm>

#include "syncvar/errors.hpp"

namespace syncvar {

namespace {
const Rational kZero(0);
const Rational kOne(1);
} // namespace

SidedPoint default_sided(Rational x) {
    Side s = (x == kOne) ? Side::Left : Side::Right;
    return SidedPoint{std::move(x), s};
}

SidedPoint make_sided(Rational x, Side side) {
    if (x < kZero || x > kOne)
        throw ValidationError("point " + x.str() + " outside [0,1]");
    if (x == kZero && side == Side::Left)
        throw ValidationError("no left limit exists at 0");
    if (x == kOne && side == Side::Right)
        throw ValidationError("no right limit exists at 1");
    return SidedPoint{std::move(x), side};
}

PiecewiseAffineMap PiecewiseAffineMap::build(
        std::vector<Rational> breakpoints,
        std::vector<std::pair<Rational, Rational>> atom_endpoint_images) {
    if (breakpoints.size() < 2)
        throw ValidationError("need at least two breakpoints");
    if (breakpoints.front() != kZero || breakpoints.back() != kOne)
        throw ValidationError("breakpoints must start at 0 and end at 1");
    for (size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i - 1] < breakpoints[i]))
            throw ValidationError("breakpoints not strictly increasing at index " +
                                  std::to_string(i));
    if (atom_endpoint_images.size() != breakpoints.size() - 1)
        throw ValidationError("expected one image pair per atom: " +
                              std::to_string(breakpoints.size() - 1) + " atoms, " +
                              std::to_string(atom_endpoint_images.size()) + " image pairs");

    PiecewiseAffineMap m;
    m.breakpoints_ = std::move(breakpoints);
    const size_t n = atom_endpoint_images.size();
    m.slopes_.reserve(n);
    m.intercepts_.reserve(n);
    m.expanding_ = true;
    for (size_t i = 0; i < n; ++i) {
        const auto& [yl, yr] = atom_endpoint_images[i];
        if (yl < kZero || yl > kOne || yr < kZero || yr > kOne)
            throw ValidationError("atom " + std::to_string(i) + " image endpoint outside [0,1]");
        if (yl == yr)
            throw ValidationError("atom " + std::to_string(i) + " has zero slope");
        const Rational& xl = m.breakpoints_[i];
        const Rational& xr = m.breakpoints_[i + 1];
        Rational slope = (yr - yl) / (xr - xl);
        m.intercepts_.push_back(yl - slope * xl);
        Rational a = slope.abs();
        if (a <= kOne) m.expanding_ = false;
        if (a > m.max_abs_slope_) m.max_abs_slope_ = a;
        m.slopes_.push_back(std::move(slope));
        m.image_left_.push_back(yl);
        m.image_right_.push_back(yr);
    }
    return m;
}

Rational PiecewiseAffineMap::atom_length(int atom) const {
    return breakpoints_[static_cast<size_t>(atom) + 1] - breakpoints_[static_cast<size_t>(atom)];
}

bool PiecewiseAffineMap::is_breakpoint(const Rational& x) const {
    return std::binary_search(breakpoints_.begin(), breakpoints_.end(), x);
}

bool PiecewiseAffineMap::is_jump_point(const Rational& x) const {
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
    if (it == breakpoints_.end() || *it != x) return false;
    size_t i = static_cast<size_t>(it - breakpoints_.begin());
    if (i == 0 || i + 1 == breakpoints_.size()) return false;
    return image_right_[i - 1] != image_left_[i];
}

bool PiecewiseAffineMap::is_continuous() const {
    for (size_t i = 1; i + 1 < breakpoints_.size(); ++i)
        if (image_right_[i - 1] != image_left_[i]) return false;
    return true;
}

int PiecewiseAffineMap::atom_of(const SidedPoint& p) const {
    if (p.x < kZero || p.x > kOne)
        throw ValidationError("point " + p.x.str() + " outside [0,1]");
    if ((p.x == kZero && p.side == Side::Left) || (p.x == kOne && p.side == Side::Right))
        throw ValidationError("nonexistent one-sided limit at " + p.x.str());
    // Right: atom with c_i <= x < c_{i+1}; Left: atom with c_i < x <= c_{i+1}.
    if (p.side == Side::Right) {
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), p.x);
        return static_cast<int>(it - breakpoints_.begin()) - 1;
    }
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), p.x);
    return static_cast<int>(it - breakpoints_.begin()) - 1;
}

Rational PiecewiseAffineMap::eval(const SidedPoint& p) const {
    size_t atom = static_cast<size_t>(atom_of(p));
    return slopes_[atom] * p.x + intercepts_[atom];
}

SidedPoint PiecewiseAffineMap::step(const SidedPoint& p) const {
    size_t atom = static_cast<size_t>(atom_of(p));
    Rational y = slopes_[atom] * p.x + intercepts_[atom];
    if (y < kZero || y > kOne)
        throw InternalError("iterate escaped [0,1] at " + p.x.str());
    Side s = slopes_[atom].sign() > 0 ? p.side : flip(p.side);
    if (y == kZero) s = Side::Right;
    if (y == kOne) s = Side::Left;
    return SidedPoint{std::move(y), s};
}

std::vector<std::pair<SidedPoint, int>> PiecewiseAffineMap::iterate_point(const SidedPoint& p,
                                                                          int n) const {
    if (n < 0) throw ValidationError("negative iterate count");
    std::vector<std::pair<SidedPoint, int>> orbit;
    orbit.reserve(static_cast<size_t>(n) + 1);
    SidedPoint cur = p;
    for (int i = 0;; ++i) {
        int atom = atom_of(cur);
        orbit.emplace_back(cur, atom);
        if (i == n) break;
        cur = step(cur);
    }
    return orbit;
}

std::vector<AffineBranch> PiecewiseAffineMap::branches_of_iterate(int k, int depth_cap) const {
    if (k < 1) throw ValidationError("iterate order must be at least 1");
    if (k > depth_cap)
        throw ValidationError("iterate order " + std::to_string(k) + " exceeds depth cap " +
                              std::to_string(depth_cap));

    std::vector<AffineBranch> branches;
    branches.reserve(static_cast<size_t>(atom_count()));
    for (int i = 0; i < atom_count(); ++i)
        branches.push_back(AffineBranch{breakpoint(i), breakpoint(i + 1),
                                        slope(i), intercept(i)});

    const Rational half(1, 2);
    for (int level = 2; level <= k; ++level) {
        std::vector<AffineBranch> next;
        next.reserve(branches.size() * 2);
        for (const AffineBranch& b : branches) {
            Rational ylo = b.image_at_lo(), yhi = b.image_at_hi();
            if (yhi < ylo) std::swap(ylo, yhi);
            // Pull interior breakpoints of the image back through the branch.
            std::vector<Rational> cuts;
            for (const Rational& c : breakpoints_) {
                if (c <= ylo) continue;
                if (c >= yhi) break;
                cuts.push_back((c - b.intercept) / b.slope);
            }
            if (b.slope.sign() < 0) std::reverse(cuts.begin(), cuts.end());
            Rational lo = b.lo;
            cuts.push_back(b.hi);
            for (Rational& hi : cuts) {
                // The open piece maps inside a single atom; sample its middle.
                Rational mid = b.eval((lo + hi) * half);
                size_t atom = static_cast<size_t>(atom_of(mid));
                next.push_back(AffineBranch{lo, hi, slopes_[atom] * b.slope,
                                            slopes_[atom] * b.intercept + intercepts_[atom]});
                lo = std::move(hi);
            }
        }
        branches = std::move(next);
    }
    return branches;
}

} // namespace syncvar
