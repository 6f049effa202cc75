#pragma once

#include <utility>
#include <vector>

#include "syncvar/rational.hpp"

namespace syncvar {

// One-sided limits are first-class: Left means the limit from below,
// Right the limit from above.  (0, Left) and (1, Right) do not exist.
enum class Side : unsigned char { Left, Right };

inline Side flip(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
inline char side_char(Side s) { return s == Side::Left ? 'L' : 'R'; }

struct SidedPoint {
    Rational x;
    Side side = Side::Right;

    bool operator==(const SidedPoint& o) const { return side == o.side && x == o.x; }
};

// x with the default convention: approach from the right everywhere
// except at 1, which only has a left limit.
SidedPoint default_sided(Rational x);
// Validating constructor; rejects points outside [0,1] and the two
// nonexistent sides at the endpoints.
SidedPoint make_sided(Rational x, Side side);

// Maximal interval (lo, hi) on which an iterate acts as slope*x + intercept.
struct AffineBranch {
    Rational lo, hi;
    Rational slope, intercept;

    Rational eval(const Rational& x) const { return slope * x + intercept; }
    Rational image_at_lo() const { return eval(lo); }
    Rational image_at_hi() const { return eval(hi); }
};

// Piecewise affine self-map of [0,1]: breakpoints 0 = c_0 < ... < c_N = 1
// and an affine branch on each atom (c_{i-1}, c_i).  Built from the exact
// images of the atom endpoints; immutable afterwards.
class PiecewiseAffineMap {
public:
    static PiecewiseAffineMap build(std::vector<Rational> breakpoints,
                                    std::vector<std::pair<Rational, Rational>> atom_endpoint_images);

    int atom_count() const { return static_cast<int>(slopes_.size()); }
    const std::vector<Rational>& breakpoints() const { return breakpoints_; }
    const Rational& breakpoint(int i) const { return breakpoints_[static_cast<size_t>(i)]; }
    const Rational& slope(int atom) const { return slopes_[static_cast<size_t>(atom)]; }
    const Rational& intercept(int atom) const { return intercepts_[static_cast<size_t>(atom)]; }
    Rational atom_length(int atom) const;
    // Exact images of the atom's endpoints, in domain order (left endpoint first).
    const Rational& image_left(int atom) const { return image_left_[static_cast<size_t>(atom)]; }
    const Rational& image_right(int atom) const { return image_right_[static_cast<size_t>(atom)]; }

    bool expanding() const { return expanding_; }
    // K = max |slope|.
    const Rational& max_abs_slope() const { return max_abs_slope_; }

    bool is_breakpoint(const Rational& x) const;
    // True at interior breakpoints where the two one-sided limits differ.
    bool is_jump_point(const Rational& x) const;
    // True when every interior breakpoint has equal one-sided limits.
    bool is_continuous() const;

    // Atom whose closure is approached from the given side; the default
    // Rational overload uses the half-open convention [c_{i-1}, c_i).
    int atom_of(const SidedPoint& p) const;
    int atom_of(const Rational& x) const { return atom_of(default_sided(x)); }

    // One-sided limit value T(x +- 0).
    Rational eval(const SidedPoint& p) const;
    Rational eval(const Rational& x) const { return eval(default_sided(x)); }

    // One-sided step: value plus side propagation (positive slope keeps the
    // side, negative slope flips it), clamped to the existing side at 0 and 1.
    SidedPoint step(const SidedPoint& p) const;

    // Orbit p, T(p), ..., T^n(p) together with the atom of each point.
    std::vector<std::pair<SidedPoint, int>> iterate_point(const SidedPoint& p, int n) const;

    // Ordered branch decomposition of T^k obtained by exact pullback of the
    // atom boundaries; the branch count is the cylinder count n_k.
    std::vector<AffineBranch> branches_of_iterate(int k, int depth_cap = kDefaultDepthCap) const;

    static constexpr int kDefaultDepthCap = 25;

private:
    PiecewiseAffineMap() = default;

    std::vector<Rational> breakpoints_;
    std::vector<Rational> slopes_, intercepts_;
    std::vector<Rational> image_left_, image_right_;
    Rational max_abs_slope_;
    bool expanding_ = false;
};

} // namespace syncvar

template <>
struct std::hash<syncvar::SidedPoint> {
    std::size_t operator()(const syncvar::SidedPoint& p) const {
        return p.x.hash() * 2 + (p.side == syncvar::Side::Left ? 1 : 0);
    }
};
