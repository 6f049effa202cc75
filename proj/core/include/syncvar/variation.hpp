#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "syncvar/exceptional.hpp"
#include "syncvar/markov.hpp"
#include "syncvar/sync.hpp"

namespace syncvar {

// Exact total variation of T^k over [0,1]: branch image lengths plus the
// jumps between consecutive branches.  Enumerates the branches of T^k, so k
// is limited by the enumeration cap.
Rational variation_of_iterate(const PiecewiseAffineMap& map, int k,
                              int depth_cap = PiecewiseAffineMap::kDefaultDepthCap);

// Var T^1 .. Var T^count through the transition structure instead of branch
// enumeration: image lengths are counted by words grouped by final symbol,
// jump mass by convolving minimal-preimage counts of each breakpoint with
// the gap sequence of its two one-sided orbits.  Agrees with
// variation_of_iterate exactly and reaches far larger k.
std::vector<Rational> markov_variation_series(const PiecewiseAffineMap& map,
                                              const TransitionMatrix& matrix, int count);

struct UpperBoundResult {
    bool available = false;
    Rational value;
    std::string reason;     // set when unavailable
};

// Certified bound sum_{k=0}^{kmax} gamma^k Var T^{k+1} plus a geometric tail
// from the exact envelope word_count(k) <= amplitude * beta^{k-1}.
// Unavailable when the series cannot be certified to converge.
UpperBoundResult variation_upper_bound(const PiecewiseAffineMap& map,
                                       const TransitionMatrix& matrix,
                                       const EntropyResult& entropy, const Gamma& gamma,
                                       int kmax = 256);

// Subdivision by the cylinder endpoints of T^depth, with the eventually
// periodic orbit of every one-sided endpoint detected once so bounds for
// many gamma values reuse the same profile.
class SubdivisionProfile {
public:
    static SubdivisionProfile build(const PiecewiseAffineMap& map, int depth,
                                    int orbit_cap = 10000,
                                    int depth_cap = PiecewiseAffineMap::kDefaultDepthCap);

    int depth() const { return depth_; }
    const std::vector<Rational>& points() const { return points_; }

    // Sum of one-sided increments of phi over the subdivision, an exact
    // lower bound for Var phi that is nondecreasing in depth.
    Rational lower_bound(const Gamma& gamma) const;

private:
    int depth_ = 0;
    bool split_sides_ = false;                 // discontinuous maps need both sides
    std::vector<Rational> points_;
    std::vector<EventualOrbit> node_orbits_;   // in walk order
};

Rational variation_lower_bound(const PiecewiseAffineMap& map, const Gamma& gamma, int depth);

// Mechanical check of the divergence-certificate hypotheses.
struct Prop2Hypotheses {
    bool full_branch = false;
    int full_branch_atom = -1;
    bool endpoint_fixed = false;              // T(0+0) = 0 or T(1-0) = 1
    bool interior_kink_to_endpoint = false;   // some breakpoint a with T(a) in {0,1}
                                              // and preimages of a on both sides of it
    bool satisfied() const { return full_branch && (endpoint_fixed || interior_kink_to_endpoint); }
    std::string failure_description() const;
};

Prop2Hypotheses check_prop2_hypotheses(const PiecewiseAffineMap& map);

struct GrowthTerm {
    int n = 0;
    Rational cylinder_count;   // admissible cylinders of length n+1
    Rational term;             // cylinder_count * gamma^n * gap
};

// Witness that the variation lower bounds grow along cylinder subdivisions:
// a periodic cycle (listed from its minimum) whose first point keeps an
// exact positive distance gap from (1-gamma) * phi at it.
struct DivergenceCertificate {
    std::vector<Rational> cycle;
    Rational gap;
    std::vector<GrowthTerm> growth_terms;
};

// Finds the shortest admissible interior cycle with a nonzero gap and
// assembles the certificate.  Throws ValidationError when the hypotheses
// fail or no such cycle exists within the word-length cap.
DivergenceCertificate prop2_certificate(const PiecewiseAffineMap& map,
                                        const TransitionMatrix& matrix, const Gamma& gamma,
                                        int word_cap = 6, int growth_count = 24);

// inf over a of the variation of f(x) - a*x along the samples; zero exactly
// on affine data.  Samples must be sorted with strictly increasing x.
Rational reduced_variation(const std::vector<std::pair<Rational, Rational>>& samples);

enum class Regime { Lipschitz, BoundedVariation, Threshold, InfiniteVariation, ExceptionalCandidate };
const char* regime_name(Regime r);

// Everything about a map the per-gamma questions need, computed once.
struct MapAnalysis {
    PiecewiseAffineMap map;
    TransitionMatrix matrix;
    RegimeThresholds thresholds;
    std::vector<GammaPolynomial> polynomials;   // witness equations, roots in (0,1)
};

MapAnalysis analyze_map(const PiecewiseAffineMap& map, bool with_exceptional = true,
                        int witness_depth_cap = 24);

// Exact precedence: K*gamma < 1 is Lipschitz; e^h*gamma < 1 bounded
// variation; e^h*gamma = 1 (within the certified enclosure) threshold; above
// it, gamma is either a common root of every witness equation or the
// variation is infinite.  Requires analysis built with exceptional data
// whenever the supercritical branch can be reached.
Regime classify_regime(const MapAnalysis& analysis, const Gamma& gamma);

enum class VariationVerdict { Bounded, Diverging, ExceptionalCandidate, Inconclusive };
const char* verdict_name(VariationVerdict v);

// Verdict for one coupling in a known regime, trying the divergence
// certificate whenever it decides or strengthens the answer; fills
// *certificate when one is found and the pointer is non-null.
VariationVerdict variation_verdict(const MapAnalysis& analysis, const Gamma& gamma, Regime regime,
                                   std::optional<DivergenceCertificate>* certificate = nullptr,
                                   int word_cap = 6, int growth_count = 24);

struct VariationOptions {
    int kmax = 256;
    int max_depth = 8;
    int word_cap = 6;
    int growth_count = 24;
};

struct VariationReport {
    Rational gamma;
    Regime regime = Regime::BoundedVariation;
    UpperBoundResult upper;
    std::vector<std::pair<int, Rational>> lower_bounds;   // (depth, exact bound)
    VariationVerdict verdict = VariationVerdict::Inconclusive;
    std::optional<DivergenceCertificate> certificate;
};

VariationReport analyze_variation(const MapAnalysis& analysis, const Gamma& gamma,
                                  const VariationOptions& opts = {});

} // namespace syncvar
