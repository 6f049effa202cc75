#pragma once

#include <cstdint>
#include <vector>

#include "syncvar/interval_map.hpp"

namespace syncvar {

// Closed double interval certified to contain the true value.
struct Enclosure {
    double lo = 0, hi = 0;
    double mid() const { return lo + (hi - lo) / 2; }
    double width() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

// Certified enclosure of log r for exact rational r > 0.
Enclosure certified_log(const Rational& r);
// Certified enclosure of e^x over a certified interval.
Enclosure certified_exp(const Enclosure& x);

// 0/1 atom-to-atom transition structure: entry (i,j) set iff the image of
// atom i covers atom j.
struct TransitionMatrix {
    int n = 0;
    std::vector<uint8_t> entries;       // row-major
    bool irreducible = false;
    std::vector<int> component_of;      // strongly connected component ids

    static TransitionMatrix from_entries(int n, std::vector<uint8_t> entries);

    bool at(int i, int j) const { return entries[static_cast<size_t>(i) * n + j] != 0; }

    // Number of admissible symbol words of length k (paths of k-1 edges).
    mpz_class word_count(int k) const;
    // Words of length k grouped by their final symbol.
    std::vector<mpz_class> end_counts(int k) const;
};

// Checks that every atom endpoint image is a breakpoint and reads off the
// transition matrix.  Throws ValidationError naming the offending atom and
// image value otherwise.
TransitionMatrix validate_markov(const PiecewiseAffineMap& map);

struct EntropyResult {
    // Exact rational enclosure of the spectral radius, width <= ~1e-13.
    Rational rho_lo, rho_hi;
    // log of it, with directed rounding slop.
    Enclosure h;
    bool irreducible = false;
    // Positive integer vector v with M v <= growth_beta * v componentwise
    // (exact), so word_count(k) <= growth_amplitude * growth_beta^{k-1}.
    // Populated for irreducible matrices.
    std::vector<Rational> perron;
    Rational growth_beta;
    Rational growth_amplitude;
};

// Collatz-Wielandt enclosure of the spectral radius, run per strongly
// connected component on I + M so periodic components still converge.
EntropyResult topological_entropy(const TransitionMatrix& m);

struct AcimResult {
    std::vector<Rational> density;   // piecewise constant density, exact
    std::vector<Rational> weights;   // atom measures, exact, sum to 1
    Enclosure lyapunov;
};

// Invariant density of the transfer operator (exact rational kernel solve;
// the Perron eigenvalue is exactly 1) and the Lyapunov exponent
// sum_i mu_i log|s_i| with a certified log evaluation.
AcimResult acim_and_lyapunov(const PiecewiseAffineMap& map, const TransitionMatrix& m);

struct RegimeThresholds {
    Rational K;                      // max |slope|
    Rational gamma_lipschitz;        // 1/K, exact
    Rational gamma_variation_lo;     // exact rational enclosure of e^{-h_top} = 1/rho
    Rational gamma_variation_hi;
    Enclosure gamma_lyapunov;        // e^{-lyapunov}
    EntropyResult entropy;
    AcimResult acim;
};

// The three increasing gamma thresholds 1/K <= e^{-h_top} <= e^{-lyap}.
RegimeThresholds regime_thresholds(const PiecewiseAffineMap& map);

} // namespace syncvar
