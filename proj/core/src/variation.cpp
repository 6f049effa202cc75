#include "syncvar/variation.hpp"

#include <algorithm>

#include "syncvar/errors.hpp"

namespace syncvar {

Rational variation_of_iterate(const PiecewiseAffineMap& map, int k, int depth_cap) {
    std::vector<AffineBranch> branches = map.branches_of_iterate(k, depth_cap);
    Rational total(0);
    for (size_t i = 0; i < branches.size(); ++i) {
        const AffineBranch& b = branches[i];
        total = total + b.slope.abs() * (b.hi - b.lo);
        if (i + 1 < branches.size())
            total = total + (branches[i + 1].image_at_lo() - b.image_at_hi()).abs();
    }
    Rational cap = Rational(2 * static_cast<long>(branches.size()));
    if (cap < total)
        throw InternalError("variation of iterate " + std::to_string(k) + " computed as " +
                            total.str() + ", above the 2 * n_k ceiling " + cap.str());
    return total;
}

std::vector<Rational> markov_variation_series(const PiecewiseAffineMap& map,
                                              const TransitionMatrix& matrix, int count) {
    if (count < 1) throw ValidationError("series length must be positive");
    const int n = matrix.n;

    // Image length of one step out of each atom.
    std::vector<Rational> image_len(static_cast<size_t>(n), Rational(0));
    for (int s = 0; s < n; ++s)
        for (int j = 0; j < n; ++j)
            if (matrix.at(s, j)) image_len[static_cast<size_t>(s)] =
                    image_len[static_cast<size_t>(s)] + map.atom_length(j);

    // Gap sequences g_c(t) = |T^t(c+0) - T^t(c-0)| of every interior
    // breakpoint, and the counts of its depth-j clean preimages.
    const int n_cuts = n - 1;
    std::vector<std::vector<Rational>> gap(static_cast<size_t>(n_cuts));
    std::vector<bool> gap_zero(static_cast<size_t>(n_cuts), true);
    std::vector<std::vector<mpz_class>> pre_counts(static_cast<size_t>(n_cuts));
    for (int m = 1; m < n; ++m) {
        const Rational& c = map.breakpoint(m);
        auto& g = gap[static_cast<size_t>(m - 1)];
        g.assign(static_cast<size_t>(count) + 1, Rational(0));
        SidedPoint left{c, Side::Left}, right{c, Side::Right};
        for (int t = 1; t <= count; ++t) {
            left = map.step(left);
            right = map.step(right);
            g[static_cast<size_t>(t)] = (right.x - left.x).abs();
            if (!g[static_cast<size_t>(t)].is_zero()) gap_zero[static_cast<size_t>(m - 1)] = false;
        }

        // A clean depth-j preimage of c lies in the open atom i and maps to c
        // through j breakpoint-free steps; atom i contributes one at depth 1
        // exactly when its image covers both atoms adjacent to c.
        auto& counts = pre_counts[static_cast<size_t>(m - 1)];
        counts.assign(static_cast<size_t>(count), 0);
        std::vector<mpz_class> q(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            q[static_cast<size_t>(i)] = (matrix.at(i, m - 1) && matrix.at(i, m)) ? 1 : 0;
        for (int j = 1; j < count; ++j) {
            mpz_class total = 0;
            for (const mpz_class& v : q) total += v;
            counts[static_cast<size_t>(j)] = total;
            std::vector<mpz_class> next(static_cast<size_t>(n), 0);
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l)
                    if (matrix.at(i, l)) next[static_cast<size_t>(i)] += q[static_cast<size_t>(l)];
            q = std::move(next);
        }
    }

    std::vector<Rational> var(static_cast<size_t>(count), Rational(0));
    std::vector<mpz_class> words(static_cast<size_t>(n), 1);   // words of length k by last symbol
    for (int k = 1; k <= count; ++k) {
        Rational total(0);
        for (int s = 0; s < n; ++s)
            total = total + Rational(mpq_class(words[static_cast<size_t>(s)])) *
                                    image_len[static_cast<size_t>(s)];
        for (int m = 0; m < n_cuts; ++m) {
            if (gap_zero[static_cast<size_t>(m)]) continue;
            const auto& g = gap[static_cast<size_t>(m)];
            const auto& counts = pre_counts[static_cast<size_t>(m)];
            Rational jumps = g[static_cast<size_t>(k)];
            for (int j = 1; j < k; ++j)
                jumps = jumps + Rational(mpq_class(counts[static_cast<size_t>(j)])) *
                                        g[static_cast<size_t>(k - j)];
            total = total + jumps;
        }
        var[static_cast<size_t>(k - 1)] = total;

        std::vector<mpz_class> next(static_cast<size_t>(n), 0);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if (matrix.at(i, j)) next[static_cast<size_t>(j)] += words[static_cast<size_t>(i)];
        words = std::move(next);
    }
    return var;
}

UpperBoundResult variation_upper_bound(const PiecewiseAffineMap& map,
                                       const TransitionMatrix& matrix,
                                       const EntropyResult& entropy, const Gamma& gamma,
                                       int kmax) {
    UpperBoundResult out;
    const Rational& g = gamma.value();
    if (!(g * entropy.rho_hi < Rational(1))) {
        out.reason = "series not certified to converge: gamma is at or above e^{-h_top}";
        return out;
    }
    if (!entropy.irreducible) {
        out.reason = "no certified growth envelope: transition structure is reducible";
        return out;
    }
    const Rational& beta = entropy.growth_beta;
    if (!(g * beta < Rational(1))) {
        out.reason = "certified growth ratio too coarse at this gamma; tighten the "
                     "spectral enclosure";
        return out;
    }

    std::vector<Rational> var = markov_variation_series(map, matrix, kmax + 1);
    Rational head(0), gp(1);
    for (int k = 0; k <= kmax; ++k) {
        head = head + gp * var[static_cast<size_t>(k)];
        gp = gp * g;
    }
    // Var T^{k+1} <= 2 n_{k+1} <= 2 * amplitude * beta^k.
    Rational ratio = g * beta;
    Rational tail = Rational(2) * entropy.growth_amplitude * ratio.pow(static_cast<unsigned long>(kmax) + 1) /
                    (Rational(1) - ratio);
    out.available = true;
    out.value = head + tail;
    return out;
}

SubdivisionProfile SubdivisionProfile::build(const PiecewiseAffineMap& map, int depth,
                                             int orbit_cap, int depth_cap) {
    SubdivisionProfile prof;
    prof.depth_ = depth;
    prof.split_sides_ = !map.is_continuous();

    if (depth <= 0) {
        prof.points_ = {Rational(0), Rational(1)};
    } else {
        std::vector<AffineBranch> branches = map.branches_of_iterate(depth, depth_cap);
        prof.points_.reserve(branches.size() + 1);
        for (const AffineBranch& b : branches) prof.points_.push_back(b.lo);
        prof.points_.push_back(branches.back().hi);
    }

    for (size_t i = 0; i < prof.points_.size(); ++i) {
        const Rational& x = prof.points_[i];
        bool first = (i == 0), last = (i + 1 == prof.points_.size());
        if (!first)
            prof.node_orbits_.push_back(detect_eventual_orbit(map, SidedPoint{x, Side::Left},
                                                              orbit_cap));
        if (!last && (first || prof.split_sides_))
            prof.node_orbits_.push_back(detect_eventual_orbit(map, SidedPoint{x, Side::Right},
                                                              orbit_cap));
    }
    return prof;
}

Rational SubdivisionProfile::lower_bound(const Gamma& gamma) const {
    // Walk the nodes in domain order, adding |increment| between successive
    // one-sided values; at a split interior point that includes the jump of
    // phi across it.
    size_t node = 0;
    auto next_value = [&]() { return sync_on_orbit(node_orbits_[node++], gamma); };

    Rational prev = next_value();   // (0, R)
    Rational sum(0);
    const size_t n_pts = points_.size();
    for (size_t i = 1; i + 1 < n_pts; ++i) {
        Rational left = next_value();
        sum = sum + (left - prev).abs();
        prev = left;
        if (split_sides_) {
            Rational right = next_value();
            sum = sum + (right - prev).abs();
            prev = right;
        }
    }
    Rational last = next_value();   // (1, L)
    sum = sum + (last - prev).abs();
    return sum;
}

Rational variation_lower_bound(const PiecewiseAffineMap& map, const Gamma& gamma, int depth) {
    return SubdivisionProfile::build(map, depth).lower_bound(gamma);
}

std::string Prop2Hypotheses::failure_description() const {
    std::string s;
    if (!full_branch) s += "no branch maps its atom onto all of [0,1]";
    if (!endpoint_fixed && !interior_kink_to_endpoint) {
        if (!s.empty()) s += "; ";
        s += "neither endpoint is one-sided fixed (T(0+0)=0 or T(1-0)=1) and no "
             "breakpoint mapping to an endpoint has preimages on both sides";
    }
    return s.empty() ? "hypotheses hold" : s;
}

Prop2Hypotheses check_prop2_hypotheses(const PiecewiseAffineMap& map) {
    Prop2Hypotheses h;
    const int n = map.atom_count();
    for (int i = 0; i < n; ++i) {
        Rational lo = map.image_left(i), hi = map.image_right(i);
        if (hi < lo) std::swap(lo, hi);
        if (lo.is_zero() && hi == Rational(1)) {
            h.full_branch = true;
            h.full_branch_atom = i;
            break;
        }
    }
    h.endpoint_fixed = map.image_left(0).is_zero() || map.image_right(n - 1) == Rational(1);
    if (!h.endpoint_fixed) {
        for (int m = 1; m < n && !h.interior_kink_to_endpoint; ++m) {
            const Rational& a = map.breakpoint(m);
            if (map.is_jump_point(a)) continue;
            Rational ta = map.image_right(m - 1);   // continuous at a, either side works
            if (!ta.is_zero() && ta != Rational(1)) continue;
            bool below = false, above = false;
            for (int i = 0; i < n; ++i) {
                Rational w = (a - map.intercept(i)) / map.slope(i);
                if (w < map.breakpoint(i) || map.breakpoint(i + 1) < w) continue;
                if (w < a) below = true;
                if (a < w) above = true;
            }
            h.interior_kink_to_endpoint = below && above;
        }
    }
    return h;
}

namespace {

// Sided steps from a periodic value until the (value, side) pair closes:
// one lap, or two when the composition reverses orientation.
std::vector<SidedPoint> sided_closure(const PiecewiseAffineMap& map, const Rational& value,
                                      size_t cap) {
    SidedPoint start = default_sided(value);
    std::vector<SidedPoint> cycle{start};
    SidedPoint cur = start;
    for (size_t i = 0; i < cap; ++i) {
        cur = map.step(cur);
        if (cur == start) return cycle;
        cycle.push_back(cur);
    }
    throw InternalError("periodic candidate did not close as a sided orbit");
}

} // namespace

DivergenceCertificate prop2_certificate(const PiecewiseAffineMap& map,
                                        const TransitionMatrix& matrix, const Gamma& gamma,
                                        int word_cap, int growth_count) {
    Prop2Hypotheses hyp = check_prop2_hypotheses(map);
    if (!hyp.satisfied())
        throw ValidationError("divergence certificate hypotheses fail: " +
                              hyp.failure_description());

    const int n = map.atom_count();
    for (int p = 1; p <= word_cap; ++p) {
        std::vector<int> word(static_cast<size_t>(p), 0);
        while (true) {
            // Admissibility of the cyclic word.
            bool ok = true;
            for (int j = 0; j < p && ok; ++j)
                ok = matrix.at(word[static_cast<size_t>(j)],
                               word[static_cast<size_t>((j + 1) % p)]);
            if (ok) {
                // Affine composition along the word and its fixed point.
                Rational slope(1), intercept(0);
                for (int j = 0; j < p; ++j) {
                    int atom = word[static_cast<size_t>(j)];
                    slope = map.slope(atom) * slope;
                    intercept = map.slope(atom) * intercept + map.intercept(atom);
                }
                Rational x = intercept / (Rational(1) - slope);

                // Keep only cycles running through open atoms, where sided
                // stepping and the word agree.
                std::vector<Rational> values;
                Rational cur = x;
                bool interior = true;
                for (int j = 0; j < p && interior; ++j) {
                    int atom = word[static_cast<size_t>(j)];
                    interior = map.breakpoint(atom) < cur && cur < map.breakpoint(atom + 1);
                    values.push_back(cur);
                    cur = map.slope(atom) * cur + map.intercept(atom);
                }
                if (interior) {
                    size_t min_at = 0;
                    for (size_t i = 1; i < values.size(); ++i)
                        if (values[i] < values[min_at]) min_at = i;
                    std::vector<Rational> rotated;
                    rotated.reserve(values.size());
                    for (size_t i = 0; i < values.size(); ++i)
                        rotated.push_back(values[(min_at + i) % values.size()]);

                    std::vector<SidedPoint> cycle =
                            sided_closure(map, rotated.front(), 2 * values.size());
                    Rational phi = sync_at_periodic(map, cycle, gamma);
                    Rational gap = (rotated.front() - (Rational(1) - gamma.value()) * phi).abs();
                    if (!gap.is_zero()) {
                        DivergenceCertificate cert;
                        cert.gap = gap;
                        cert.cycle = std::move(rotated);
                        Rational gp(1);
                        for (int t = 1; t <= growth_count; ++t) {
                            gp = gp * gamma.value();
                            GrowthTerm term;
                            term.n = t;
                            term.cylinder_count = Rational(mpq_class(matrix.word_count(t + 1)));
                            term.term = term.cylinder_count * gp * gap;
                            cert.growth_terms.push_back(std::move(term));
                        }
                        return cert;
                    }
                }
            }
            // Next word in lexicographic order.
            int j = p - 1;
            while (j >= 0 && word[static_cast<size_t>(j)] == n - 1) word[static_cast<size_t>(j--)] = 0;
            if (j < 0) break;
            ++word[static_cast<size_t>(j)];
        }
    }
    throw ValidationError("no interior cycle with a nonzero gap found among words of length up to " +
                          std::to_string(word_cap));
}

Rational reduced_variation(const std::vector<std::pair<Rational, Rational>>& samples) {
    if (samples.size() < 2) throw ValidationError("need at least two samples");
    std::vector<Rational> dx, df;
    for (size_t i = 1; i < samples.size(); ++i) {
        Rational d = samples[i].first - samples[i - 1].first;
        if (d.sign() <= 0) throw ValidationError("sample points must be strictly increasing");
        dx.push_back(std::move(d));
        df.push_back(samples[i].second - samples[i - 1].second);
    }
    // The objective sum |df - a*dx| is convex piecewise linear in a, so the
    // minimum sits at one of the data slopes.
    Rational best(-1);
    for (size_t c = 0; c < dx.size(); ++c) {
        Rational a = df[c] / dx[c];
        Rational val(0);
        for (size_t i = 0; i < dx.size(); ++i) val = val + (df[i] - a * dx[i]).abs();
        if (best.sign() < 0 || val < best) best = val;
    }
    return best;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Lipschitz: return "lipschitz";
        case Regime::BoundedVariation: return "bounded-variation";
        case Regime::Threshold: return "threshold";
        case Regime::InfiniteVariation: return "infinite-variation";
        case Regime::ExceptionalCandidate: return "exceptional-candidate";
    }
    return "unknown";
}

MapAnalysis analyze_map(const PiecewiseAffineMap& map, bool with_exceptional,
                        int witness_depth_cap) {
    MapAnalysis a{map, validate_markov(map), regime_thresholds(map), {}};
    if (with_exceptional)
        a.polynomials = exceptional_analysis(map, Rational(0), Rational(1), witness_depth_cap);
    return a;
}

Regime classify_regime(const MapAnalysis& analysis, const Gamma& gamma) {
    const Rational& g = gamma.value();
    const Rational one(1);
    if (analysis.thresholds.K * g < one) return Regime::Lipschitz;
    if (g * analysis.thresholds.entropy.rho_hi < one) return Regime::BoundedVariation;
    if (!(one < g * analysis.thresholds.entropy.rho_lo)) return Regime::Threshold;
    if (analysis.polynomials.empty())
        throw InternalError("supercritical classification requires exceptional analysis");
    return vanishes_on_all(analysis.polynomials, g) ? Regime::ExceptionalCandidate
                                                    : Regime::InfiniteVariation;
}

const char* verdict_name(VariationVerdict v) {
    switch (v) {
        case VariationVerdict::Bounded: return "bounded";
        case VariationVerdict::Diverging: return "diverging";
        case VariationVerdict::ExceptionalCandidate: return "exceptional-candidate";
        case VariationVerdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

VariationVerdict variation_verdict(const MapAnalysis& analysis, const Gamma& gamma, Regime regime,
                                   std::optional<DivergenceCertificate>* certificate, int word_cap,
                                   int growth_count) {
    auto attach_certificate = [&]() {
        try {
            auto cert = prop2_certificate(analysis.map, analysis.matrix, gamma, word_cap,
                                          growth_count);
            if (certificate) *certificate = std::move(cert);
            return true;
        } catch (const ValidationError&) {
            return false;
        }
    };

    switch (regime) {
        case Regime::Lipschitz:
        case Regime::BoundedVariation:
            return VariationVerdict::Bounded;
        case Regime::InfiniteVariation:
            // Diverging either way: with a certificate when one exists, on
            // the strength of the growing lower bounds otherwise.
            attach_certificate();
            return VariationVerdict::Diverging;
        case Regime::Threshold:
            return attach_certificate() ? VariationVerdict::Diverging
                                        : VariationVerdict::Inconclusive;
        case Regime::ExceptionalCandidate:
            return VariationVerdict::ExceptionalCandidate;
    }
    throw InternalError("unhandled regime");
}

VariationReport analyze_variation(const MapAnalysis& analysis, const Gamma& gamma,
                                  const VariationOptions& opts) {
    VariationReport rep;
    rep.gamma = gamma.value();
    rep.regime = classify_regime(analysis, gamma);
    rep.upper = variation_upper_bound(analysis.map, analysis.matrix, analysis.thresholds.entropy,
                                      gamma, opts.kmax);
    for (int d = 0; d <= opts.max_depth; ++d)
        rep.lower_bounds.emplace_back(d, variation_lower_bound(analysis.map, gamma, d));
    rep.verdict = variation_verdict(analysis, gamma, rep.regime, &rep.certificate, opts.word_cap,
                                    opts.growth_count);
    return rep;
}

} // namespace syncvar
