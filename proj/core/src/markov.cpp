#include "syncvar/markov.hpp"

#include <algorithm>
#include <cmath>

#include "syncvar/errors.hpp"

namespace syncvar {

namespace {

// Directed slop covering the rational-to-double conversion (< 1 ulp,
// truncated toward zero) plus the libm evaluation (~1 ulp).  Generous by
// a couple of orders of magnitude; the certification budgets are 1e-12.
constexpr double kLogSlop = 1e-14;
constexpr double kExpSlopRel = 1e-14;

std::vector<int> strongly_connected_components(int n, const std::vector<uint8_t>& a) {
    // Kosaraju: finish order on G, then sweep G^T.
    std::vector<int> order;
    order.reserve(static_cast<size_t>(n));
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (int s = 0; s < n; ++s) {
        if (seen[static_cast<size_t>(s)]) continue;
        // iterative DFS with explicit edge cursor
        std::vector<std::pair<int, int>> stack{{s, 0}};
        seen[static_cast<size_t>(s)] = 1;
        while (!stack.empty()) {
            auto& [v, j] = stack.back();
            if (j == n) {
                order.push_back(v);
                stack.pop_back();
                continue;
            }
            int w = j++;
            if (a[static_cast<size_t>(v) * n + w] && !seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                stack.emplace_back(w, 0);
            }
        }
    }
    std::vector<int> comp(static_cast<size_t>(n), -1);
    int ncomp = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (comp[static_cast<size_t>(*it)] != -1) continue;
        std::vector<int> stack{*it};
        comp[static_cast<size_t>(*it)] = ncomp;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w = 0; w < n; ++w)
                if (a[static_cast<size_t>(w) * n + v] && comp[static_cast<size_t>(w)] == -1) {
                    comp[static_cast<size_t>(w)] = ncomp;
                    stack.push_back(w);
                }
        }
        ++ncomp;
    }
    return comp;
}

} // namespace

Enclosure certified_log(const Rational& r) {
    if (r.sign() <= 0) throw InternalError("log of nonpositive rational");
    if (r == Rational(1)) return Enclosure{0.0, 0.0};
    double l = std::log(r.to_double());
    double pad = kLogSlop * std::max(1.0, std::fabs(l));
    return Enclosure{l - pad, l + pad};
}

Enclosure certified_exp(const Enclosure& x) {
    double lo = std::exp(x.lo), hi = std::exp(x.hi);
    return Enclosure{lo * (1 - kExpSlopRel), hi * (1 + kExpSlopRel)};
}

TransitionMatrix TransitionMatrix::from_entries(int n, std::vector<uint8_t> entries) {
    if (n < 1 || entries.size() != static_cast<size_t>(n) * static_cast<size_t>(n))
        throw ValidationError("transition matrix size mismatch");
    TransitionMatrix m;
    m.n = n;
    m.entries = std::move(entries);
    m.component_of = strongly_connected_components(n, m.entries);
    int ncomp = *std::max_element(m.component_of.begin(), m.component_of.end()) + 1;
    m.irreducible = ncomp == 1 && (n > 1 || m.at(0, 0));
    return m;
}

mpz_class TransitionMatrix::word_count(int k) const {
    mpz_class total = 0;
    for (const mpz_class& c : end_counts(k)) total += c;
    return total;
}

std::vector<mpz_class> TransitionMatrix::end_counts(int k) const {
    if (k < 1) throw ValidationError("word length must be at least 1");
    std::vector<mpz_class> u(static_cast<size_t>(n), 1);
    for (int step = 1; step < k; ++step) {
        std::vector<mpz_class> next(static_cast<size_t>(n), 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (at(i, j)) next[static_cast<size_t>(j)] += u[static_cast<size_t>(i)];
        u = std::move(next);
    }
    return u;
}

TransitionMatrix validate_markov(const PiecewiseAffineMap& map) {
    const auto& bps = map.breakpoints();
    auto breakpoint_index = [&](const Rational& y) {
        auto it = std::lower_bound(bps.begin(), bps.end(), y);
        if (it == bps.end() || *it != y) return -1;
        return static_cast<int>(it - bps.begin());
    };

    const int n = map.atom_count();
    std::vector<uint8_t> entries(static_cast<size_t>(n) * static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        Rational lo = map.image_left(i), hi = map.image_right(i);
        if (hi < lo) std::swap(lo, hi);
        int a = breakpoint_index(lo);
        int b = breakpoint_index(hi);
        if (a < 0)
            throw ValidationError("not Markov: atom " + std::to_string(i) +
                                  " image endpoint " + lo.str() + " is not a breakpoint");
        if (b < 0)
            throw ValidationError("not Markov: atom " + std::to_string(i) +
                                  " image endpoint " + hi.str() + " is not a breakpoint");
        for (int j = a; j < b; ++j)
            entries[static_cast<size_t>(i) * n + j] = 1;
    }
    return TransitionMatrix::from_entries(n, std::move(entries));
}

namespace {

struct ComponentBounds {
    Rational lo, hi;                 // enclosure of the component's spectral radius
    std::vector<mpz_class> vec;      // final iteration vector (component-local)
    std::vector<int> nodes;
};

// Collatz-Wielandt bounds for one strongly connected component, iterated
// on I + M so the matrix is primitive and the bounds close geometrically.
ComponentBounds component_radius(const TransitionMatrix& m, const std::vector<int>& nodes) {
    ComponentBounds out;
    out.nodes = nodes;
    const size_t sz = nodes.size();
    if (sz == 1 && !m.at(nodes[0], nodes[0])) {
        out.lo = Rational(0);
        out.hi = Rational(0);
        return out;
    }

    std::vector<mpz_class> v(sz, 1), w(sz);
    const Rational tol(1, 10000000000000L);   // 1e-13 absolute on the radius
    const int max_iters = 200000;
    for (int iter = 0; iter < max_iters; ++iter) {
        for (size_t r = 0; r < sz; ++r) {
            w[r] = v[r];                       // the I part
            for (size_t c = 0; c < sz; ++c)
                if (m.at(nodes[r], nodes[c])) w[r] += v[c];
        }
        Rational alpha, beta;
        for (size_t r = 0; r < sz; ++r) {
            Rational ratio{w[r], v[r]};
            if (r == 0 || ratio < alpha) alpha = ratio;
            if (r == 0 || ratio > beta) beta = ratio;
        }
        if (beta - alpha <= tol) {
            out.lo = alpha - Rational(1);
            out.hi = beta - Rational(1);
            out.vec = std::move(v);
            return out;
        }
        std::swap(v, w);
        if ((iter & 31) == 31) {
            mpz_class g = v[0];
            for (size_t r = 1; r < sz && g != 1; ++r)
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v[r].get_mpz_t());
            if (g > 1)
                for (auto& e : v) e /= g;
        }
    }
    throw InternalError("spectral radius enclosure did not converge");
}

} // namespace

EntropyResult topological_entropy(const TransitionMatrix& m) {
    for (int i = 0; i < m.n; ++i) {
        bool any = false;
        for (int j = 0; j < m.n && !any; ++j) any = m.at(i, j);
        if (!any)
            throw ValidationError("row " + std::to_string(i) + " of the transition matrix is empty");
    }

    int ncomp = *std::max_element(m.component_of.begin(), m.component_of.end()) + 1;
    std::vector<std::vector<int>> comps(static_cast<size_t>(ncomp));
    for (int v = 0; v < m.n; ++v)
        comps[static_cast<size_t>(m.component_of[static_cast<size_t>(v)])].push_back(v);

    EntropyResult res;
    res.irreducible = m.irreducible;
    bool first = true;
    ComponentBounds dominant;
    for (const auto& nodes : comps) {
        ComponentBounds cb = component_radius(m, nodes);
        if (first || cb.lo > res.rho_lo) res.rho_lo = cb.lo;
        if (first || cb.hi > res.rho_hi) {
            res.rho_hi = cb.hi;
            dominant = std::move(cb);
        }
        first = false;
    }

    // Every row has a successor, so some cycle exists and rho >= 1; the
    // lower Collatz-Wielandt bound may be clamped up to 1 safely.
    if (res.rho_lo < Rational(1)) res.rho_lo = Rational(1);
    res.h.lo = certified_log(res.rho_lo).lo;
    res.h.hi = certified_log(res.rho_hi).hi;

    if (m.irreducible && !dominant.vec.empty()) {
        const auto& v = dominant.vec;
        res.perron.reserve(v.size());
        mpz_class sum = 0, mn = v[0];
        for (const auto& e : v) {
            res.perron.push_back(Rational(mpq_class(e)));
            sum += e;
            if (e < mn) mn = e;
        }
        // beta with M v <= beta v exactly, for geometric tail bounds
        Rational beta;
        for (size_t r = 0; r < v.size(); ++r) {
            mpz_class acc = 0;
            for (size_t c = 0; c < v.size(); ++c)
                if (m.at(dominant.nodes[r], dominant.nodes[c])) acc += v[c];
            Rational ratio{acc, v[r]};
            if (r == 0 || ratio > beta) beta = ratio;
        }
        res.growth_beta = beta;
        res.growth_amplitude = Rational{sum, mn};
    }
    return res;
}

namespace {

// Kernel of an exact rational matrix via Gauss-Jordan elimination.
std::vector<std::vector<Rational>> kernel_basis(std::vector<std::vector<Rational>> a) {
    const size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    std::vector<int> pivot_col_of_row;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        Rational inv = a[r][c].inverse();
        for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Rational f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivot_col_of_row.push_back(static_cast<int>(c));
        ++r;
    }
    std::vector<char> is_pivot(cols, 0);
    for (int pc : pivot_col_of_row) is_pivot[static_cast<size_t>(pc)] = 1;

    std::vector<std::vector<Rational>> basis;
    for (size_t free_c = 0; free_c < cols; ++free_c) {
        if (is_pivot[free_c]) continue;
        std::vector<Rational> vec(cols, Rational(0));
        vec[free_c] = Rational(1);
        for (size_t i = 0; i < pivot_col_of_row.size(); ++i)
            vec[static_cast<size_t>(pivot_col_of_row[i])] = -a[i][free_c];
        basis.push_back(std::move(vec));
    }
    return basis;
}

} // namespace

AcimResult acim_and_lyapunov(const PiecewiseAffineMap& map, const TransitionMatrix& m) {
    if (!map.expanding())
        throw ValidationError("map is not expanding: some |slope| <= 1");
    if (!m.irreducible)
        throw ValidationError("transition structure is not transitive");

    const int n = m.n;
    // Transfer matrix: mass reaching atom j is sum over atoms i covering j
    // of density_i / |slope_i|.  Eigenvalue is exactly 1 (atom lengths form
    // a left eigenvector), so the density is the kernel of (B - I).
    std::vector<std::vector<Rational>> bmi(static_cast<size_t>(n),
                                           std::vector<Rational>(static_cast<size_t>(n)));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            Rational v = m.at(i, j) ? map.slope(i).abs().inverse() : Rational(0);
            if (i == j) v -= Rational(1);
            bmi[static_cast<size_t>(j)][static_cast<size_t>(i)] = v;
        }

    auto basis = kernel_basis(std::move(bmi));
    if (basis.size() != 1)
        throw InternalError("invariant density space has dimension " +
                            std::to_string(basis.size()) + ", expected 1");
    std::vector<Rational> density = std::move(basis[0]);
    int sgn = 0;
    for (const auto& d : density) {
        if (d.is_zero())
            throw InternalError("invariant density vanishes on an atom");
        if (sgn == 0) sgn = d.sign();
        else if (d.sign() != sgn)
            throw InternalError("invariant density changes sign");
    }
    if (sgn < 0)
        for (auto& d : density) d = -d;

    Rational total(0);
    for (int i = 0; i < n; ++i) total += density[static_cast<size_t>(i)] * map.atom_length(i);
    Rational scale = total.inverse();

    AcimResult res;
    res.density.reserve(static_cast<size_t>(n));
    res.weights.reserve(static_cast<size_t>(n));
    double lo = 0, hi = 0;
    for (int i = 0; i < n; ++i) {
        Rational d = density[static_cast<size_t>(i)] * scale;
        Rational w = d * map.atom_length(i);
        Enclosure lg = certified_log(map.slope(i).abs());
        double wd = w.to_double();
        lo += wd * lg.lo;
        hi += wd * lg.hi;
        res.density.push_back(std::move(d));
        res.weights.push_back(std::move(w));
    }
    res.lyapunov = Enclosure{lo - 1e-13, hi + 1e-13};
    return res;
}

RegimeThresholds regime_thresholds(const PiecewiseAffineMap& map) {
    TransitionMatrix m = validate_markov(map);
    RegimeThresholds t;
    t.entropy = topological_entropy(m);
    t.acim = acim_and_lyapunov(map, m);
    t.K = map.max_abs_slope();
    t.gamma_lipschitz = t.K.inverse();
    if (t.entropy.rho_lo.sign() <= 0)
        throw InternalError("spectral radius enclosure touches zero");
    t.gamma_variation_lo = t.entropy.rho_hi.inverse();
    t.gamma_variation_hi = t.entropy.rho_lo.inverse();
    t.gamma_lyapunov = certified_exp(Enclosure{-t.acim.lyapunov.hi, -t.acim.lyapunov.lo});
    return t;
}

} // namespace syncvar
