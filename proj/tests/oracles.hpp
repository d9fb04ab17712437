// Test-only oracles, deliberately independent of the implementation paths
// they cross-check: stability via the characteristic polynomial instead of
// a Lyapunov solve, reachability via Floyd-Warshall instead of BFS, and
// feasibility via randomized search on the solution manifold instead of
// the simplex.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "signid/graph.hpp"
#include "signid/linalg.hpp"
#include "signid/ou_model.hpp"
#include "signid/rng.hpp"

namespace oracles {

/// Monic characteristic polynomial coefficients (c[0] = 1) by the
/// Faddeev-LeVerrier recurrence.
inline std::vector<double> char_poly(const signid::linalg::Matrix& a) {
    const std::size_t n = a.rows();
    std::vector<double> c(n + 1, 0.0);
    c[0] = 1.0;
    signid::linalg::Matrix m = a;
    for (std::size_t k = 1; k <= n; ++k) {
        if (k > 1) {
            signid::linalg::Matrix shifted = m;
            for (std::size_t i = 0; i < n; ++i) shifted(i, i) += c[k - 1];
            m = a * shifted;
        }
        double tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
        c[k] = -tr / static_cast<double>(k);
    }
    return c;
}

/// Routh-Hurwitz criterion: every root of the (monic) polynomial has a
/// strictly negative real part iff all first-column entries of the Routh
/// array are positive. Degenerate zero entries mean roots on or right of
/// the imaginary axis, hence "not stable" for our purposes.
inline bool routh_stable(const std::vector<double>& coeffs) {
    const std::size_t n = coeffs.size() - 1;
    if (n == 0) return true;
    // Two working rows of the Routh array.
    std::vector<double> upper, lower;
    for (std::size_t i = 0; i < coeffs.size(); i += 2) upper.push_back(coeffs[i]);
    for (std::size_t i = 1; i < coeffs.size(); i += 2) lower.push_back(coeffs[i]);
    lower.resize(upper.size(), 0.0);

    if (!(upper[0] > 0.0)) return false;
    for (std::size_t row = 1; row <= n; ++row) {
        if (!(lower[0] > 0.0)) return false;
        std::vector<double> next(upper.size(), 0.0);
        for (std::size_t i = 0; i + 1 < upper.size(); ++i) {
            next[i] = (lower[0] * upper[i + 1] - upper[0] * lower[i + 1]) / lower[0];
        }
        upper = lower;
        lower = next;
    }
    return true;
}

inline bool hurwitz_by_char_poly(const signid::linalg::Matrix& a) {
    return routh_stable(char_poly(a));
}

/// Floyd-Warshall reachability; entry (i, j) says "i reaches j via a path
/// of length >= 1".
inline std::vector<std::vector<bool>> reachability(const signid::graph::DirectedGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (const auto& e : g.edges())
        reach[g.node_index(e.source)][g.node_index(e.target)] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    return reach;
}

inline std::set<std::pair<std::size_t, std::size_t>> zero_pairs_by_reachability(
    const signid::graph::DirectedGraph& g) {
    const auto reach = reachability(g);
    const std::size_t n = g.node_count();
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool share = false;
            for (std::size_t k = 0; k < n; ++k) {
                const bool anc_i = reach[k][i] || k == i;
                const bool anc_j = reach[k][j] || k == j;
                if (anc_i && anc_j) share = true;
            }
            if (!share) pairs.insert({i, j});
        }
    }
    return pairs;
}

struct SignSearch {
    bool plus_seen = false;
    bool minus_seen = false;
};

/// Randomized search over the drift-coefficient manifold: the off-diagonal
/// Lyapunov rows are linear in the drift entries, so trial points are drawn
/// from the null space of those rows and kept when every implied diffusion
/// entry is strictly positive. Records which signs of the target edge occur.
inline SignSearch search_feasible_signs(const signid::graph::DirectedGraph& g,
                                        const signid::ou::CovarianceMatrix& sigma,
                                        const signid::graph::EdgeRef& e, std::size_t trials,
                                        std::uint64_t seed, double span = 3.0) {
    using signid::linalg::Matrix;
    const std::size_t n = g.node_count();
    const auto& edges = g.edges();
    const std::size_t k = edges.size();

    std::vector<std::pair<std::size_t, std::size_t>> positions(k);  // A(row, col) per unknown
    std::size_t target_var = k;
    for (std::size_t v = 0; v < k; ++v) {
        positions[v] = {g.node_index(edges[v].target), g.node_index(edges[v].source)};
        if (edges[v] == e) target_var = v;
    }

    const std::size_t off_rows = n * (n - 1) / 2;
    Matrix rows(off_rows, k);
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++r) {
            for (std::size_t v = 0; v < k; ++v) {
                const auto [ti, tj] = positions[v];
                if (ti == i) rows(r, v) += sigma(tj, j);
                if (ti == j) rows(r, v) += sigma(tj, i);
            }
        }
    }
    const auto basis = signid::linalg::null_space(rows);

    SignSearch out;
    signid::rng::Stream stream(seed, 0x6f7261636cULL, 0);
    const double floor = 1e-9;
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<double> x(k, 0.0);
        for (const auto& b : basis) {
            const double c = stream.uniform(-span, span);
            for (std::size_t v = 0; v < k; ++v) x[v] += c * b[v];
        }
        // Implied diffusion: D_ii = -2 (A Sigma)_ii must be positive.
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            double diag = 0.0;
            for (std::size_t v = 0; v < k; ++v) {
                if (positions[v].first == i) diag += x[v] * sigma(positions[v].second, i);
            }
            if (!(-2.0 * diag > floor)) ok = false;
        }
        if (!ok) continue;
        if (x[target_var] > floor) out.plus_seen = true;
        if (x[target_var] < -floor) out.minus_seen = true;
    }
    return out;
}

}  // namespace oracles
