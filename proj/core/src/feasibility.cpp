#include "signid/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "signid/errors.hpp"
#include "signid/rng.hpp"

namespace signid::feasibility {

namespace {

constexpr double kPivotTol = 1e-12;
constexpr double kReducedCostTol = 1e-10;
constexpr std::size_t kMaxPivots = 200000;

double witness_scale(const linalg::Matrix& a, const linalg::SymMatrix& sigma,
                     const std::vector<double>& d) {
    double dmax = 0.0;
    for (double v : d) dmax = std::max(dmax, std::abs(v));
    return a.inf_norm() * sigma.inf_norm() + dmax;
}

}  // namespace

FeasibilitySystem build_system(const graph::DirectedGraph& g, const ou::CovarianceMatrix& sigma,
                               const graph::EdgeRef& e, SystemMode mode, double zero_tol) {
    if (g.has_latent_nodes())
        throw LatentNodesPresent(
            "feasibility with latent variables is bilinear and not supported");
    g.require_edge(e);
    if (e.source == e.target) throw UnknownEdge("target edge must not be a self-loop");
    if (sigma.dim() != g.node_count())
        throw DimensionMismatch("covariance dimension does not match node count");
    const std::string violation = ou::m_faithful_violation(sigma, g, zero_tol);
    if (!violation.empty()) throw NotMFaithful("covariance is not m-faithful: " + violation);

    const std::size_t n = g.node_count();
    FeasibilitySystem sys{mode, n, sigma.sym(), {}, linalg::Matrix(1, 1), {}, std::nullopt};

    const std::size_t target_row = g.node_index(e.target);
    const std::size_t target_col = g.node_index(e.source);

    // Unknowns: supported drift entries in canonical edge order (the target
    // entry is dropped entirely in Zero mode), then the diffusion diagonal.
    // drift_var(i, j) maps the A(i,j) position to its unknown index.
    std::vector<std::vector<long>> drift_var(n, std::vector<long>(n, -1));
    for (const auto& edge : g.edges()) {
        const std::size_t i = g.node_index(edge.target);
        const std::size_t j = g.node_index(edge.source);
        if (mode == SystemMode::Zero && i == target_row && j == target_col) continue;
        drift_var[i][j] = static_cast<long>(sys.unknowns.size());
        sys.unknowns.push_back({FeasibilitySystem::Unknown::Kind::Drift, i, j,
                                "A[" + edge.source + "->" + edge.target + "]"});
    }
    std::vector<std::size_t> diffusion_var(n);
    for (std::size_t i = 0; i < n; ++i) {
        diffusion_var[i] = sys.unknowns.size();
        sys.unknowns.push_back({FeasibilitySystem::Unknown::Kind::Diffusion, i, i,
                                "D[" + g.node_name(i) + "]"});
    }

    // Structural zeros of the independence pattern are snapped to exact
    // zeros; the tiny residue a Lyapunov solve leaves in those entries
    // would otherwise pollute the rows.
    const auto pattern = marginal_independence_pattern(g);
    auto sig = [&](std::size_t i, std::size_t j) -> double {
        if (i != j && pattern.zero_pairs.count({std::min(i, j), std::max(i, j)})) return 0.0;
        return sigma(i, j);
    };

    // One equality row per upper-triangle pair (i, j):
    //   sum_k A(i,k) s_kj + sum_k A(j,k) s_ki + D_ij = 0,
    // with D_ij = 0 off the diagonal. Rows whose coefficients are all
    // structural zeros (disjoint-ancestor pairs) are vacuous and dropped;
    // the rest are scaled to unit max-abs coefficient.
    const std::size_t nvars = sys.unknowns.size();
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            std::vector<double> row(nvars, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                if (drift_var[i][k] >= 0) row[drift_var[i][k]] += sig(k, j);
                if (drift_var[j][k] >= 0) row[drift_var[j][k]] += sig(k, i);
            }
            if (i == j) row[diffusion_var[i]] = 1.0;
            double max_abs = 0.0;
            for (double v : row) max_abs = std::max(max_abs, std::abs(v));
            if (max_abs == 0.0) continue;
            for (double& v : row) v /= max_abs;
            rows.push_back(std::move(row));
        }
    }

    sys.eq = linalg::Matrix(rows.size(), nvars);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < nvars; ++c) sys.eq(r, c) = rows[r][c];

    for (std::size_t i = 0; i < n; ++i) sys.bounds.push_back({diffusion_var[i], 1.0});
    if (mode != SystemMode::Zero) {
        const std::size_t tv = static_cast<std::size_t>(drift_var[target_row][target_col]);
        sys.target_var = tv;
        sys.bounds.push_back({tv, mode == SystemMode::SignPlus ? 1.0 : -1.0});
    }
    return sys;
}

std::pair<linalg::Matrix, std::vector<double>> reassemble(const FeasibilitySystem& sys,
                                                          const FeasibilityWitness& w) {
    linalg::Matrix a(sys.dim, sys.dim);
    std::vector<double> d(sys.dim, 0.0);
    for (std::size_t v = 0; v < sys.unknowns.size(); ++v) {
        const auto& u = sys.unknowns[v];
        if (u.kind == FeasibilitySystem::Unknown::Kind::Drift)
            a(u.row, u.col) = w.values[v];
        else
            d[u.row] = w.values[v];
    }
    return {std::move(a), std::move(d)};
}

namespace {

FeasibilityWitness make_witness(const FeasibilitySystem& sys, std::vector<double> values) {
    FeasibilityWitness w;
    w.names.reserve(sys.unknowns.size());
    for (const auto& u : sys.unknowns) w.names.push_back(u.name);
    w.values = std::move(values);
    auto [a, d] = reassemble(sys, w);
    w.residual = linalg::lyapunov_residual(a, sys.sigma, linalg::SymMatrix::diagonal(d));
    return w;
}

}  // namespace

std::optional<FeasibilityWitness> lp_feasible(const FeasibilitySystem& sys) {
    const std::size_t nvars = sys.unknowns.size();
    const std::size_t m = sys.eq.rows();

    // Standard form: bounded unknowns substitute x = coef * (1 + s) with
    // s >= 0; free unknowns split as p - q. Column layout: one slack per
    // bound, then (p, q) pairs for the free unknowns, then one artificial
    // per row.
    std::vector<double> bound_coef(nvars, 0.0);
    for (const auto& b : sys.bounds) bound_coef[b.var] = b.coef;

    std::vector<std::size_t> col_of_bound(nvars, 0), pcol(nvars, 0);
    std::size_t ncols = 0;
    for (const auto& b : sys.bounds) col_of_bound[b.var] = ncols++;
    for (std::size_t v = 0; v < nvars; ++v) {
        if (bound_coef[v] == 0.0) {
            pcol[v] = ncols;
            ncols += 2;
        }
    }
    const std::size_t total = ncols + m + 1;  // + artificials + rhs

    std::vector<std::vector<double>> t(m + 1, std::vector<double>(total, 0.0));
    for (std::size_t r = 0; r < m; ++r) {
        double rhs = 0.0;
        for (std::size_t v = 0; v < nvars; ++v) {
            const double c = sys.eq(r, v);
            if (c == 0.0) continue;
            if (bound_coef[v] != 0.0) {
                t[r][col_of_bound[v]] += c * bound_coef[v];
                rhs -= c * bound_coef[v];
            } else {
                t[r][pcol[v]] += c;
                t[r][pcol[v] + 1] -= c;
            }
        }
        if (rhs < 0.0) {
            for (std::size_t c = 0; c < ncols; ++c) t[r][c] = -t[r][c];
            rhs = -rhs;
        }
        t[r][ncols + r] = 1.0;
        t[r][total - 1] = rhs;
    }

    // Cost row holds c_j - z_j for the phase-1 objective (minimize the sum
    // of artificials); entering columns are those with a negative entry.
    for (std::size_t c = 0; c < ncols; ++c) {
        double colsum = 0.0;
        for (std::size_t r = 0; r < m; ++r) colsum += t[r][c];
        t[m][c] = -colsum;
    }
    double objective = 0.0;
    for (std::size_t r = 0; r < m; ++r) objective += t[r][total - 1];
    t[m][total - 1] = -objective;

    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) basis[r] = ncols + r;

    for (std::size_t iter = 0; iter < kMaxPivots; ++iter) {
        // Bland: smallest-index structural column with negative reduced cost.
        std::size_t enter = total;
        for (std::size_t c = 0; c < ncols; ++c) {
            if (t[m][c] < -kReducedCostTol) {
                enter = c;
                break;
            }
        }
        if (enter == total) break;

        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        double col_max = 0.0;
        for (std::size_t r = 0; r < m; ++r) col_max = std::max(col_max, std::abs(t[r][enter]));
        const double eligible = kPivotTol * std::max(1.0, col_max);
        for (std::size_t r = 0; r < m; ++r) {
            if (t[r][enter] <= eligible) continue;
            const double ratio = t[r][total - 1] / t[r][enter];
            if (ratio < best_ratio - 1e-12 ||
                (ratio <= best_ratio + 1e-12 && (leave == m || basis[r] < basis[leave]))) {
                best_ratio = ratio;
                leave = r;
            }
        }
        if (leave == m) {
            throw NumericalBreakdown(
                "phase-1 pivot column has no usable pivot (magnitudes below tolerance)");
        }

        const double pivot = t[leave][enter];
        for (std::size_t c = 0; c < total; ++c) t[leave][c] /= pivot;
        for (std::size_t r = 0; r <= m; ++r) {
            if (r == leave) continue;
            const double f = t[r][enter];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < total; ++c) t[r][c] -= f * t[leave][c];
        }
        basis[leave] = enter;
        if (iter + 1 == kMaxPivots)
            throw NumericalBreakdown("phase-1 simplex exceeded the pivot budget");
    }

    objective = -t[m][total - 1];
    if (!(objective <= kFeasTol)) return std::nullopt;

    std::vector<double> cols(ncols, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < ncols) cols[basis[r]] = t[r][total - 1];
    }
    std::vector<double> values(nvars, 0.0);
    for (std::size_t v = 0; v < nvars; ++v) {
        if (bound_coef[v] != 0.0)
            values[v] = bound_coef[v] * (1.0 + cols[col_of_bound[v]]);
        else
            values[v] = cols[pcol[v]] - cols[pcol[v] + 1];
    }
    return make_witness(sys, std::move(values));
}

namespace {

double value_scale(const std::vector<double>& values) {
    double s = 1.0;
    for (double v : values) s = std::max(s, std::abs(v));
    return s;
}

bool full_support(const FeasibilitySystem& sys, const std::vector<double>& values,
                  double floor) {
    for (std::size_t v = 0; v < sys.unknowns.size(); ++v) {
        if (sys.unknowns[v].kind == FeasibilitySystem::Unknown::Kind::Drift &&
            std::abs(values[v]) <= floor)
            return false;
    }
    return true;
}

bool diffusion_positive(const FeasibilitySystem& sys, const std::vector<double>& values) {
    for (std::size_t v = 0; v < sys.unknowns.size(); ++v) {
        if (sys.unknowns[v].kind == FeasibilitySystem::Unknown::Kind::Diffusion &&
            !(values[v] > 0.0))
            return false;
    }
    return true;
}

/// Scales a solution so the smallest diffusion entry is exactly 1; the
/// equality system is homogeneous, so this stays a solution.
void normalize_diffusion(const FeasibilitySystem& sys, std::vector<double>& values) {
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < sys.unknowns.size(); ++v) {
        if (sys.unknowns[v].kind == FeasibilitySystem::Unknown::Kind::Diffusion)
            dmin = std::min(dmin, values[v]);
    }
    if (!(dmin > 0.0)) throw InconsistentInput("diffusion lost positivity during repair");
    for (double& v : values) v /= dmin;
}

bool sign_ok(const FeasibilitySystem& sys, const std::vector<double>& values, double floor) {
    if (!sys.target_var) return true;
    double coef = 0.0;
    for (const auto& b : sys.bounds) {
        if (b.var == *sys.target_var) coef = b.coef;
    }
    return coef * values[*sys.target_var] > floor;
}

/// Restores structural minimality: the LP relaxes supp(A') = E to a subset,
/// so a returned basic solution can have zeros on required edges. Moving a
/// small step inside the solution space (toward a full-support companion
/// when one is known, else along a generic null-space direction) clears
/// them while preserving the equality rows, the diffusion floor and the
/// sign at the target edge.
FeasibilityWitness repair_full_support(const FeasibilitySystem& sys,
                                       const FeasibilityWitness& witness,
                                       const std::vector<double>* companion) {
    const double floor = 1e-10 * value_scale(witness.values);
    if (full_support(sys, witness.values, floor)) return witness;

    auto finish = [&](std::vector<double> values) -> std::optional<FeasibilityWitness> {
        if (!diffusion_positive(sys, values)) return std::nullopt;
        const double f = 1e-10 * value_scale(values);
        if (!full_support(sys, values, f) || !sign_ok(sys, values, f)) return std::nullopt;
        normalize_diffusion(sys, values);
        auto w = make_witness(sys, std::move(values));
        auto [a, d] = reassemble(sys, w);
        if (w.residual > kWitnessResidualTol * witness_scale(a, sys.sigma, d))
            return std::nullopt;
        return w;
    };

    const std::size_t nvars = sys.unknowns.size();
    if (companion && companion->size() == nvars) {
        for (double t : {0.999, 0.9993, 0.9971, 0.9913, 0.983, 0.9719}) {
            std::vector<double> values(nvars);
            for (std::size_t v = 0; v < nvars; ++v)
                values[v] = t * witness.values[v] + (1.0 - t) * (*companion)[v];
            if (auto w = finish(std::move(values))) return *w;
        }
    }

    const auto kernel = linalg::null_space(sys.eq);
    if (!kernel.empty()) {
        const double scale = value_scale(witness.values);
        for (std::size_t attempt = 0; attempt < 24; ++attempt) {
            rng::Stream stream(0x7265706169724cULL, attempt, kernel.size());
            std::vector<double> dir(nvars, 0.0);
            for (const auto& k : kernel) {
                const double c = stream.uniform(-1.0, 1.0);
                for (std::size_t v = 0; v < nvars; ++v) dir[v] += c * k[v];
            }
            double dmax = 0.0;
            for (double v : dir) dmax = std::max(dmax, std::abs(v));
            if (dmax == 0.0) continue;
            const double eps = scale * 1e-4 * std::pow(4.0, attempt % 6) / dmax;
            std::vector<double> values(nvars);
            for (std::size_t v = 0; v < nvars; ++v)
                values[v] = witness.values[v] + eps * dir[v];
            if (auto w = finish(std::move(values))) return *w;
        }
    }
    throw InconsistentInput("could not repair a sign witness to full support");
}

void validate_witness(const FeasibilitySystem& sys, const FeasibilityWitness& w,
                      bool require_full_support) {
    auto [a, d] = reassemble(sys, w);
    const double scale = witness_scale(a, sys.sigma, d);
    if (w.residual > kWitnessResidualTol * scale)
        throw InconsistentInput("witness residual exceeds tolerance");
    for (double v : d) {
        if (!(v >= kDiffusionFloor))
            throw InconsistentInput("witness diffusion entry below the normalized floor");
    }
    const double floor = 1e-10 * value_scale(w.values);
    if (!sign_ok(sys, w.values, floor))
        throw InconsistentInput("witness violates the sign constraint at the target edge");
    if (require_full_support && !full_support(sys, w.values, floor))
        throw InconsistentInput("witness has zero entries on required edges");
    if (!ou::is_hurwitz(a))
        throw InconsistentInput("witness drift is not Hurwitz stable");
}

std::vector<double> companion_from_generator(const FeasibilitySystem& sys,
                                             const ou::OUModel& generator) {
    std::vector<double> values(sys.unknowns.size(), 0.0);
    for (std::size_t v = 0; v < sys.unknowns.size(); ++v) {
        const auto& u = sys.unknowns[v];
        values[v] = u.kind == FeasibilitySystem::Unknown::Kind::Drift
                        ? generator.drift(u.row, u.col)
                        : generator.diffusion[u.row];
    }
    return values;
}

/// Combination witness with sign zero at the target edge, built from the
/// two sign witnesses (the systems share one unknown layout).
FeasibilityWitness combine_to_m0(const FeasibilitySystem& plus_sys,
                                 const FeasibilityWitness& plus_w,
                                 const FeasibilityWitness& minus_w) {
    const std::size_t tv = *plus_sys.target_var;
    const double ap = plus_w.values[tv];
    const double am = minus_w.values[tv];
    const double t = am / (am - ap);
    if (!(t > 0.0 && t < 1.0))
        throw InconsistentInput("sign witnesses do not bracket zero at the target edge");

    std::vector<double> values(plus_w.values.size());
    for (std::size_t v = 0; v < values.size(); ++v)
        values[v] = t * plus_w.values[v] + (1.0 - t) * minus_w.values[v];
    if (std::abs(values[tv]) > 1e-9 * value_scale(values))
        throw InconsistentInput("combination failed to zero the target edge");
    values[tv] = 0.0;

    auto w = make_witness(plus_sys, std::move(values));
    auto [a, d] = reassemble(plus_sys, w);
    if (w.residual > kWitnessResidualTol * witness_scale(a, plus_sys.sigma, d))
        throw InconsistentInput("combined zero-sign witness residual exceeds tolerance");
    for (double v : d) {
        if (!(v >= kDiffusionFloor))
            throw InconsistentInput("combined zero-sign witness lost diffusion positivity");
    }
    return w;
}

}  // namespace

PointwiseVerdict pointwise_classify(const graph::DirectedGraph& g,
                                    const ou::CovarianceMatrix& sigma, const graph::EdgeRef& e,
                                    const ou::OUModel* generator, double zero_tol) {
    const auto plus_sys = build_system(g, sigma, e, SystemMode::SignPlus, zero_tol);
    const auto minus_sys = build_system(g, sigma, e, SystemMode::SignMinus, zero_tol);

    auto plus_w = lp_feasible(plus_sys);
    auto minus_w = lp_feasible(minus_sys);
    if (!plus_w && !minus_w)
        throw InconsistentInput(
            "both sign systems are infeasible: covariance is outside the possible set "
            "for this graph/edge (or numerics failed)");

    std::optional<std::vector<double>> companion;
    if (generator) companion = companion_from_generator(plus_sys, *generator);
    const std::vector<double>* comp = companion ? &*companion : nullptr;

    PointwiseVerdict verdict{PointwiseStatus::NonIdentifiable, {}, {}, {}};
    if (plus_w && minus_w) {
        verdict.status = PointwiseStatus::NonIdentifiable;
        verdict.m0_witness = combine_to_m0(plus_sys, *plus_w, *minus_w);
        verdict.witness_same = repair_full_support(plus_sys, *plus_w, comp);
        verdict.witness_opposite = repair_full_support(minus_sys, *minus_w, comp);
        validate_witness(plus_sys, *verdict.witness_same, true);
        validate_witness(minus_sys, *verdict.witness_opposite, true);
    } else if (plus_w) {
        verdict.status = PointwiseStatus::IdentifiablePlus;
        verdict.witness_same = repair_full_support(plus_sys, *plus_w, comp);
        validate_witness(plus_sys, *verdict.witness_same, true);
    } else {
        verdict.status = PointwiseStatus::IdentifiableMinus;
        verdict.witness_same = repair_full_support(minus_sys, *minus_w, comp);
        validate_witness(minus_sys, *verdict.witness_same, true);
    }
    return verdict;
}

bool m0_member(const graph::DirectedGraph& g, const ou::CovarianceMatrix& sigma,
               const graph::EdgeRef& e, double zero_tol) {
    const auto sys = build_system(g, sigma, e, SystemMode::Zero, zero_tol);
    return lp_feasible(sys).has_value();
}

}  // namespace signid::feasibility
