#include "signid/ou_model.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

#include "signid/errors.hpp"
#include "signid/rng.hpp"

namespace signid::ou {

OUModel::OUModel(graph::DirectedGraph g, linalg::Matrix a, std::vector<double> d)
    : graph(std::move(g)), drift(std::move(a)), diffusion(std::move(d)) {
    const std::size_t n = graph.node_count();
    if (!drift.is_square() || drift.rows() != n)
        throw DimensionMismatch("drift must be d x d for a d-node graph");
    if (diffusion.size() != n)
        throw DimensionMismatch("diffusion needs one entry per node");
    for (double v : diffusion) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw DimensionMismatch("diffusion diagonal must be strictly positive");
    }
    // Support containment: a nonzero drift entry (i,j) needs edge j -> i.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (drift(i, j) != 0.0 && !graph.has_edge(graph.node_name(j), graph.node_name(i)))
                throw DimensionMismatch("drift entry (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") has no matching edge");
        }
    }
}

double OUModel::edge_weight(const graph::EdgeRef& e) const {
    graph.require_edge(e);
    return drift(graph.node_index(e.target), graph.node_index(e.source));
}

CovarianceMatrix::CovarianceMatrix(linalg::SymMatrix sigma) : sigma_(std::move(sigma)) {
    sigma_.validate_finite();
    for (std::size_t i = 0; i < sigma_.dim(); ++i) {
        if (!(sigma_(i, i) > 0.0))
            throw DimensionMismatch("covariance diagonal must be strictly positive");
    }
    if (!linalg::is_positive_definite(sigma_))
        throw DimensionMismatch("covariance matrix must be positive definite");
}

double CovarianceMatrix::correlation(std::size_t i, std::size_t j) const {
    return sigma_(i, j) / std::sqrt(sigma_(i, i) * sigma_(j, j));
}

std::string CovarianceMatrix::to_csv() const {
    std::string out;
    char buf[40];
    for (std::size_t i = 0; i < dim(); ++i) {
        for (std::size_t j = 0; j < dim(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", sigma_(i, j));
            out += buf;
            out += (j + 1 < dim()) ? "," : "\n";
        }
    }
    return out;
}

CovarianceMatrix CovarianceMatrix::from_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() &&
                       (cell[used] == ' ' || cell[used] == '\t' || cell[used] == '\r'))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw ParseError("covariance CSV: cannot parse cell '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("covariance CSV: no rows");
    const std::size_t d = rows.size();
    for (const auto& r : rows) {
        if (r.size() != d) throw ParseError("covariance CSV: matrix must be square");
    }

    double max_abs = 0.0;
    double max_asym = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            max_abs = std::max(max_abs, std::abs(rows[i][j]));
            max_asym = std::max(max_asym, std::abs(rows[i][j] - rows[j][i]));
        }
    }
    if (max_abs > 0.0 && max_asym > 1e-6 * max_abs)
        throw ParseError("covariance CSV: asymmetry exceeds 1e-6 relative");

    linalg::SymMatrix s(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) s.set(i, j, 0.5 * (rows[i][j] + rows[j][i]));
    return CovarianceMatrix(std::move(s));
}

void SamplerConfig::validate() const {
    if (!(drift_lo < drift_hi)) throw DimensionMismatch("drift range is empty");
    if (!(diffusion_lo < diffusion_hi)) throw DimensionMismatch("diffusion range is empty");
    if (diffusion_lo < 0.0)
        throw DimensionMismatch("diffusion range must not extend below 0");
    if (!(zero_tol > 0.0)) throw DimensionMismatch("zero_tol must be positive");
    if (max_resamples == 0) throw DimensionMismatch("max_resamples must be >= 1");
}

bool is_hurwitz(const linalg::Matrix& a) {
    if (!a.is_square()) throw DimensionMismatch("drift must be square");
    try {
        const auto x = linalg::solve_lyapunov(a, linalg::SymMatrix::identity(a.rows()));
        return linalg::is_positive_definite(x);
    } catch (const SingularLyapunov&) {
        return false;
    }
}

CovarianceMatrix stationary_covariance(const OUModel& m) {
    // A is Hurwitz iff the solution for a PD diffusion is PD, so the solve
    // itself doubles as the stability check.
    linalg::SymMatrix x(m.graph.node_count());
    try {
        x = linalg::solve_lyapunov(m.drift, linalg::SymMatrix::diagonal(m.diffusion));
    } catch (const SingularLyapunov&) {
        throw NotHurwitz("drift spectrum on the stability boundary");
    }
    if (!linalg::is_positive_definite(x))
        throw NotHurwitz("drift is not Hurwitz stable (stationary solution not PD)");
    return CovarianceMatrix(std::move(x));
}

std::string m_faithful_violation(const CovarianceMatrix& sigma, const graph::DirectedGraph& g,
                                 double zero_tol) {
    if (sigma.dim() != g.node_count())
        throw DimensionMismatch("covariance dimension does not match node count");
    const auto pattern = marginal_independence_pattern(g);
    for (std::size_t i = 0; i < sigma.dim(); ++i) {
        for (std::size_t j = i + 1; j < sigma.dim(); ++j) {
            const bool must_vanish = pattern.zero_pairs.count({i, j}) > 0;
            const double scale = std::sqrt(sigma(i, i) * sigma(j, j));
            const bool vanishes = std::abs(sigma(i, j)) <= zero_tol * scale;
            if (must_vanish != vanishes) {
                return "(" + g.node_name(i) + "," + g.node_name(j) + ") must be " +
                       (must_vanish ? "zero" : "nonzero");
            }
        }
    }
    return "";
}

bool check_m_faithful(const CovarianceMatrix& sigma, const graph::DirectedGraph& g,
                      double zero_tol) {
    if (!linalg::is_positive_definite(sigma.sym())) return false;
    return m_faithful_violation(sigma, g, zero_tol).empty();
}

SampleResult sample_model(const graph::DirectedGraph& g, const SamplerConfig& cfg,
                          std::uint64_t index) {
    cfg.validate();
    if (g.has_latent_nodes())
        throw LatentNodesPresent("sampling draws the full model; remove latent flags");

    const std::size_t n = g.node_count();
    rng::Stream stream(cfg.seed, rng::fnv1a(g.canonical_string()), index);

    std::uint64_t hurwitz_rejections = 0;
    std::uint64_t faithfulness_rejections = 0;

    for (std::uint64_t attempt = 0; attempt < cfg.max_resamples; ++attempt) {
        linalg::Matrix a(n, n);
        for (const auto& e : g.edges()) {
            const double w = stream.uniform(cfg.drift_lo, cfg.drift_hi);
            a(g.node_index(e.target), g.node_index(e.source)) = w;
        }
        std::vector<double> d(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double v = stream.uniform(cfg.diffusion_lo, cfg.diffusion_hi);
            while (!(v > 0.0)) v = stream.uniform(cfg.diffusion_lo, cfg.diffusion_hi);
            d[i] = v;
        }

        if (!is_hurwitz(a)) {
            ++hurwitz_rejections;
            continue;
        }
        OUModel model(g, std::move(a), std::move(d));
        auto sigma = stationary_covariance(model);
        if (!check_m_faithful(sigma, g, cfg.zero_tol)) {
            ++faithfulness_rejections;
            continue;
        }
        return SampleResult{std::move(model), std::move(sigma), hurwitz_rejections,
                            faithfulness_rejections};
    }
    throw ResampleBudgetExhausted(
        "no accepted draw within " + std::to_string(cfg.max_resamples) + " attempts (" +
        std::to_string(hurwitz_rejections) + " non-Hurwitz, " +
        std::to_string(faithfulness_rejections) + " faithfulness rejections)");
}

}  // namespace signid::ou
