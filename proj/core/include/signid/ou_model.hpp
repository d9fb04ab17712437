#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "signid/graph.hpp"
#include "signid/linalg.hpp"

namespace signid::ou {

/// One parametrization of the stationary linear SDE: a drift matrix whose
/// support follows the graph (entry (i,j) is the weight of edge j -> i) and
/// a strictly positive diagonal diffusion.
struct OUModel {
    graph::DirectedGraph graph;
    linalg::Matrix drift;
    std::vector<double> diffusion;  // D_ii > 0, one per node

    OUModel(graph::DirectedGraph g, linalg::Matrix a, std::vector<double> d);

    double edge_weight(const graph::EdgeRef& e) const;
};

/// Symmetric positive definite observational covariance. Construction
/// verifies positive definiteness (which also enforces the strict
/// correlation bound |s_ij| < sqrt(s_ii s_jj)).
class CovarianceMatrix {
public:
    explicit CovarianceMatrix(linalg::SymMatrix sigma);

    std::size_t dim() const { return sigma_.dim(); }
    const linalg::SymMatrix& sym() const { return sigma_; }
    double operator()(std::size_t i, std::size_t j) const { return sigma_(i, j); }

    /// rho_ij = s_ij / sqrt(s_ii s_jj).
    double correlation(std::size_t i, std::size_t j) const;

    /// Serializes as d header-less rows of comma-separated decimals.
    std::string to_csv() const;
    /// Parses the CSV form; symmetrizes by averaging and throws ParseError
    /// if the asymmetry exceeds 1e-6 relative to the largest entry.
    static CovarianceMatrix from_csv(const std::string& text);

private:
    linalg::SymMatrix sigma_;
};

struct SamplerConfig {
    double drift_lo = -10.0;
    double drift_hi = 10.0;
    double diffusion_lo = 0.0;  // interval open at 0: draws of exactly 0 are redrawn
    double diffusion_hi = 10.0;
    std::uint64_t seed = 0;
    std::uint64_t max_resamples = 10000;
    double zero_tol = 1e-9;

    void validate() const;
};

/// Hurwitz stability via the Lyapunov route: solve A X + X A^T = -I and
/// test X for positive definiteness. Returns false when the vectorized
/// operator is singular (spectrum on the boundary) or X is not PD.
bool is_hurwitz(const linalg::Matrix& a);

/// The forward map (A, D) -> Sigma. Throws NotHurwitz when the drift is not
/// Hurwitz stable (singular operator or non-PD solution).
CovarianceMatrix stationary_covariance(const OUModel& m);

/// True iff sigma is PD and its zero pattern matches the graph's
/// disjoint-common-ancestor pairs: pair in the zero set iff
/// |s_ij| <= zero_tol * sqrt(s_ii s_jj).
bool check_m_faithful(const CovarianceMatrix& sigma, const graph::DirectedGraph& g,
                      double zero_tol);

/// Names the first node pair violating the faithfulness pattern, or an
/// empty string when the pattern holds. Used for diagnostics.
std::string m_faithful_violation(const CovarianceMatrix& sigma, const graph::DirectedGraph& g,
                                 double zero_tol);

struct SampleResult {
    OUModel model;
    CovarianceMatrix sigma;
    std::uint64_t hurwitz_rejections = 0;
    std::uint64_t faithfulness_rejections = 0;
};

/// Draws supported drift entries and diffusion diagonals uniformly from the
/// configured ranges, rejecting until the drift is Hurwitz and the induced
/// covariance is m-faithful. The draw stream is keyed by
/// (cfg.seed, graph, index), so the same triple reproduces the same model
/// bit for bit and disjoint index ranges can run on parallel workers.
/// Throws ResampleBudgetExhausted after cfg.max_resamples attempts and
/// LatentNodesPresent when the graph has latent nodes.
SampleResult sample_model(const graph::DirectedGraph& g, const SamplerConfig& cfg,
                          std::uint64_t index = 0);

}  // namespace signid::ou
