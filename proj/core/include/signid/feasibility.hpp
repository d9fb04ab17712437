#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "signid/graph.hpp"
#include "signid/linalg.hpp"
#include "signid/ou_model.hpp"

namespace signid::feasibility {

/// Phase-1 objective threshold below which a system counts as feasible.
inline constexpr double kFeasTol = 1e-9;
/// Relative bound on the Lyapunov residual of any returned witness.
inline constexpr double kWitnessResidualTol = 1e-7;
/// Witness diffusion entries must stay above this.
inline constexpr double kDiffusionFloor = 1.0 - 1e-9;

enum class SystemMode {
    SignPlus,   // adds  A'_e >= 1
    SignMinus,  // adds -A'_e >= 1
    Zero,       // removes A'_e from the unknowns (pins it to 0)
};

/// Linear feasibility system for a fixed covariance: the Lyapunov equality
/// rows over the supported drift entries plus the diffusion diagonal, with
/// the open positivity conditions normalized to closed bounds (the system
/// is homogeneous, so any strictly feasible point rescales onto them).
struct FeasibilitySystem {
    struct Unknown {
        enum class Kind { Drift, Diffusion };
        Kind kind;
        std::size_t row;  // drift: A(row, col); diffusion: row == col == node
        std::size_t col;
        std::string name;  // "A[src->dst]" or "D[node]"
    };

    struct Bound {
        std::size_t var;
        double coef;  // coef * x_var >= 1, coef in {+1, -1}
    };

    SystemMode mode;
    std::size_t dim = 0;
    linalg::SymMatrix sigma;  // covariance the rows were built from
    std::vector<Unknown> unknowns;
    linalg::Matrix eq;  // equality rows (scaled to unit max-abs), rhs = 0
    std::vector<Bound> bounds;
    std::optional<std::size_t> target_var;  // absent in Zero mode
};

/// An explicit (A', D') assignment certifying feasibility. Values align
/// with the generating system's unknown order; names are carried along for
/// serialization and audit.
struct FeasibilityWitness {
    std::vector<std::string> names;
    std::vector<double> values;
    double residual = 0.0;
};

/// Builds the Lyapunov feasibility system for (g, sigma) at edge e.
/// Throws UnknownEdge, NotMFaithful (naming the violating pair),
/// LatentNodesPresent and DimensionMismatch.
FeasibilitySystem build_system(const graph::DirectedGraph& g, const ou::CovarianceMatrix& sigma,
                               const graph::EdgeRef& e, SystemMode mode, double zero_tol = 1e-9);

/// Phase-1 simplex with Bland's anti-cycling rule on the standard-form
/// encoding. Returns a witness iff the artificial objective reaches
/// kFeasTol; empty means infeasible. Throws NumericalBreakdown when pivot
/// magnitudes degenerate (reported, never treated as infeasible).
std::optional<FeasibilityWitness> lp_feasible(const FeasibilitySystem& sys);

/// Reassembles a witness into the drift matrix and diffusion diagonal.
std::pair<linalg::Matrix, std::vector<double>> reassemble(const FeasibilitySystem& sys,
                                                          const FeasibilityWitness& w);

enum class PointwiseStatus {
    IdentifiablePlus,
    IdentifiableMinus,
    NonIdentifiable,
};

/// Classification of the target edge's sign for one covariance matrix.
/// witness_same carries the verdict's sign for identifiable results; for
/// NonIdentifiable it is the positive-sign witness and witness_opposite
/// the negative one. m0_witness is the constructive zero-sign certificate
/// assembled from the two sign witnesses whenever both exist.
struct PointwiseVerdict {
    PointwiseStatus status;
    std::optional<FeasibilityWitness> witness_same;
    std::optional<FeasibilityWitness> witness_opposite;
    std::optional<FeasibilityWitness> m0_witness;
};

/// Decides pointwise identifiability of e for sigma by running the two
/// sign systems. Witnesses are repaired to full support (structural
/// minimality) and validated: Lyapunov residual, diffusion floor, sign
/// constraint, Hurwitz stability. 'generator', when provided, supplies the
/// full-support companion used by the repair; otherwise a generic solution
/// space perturbation is used. Throws InconsistentInput when both sign
/// systems are infeasible (sigma outside the possible set) or a witness
/// fails validation.
PointwiseVerdict pointwise_classify(const graph::DirectedGraph& g,
                                    const ou::CovarianceMatrix& sigma, const graph::EdgeRef& e,
                                    const ou::OUModel* generator = nullptr,
                                    double zero_tol = 1e-9);

/// True iff the zero-pinned system is feasible, i.e. sigma admits a
/// sub-support solution with the target edge absent.
bool m0_member(const graph::DirectedGraph& g, const ou::CovarianceMatrix& sigma,
               const graph::EdgeRef& e, double zero_tol = 1e-9);

}  // namespace signid::feasibility
