#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "signid/ou_model.hpp"

namespace signid::closed_form {

/// Absolute slack at every threshold comparison; results inside the slack
/// band come back as Boundary instead of a coin flip.
inline constexpr double kCondTol = 1e-8;

enum class Sign { Plus, Minus };

enum class BranchSign { Plus, Minus, Boundary };

enum class ConditionVerdict { Identifiable, NonIdentifiable, Boundary };

/// Correlation coefficients of a 3-node covariance in catalog order
/// (H, X, Y); each lies in (-1, 1).
struct CorrelationTriple {
    double rho_hx;
    double rho_hy;
    double rho_xy;
};

/// Named condition values together with the identifiability verdict they
/// imply. Serializes to JSON for the CLI's explain output.
struct ConditionReport {
    std::string graph_id;
    std::vector<std::pair<std::string, double>> values;
    ConditionVerdict verdict;
};

// All checkers take a covariance laid out in the catalog node order of the
// structure they analyze and throw ZeroDenominatorEntry when an entry they
// must divide by (or read a sign from) is below zero_tol relative scale.

/// cause-effect (H, Y): sign(alpha) = sign(s_hy).
Sign sign_cause_effect(const ou::CovarianceMatrix& sigma, double zero_tol = 1e-9);

/// chain (H, X, Y): sign(alpha) = sign(s_hy) / sign(s_hx).
Sign sign_chain(const ou::CovarianceMatrix& sigma, double zero_tol = 1e-9);

/// iv (Z, H, X, Y): sign(alpha) = sign(s_zy) / sign(s_zx). Uses observed
/// entries only, so it stays valid when H is latent.
Sign sign_iv(const ou::CovarianceMatrix& sigma, double zero_tol = 1e-9);

/// cycle-with-iv (Z, H, X, Y): sign(s_zy/s_zx) when
/// rho_zy * rho_xy / rho_zx < 1, the negation when > 1; Boundary inside the
/// kCondTol band (the ratio cannot equal 1 for a valid model).
BranchSign sign_cycle_iv(const ou::CovarianceMatrix& sigma, double zero_tol = 1e-9);

/// confounding (H, X, Y): the zero-pinned system is solvable iff the
/// condition ratio exceeds 1, so the verdict is NonIdentifiable above
/// 1 + kCondTol, Identifiable below 1 - kCondTol (or whenever
/// sign(s_hx * s_hy) != sign(s_xy)), Boundary in between.
ConditionReport confounding_conditions(const ou::CovarianceMatrix& sigma,
                                       double zero_tol = 1e-9);

/// cycle-3 (H, X, Y with the cycle H->X->Y->H and target X->Y): evaluates
/// the four sufficient identifiability conditions on the quantities
/// (a, b, c, d) of the zero-pinned analysis.
ConditionReport cycle3_conditions(const ou::CovarianceMatrix& sigma, double zero_tol = 1e-9);

enum class LatentVerdict { Identifiable, NonIdentifiable, Unsupported };

/// Whole-graph verdict when H is latent: non-identifiable for cause-effect
/// and confounding, identifiable for iv and cycle-with-iv, Unsupported for
/// the structures the theory does not cover (and for unknown ids).
LatentVerdict latent_verdict(std::string_view graph_id);

}  // namespace signid::closed_form
