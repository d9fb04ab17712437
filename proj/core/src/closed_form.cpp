#include "signid/closed_form.hpp"

#include <cmath>

#include "signid/errors.hpp"
#include "signid/graph.hpp"

namespace signid::closed_form {

namespace {

/// Entry s_ij checked against the relative zero tolerance; the checkers
/// divide by these, so entries the m-faithfulness test would call zero are
/// rejected rather than propagated.
double entry(const ou::CovarianceMatrix& s, std::size_t i, std::size_t j, double zero_tol,
             const char* name) {
    const double v = s(i, j);
    if (std::abs(v) <= zero_tol * std::sqrt(s(i, i) * s(j, j)))
        throw ZeroDenominatorEntry(std::string("covariance entry ") + name +
                                   " is zero within tolerance");
    return v;
}

void require_dim(const ou::CovarianceMatrix& s, std::size_t d) {
    if (s.dim() != d)
        throw DimensionMismatch("covariance dimension does not match the catalog structure");
}

CorrelationTriple triple(const ou::CovarianceMatrix& s, double zero_tol) {
    require_dim(s, 3);
    entry(s, 0, 1, zero_tol, "(H,X)");
    entry(s, 0, 2, zero_tol, "(H,Y)");
    entry(s, 1, 2, zero_tol, "(X,Y)");
    return {s.correlation(0, 1), s.correlation(0, 2), s.correlation(1, 2)};
}

Sign sign_of(double v) { return v > 0.0 ? Sign::Plus : Sign::Minus; }

Sign sign_quotient(double num, double den) {
    return (num > 0.0) == (den > 0.0) ? Sign::Plus : Sign::Minus;
}

}  // namespace

Sign sign_cause_effect(const ou::CovarianceMatrix& sigma, double zero_tol) {
    require_dim(sigma, 2);
    return sign_of(entry(sigma, 0, 1, zero_tol, "(H,Y)"));
}

Sign sign_chain(const ou::CovarianceMatrix& sigma, double zero_tol) {
    require_dim(sigma, 3);
    const double shy = entry(sigma, 0, 2, zero_tol, "(H,Y)");
    const double shx = entry(sigma, 0, 1, zero_tol, "(H,X)");
    return sign_quotient(shy, shx);
}

Sign sign_iv(const ou::CovarianceMatrix& sigma, double zero_tol) {
    require_dim(sigma, 4);
    const double szy = entry(sigma, 0, 3, zero_tol, "(Z,Y)");
    const double szx = entry(sigma, 0, 2, zero_tol, "(Z,X)");
    return sign_quotient(szy, szx);
}

BranchSign sign_cycle_iv(const ou::CovarianceMatrix& sigma, double zero_tol) {
    require_dim(sigma, 4);
    const double szy = entry(sigma, 0, 3, zero_tol, "(Z,Y)");
    const double szx = entry(sigma, 0, 2, zero_tol, "(Z,X)");
    entry(sigma, 2, 3, zero_tol, "(X,Y)");

    const double r =
        sigma.correlation(0, 3) * sigma.correlation(2, 3) / sigma.correlation(0, 2);
    if (std::abs(r - 1.0) <= kCondTol) return BranchSign::Boundary;
    const Sign base = sign_quotient(szy, szx);
    if (r < 1.0) return base == Sign::Plus ? BranchSign::Plus : BranchSign::Minus;
    return base == Sign::Plus ? BranchSign::Minus : BranchSign::Plus;
}

ConditionReport confounding_conditions(const ou::CovarianceMatrix& sigma, double zero_tol) {
    const auto [rho_hx, rho_hy, rho_xy] = triple(sigma, zero_tol);

    const double ratio = (2.0 * rho_hy * rho_hy * rho_hx * rho_hx - rho_hy * rho_hy -
                          rho_hx * rho_hx) *
                         (rho_hx * rho_hy - rho_xy) /
                         (2.0 * rho_hx * rho_hy * (rho_hx * rho_hx - 1.0) *
                          (rho_hy * rho_hy - 1.0));
    const bool sign_match = (rho_hx * rho_hy > 0.0) == (rho_xy > 0.0);

    ConditionReport report;
    report.graph_id = "confounding";
    report.values = {{"rho_hx", rho_hx},
                     {"rho_hy", rho_hy},
                     {"rho_xy", rho_xy},
                     {"c1_ratio", ratio},
                     {"c2_sign_match", sign_match ? 1.0 : 0.0}};

    // A sign mismatch violates the easier necessary condition for the
    // zero-pinned system outright, whatever the ratio says.
    if (!sign_match) {
        report.verdict = ConditionVerdict::Identifiable;
        return report;
    }
    if (ratio > 1.0 + kCondTol)
        report.verdict = ConditionVerdict::NonIdentifiable;
    else if (ratio < 1.0 - kCondTol)
        report.verdict = ConditionVerdict::Identifiable;
    else
        report.verdict = ConditionVerdict::Boundary;
    return report;
}

ConditionReport cycle3_conditions(const ou::CovarianceMatrix& sigma, double zero_tol) {
    const auto [rho_hx, rho_hy, rho_xy] = triple(sigma, zero_tol);

    // Quantities of the zero-pinned analysis for the cycle H->X->Y->H with
    // the target X->Y. H plays the third-node role, so the pair entering
    // each expression is fixed by role, not by label: (H,Y) where the
    // source-target pair would sit in the confounding layout.
    if (std::abs(rho_hy - rho_hx * rho_xy) <= kCondTol)
        throw ZeroDenominatorEntry(
            "rho_hy = rho_hx * rho_xy leaves the cycle-3 'b' quantity undefined");

    const double a = rho_hy * rho_hy / (1.0 - rho_hy * rho_hy) * (rho_hx - rho_xy * rho_hy);
    const double b =
        rho_hx * rho_xy / (rho_hy - rho_hx * rho_xy) * (rho_hx - rho_xy / rho_hy);
    const double c = rho_xy / rho_hy + rho_hy * rho_xy;
    const double d = rho_hx * rho_xy / rho_hy;

    ConditionReport report;
    report.graph_id = "cycle-3";
    report.values = {{"rho_hx", rho_hx}, {"rho_hy", rho_hy}, {"rho_xy", rho_xy},
                     {"a", a},           {"b", b},           {"c", c},
                     {"d", d}};

    if (std::abs(a) <= kCondTol || std::abs(b) <= kCondTol || std::abs(d) <= kCondTol) {
        report.verdict = ConditionVerdict::Boundary;
        return report;
    }

    const double q = (-a + c) / b;
    report.values.push_back({"q", q});

    const bool same_ab = (a > 0.0) == (b > 0.0);
    if (d > 0.0 && same_ab) {
        // Conditions 1 and 2: identifiable iff q <= 1.
        if (std::abs(q - 1.0) <= kCondTol)
            report.verdict = ConditionVerdict::Boundary;
        else
            report.verdict =
                q < 1.0 ? ConditionVerdict::Identifiable : ConditionVerdict::NonIdentifiable;
    } else if (d < 0.0 && !same_ab) {
        // Conditions 3 and 4: identifiable iff q >= 1.
        if (std::abs(q - 1.0) <= kCondTol)
            report.verdict = ConditionVerdict::Boundary;
        else
            report.verdict =
                q > 1.0 ? ConditionVerdict::Identifiable : ConditionVerdict::NonIdentifiable;
    } else {
        // The remaining sign combinations always admit a zero-pinned
        // solution.
        report.verdict = ConditionVerdict::NonIdentifiable;
    }
    return report;
}

LatentVerdict latent_verdict(std::string_view graph_id) {
    const auto* entry = graph::find_catalog(graph_id);
    if (entry == nullptr) return LatentVerdict::Unsupported;
    if (entry->id == "cause-effect" || entry->id == "confounding")
        return LatentVerdict::NonIdentifiable;
    if (entry->id == "iv" || entry->id == "cycle-with-iv") return LatentVerdict::Identifiable;
    return LatentVerdict::Unsupported;
}

}  // namespace signid::closed_form
