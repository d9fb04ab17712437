#include "signid/experiment.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "signid/closed_form.hpp"
#include "signid/errors.hpp"

namespace signid::experiment {

namespace {

enum class CfVerdict { Plus, Minus, Identifiable, NonIdentifiable, Boundary, Unavailable };

/// Closed-form verdict for a catalog structure; Unavailable for graphs the
/// analytical lemmas do not cover.
CfVerdict closed_form_verdict(const std::string& graph_id, const ou::CovarianceMatrix& sigma,
                              double zero_tol) {
    using closed_form::BranchSign;
    using closed_form::ConditionVerdict;
    using closed_form::Sign;
    try {
        if (graph_id == "cause-effect")
            return closed_form::sign_cause_effect(sigma, zero_tol) == Sign::Plus
                       ? CfVerdict::Plus
                       : CfVerdict::Minus;
        if (graph_id == "chain")
            return closed_form::sign_chain(sigma, zero_tol) == Sign::Plus ? CfVerdict::Plus
                                                                          : CfVerdict::Minus;
        if (graph_id == "iv")
            return closed_form::sign_iv(sigma, zero_tol) == Sign::Plus ? CfVerdict::Plus
                                                                       : CfVerdict::Minus;
        if (graph_id == "cycle-with-iv") {
            switch (closed_form::sign_cycle_iv(sigma, zero_tol)) {
                case BranchSign::Plus: return CfVerdict::Plus;
                case BranchSign::Minus: return CfVerdict::Minus;
                case BranchSign::Boundary: return CfVerdict::Boundary;
            }
        }
        if (graph_id == "confounding" || graph_id == "cycle-3") {
            const auto report = graph_id == "confounding"
                                    ? closed_form::confounding_conditions(sigma, zero_tol)
                                    : closed_form::cycle3_conditions(sigma, zero_tol);
            switch (report.verdict) {
                case ConditionVerdict::Identifiable: return CfVerdict::Identifiable;
                case ConditionVerdict::NonIdentifiable: return CfVerdict::NonIdentifiable;
                case ConditionVerdict::Boundary: return CfVerdict::Boundary;
            }
        }
    } catch (const ZeroDenominatorEntry&) {
        // Degenerate configuration: the checker defers to the LP engine.
        return CfVerdict::Boundary;
    }
    return CfVerdict::Unavailable;
}

std::string cf_name(CfVerdict v) {
    switch (v) {
        case CfVerdict::Plus: return "plus";
        case CfVerdict::Minus: return "minus";
        case CfVerdict::Identifiable: return "identifiable";
        case CfVerdict::NonIdentifiable: return "non-identifiable";
        case CfVerdict::Boundary: return "boundary";
        case CfVerdict::Unavailable: return "unavailable";
    }
    return "?";
}

std::string lp_name(feasibility::PointwiseStatus s) {
    switch (s) {
        case feasibility::PointwiseStatus::IdentifiablePlus: return "identifiable-plus";
        case feasibility::PointwiseStatus::IdentifiableMinus: return "identifiable-minus";
        case feasibility::PointwiseStatus::NonIdentifiable: return "non-identifiable";
    }
    return "?";
}

bool engines_agree(feasibility::PointwiseStatus lp, CfVerdict cf) {
    using S = feasibility::PointwiseStatus;
    switch (cf) {
        case CfVerdict::Plus: return lp == S::IdentifiablePlus;
        case CfVerdict::Minus: return lp == S::IdentifiableMinus;
        case CfVerdict::Identifiable:
            return lp == S::IdentifiablePlus || lp == S::IdentifiableMinus;
        case CfVerdict::NonIdentifiable: return lp == S::NonIdentifiable;
        default: return true;
    }
}

}  // namespace

std::string engine_name(Engine e) {
    switch (e) {
        case Engine::Lp: return "lp";
        case Engine::ClosedForm: return "closed-form";
        case Engine::Both: return "both";
    }
    return "?";
}

Engine engine_from_name(const std::string& name) {
    if (name == "lp") return Engine::Lp;
    if (name == "closed-form" || name == "closed_form") return Engine::ClosedForm;
    if (name == "both") return Engine::Both;
    throw ParseError("unknown engine: " + name);
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    spec.graph.require_edge(spec.target);
    if (spec.target.source == spec.target.target)
        throw UnknownEdge("target edge must not be a self-loop");
    if (spec.n_samples == 0) throw DimensionMismatch("n_samples must be >= 1");

    ExperimentReport report;
    report.graph_id = spec.graph_id;
    report.target = spec.target;
    report.n_samples = spec.n_samples;
    report.engine = engine_name(spec.engine);
    report.seed = spec.sampler.seed;
    report.sampler = spec.sampler;

    for (std::size_t i = 0; i < spec.n_samples; ++i) {
        auto draw = ou::sample_model(spec.graph, spec.sampler, i);
        report.rejected_hurwitz += draw.hurwitz_rejections;
        report.rejected_faithfulness += draw.faithfulness_rejections;

        if (spec.engine == Engine::ClosedForm) {
            switch (closed_form_verdict(spec.graph_id, draw.sigma, spec.sampler.zero_tol)) {
                case CfVerdict::Plus:
                case CfVerdict::Minus:
                case CfVerdict::Identifiable: ++report.identifiable_count; break;
                case CfVerdict::NonIdentifiable: ++report.non_identifiable_count; break;
                case CfVerdict::Boundary: ++report.boundary_count; break;
                case CfVerdict::Unavailable:
                    throw InconsistentInput(
                        "no closed-form checker covers graph '" + spec.graph_id +
                        "'; use the lp engine");
            }
            continue;
        }

        const auto verdict = feasibility::pointwise_classify(
            spec.graph, draw.sigma, spec.target, &draw.model, spec.sampler.zero_tol);
        if (verdict.status == feasibility::PointwiseStatus::NonIdentifiable)
            ++report.non_identifiable_count;
        else
            ++report.identifiable_count;

        if (spec.engine == Engine::Both) {
            const auto cf =
                closed_form_verdict(spec.graph_id, draw.sigma, spec.sampler.zero_tol);
            if (cf == CfVerdict::Boundary) {
                ++report.closed_form_boundaries;
            } else if (!engines_agree(verdict.status, cf)) {
                report.disagreements.push_back(
                    {i, lp_name(verdict.status), cf_name(cf), verdict});
            }
        }
    }

    const double decided =
        static_cast<double>(report.identifiable_count + report.non_identifiable_count);
    report.fraction =
        decided > 0.0 ? static_cast<double>(report.identifiable_count) / decided : 0.0;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

double table1_reference(const std::string& graph_id) {
    if (graph_id == "cause-effect" || graph_id == "chain" || graph_id == "iv" ||
        graph_id == "cycle-with-iv" || graph_id == "two-proxies" ||
        graph_id == "cycle-with-proxies")
        return 1.0;
    if (graph_id == "confounding") return 0.44;
    if (graph_id == "cycle-3") return 0.64;
    if (graph_id == "one-proxy") return 0.85;
    return std::numeric_limits<double>::quiet_NaN();
}

double table1_tolerance(const std::string& graph_id, std::size_t n) {
    const double ref = table1_reference(graph_id);
    if (std::isnan(ref)) return std::numeric_limits<double>::quiet_NaN();
    // Identifiable structures are exact: one counterexample is a failure.
    if (ref == 1.0) return 0.0;
    // Binomial 3-sigma at worst-case p = 0.5, never tighter than the
    // published band.
    return std::max(0.06, 1.5 / std::sqrt(static_cast<double>(n)));
}

std::vector<Table1Row> reproduce_table1(std::uint64_t seed, std::size_t n,
                                        const ou::SamplerConfig& base,
                                        const std::vector<ProxyGraph>& proxies, Engine engine) {
    std::vector<Table1Row> rows;
    auto run_one = [&](const std::string& id, const graph::DirectedGraph& g,
                       const graph::EdgeRef& target) {
        ExperimentSpec spec{g, target, id, n, base, engine};
        spec.sampler.seed = seed;
        Table1Row row;
        row.report = run_experiment(spec);
        row.graph_id = id;
        row.fraction = row.report.fraction;
        row.reference = table1_reference(id);
        row.tolerance = table1_tolerance(id, n);
        if (std::isnan(row.reference)) {
            row.delta = std::numeric_limits<double>::quiet_NaN();
            row.within_tolerance = true;
        } else {
            row.delta = row.fraction - row.reference;
            row.within_tolerance = row.tolerance == 0.0
                                       ? row.fraction == row.reference
                                       : std::abs(row.delta) <= row.tolerance;
        }
        rows.push_back(std::move(row));
    };

    for (const auto& entry : graph::catalog()) run_one(entry.id, entry.graph, entry.target);
    for (const auto& proxy : proxies) run_one(proxy.id, proxy.graph, proxy.target);
    return rows;
}

}  // namespace signid::experiment
