#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "signid/feasibility.hpp"
#include "signid/graph.hpp"
#include "signid/ou_model.hpp"

namespace signid::experiment {

enum class Engine { Lp, ClosedForm, Both };

std::string engine_name(Engine e);
Engine engine_from_name(const std::string& name);

struct ExperimentSpec {
    graph::DirectedGraph graph;
    graph::EdgeRef target;
    /// Catalog id or user label; reported, and used to pick the matching
    /// closed-form checker. The RNG is keyed by the graph structure itself.
    std::string graph_id;
    std::size_t n_samples = 1000;
    ou::SamplerConfig sampler;
    Engine engine = Engine::Both;
};

/// One engine conflict, logged with the full LP verdict (witnesses
/// included) so it can be audited offline.
struct Disagreement {
    std::size_t sample_index = 0;
    std::string lp;
    std::string closed_form;
    std::optional<feasibility::PointwiseVerdict> lp_detail;
};

struct ExperimentReport {
    std::string graph_id;
    graph::EdgeRef target;
    std::size_t n_samples = 0;
    std::string engine;

    std::uint64_t identifiable_count = 0;
    std::uint64_t non_identifiable_count = 0;
    /// Primary-engine boundary verdicts; nonzero only when the closed-form
    /// engine runs alone.
    std::uint64_t boundary_count = 0;
    std::uint64_t rejected_hurwitz = 0;
    std::uint64_t rejected_faithfulness = 0;
    /// Cross-check boundaries (and zero-denominator aborts) excluded from
    /// the disagreement tally when both engines run.
    std::uint64_t closed_form_boundaries = 0;

    /// identifiable / (identifiable + non-identifiable).
    double fraction = 0.0;
    std::vector<Disagreement> disagreements;
    std::uint64_t seed = 0;
    ou::SamplerConfig sampler;

    /// Measured, not serialized: report bytes stay identical across runs.
    double wall_seconds = 0.0;
};

/// Runs the sampling + classification loop: n accepted draws, each sampled
/// from a per-index deterministic stream, classified pointwise, and
/// tallied. Hurwitz and faithfulness rejections never enter the
/// denominator. Deterministic given the spec, whatever the execution
/// order.
ExperimentReport run_experiment(const ExperimentSpec& spec);

struct ProxyGraph {
    std::string id;
    graph::DirectedGraph graph;
    graph::EdgeRef target;
};

struct Table1Row {
    std::string graph_id;
    double fraction = 0.0;
    /// Reference fraction; NaN when the structure has no known reference.
    double reference = 0.0;
    /// Absolute tolerance; 0 means the fraction must match exactly.
    double tolerance = 0.0;
    double delta = 0.0;
    bool within_tolerance = true;
    ExperimentReport report;
};

/// Reference fraction for a structure id (the six built-ins plus the three
/// proxy names); NaN when unknown.
double table1_reference(const std::string& graph_id);

/// Absolute tolerance at the given sample count: exact for the
/// identifiable structures, a binomial band for the partially
/// identifiable ones (widened below 1000 samples).
double table1_tolerance(const std::string& graph_id, std::size_t n);

/// Runs run_experiment over the six catalog structures (plus any supplied
/// proxy graphs) and compares each fraction against its reference.
std::vector<Table1Row> reproduce_table1(std::uint64_t seed, std::size_t n,
                                        const ou::SamplerConfig& base,
                                        const std::vector<ProxyGraph>& proxies = {},
                                        Engine engine = Engine::Both);

}  // namespace signid::experiment
