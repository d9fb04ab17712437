#pragma once

#include <optional>
#include <string>

#include "signid/closed_form.hpp"
#include "signid/experiment.hpp"
#include "signid/feasibility.hpp"
#include "signid/graph.hpp"
#include "signid/ou_model.hpp"

namespace signid::json_io {

/// Parsed graph file: the structure plus the optional target edge and name
/// the file may declare.
struct GraphFile {
    graph::DirectedGraph graph;
    std::optional<graph::EdgeRef> target;
    std::optional<std::string> name;
};

/// Accepts {"nodes":[{"name":"H","latent":false},...] , "edges":[["H","Y"],...],
/// "target_edge":["H","Y"], "self_loops":"all", "name":"..."}.
/// Node entries may also be bare strings (latent defaults to false);
/// self-loops must either be listed or requested via "self_loops": "all".
GraphFile graph_from_json(const std::string& text);
std::string graph_to_json(const graph::DirectedGraph& g,
                          const std::optional<graph::EdgeRef>& target = std::nullopt,
                          const std::optional<std::string>& name = std::nullopt);

/// Covariance input: raw CSV (d rows of d comma-separated decimals) or a
/// JSON object {"nodes":[...],"sigma":[[...]]} whose named node order is
/// permuted onto the graph's declared order.
ou::CovarianceMatrix covariance_from_text(const std::string& text,
                                          const graph::DirectedGraph& g);

std::string witness_to_json(const feasibility::FeasibilityWitness& w);
feasibility::FeasibilityWitness witness_from_json(const std::string& text);

std::string verdict_to_json(const feasibility::PointwiseVerdict& v);
feasibility::PointwiseVerdict verdict_from_json(const std::string& text);

std::string condition_report_to_json(const closed_form::ConditionReport& r);

std::string experiment_report_to_json(const experiment::ExperimentReport& r);
experiment::ExperimentReport experiment_report_from_json(const std::string& text);

std::string table1_to_json(const std::vector<experiment::Table1Row>& rows);
std::string table1_to_csv(const std::vector<experiment::Table1Row>& rows);
std::string table1_to_text(const std::vector<experiment::Table1Row>& rows);

}  // namespace signid::json_io
