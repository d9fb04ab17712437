#include "signid/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "signid/errors.hpp"

namespace signid::json_io {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("invalid JSON");
    return j;
}

json edge_to_json(const graph::EdgeRef& e) { return json::array({e.source, e.target}); }

graph::EdgeRef edge_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
        throw ParseError("edge must be a two-element array of node names");
    return {j[0].get<std::string>(), j[1].get<std::string>()};
}

json witness_json(const feasibility::FeasibilityWitness& w) {
    json values = json::object();
    for (std::size_t i = 0; i < w.names.size(); ++i) values[w.names[i]] = w.values[i];
    return json{{"values", values}, {"residual", w.residual}};
}

feasibility::FeasibilityWitness witness_from(const json& j) {
    feasibility::FeasibilityWitness w;
    if (!j.contains("values") || !j["values"].is_object())
        throw ParseError("witness needs a 'values' object");
    for (const auto& [name, value] : j["values"].items()) {
        w.names.push_back(name);
        w.values.push_back(value.get<double>());
    }
    w.residual = j.value("residual", 0.0);
    return w;
}

std::string status_name(feasibility::PointwiseStatus s) {
    switch (s) {
        case feasibility::PointwiseStatus::IdentifiablePlus: return "identifiable-plus";
        case feasibility::PointwiseStatus::IdentifiableMinus: return "identifiable-minus";
        case feasibility::PointwiseStatus::NonIdentifiable: return "non-identifiable";
    }
    return "?";
}

feasibility::PointwiseStatus status_from_name(const std::string& s) {
    if (s == "identifiable-plus") return feasibility::PointwiseStatus::IdentifiablePlus;
    if (s == "identifiable-minus") return feasibility::PointwiseStatus::IdentifiableMinus;
    if (s == "non-identifiable") return feasibility::PointwiseStatus::NonIdentifiable;
    throw ParseError("unknown verdict status: " + s);
}

json verdict_json(const feasibility::PointwiseVerdict& v) {
    json j;
    j["status"] = status_name(v.status);
    j["witness_same"] = v.witness_same ? witness_json(*v.witness_same) : json(nullptr);
    j["witness_opposite"] =
        v.witness_opposite ? witness_json(*v.witness_opposite) : json(nullptr);
    j["m0_witness"] = v.m0_witness ? witness_json(*v.m0_witness) : json(nullptr);
    return j;
}

feasibility::PointwiseVerdict verdict_from(const json& j) {
    feasibility::PointwiseVerdict v;
    v.status = status_from_name(j.at("status").get<std::string>());
    if (j.contains("witness_same") && !j["witness_same"].is_null())
        v.witness_same = witness_from(j["witness_same"]);
    if (j.contains("witness_opposite") && !j["witness_opposite"].is_null())
        v.witness_opposite = witness_from(j["witness_opposite"]);
    if (j.contains("m0_witness") && !j["m0_witness"].is_null())
        v.m0_witness = witness_from(j["m0_witness"]);
    return v;
}

json sampler_json(const ou::SamplerConfig& cfg) {
    return json{{"drift_range", json::array({cfg.drift_lo, cfg.drift_hi})},
                {"diffusion_range", json::array({cfg.diffusion_lo, cfg.diffusion_hi})},
                {"max_resamples", cfg.max_resamples},
                {"zero_tol", cfg.zero_tol}};
}

ou::SamplerConfig sampler_from(const json& j, std::uint64_t seed) {
    ou::SamplerConfig cfg;
    cfg.seed = seed;
    cfg.drift_lo = j.at("drift_range")[0].get<double>();
    cfg.drift_hi = j.at("drift_range")[1].get<double>();
    cfg.diffusion_lo = j.at("diffusion_range")[0].get<double>();
    cfg.diffusion_hi = j.at("diffusion_range")[1].get<double>();
    cfg.max_resamples = j.at("max_resamples").get<std::uint64_t>();
    cfg.zero_tol = j.at("zero_tol").get<double>();
    return cfg;
}

}  // namespace

GraphFile graph_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
        throw ParseError("graph JSON needs 'nodes' and 'edges'");

    std::vector<graph::NodeSpec> nodes;
    for (const auto& n : j["nodes"]) {
        if (n.is_string()) {
            nodes.push_back({n.get<std::string>(), false});
        } else if (n.is_object() && n.contains("name")) {
            nodes.push_back({n["name"].get<std::string>(), n.value("latent", false)});
        } else {
            throw ParseError("node entries must be names or {\"name\",\"latent\"} objects");
        }
    }

    std::vector<graph::EdgeRef> edges;
    for (const auto& e : j["edges"]) edges.push_back(edge_from_json(e));

    if (j.value("self_loops", "") == "all") {
        for (const auto& n : nodes) {
            const bool present = std::any_of(edges.begin(), edges.end(), [&](const auto& e) {
                return e.source == n.name && e.target == n.name;
            });
            if (!present) edges.push_back({n.name, n.name});
        }
    }

    GraphFile out{graph::DirectedGraph(std::move(nodes), std::move(edges)), std::nullopt,
                  std::nullopt};
    if (j.contains("target_edge")) out.target = edge_from_json(j["target_edge"]);
    if (j.contains("name")) out.name = j["name"].get<std::string>();
    return out;
}

std::string graph_to_json(const graph::DirectedGraph& g,
                          const std::optional<graph::EdgeRef>& target,
                          const std::optional<std::string>& name) {
    json j;
    j["nodes"] = json::array();
    for (const auto& n : g.nodes()) j["nodes"].push_back({{"name", n.name}, {"latent", n.latent}});
    j["edges"] = json::array();
    for (const auto& e : g.edges()) j["edges"].push_back(edge_to_json(e));
    if (target) j["target_edge"] = edge_to_json(*target);
    if (name) j["name"] = *name;
    return j.dump();
}

ou::CovarianceMatrix covariance_from_text(const std::string& text,
                                          const graph::DirectedGraph& g) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ParseError("empty covariance input");
    if (text[first] != '{') {
        auto sigma = ou::CovarianceMatrix::from_csv(text);
        if (sigma.dim() != g.node_count())
            throw ParseError("covariance dimension does not match the graph");
        return sigma;
    }

    const json j = parse(text);
    if (!j.contains("nodes") || !j.contains("sigma"))
        throw ParseError("covariance JSON needs 'nodes' and 'sigma'");
    std::vector<std::string> names;
    for (const auto& n : j["nodes"]) names.push_back(n.get<std::string>());
    const std::size_t d = names.size();
    if (d != g.node_count()) throw ParseError("covariance names do not match the graph");

    // Permute rows/columns onto the graph's declared node order, so a file
    // written in a different order cannot be misread silently.
    std::vector<std::size_t> of_graph(d);
    for (std::size_t gi = 0; gi < d; ++gi) {
        const auto it = std::find(names.begin(), names.end(), g.node_name(gi));
        if (it == names.end())
            throw ParseError("covariance JSON is missing node " + g.node_name(gi));
        of_graph[gi] = static_cast<std::size_t>(it - names.begin());
    }

    const auto& m = j["sigma"];
    if (!m.is_array() || m.size() != d) throw ParseError("sigma must be a d x d array");
    linalg::SymMatrix s(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (!m[of_graph[i]].is_array() || m[of_graph[i]].size() != d)
            throw ParseError("sigma must be a d x d array");
        for (std::size_t k = i; k < d; ++k) {
            const double a = m[of_graph[i]][of_graph[k]].get<double>();
            const double b = m[of_graph[k]][of_graph[i]].get<double>();
            if (std::abs(a - b) > 1e-6 * std::max({std::abs(a), std::abs(b), 1e-300}))
                throw ParseError("sigma asymmetry exceeds 1e-6 relative");
            s.set(i, k, 0.5 * (a + b));
        }
    }
    return ou::CovarianceMatrix(std::move(s));
}

std::string witness_to_json(const feasibility::FeasibilityWitness& w) {
    return witness_json(w).dump();
}

feasibility::FeasibilityWitness witness_from_json(const std::string& text) {
    return witness_from(parse(text));
}

std::string verdict_to_json(const feasibility::PointwiseVerdict& v) {
    return verdict_json(v).dump();
}

feasibility::PointwiseVerdict verdict_from_json(const std::string& text) {
    return verdict_from(parse(text));
}

std::string condition_report_to_json(const closed_form::ConditionReport& r) {
    json values = json::object();
    for (const auto& [name, value] : r.values) values[name] = value;
    const char* verdict = r.verdict == closed_form::ConditionVerdict::Identifiable
                              ? "identifiable"
                              : r.verdict == closed_form::ConditionVerdict::NonIdentifiable
                                    ? "non-identifiable"
                                    : "boundary";
    return json{{"graph", r.graph_id}, {"values", values}, {"verdict", verdict}}.dump();
}

std::string experiment_report_to_json(const experiment::ExperimentReport& r) {
    json j;
    j["graph"] = r.graph_id;
    j["edge"] = edge_to_json(r.target);
    j["n"] = r.n_samples;
    j["engine"] = r.engine;
    j["fraction"] = r.fraction;
    j["counts"] = {{"identifiable", r.identifiable_count},
                   {"non_identifiable", r.non_identifiable_count},
                   {"boundary", r.boundary_count},
                   {"rejected_hurwitz", r.rejected_hurwitz},
                   {"rejected_faithfulness", r.rejected_faithfulness},
                   {"closed_form_boundaries", r.closed_form_boundaries}};
    j["seed"] = r.seed;
    j["sampler"] = sampler_json(r.sampler);
    j["disagreements"] = json::array();
    for (const auto& d : r.disagreements) {
        json e{{"index", d.sample_index}, {"lp", d.lp}, {"closed_form", d.closed_form}};
        e["lp_detail"] = d.lp_detail ? verdict_json(*d.lp_detail) : json(nullptr);
        j["disagreements"].push_back(std::move(e));
    }
    return j.dump();
}

experiment::ExperimentReport experiment_report_from_json(const std::string& text) {
    const json j = parse(text);
    experiment::ExperimentReport r;
    r.graph_id = j.at("graph").get<std::string>();
    r.target = edge_from_json(j.at("edge"));
    r.n_samples = j.at("n").get<std::size_t>();
    r.engine = j.at("engine").get<std::string>();
    r.fraction = j.at("fraction").get<double>();
    const auto& c = j.at("counts");
    r.identifiable_count = c.at("identifiable").get<std::uint64_t>();
    r.non_identifiable_count = c.at("non_identifiable").get<std::uint64_t>();
    r.boundary_count = c.at("boundary").get<std::uint64_t>();
    r.rejected_hurwitz = c.at("rejected_hurwitz").get<std::uint64_t>();
    r.rejected_faithfulness = c.at("rejected_faithfulness").get<std::uint64_t>();
    r.closed_form_boundaries = c.at("closed_form_boundaries").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.sampler = sampler_from(j.at("sampler"), r.seed);
    for (const auto& d : j.at("disagreements")) {
        experiment::Disagreement dis;
        dis.sample_index = d.at("index").get<std::size_t>();
        dis.lp = d.at("lp").get<std::string>();
        dis.closed_form = d.at("closed_form").get<std::string>();
        if (d.contains("lp_detail") && !d["lp_detail"].is_null())
            dis.lp_detail = verdict_from(d["lp_detail"]);
        r.disagreements.push_back(std::move(dis));
    }
    return r;
}

std::string table1_to_json(const std::vector<experiment::Table1Row>& rows) {
    json j = json::array();
    for (const auto& row : rows) {
        json e;
        e["graph"] = row.graph_id;
        e["fraction"] = row.fraction;
        e["reference"] = std::isnan(row.reference) ? json(nullptr) : json(row.reference);
        e["tolerance"] = std::isnan(row.tolerance) ? json(nullptr) : json(row.tolerance);
        e["delta"] = std::isnan(row.delta) ? json(nullptr) : json(row.delta);
        e["pass"] = row.within_tolerance;
        e["report"] = json::parse(experiment_report_to_json(row.report));
        j.push_back(std::move(e));
    }
    return j.dump();
}

std::string table1_to_csv(const std::vector<experiment::Table1Row>& rows) {
    std::string out = "graph,n,fraction,reference,delta,tolerance,pass\n";
    char buf[160];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%.6f,%.2f,%+.6f,%.4f,%s\n",
                      row.graph_id.c_str(), row.report.n_samples, row.fraction, row.reference,
                      row.delta, row.tolerance, row.within_tolerance ? "true" : "false");
        out += buf;
    }
    return out;
}

std::string table1_to_text(const std::vector<experiment::Table1Row>& rows) {
    std::string out;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-20s %10s %10s %10s %10s  %s\n", "graph", "fraction",
                  "reference", "delta", "tol", "status");
    out += buf;
    for (const auto& row : rows) {
        if (std::isnan(row.reference)) {
            std::snprintf(buf, sizeof buf, "%-20s %10.4f %10s %10s %10s  %s\n",
                          row.graph_id.c_str(), row.fraction, "-", "-", "-", "no reference");
        } else {
            std::snprintf(buf, sizeof buf, "%-20s %10.4f %10.2f %+10.4f %10.4f  %s\n",
                          row.graph_id.c_str(), row.fraction, row.reference, row.delta,
                          row.tolerance, row.within_tolerance ? "pass" : "FAIL");
        }
        out += buf;
    }
    return out;
}

}  // namespace signid::json_io
