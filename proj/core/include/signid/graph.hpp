#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace signid::graph {

/// A directed edge named by its endpoints. Used both for graph edges and
/// for naming the target edge of a sign query.
struct EdgeRef {
    std::string source;
    std::string target;

    bool operator==(const EdgeRef&) const = default;
};

struct NodeSpec {
    std::string name;
    bool latent = false;
};

/// Node-labeled digraph with self-loops and cycles. Every node must carry
/// a self-loop (drift matrices always have diagonal entries); construction
/// rejects graphs that miss one rather than silently adding it. Node order
/// is the declared order and fixes the row/column order of every matrix in
/// the pipeline. Immutable after construction.
class DirectedGraph {
public:
    DirectedGraph(std::vector<NodeSpec> nodes, std::vector<EdgeRef> edges);

    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<NodeSpec>& nodes() const { return nodes_; }
    const std::string& node_name(std::size_t i) const { return nodes_[i].name; }

    /// Index in declared order; throws UnknownNode.
    std::size_t node_index(std::string_view name) const;
    bool has_node(std::string_view name) const;
    bool is_latent(std::size_t i) const { return nodes_[i].latent; }
    bool has_latent_nodes() const;

    /// All edges (including self-loops) in canonical order: sorted by
    /// (source index, target index).
    const std::vector<EdgeRef>& edges() const { return edges_; }
    bool has_edge(std::string_view source, std::string_view target) const;
    /// Throws UnknownEdge if absent or UnknownNode for undeclared labels.
    void require_edge(const EdgeRef& e) const;

    /// Indices j with an edge j -> i.
    const std::vector<std::size_t>& parents_of(std::size_t i) const { return parents_[i]; }

    /// Value-semantics removal; throws UnknownEdge.
    DirectedGraph without_edge(const EdgeRef& e) const;

    /// Stable identity string: node names with latent flags plus the edge
    /// list, in declared/canonical order.
    std::string canonical_string() const;

private:
    std::vector<NodeSpec> nodes_;
    std::vector<EdgeRef> edges_;
    std::vector<std::vector<std::size_t>> parents_;  // parents_[i] = indices j with edge j->i
};

/// The set of unordered node pairs {i,j} whose covariance entry is required
/// to vanish. Symmetric by construction; pairs are stored as (i,j), i < j.
struct IndependencePattern {
    std::size_t dim = 0;
    std::set<std::pair<std::size_t, std::size_t>> zero_pairs;

    bool operator==(const IndependencePattern&) const = default;
};

/// All nodes with a directed path into v of length >= 1, plus v itself
/// (every node sits on its own self-loop). Computed by reverse reachability.
std::set<std::string> ancestors(const DirectedGraph& g, std::string_view v);

/// Index-set variant used internally.
std::vector<bool> ancestor_mask(const DirectedGraph& g, std::size_t v);

/// Pairs {i,j} with disjoint ancestor sets; exactly the entries of the
/// covariance matrix that must vanish for the graph.
IndependencePattern marginal_independence_pattern(const DirectedGraph& g);

enum class GraphicalVerdict {
    Identifiable,
    Inconclusive,
};

/// Sufficient identifiability check: remove e and compare marginal
/// independence patterns. Identifiable when they differ, Inconclusive
/// otherwise (the criterion is sufficient, not necessary). Only valid for
/// graphs without latent nodes; throws LatentNodesPresent otherwise.
GraphicalVerdict graphical_criterion(const DirectedGraph& g, const EdgeRef& e);

/// A named built-in structure together with its query edge.
struct CatalogEntry {
    std::string id;
    DirectedGraph graph;
    EdgeRef target;
};

/// The six built-in structures: cause-effect, chain, confounding, cycle-3,
/// iv, cycle-with-iv, each with self-loops on every node and the
/// conventional target edge. The proxy structures are not built in; they
/// can be loaded from user JSON.
const std::vector<CatalogEntry>& catalog();

/// Lookup by id (a few aliases accepted, e.g. "3-cycle" for "cycle-3");
/// returns nullptr when absent.
const CatalogEntry* find_catalog(std::string_view id);

}  // namespace signid::graph
