#include "signid/graph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "signid/errors.hpp"

namespace signid::graph {

DirectedGraph::DirectedGraph(std::vector<NodeSpec> nodes, std::vector<EdgeRef> edges)
    : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw InvalidGraph("graph needs at least one node");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].name.empty()) throw InvalidGraph("node names must be nonempty");
        for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
            if (nodes_[i].name == nodes_[j].name)
                throw InvalidGraph("duplicate node label: " + nodes_[i].name);
        }
    }

    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : edges) {
        const std::size_t s = node_index(e.source);
        const std::size_t t = node_index(e.target);
        if (!seen.insert({s, t}).second)
            throw InvalidGraph("duplicate edge: " + e.source + "->" + e.target);
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!seen.count({i, i}))
            throw InvalidGraph("node '" + nodes_[i].name +
                               "' is missing its self-loop; declare it explicitly or use "
                               "\"self_loops\": \"all\"");
    }

    edges_.reserve(seen.size());
    for (const auto& [s, t] : seen) edges_.push_back({nodes_[s].name, nodes_[t].name});

    parents_.assign(nodes_.size(), {});
    for (const auto& [s, t] : seen) parents_[t].push_back(s);
}

std::size_t DirectedGraph::node_index(std::string_view name) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].name == name) return i;
    }
    throw UnknownNode("unknown node: " + std::string(name));
}

bool DirectedGraph::has_node(std::string_view name) const {
    return std::any_of(nodes_.begin(), nodes_.end(),
                       [&](const NodeSpec& n) { return n.name == name; });
}

bool DirectedGraph::has_latent_nodes() const {
    return std::any_of(nodes_.begin(), nodes_.end(), [](const NodeSpec& n) { return n.latent; });
}

bool DirectedGraph::has_edge(std::string_view source, std::string_view target) const {
    return std::any_of(edges_.begin(), edges_.end(), [&](const EdgeRef& e) {
        return e.source == source && e.target == target;
    });
}

void DirectedGraph::require_edge(const EdgeRef& e) const {
    node_index(e.source);
    node_index(e.target);
    if (!has_edge(e.source, e.target))
        throw UnknownEdge("no edge " + e.source + "->" + e.target);
}

DirectedGraph DirectedGraph::without_edge(const EdgeRef& e) const {
    require_edge(e);
    if (e.source == e.target)
        throw UnknownEdge("refusing to remove the self-loop " + e.source + "->" + e.target);
    std::vector<EdgeRef> kept;
    kept.reserve(edges_.size() - 1);
    for (const auto& other : edges_) {
        if (!(other == e)) kept.push_back(other);
    }
    return DirectedGraph(nodes_, kept);
}

std::string DirectedGraph::canonical_string() const {
    std::string s;
    for (const auto& n : nodes_) {
        s += n.name;
        s += n.latent ? "!" : "";
        s += ',';
    }
    s += '|';
    for (const auto& e : edges_) {
        s += e.source;
        s += '>';
        s += e.target;
        s += ',';
    }
    return s;
}

std::vector<bool> ancestor_mask(const DirectedGraph& g, std::size_t v) {
    // Reverse reachability. The self-loop puts v into its own ancestor set.
    std::vector<bool> seen(g.node_count(), false);
    std::deque<std::size_t> queue;
    for (std::size_t p : g.parents_of(v)) {
        if (!seen[p]) {
            seen[p] = true;
            queue.push_back(p);
        }
    }
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t p : g.parents_of(u)) {
            if (!seen[p]) {
                seen[p] = true;
                queue.push_back(p);
            }
        }
    }
    seen[v] = true;
    return seen;
}

std::set<std::string> ancestors(const DirectedGraph& g, std::string_view v) {
    const std::size_t vi = g.node_index(v);
    const auto mask = ancestor_mask(g, vi);
    std::set<std::string> out;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) out.insert(g.node_name(i));
    }
    return out;
}

IndependencePattern marginal_independence_pattern(const DirectedGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<bool>> masks(n);
    for (std::size_t i = 0; i < n; ++i) masks[i] = ancestor_mask(g, i);

    IndependencePattern p;
    p.dim = n;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool disjoint = true;
            for (std::size_t k = 0; k < n; ++k) {
                if (masks[i][k] && masks[j][k]) {
                    disjoint = false;
                    break;
                }
            }
            if (disjoint) p.zero_pairs.insert({i, j});
        }
    }
    return p;
}

GraphicalVerdict graphical_criterion(const DirectedGraph& g, const EdgeRef& e) {
    if (g.has_latent_nodes())
        throw LatentNodesPresent("the graphical criterion is valid only for graphs "
                                 "without latent variables");
    g.require_edge(e);
    if (e.source == e.target) throw UnknownEdge("target edge must not be a self-loop");
    const auto with = marginal_independence_pattern(g);
    const auto without = marginal_independence_pattern(g.without_edge(e));
    return with == without ? GraphicalVerdict::Inconclusive : GraphicalVerdict::Identifiable;
}

namespace {

DirectedGraph make_graph(std::vector<std::string> names, std::vector<EdgeRef> structural) {
    std::vector<NodeSpec> nodes;
    nodes.reserve(names.size());
    std::vector<EdgeRef> edges;
    for (auto& n : names) {
        edges.push_back({n, n});
        nodes.push_back({std::move(n), false});
    }
    for (auto& e : structural) edges.push_back(std::move(e));
    return DirectedGraph(std::move(nodes), std::move(edges));
}

std::vector<CatalogEntry> build_catalog() {
    std::vector<CatalogEntry> c;
    c.push_back({"cause-effect", make_graph({"H", "Y"}, {{"H", "Y"}}), {"H", "Y"}});
    c.push_back({"chain", make_graph({"H", "X", "Y"}, {{"H", "X"}, {"X", "Y"}}), {"X", "Y"}});
    c.push_back({"confounding",
                 make_graph({"H", "X", "Y"}, {{"H", "X"}, {"H", "Y"}, {"X", "Y"}}),
                 {"X", "Y"}});
    c.push_back({"cycle-3",
                 make_graph({"H", "X", "Y"}, {{"H", "X"}, {"X", "Y"}, {"Y", "H"}}),
                 {"X", "Y"}});
    c.push_back({"iv",
                 make_graph({"Z", "H", "X", "Y"}, {{"Z", "X"}, {"H", "X"}, {"H", "Y"}, {"X", "Y"}}),
                 {"X", "Y"}});
    c.push_back({"cycle-with-iv",
                 make_graph({"Z", "H", "X", "Y"}, {{"Z", "X"}, {"H", "X"}, {"X", "Y"}, {"Y", "H"}}),
                 {"X", "Y"}});
    return c;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = build_catalog();
    return entries;
}

const CatalogEntry* find_catalog(std::string_view id) {
    std::string key(id);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (key == "3-cycle" || key == "three-cycle" || key == "cycle3") key = "cycle-3";
    if (key == "instrumental-variable") key = "iv";
    if (key == "cycle-iv" || key == "iv-cycle") key = "cycle-with-iv";
    for (const auto& entry : catalog()) {
        if (entry.id == key) return &entry;
    }
    return nullptr;
}

}  // namespace signid::graph
