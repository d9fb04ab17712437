#include <doctest.h>

#include <set>
#include <string>

#include "oracles.hpp"
#include "signid/errors.hpp"
#include "signid/graph.hpp"
#include "signid/rng.hpp"

using namespace signid;
using graph::DirectedGraph;
using graph::EdgeRef;
using graph::NodeSpec;

namespace {

DirectedGraph with_self_loops(std::vector<std::string> names, std::vector<EdgeRef> structural) {
    std::vector<NodeSpec> nodes;
    std::vector<EdgeRef> edges;
    for (auto& n : names) {
        edges.push_back({n, n});
        nodes.push_back({n, false});
    }
    for (auto& e : structural) edges.push_back(e);
    return DirectedGraph(std::move(nodes), std::move(edges));
}

/// All digraphs on the given nodes with every self-loop present and an
/// arbitrary subset of the ordered non-loop pairs.
std::vector<DirectedGraph> enumerate_graphs(const std::vector<std::string>& names) {
    std::vector<std::pair<std::string, std::string>> slots;
    for (const auto& a : names)
        for (const auto& b : names)
            if (a != b) slots.push_back({a, b});

    std::vector<DirectedGraph> out;
    for (std::size_t mask = 0; mask < (1u << slots.size()); ++mask) {
        std::vector<EdgeRef> structural;
        for (std::size_t s = 0; s < slots.size(); ++s)
            if (mask & (1u << s)) structural.push_back({slots[s].first, slots[s].second});
        std::vector<std::string> copy = names;
        out.push_back(with_self_loops(copy, structural));
    }
    return out;
}

}  // namespace

TEST_CASE("graph construction enforces the invariants") {
    CHECK_THROWS_AS(DirectedGraph({{"A", false}}, {}), InvalidGraph);  // missing self-loop
    CHECK_THROWS_AS(DirectedGraph({{"A", false}, {"A", false}}, {{"A", "A"}}), InvalidGraph);
    CHECK_THROWS_AS(DirectedGraph({{"A", false}}, {{"A", "A"}, {"A", "B"}}), UnknownNode);
    CHECK_THROWS_AS(
        DirectedGraph({{"A", false}, {"B", false}},
                      {{"A", "A"}, {"B", "B"}, {"A", "B"}, {"A", "B"}}),
        InvalidGraph);  // duplicate edge
}

TEST_CASE("ancestors: cycle, chain and IV examples") {
    const auto cycle = with_self_loops({"H", "X", "Y"}, {{"H", "X"}, {"X", "Y"}, {"Y", "H"}});
    CHECK(ancestors(cycle, "Y") == std::set<std::string>{"H", "X", "Y"});

    const auto chain = with_self_loops({"H", "X", "Y"}, {{"H", "X"}, {"X", "Y"}});
    CHECK(ancestors(chain, "H") == std::set<std::string>{"H"});
    CHECK(ancestors(chain, "Y") == std::set<std::string>{"H", "X", "Y"});

    const auto iv = with_self_loops({"Z", "H", "X", "Y"},
                                    {{"Z", "X"}, {"H", "X"}, {"H", "Y"}, {"X", "Y"}});
    CHECK(ancestors(iv, "Y") == std::set<std::string>{"Z", "H", "X", "Y"});
    CHECK_THROWS_AS(ancestors(iv, "Q"), UnknownNode);
}

TEST_CASE("marginal independence patterns") {
    const auto iv = with_self_loops({"Z", "H", "X", "Y"},
                                    {{"Z", "X"}, {"H", "X"}, {"H", "Y"}, {"X", "Y"}});
    const auto p = marginal_independence_pattern(iv);
    CHECK(p.zero_pairs == std::set<std::pair<std::size_t, std::size_t>>{{0, 1}});  // (Z,H)

    const auto chain = with_self_loops({"H", "X", "Y"}, {{"H", "X"}, {"X", "Y"}});
    CHECK(marginal_independence_pattern(chain).zero_pairs.empty());

    const auto edgeless = with_self_loops({"A", "B"}, {});
    CHECK(marginal_independence_pattern(edgeless).zero_pairs ==
          std::set<std::pair<std::size_t, std::size_t>>{{0, 1}});
}

TEST_CASE("graphical criterion on the catalog structures") {
    using graph::GraphicalVerdict;
    const auto expect = [](const char* id, GraphicalVerdict v) {
        const auto* entry = graph::find_catalog(id);
        REQUIRE(entry != nullptr);
        CHECK(graphical_criterion(entry->graph, entry->target) == v);
    };
    expect("cause-effect", GraphicalVerdict::Identifiable);
    expect("chain", GraphicalVerdict::Identifiable);
    expect("confounding", GraphicalVerdict::Inconclusive);
    expect("cycle-3", GraphicalVerdict::Inconclusive);
    expect("iv", GraphicalVerdict::Identifiable);
    expect("cycle-with-iv", GraphicalVerdict::Identifiable);
}

TEST_CASE("graphical criterion refuses latent graphs and unknown edges") {
    DirectedGraph latent({{"H", true}, {"Y", false}}, {{"H", "H"}, {"Y", "Y"}, {"H", "Y"}});
    CHECK_THROWS_AS(graphical_criterion(latent, {"H", "Y"}), LatentNodesPresent);

    const auto* cause = graph::find_catalog("cause-effect");
    CHECK_THROWS_AS(graphical_criterion(cause->graph, {"Y", "H"}), UnknownEdge);
    CHECK_THROWS_AS(graphical_criterion(cause->graph, {"H", "H"}), UnknownEdge);
}

TEST_CASE("catalog: six fully specified structures") {
    const auto& entries = graph::catalog();
    REQUIRE(entries.size() == 6);

    const auto* confounding = graph::find_catalog("confounding");
    REQUIRE(confounding != nullptr);
    // Support of the drift: self-loops plus H->X, H->Y, X->Y.
    CHECK(confounding->graph.has_edge("H", "X"));
    CHECK(confounding->graph.has_edge("H", "Y"));
    CHECK(confounding->graph.has_edge("X", "Y"));
    CHECK(confounding->graph.edges().size() == 6);
    CHECK(confounding->target == EdgeRef{"X", "Y"});

    const auto* cycle_iv = graph::find_catalog("cycle-with-iv");
    REQUIRE(cycle_iv != nullptr);
    CHECK(cycle_iv->graph.has_edge("Y", "H"));
    CHECK_FALSE(cycle_iv->graph.has_edge("H", "Y"));

    CHECK(graph::find_catalog("3-cycle") == graph::find_catalog("cycle-3"));
    CHECK(graph::find_catalog("nope") == nullptr);
}

TEST_CASE("ancestors are monotone under edge addition") {
    rng::Stream s(17, 4, 0);
    const std::vector<std::string> names{"A", "B", "C", "D"};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<EdgeRef> structural;
        for (const auto& a : names) {
            for (const auto& b : names) {
                if (a != b && s.next_unit() < 0.3) structural.push_back({a, b});
            }
        }
        std::vector<std::string> copy = names;
        const auto g = with_self_loops(copy, structural);

        // Pick a missing pair to add, if any.
        std::vector<EdgeRef> missing;
        for (const auto& a : names)
            for (const auto& b : names)
                if (a != b && !g.has_edge(a, b)) missing.push_back({a, b});
        if (missing.empty()) continue;
        const auto added = missing[s.next_u64() % missing.size()];
        auto wider = structural;
        wider.push_back(added);
        std::vector<std::string> copy2 = names;
        const auto g2 = with_self_loops(copy2, wider);

        for (const auto& v : names) {
            const auto before = ancestors(g, v);
            const auto after = ancestors(g2, v);
            for (const auto& u : before) CHECK(after.count(u) == 1);
        }
        // And removing that edge never shrinks the zero set.
        const auto narrow = marginal_independence_pattern(g).zero_pairs;
        const auto wide = marginal_independence_pattern(g2).zero_pairs;
        for (const auto& p : wide) CHECK(narrow.count(p) == 1);
    }
}

TEST_CASE("criterion agrees with Floyd-Warshall reachability on every graph up to 4 nodes") {
    std::size_t checked = 0;
    for (const auto& names : {std::vector<std::string>{"A", "B"},
                              std::vector<std::string>{"A", "B", "C"},
                              std::vector<std::string>{"A", "B", "C", "D"}}) {
        for (const auto& g : enumerate_graphs(names)) {
            // Oracle pattern must match the BFS-based one.
            CHECK(oracles::zero_pairs_by_reachability(g) ==
                  marginal_independence_pattern(g).zero_pairs);
            for (const auto& e : g.edges()) {
                if (e.source == e.target) continue;
                const auto direct =
                    oracles::zero_pairs_by_reachability(g.without_edge(e)) !=
                    oracles::zero_pairs_by_reachability(g);
                const bool criterion =
                    graphical_criterion(g, e) == graph::GraphicalVerdict::Identifiable;
                if (criterion != direct) CHECK(criterion == direct);
                ++checked;
            }
        }
    }
    CHECK(checked > 20000);
}
