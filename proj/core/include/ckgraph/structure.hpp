#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ckgraph/graph.hpp"

namespace ckgraph {

// Simple cycle alpha_1 ... alpha_k with r(alpha) = s(alpha).
struct Cycle {
    std::vector<ERef> edges;

    friend bool operator==(const Cycle&, const Cycle&) = default;
};

// vertices receiving no edges
std::vector<VRef> sources(const DirectedGraph& g);

// Vertices reachable from v along paths r -> s, v included.
std::vector<char> reach_from(const DirectedGraph& g, int v);

// Strongly connected components; comp[v] is the component index and
// nontrivial[c] says the component carries a cycle.
struct Components {
    std::vector<int> comp;
    std::vector<char> nontrivial;
    int count = 0;
};
Components strong_components(const DirectedGraph& g);

// All simple cycles, each rotated to start at its least edge id,
// sorted by edge names. Throws budget_exhausted past max_cycles.
std::vector<Cycle> find_cycles(const DirectedGraph& g, std::size_t max_cycles = 1'000'000);

// one simple cycle when the graph has any
std::optional<Cycle> some_cycle(const DirectedGraph& g);

// a simple cycle inside the nontrivial component comp
Cycle cycle_in_component(const DirectedGraph& g, const Components& c, int comp);

bool is_cycle(const Graph& g, const Cycle& c);

// edges f with r(f) = r(alpha_i) and f != alpha_i
std::vector<ERef> cycle_entries(const Graph& g, const Cycle& c);

using EdgePair = std::pair<ERef, ERef>;  // ordered by edge name

// Splitting pairs of E|_S. With no restriction S is all of E. A vertex set
// V gives S = V E^{<=inf}, i.e. the edges whose range is reachable from V.
std::vector<EdgePair> splitting_pairs(const DirectedGraph& g);
std::vector<EdgePair> splitting_pairs(const DirectedGraph& g, const std::set<int>& vertices);
// restriction by a set of paths: the edges lying on the paths
std::vector<EdgePair> splitting_pairs(const Graph& g, const std::vector<std::vector<ERef>>& paths);

// Cofinality on a finite graph; No carries (vertex, boundary path).
Decision is_cofinal(const DirectedGraph& g);

// Cycle rendered as edge names, for certificates.
json cycle_json(const Graph& g, const Cycle& c);

}  // namespace ckgraph
