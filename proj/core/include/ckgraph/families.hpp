#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ckgraph/graph.hpp"
#include "ckgraph/staged.hpp"

namespace ckgraph {

using AnyGraph = std::variant<DirectedGraph, StagedGraph>;

const Graph& as_graph(const AnyGraph& g);

// Built-in directed graph examples with a few named path literals.
struct DigraphFamily {
    std::string name;
    AnyGraph graph;
    std::map<std::string, std::string> paths;
};

std::vector<std::string> digraph_family_names();
DigraphFamily digraph_family(const std::string& name);  // throws input_error

// loop g at u and an edge f from v into u
DirectedGraph loop_plus_edge();
// loop g at u with an exit e: r(e) = v, s(e) = u
DirectedGraph loop_with_exit();

ColumnTemplate two_row_template();
ColumnTemplate alternating_template();
// rows v and w, the row e on v and k parallel edges f_1..f_k from v to w
ColumnTemplate k_times_template(int k);
// two parallel edges every column and a third on every other column
ColumnTemplate ml2mu3_template();
ColumnTemplate nonhausdorff_template();
ColumnTemplate lag_template();

}  // namespace ckgraph
