#include "ckgraph/families.hpp"

namespace ckgraph {

const Graph& as_graph(const AnyGraph& g) {
    return std::visit([](const auto& x) -> const Graph& { return x; }, g);
}

namespace {

EdgeTemplate row(std::string id, int track) { return {std::move(id), track, 0, track, 1}; }

EdgeTemplate down(std::string id, int r, int s, std::int64_t period = 1, std::int64_t phase = 0) {
    return {std::move(id), r, 0, s, 0, period, phase};
}

}  // namespace

DirectedGraph loop_plus_edge() {
    DirectedGraph g;
    int u = g.add_vertex("u"), v = g.add_vertex("v");
    g.add_edge("g", u, u);
    g.add_edge("f", u, v);
    return g;
}

DirectedGraph loop_with_exit() {
    DirectedGraph g;
    int u = g.add_vertex("u"), v = g.add_vertex("v");
    g.add_edge("g", u, u);
    g.add_edge("e", v, u);
    return g;
}

ColumnTemplate two_row_template() {
    ColumnTemplate t;
    t.tracks = {"v", "u"};
    t.templates = {row("ev", 0), row("eu", 1), down("f", 0, 1)};
    t.rays = {{"x", {0}}, {"y", {1}}};
    t.origin = 0;
    return t;
}

ColumnTemplate alternating_template() {
    ColumnTemplate t;
    t.tracks = {"v", "u"};
    t.templates = {row("ev", 0), row("eu", 1), down("fe", 0, 1, 2, 0), down("fo", 1, 0, 2, 1)};
    t.rays = {{"x", {0}}, {"y", {1}}};
    t.origin = 0;
    return t;
}

ColumnTemplate k_times_template(int k) {
    if (k < 1) throw input_error("k_times needs k >= 1");
    ColumnTemplate t;
    t.tracks = {"v", "w"};
    t.templates = {row("e", 0)};
    for (int i = 1; i <= k; ++i) t.templates.push_back(down("f" + std::to_string(i), 0, 1));
    t.hairs = {{true, 1}};
    t.rays = {{"z", {0}}};
    t.origin = 1;
    return t;
}

ColumnTemplate ml2mu3_template() {
    ColumnTemplate t = k_times_template(2);
    // instances with even label, i.e. odd column
    t.templates.push_back(down("f3", 0, 1, 2, 1));
    return t;
}

ColumnTemplate nonhausdorff_template() {
    ColumnTemplate t;
    t.tracks = {"v", "w", "c", "h"};
    t.templates = {row("ev", 0), row("ew", 1), down("cv", 0, 2), down("cw", 1, 2), down("f1", 2, 3),
                   down("f2", 2, 3)};
    t.hairs = {{true, 3}};
    t.rays = {{"x", {0}}, {"y", {1}}};
    t.origin = 1;
    return t;
}

ColumnTemplate lag_template() {
    ColumnTemplate t;
    t.tracks = {"z"};
    t.templates = {row("e", 0)};
    t.sporadic_vertices = {"x0", "x1", "y0"};
    t.sporadic_edges = {{"x1", 0, false, 1, 0}, {"x2", 1, true, 0, 0}, {"y1", 2, true, 0, 0}};
    t.rays = {{"ray", {0}}};
    return t;
}

std::vector<std::string> digraph_family_names() {
    return {"loop_plus_edge", "loop_with_exit", "two_row", "alternating", "2times",
            "ktimes:<k>",    "ml2mu3",         "nonhausdorff", "lag"};
}

DigraphFamily digraph_family(const std::string& full) {
    std::string name = full.rfind("thesis:", 0) == 0 ? full.substr(7) : full;
    if (name == "loop_plus_edge") return {name, loop_plus_edge(), {{"x", "; g"}, {"y", "f"}}};
    if (name == "loop_with_exit") return {name, loop_with_exit(), {{"x", "e ; g"}, {"y", "; g"}}};
    if (name == "two_row") return {name, StagedGraph(two_row_template()), {{"x", "v_0 ; @x"}, {"y", "u_0 ; @y"}}};
    if (name == "alternating")
        return {name, StagedGraph(alternating_template()), {{"x", "v_0 ; @x"}, {"y", "u_0 ; @y"}}};
    if (name == "2times") return {name, StagedGraph(k_times_template(2)), {{"z", "v_1 ; @z"}}};
    if (name.rfind("ktimes:", 0) == 0) {
        int k = 0;
        try {
            k = std::stoi(name.substr(7));
        } catch (const std::exception&) {
            throw input_error("bad family '" + name + "'");
        }
        return {name, StagedGraph(k_times_template(k)), {{"z", "v_1 ; @z"}}};
    }
    if (name == "ml2mu3") return {name, StagedGraph(ml2mu3_template()), {{"z", "v_1 ; @z"}}};
    if (name == "nonhausdorff")
        return {name, StagedGraph(nonhausdorff_template()), {{"x", "v_1 ; @x"}, {"y", "w_1 ; @y"}}};
    if (name == "lag") return {name, StagedGraph(lag_template()), {{"x", "x1 x2 ; @ray"}, {"y", "y1 ; @ray"}}};
    throw input_error("unknown family '" + name + "'");
}

}  // namespace ckgraph
