#include "ckgraph/graph.hpp"

#include <set>

namespace ckgraph {

VRef Graph::translate(const VRef& v, const Shift& s) const {
    VRef out = v;
    if (v.kind == 0 && !is_finite()) out.a += s.dcol;
    out.b += (v.b > 0 ? s.ddepth : 0);
    return out;
}

ERef Graph::translate(const ERef& e, const Shift& s) const {
    ERef out = e;
    if (is_finite()) return out;
    if (e.kind == 0) {
        out.a += s.dcol;
    } else if (e.kind == 1) {
        out.a += s.dcol;
        out.b += s.ddepth;
    }
    return out;
}

ValidationReport validate(const GraphDocument& doc) {
    ValidationReport rep;
    std::set<std::string> vs;
    for (const auto& v : doc.vertices) {
        if (!vs.insert(v).second) rep.fail("duplicate vertex id '" + v + "'", {{"vertex", v}});
    }
    std::set<std::string> es;
    for (const auto& e : doc.edges) {
        if (!es.insert(e.id).second) rep.fail("duplicate edge id '" + e.id + "'", {{"edge", e.id}});
        if (!vs.count(e.r))
            rep.fail("edge '" + e.id + "' has undeclared range '" + e.r + "'",
                     {{"edge", e.id}, {"endpoint", "r"}, {"vertex", e.r}});
        if (!vs.count(e.s))
            rep.fail("edge '" + e.id + "' has undeclared source '" + e.s + "'",
                     {{"edge", e.id}, {"endpoint", "s"}, {"vertex", e.s}});
    }
    // a finite document is automatically row-finite
    return rep;
}

DirectedGraph DirectedGraph::from_document(const GraphDocument& doc) {
    auto rep = validate(doc);
    if (!rep.valid) throw input_error("invalid graph: " + rep.problems.front());
    DirectedGraph g;
    for (const auto& v : doc.vertices) g.add_vertex(v);
    for (const auto& e : doc.edges) g.add_edge(e.id, *g.find_vertex(e.r), *g.find_vertex(e.s));
    return g;
}

int DirectedGraph::add_vertex(std::string id) {
    int v = vertex_count();
    vertex_index_.emplace(id, v);
    vertex_ids_.push_back(std::move(id));
    range_in_.emplace_back();
    source_in_.emplace_back();
    return v;
}

int DirectedGraph::add_edge(std::string id, int r, int s) {
    int e = edge_count();
    edge_index_.emplace(id, e);
    edge_ids_.push_back(std::move(id));
    r_.push_back(r);
    s_.push_back(s);
    range_in_[r].push_back(e);
    source_in_[s].push_back(e);
    return e;
}

std::optional<int> DirectedGraph::find_vertex(std::string_view id) const {
    auto it = vertex_index_.find(std::string(id));
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> DirectedGraph::find_edge(std::string_view id) const {
    auto it = edge_index_.find(std::string(id));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

GraphDocument DirectedGraph::to_document() const {
    GraphDocument doc;
    doc.vertices = vertex_ids_;
    for (int e = 0; e < edge_count(); ++e)
        doc.edges.push_back({edge_ids_[e], vertex_ids_[r_[e]], vertex_ids_[s_[e]]});
    return doc;
}

std::vector<VRef> DirectedGraph::all_vertices() const {
    std::vector<VRef> out;
    for (int v = 0; v < vertex_count(); ++v) out.push_back(vref(v));
    return out;
}

std::vector<ERef> DirectedGraph::all_edges() const {
    std::vector<ERef> out;
    for (int e = 0; e < edge_count(); ++e) out.push_back(eref(e));
    return out;
}

std::vector<ERef> DirectedGraph::range_edges(const VRef& v) const {
    std::vector<ERef> out;
    for (int e : range_in_[v.idx]) out.push_back(eref(e));
    return out;
}

std::vector<ERef> DirectedGraph::source_edges(const VRef& v) const {
    std::vector<ERef> out;
    for (int e : source_in_[v.idx]) out.push_back(eref(e));
    return out;
}

std::optional<VRef> DirectedGraph::parse_vertex(std::string_view name) const {
    auto v = find_vertex(name);
    if (!v) return std::nullopt;
    return vref(*v);
}

std::optional<ERef> DirectedGraph::parse_edge(std::string_view name) const {
    auto e = find_edge(name);
    if (!e) return std::nullopt;
    return eref(*e);
}

bool DirectedGraph::valid_vertex(const VRef& v) const {
    return v.kind == 0 && v.a == 0 && v.b == 0 && v.idx >= 0 && v.idx < vertex_count();
}

bool DirectedGraph::valid_edge(const ERef& e) const {
    return e.kind == 0 && e.a == 0 && e.b == 0 && e.idx >= 0 && e.idx < edge_count();
}

}  // namespace ckgraph
