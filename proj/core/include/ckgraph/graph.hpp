#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ckgraph/verdict.hpp"

namespace ckgraph {

// Vertex handle. For finite graphs only `idx` is used. For staged graphs
// kind 0 is a track vertex (idx = track, a = column), kind 1 a sporadic
// vertex; b > 0 marks depth inside a hair hanging below the vertex.
struct VRef {
    std::int32_t kind = 0;
    std::int32_t idx = 0;
    std::int64_t a = 0;
    std::int64_t b = 0;

    friend bool operator==(const VRef&, const VRef&) = default;
    friend auto operator<=>(const VRef&, const VRef&) = default;
};

// Edge handle. kind 0: finite edge or column template (a = instance),
// kind 1: hair edge (idx = hair, a = column, b = depth), kind 2: sporadic.
struct ERef {
    std::int32_t kind = 0;
    std::int32_t idx = 0;
    std::int64_t a = 0;
    std::int64_t b = 0;

    friend bool operator==(const ERef&, const ERef&) = default;
    friend auto operator<=>(const ERef&, const ERef&) = default;
};

struct ref_hash {
    template <class R>
    std::size_t operator()(const R& r) const {
        std::size_t h = std::hash<std::int64_t>{}(r.a);
        h ^= std::hash<std::int64_t>{}(r.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<std::int64_t>{}((std::int64_t(r.kind) << 32) | std::uint32_t(r.idx)) +
             0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

// Translation applied once per repetition of a periodic tail.
struct Shift {
    std::int64_t dcol = 0;
    std::int64_t ddepth = 0;

    bool is_zero() const { return dcol == 0 && ddepth == 0; }
    Shift times(std::int64_t k) const { return {dcol * k, ddepth * k}; }
    friend bool operator==(const Shift&, const Shift&) = default;
};

// Row-finite directed graph with r and s. Paths run from range to source:
// a path e1 e2 ... has s(e_i) = r(e_{i+1}).
class Graph {
public:
    virtual ~Graph() = default;

    virtual bool is_finite() const = 0;
    virtual VRef range(const ERef& e) const = 0;
    virtual VRef source(const ERef& e) const = 0;
    // vE^1: edges whose range is v
    virtual std::vector<ERef> range_edges(const VRef& v) const = 0;
    // E^1 v: edges whose source is v
    virtual std::vector<ERef> source_edges(const VRef& v) const = 0;

    virtual std::string vertex_name(const VRef& v) const = 0;
    virtual std::string edge_name(const ERef& e) const = 0;
    virtual std::optional<VRef> parse_vertex(std::string_view name) const = 0;
    virtual std::optional<ERef> parse_edge(std::string_view name) const = 0;

    virtual bool valid_vertex(const VRef& v) const = 0;
    virtual bool valid_edge(const ERef& e) const = 0;

    virtual VRef translate(const VRef& v, const Shift& s) const;
    virtual ERef translate(const ERef& e, const Shift& s) const;

    bool is_source(const VRef& v) const { return range_edges(v).empty(); }
};

struct EdgeDecl {
    std::string id;
    std::string r;
    std::string s;

    friend bool operator==(const EdgeDecl&, const EdgeDecl&) = default;
};

struct GraphDocument {
    std::vector<std::string> vertices;
    std::vector<EdgeDecl> edges;

    friend bool operator==(const GraphDocument&, const GraphDocument&) = default;
};

struct ValidationReport {
    bool valid = true;
    std::vector<std::string> problems;
    json details = json::array();

    void fail(std::string msg, json detail = json::object()) {
        valid = false;
        problems.push_back(std::move(msg));
        details.push_back(std::move(detail));
    }
    json to_json() const {
        return json{{"valid", valid}, {"problems", problems}, {"details", details}};
    }
};

ValidationReport validate(const GraphDocument& doc);

// Finite explicit graph.
class DirectedGraph final : public Graph {
public:
    DirectedGraph() = default;
    // throws input_error when the document is invalid
    static DirectedGraph from_document(const GraphDocument& doc);

    int add_vertex(std::string id);
    int add_edge(std::string id, int r, int s);

    int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
    int edge_count() const { return static_cast<int>(edge_ids_.size()); }
    const std::string& vertex_id(int v) const { return vertex_ids_[v]; }
    const std::string& edge_id(int e) const { return edge_ids_[e]; }
    int edge_range(int e) const { return r_[e]; }
    int edge_source(int e) const { return s_[e]; }
    const std::vector<int>& in_range(int v) const { return range_in_[v]; }
    const std::vector<int>& in_source(int v) const { return source_in_[v]; }
    std::optional<int> find_vertex(std::string_view id) const;
    std::optional<int> find_edge(std::string_view id) const;

    GraphDocument to_document() const;

    static VRef vref(int v) { return VRef{0, v, 0, 0}; }
    static ERef eref(int e) { return ERef{0, e, 0, 0}; }
    std::vector<VRef> all_vertices() const;
    std::vector<ERef> all_edges() const;

    bool is_finite() const override { return true; }
    VRef range(const ERef& e) const override { return vref(r_[e.idx]); }
    VRef source(const ERef& e) const override { return vref(s_[e.idx]); }
    std::vector<ERef> range_edges(const VRef& v) const override;
    std::vector<ERef> source_edges(const VRef& v) const override;
    std::string vertex_name(const VRef& v) const override { return vertex_ids_[v.idx]; }
    std::string edge_name(const ERef& e) const override { return edge_ids_[e.idx]; }
    std::optional<VRef> parse_vertex(std::string_view name) const override;
    std::optional<ERef> parse_edge(std::string_view name) const override;
    bool valid_vertex(const VRef& v) const override;
    bool valid_edge(const ERef& e) const override;

private:
    std::vector<std::string> vertex_ids_;
    std::vector<std::string> edge_ids_;
    std::vector<int> r_, s_;
    std::vector<std::vector<int>> range_in_, source_in_;
    std::unordered_map<std::string, int> vertex_index_, edge_index_;
};

}  // namespace ckgraph
