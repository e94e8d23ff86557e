#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "ckgraph/graph.hpp"

namespace ckgraph {

// Instance n of a template joins r = (r_track, n + r_off) to
// s = (s_track, n + s_off); it exists when both columns are >= 0 and
// n = phase (mod period). Only s_off - r_off in {0, 1} is accepted.
struct EdgeTemplate {
    std::string id;
    int r_track = 0;
    std::int64_t r_off = 0;
    int s_track = 0;
    std::int64_t s_off = 0;
    std::int64_t period = 1;
    std::int64_t phase = 0;
    int color = 0;  // 0-based, used by k-graph templates

    std::int64_t delta() const { return s_off - r_off; }

    friend bool operator==(const EdgeTemplate&, const EdgeTemplate&) = default;
};

// A hair is an infinite chain v <- v.1 <- v.2 <- ... hanging below v.
struct HairDecl {
    bool on_track = true;
    int index = 0;

    friend bool operator==(const HairDecl&, const HairDecl&) = default;
};

struct SporadicEdge {
    std::string id;
    int r = 0;  // sporadic vertex
    bool s_on_track = false;
    int s_index = 0;
    std::int64_t s_col = 0;

    friend bool operator==(const SporadicEdge&, const SporadicEdge&) = default;
};

// A declared periodic continuation following templates in order.
struct RayDecl {
    std::string id;
    std::vector<int> templates;

    friend bool operator==(const RayDecl&, const RayDecl&) = default;
};

struct ColumnTemplate {
    std::vector<std::string> tracks;
    std::vector<EdgeTemplate> templates;
    std::vector<HairDecl> hairs;
    std::vector<std::string> sporadic_vertices;
    std::vector<SporadicEdge> sporadic_edges;
    std::vector<RayDecl> rays;
    std::int64_t origin = 0;
    int k = 0;                                // > 0 for k-graph templates
    std::vector<std::array<int, 4>> squares;  // a.b = c.d on templates

    friend bool operator==(const ColumnTemplate&, const ColumnTemplate&) = default;
};

class StageProvider {
public:
    virtual ~StageProvider() = default;
    virtual DirectedGraph stage(std::int64_t n) const = 0;
    virtual std::set<std::string> frontier(std::int64_t n) const = 0;
    virtual std::set<std::string> ports() const { return {}; }
};

// Checks monotonicity and stability on stages 0..max_n.
ValidationReport validate_stages(const StageProvider& p, std::int64_t max_n);

ValidationReport validate_template(const ColumnTemplate& t);

class StagedGraph final : public Graph, public StageProvider {
public:
    explicit StagedGraph(ColumnTemplate t);  // throws input_error

    const ColumnTemplate& spec() const { return t_; }
    std::int64_t period() const { return period_; }
    int track_count() const { return static_cast<int>(t_.tracks.size()); }
    int hair_on_track(int track) const { return hair_of_track_[track]; }
    int hair_on_sporadic(int v) const { return hair_of_sporadic_[v]; }
    int ray_index(std::string_view id) const;
    bool instance_exists(int tmpl, std::int64_t n) const;

    static VRef track_vertex(int t, std::int64_t col) { return VRef{0, t, col, 0}; }
    static VRef sporadic_vertex(int v) { return VRef{1, v, 0, 0}; }
    static ERef template_edge(int tmpl, std::int64_t n) { return ERef{0, tmpl, n, 0}; }
    ERef hair_edge(const VRef& attach, std::int64_t depth) const;
    // column of a vertex; sporadic vertices report -1
    static std::int64_t column(const VRef& v) { return v.kind == 0 ? v.a : -1; }
    std::int64_t edge_column(const ERef& e) const;  // column of the range

    bool is_finite() const override { return false; }
    VRef range(const ERef& e) const override;
    VRef source(const ERef& e) const override;
    std::vector<ERef> range_edges(const VRef& v) const override;
    std::vector<ERef> source_edges(const VRef& v) const override;
    std::string vertex_name(const VRef& v) const override;
    std::string edge_name(const ERef& e) const override;
    std::optional<VRef> parse_vertex(std::string_view name) const override;
    std::optional<ERef> parse_edge(std::string_view name) const override;
    bool valid_vertex(const VRef& v) const override;
    bool valid_edge(const ERef& e) const override;
    VRef translate(const VRef& v, const Shift& s) const override;
    ERef translate(const ERef& e, const Shift& s) const override;

    DirectedGraph stage(std::int64_t n) const override;
    std::set<std::string> frontier(std::int64_t n) const override;
    std::set<std::string> ports() const override;

private:
    ColumnTemplate t_;
    std::int64_t period_ = 1;
    std::vector<int> hair_of_track_, hair_of_sporadic_;
};

std::int64_t floor_mod(std::int64_t a, std::int64_t m);

}  // namespace ckgraph
