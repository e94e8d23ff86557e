#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ckgraph/families.hpp"
#include "ckgraph/graph.hpp"
#include "ckgraph/staged.hpp"

namespace ckgraph {

using Degree = std::vector<std::int64_t>;
inline constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

Degree zero_degree(int k);
Degree unit_degree(int k, int i);
Degree join(const Degree& a, const Degree& b);
Degree meet(const Degree& a, const Degree& b);
bool leq(const Degree& a, const Degree& b);
Degree add(const Degree& a, const Degree& b);
Degree sub(const Degree& a, const Degree& b);  // finite entries only
std::int64_t total(const Degree& d);
json degree_json(const Degree& d);  // infinite entries become "inf"
Degree parse_degree(const std::string& csv);  // "3,2" or "inf,2"

struct KEdgeDecl {
    std::string id;
    std::string r;
    std::string s;
    int color = 1;  // 1-based as in documents

    friend bool operator==(const KEdgeDecl&, const KEdgeDecl&) = default;
};

// f g = g2 f2 with colors c(f) = c(f2) != c(g) = c(g2)
struct KSquare {
    std::string f, g, g2, f2;

    friend bool operator==(const KSquare&, const KSquare&) = default;
};

struct KGraphDocument {
    int k = 1;
    std::vector<std::string> vertices;
    std::vector<KEdgeDecl> edges;
    std::vector<KSquare> squares;

    friend bool operator==(const KGraphDocument&, const KGraphDocument&) = default;
};

// Totality, uniqueness and endpoints of the squares, and for k >= 3 the
// cube condition on every tricolored path.
ValidationReport validate_kgraph(const KGraphDocument& doc);

// A row-finite k-graph given by its colored skeleton and squares. Finite
// graphs are explicit; infinite ones are column periodic templates.
class KGraph {
public:
    static KGraph from_document(const KGraphDocument& doc);  // throws input_error
    static KGraph from_template(ColumnTemplate t);           // throws input_error
    static KGraph from_digraph(const DirectedGraph& g);
    static KGraph from_digraph(const StagedGraph& g);

    int k() const { return k_; }
    bool is_finite() const { return std::holds_alternative<DirectedGraph>(*g_); }
    const Graph& skeleton() const { return as_graph(*g_); }
    const DirectedGraph* finite() const { return std::get_if<DirectedGraph>(g_.get()); }
    const StagedGraph* staged() const { return std::get_if<StagedGraph>(g_.get()); }
    std::int64_t period() const;  // column period, 0 for finite graphs

    int color(const ERef& e) const;  // 0-based
    std::vector<ERef> range_edges(const VRef& v, int color) const;
    bool receives(const VRef& v, int color) const { return !range_edges(v, color).empty(); }
    bool total_source(const VRef& v) const { return skeleton().range_edges(v).empty(); }

    // the other factorization of the bicolored path e f
    std::optional<std::pair<ERef, ERef>> flip(const ERef& e, const ERef& f) const;

    // every vertex of a finite graph; for periodic graphs the columns [0, period)
    std::vector<VRef> fundamental_vertices() const;
    // translation taking v to its representative among fundamental_vertices
    Shift reduce(const VRef& v) const;

    KGraphDocument to_document() const;  // finite only
    // columns 0..n of a periodic graph, closed under factorization
    KGraphDocument window_document(std::int64_t n) const;

private:
    int k_ = 1;
    std::shared_ptr<AnyGraph> g_;
    std::vector<int> color_;                                // finite
    std::map<std::pair<int, int>, std::pair<int, int>> flip_;  // finite
};

// Morphism in color-normal form: colors ascend along the edges.
struct Morphism {
    VRef start;
    std::vector<ERef> edges;

    friend bool operator==(const Morphism&, const Morphism&) = default;
    friend auto operator<=>(const Morphism&, const Morphism&) = default;
};

Morphism vertex_morphism(const VRef& v);
Degree degree(const KGraph& g, const Morphism& m);
VRef source(const KGraph& g, const Morphism& m);
// throws input_error when the edges do not compose
Morphism normal_form(const KGraph& g, const VRef& start, std::vector<ERef> edges);
Morphism compose(const KGraph& g, const Morphism& a, const Morphism& b);
// mu(a, b) for a <= b <= d(mu)
Morphism segment(const KGraph& g, const Morphism& m, const Degree& a, const Degree& b);
Morphism translate(const KGraph& g, const Morphism& m, const Shift& s);
// the same morphism with its edges in the given color word
std::vector<ERef> reorder(const KGraph& g, std::vector<ERef> edges, const std::vector<int>& colors);

// v Lambda^m; throws budget_exhausted past limit
std::vector<Morphism> enumerate_morphisms(const KGraph& g, const VRef& v, const Degree& m,
                                          std::size_t limit = 1 << 20);
// v Lambda^{<= m}
std::vector<Morphism> enumerate_up_to(const KGraph& g, const VRef& v, const Degree& m, std::size_t limit = 1 << 20);

std::vector<std::pair<Morphism, Morphism>> lambda_min(const KGraph& g, const Morphism& mu, const Morphism& nu);

Decision is_exhaustive(const KGraph& g, const VRef& v, const std::vector<Morphism>& D, std::int64_t budget = 2);

bool locally_convex(const KGraph& g);
// a vertex with edges lambda, mu of colors i != j where s(lambda) receives no color j
std::optional<json> convexity_witness(const KGraph& g);
bool sourceless(const KGraph& g);

// color i has arbitrarily long paths
std::vector<char> infinite_colors(const KGraph& g);

// Finite path or prefix . tail . T(tail) . T^2(tail) ... where T is the
// translation carrying r(tail) to s(tail). The tail degree is positive
// exactly on the infinite coordinates.
struct KPath {
    Morphism prefix;
    std::optional<Morphism> tail;

    bool is_finite() const { return !tail.has_value(); }
    VRef range() const { return prefix.start; }
};

KPath finite_kpath(const Morphism& m);
// throws input_error when the tail does not close up
KPath upk_path(const KGraph& g, const Morphism& prefix, const Morphism& tail);
Degree degree(const KGraph& g, const KPath& x);
Shift tail_shift(const KGraph& g, const Morphism& tail);
// x(0, n) for finite n <= d(x)
Morphism initial_segment(const KGraph& g, const KPath& x, const Degree& n);
Morphism segment(const KGraph& g, const KPath& x, const Degree& m, const Degree& n);
VRef vertex_at(const KGraph& g, const KPath& x, const Degree& n);
KPath shift(const KGraph& g, const KPath& x, const Degree& m);
KPath concat(const KGraph& g, const Morphism& a, const KPath& x);
bool equal(const KGraph& g, const KPath& x, const KPath& y);
// x ~_n y with m <= d(x) ^ (d(y) + n) and sigma^m x = sigma^{m-n} y
bool shift_equivalent(const KGraph& g, const KPath& x, const KPath& y, const Degree& n);
// the lag forced on finite coordinates, with the infinite ones searched in [-box, box]
std::vector<Degree> lags_in_box(const KGraph& g, const KPath& x, const KPath& y, std::int64_t box);

// pure periodic tails sigma^u(tail^inf) for all u, up to translation
std::vector<Morphism> rotation_states(const KGraph& g, const Morphism& tail);

bool le_infty_member(const KGraph& g, const KPath& x);
Decision boundary_member(const KGraph& g, const KPath& x, std::int64_t budget = 2);

// all boundary paths from v with prefix and tail degrees inside the box;
// infinite paths only on periodic graphs or when colors cycle
std::vector<KPath> boundary_candidates(const KGraph& g, const VRef& v, std::int64_t box);

// "e1 e2", "v", "e1 ; t1 t2" or "v ; t1 t2"
KPath parse_kpath(const KGraph& g, const std::string& literal);
std::string to_literal(const KGraph& g, const Morphism& m);
std::string to_literal(const KGraph& g, const KPath& x);
json kpath_json(const KGraph& g, const KPath& x);

// Builders. Omega with at most one infinite coordinate.
KGraph omega(int k, const Degree& m);
KGraph robertson();
KGraph parallel_rows();
KGraph corner();

struct KGraphFamily {
    std::string name;
    KGraph graph;
    std::map<std::string, std::string> paths;
};
std::vector<std::string> kgraph_family_names();
KGraphFamily kgraph_family(const std::string& name, const Degree& m = {});

}  // namespace ckgraph
