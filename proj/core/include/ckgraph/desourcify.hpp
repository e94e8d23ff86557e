#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ckgraph/kgraph.hpp"
#include "ckgraph/staged.hpp"

namespace ckgraph {

// Directed graph with an infinite head v <- v.1 <- v.2 <- ... at every source.
StagedGraph add_heads(const DirectedGraph& g);

// [x; m] and [x; (m, n)] for a boundary path x
struct VertexRep {
    KPath x;
    Degree m;
};
struct MorphismRep {
    KPath x;
    Degree m, n;
};

// (x(m ^ d(x)), m - m ^ d(x))
struct VertexKey {
    VRef base;
    Degree excess;
    friend bool operator==(const VertexKey&, const VertexKey&) = default;
    friend auto operator<=>(const VertexKey&, const VertexKey&) = default;
};
// (x(m ^ d(x), n ^ d(x)), m - m ^ d(x), n - m)
struct MorphismKey {
    Morphism segment;
    Degree entry;
    Degree degree;
    friend bool operator==(const MorphismKey&, const MorphismKey&) = default;
    friend auto operator<=>(const MorphismKey&, const MorphismKey&) = default;
};

VertexKey vertex_key(const KGraph& g, const VertexRep& a);
MorphismKey morphism_key(const KGraph& g, const MorphismRep& a);
VertexKey range_key(const KGraph& g, const MorphismKey& k);
VertexKey source_key(const KGraph& g, const MorphismKey& k);

bool v_equiv(const KGraph& g, const VertexRep& a, const VertexRep& b);
bool p_equiv(const KGraph& g, const MorphismRep& a, const MorphismRep& b);

MorphismRep identity_rep(const VertexRep& a);
VertexRep range_rep(const MorphismRep& a);
VertexRep source_rep(const MorphismRep& a);
// [x; (m, n)] o [y; (p, q)] = [z; (m, n + q - p)] with z = x(0, n ^ d(x)) sigma^{p ^ d(y)} y
MorphismRep compose_tilde(const KGraph& g, const MorphismRep& a, const MorphismRep& b);

// kappa(x)(m, n)
MorphismKey kappa(const KGraph& g, const KPath& x, const Degree& m, const Degree& n);
// iota(alpha) for alpha with a boundary path x at s(alpha)
MorphismRep iota(const KGraph& g, const Morphism& alpha, const KPath& x);

std::string key_name(const KGraph& g, const VertexKey& k);
std::string key_name(const KGraph& g, const MorphismKey& k);
json key_json(const KGraph& g, const VertexKey& k);

// Boundary representatives found by search, cached per vertex up to translation.
class Desourcifier {
public:
    explicit Desourcifier(const KGraph& g, std::int64_t box = 2);

    const KGraph& graph() const { return g_; }
    // z in w dLambda with d(z)_i = 0 for every flagged color
    std::optional<KPath> representative(const VRef& w, const std::vector<char>& zero_on);
    bool admissible(const VertexKey& k);
    VertexRep vertex_rep(const VertexKey& k);  // throws input_error when not admissible

    // classes of degree e_i with range k, with representatives
    std::vector<std::pair<MorphismKey, MorphismRep>> edges_into(const VertexKey& k, int color);

private:
    const std::vector<KPath>& candidates(const VRef& w);

    KGraph g_;
    std::int64_t box_;
    std::map<VRef, std::vector<KPath>> cache_;
};

struct Fragment {
    KGraphDocument doc;
    std::map<std::string, std::string> iota;  // vertex and edge names of Lambda -> fragment names
    std::map<std::string, VertexKey> vertices;
    std::vector<std::string> interior;         // vertex classes checked for sources
    std::vector<json> interior_sources;        // interior classes missing some color
    json to_json() const;
};

// Vertex classes with excess <= bound over the base vertices of Lambda
// (columns 0..columns of a periodic graph), every edge class between them,
// and the squares read off by composing representatives.
Fragment materialize_truncation(const KGraph& g, const Degree& bound, std::int64_t columns = 3,
                                std::int64_t box = 2);

}  // namespace ckgraph
