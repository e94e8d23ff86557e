#include "ckgraph/desourcify.hpp"

#include <functional>
#include <set>

#include "ckgraph/io.hpp"

namespace ckgraph {

StagedGraph add_heads(const DirectedGraph& g) {
    ColumnTemplate t;
    for (int v = 0; v < g.vertex_count(); ++v) {
        t.sporadic_vertices.push_back(g.vertex_id(v));
        if (g.in_range(v).empty()) t.hairs.push_back({false, v});
    }
    for (int e = 0; e < g.edge_count(); ++e)
        t.sporadic_edges.push_back({g.edge_id(e), g.edge_range(e), false, g.edge_source(e), 0});
    return StagedGraph(std::move(t));
}

VertexKey vertex_key(const KGraph& g, const VertexRep& a) {
    Degree c = meet(a.m, degree(g, a.x));
    return {vertex_at(g, a.x, c), sub(a.m, c)};
}

MorphismKey morphism_key(const KGraph& g, const MorphismRep& a) {
    if (!leq(a.m, a.n)) throw input_error("offsets must satisfy m <= n");
    Degree d = degree(g, a.x);
    Degree c1 = meet(a.m, d), c2 = meet(a.n, d);
    return {segment(g, a.x, c1, c2), sub(a.m, c1), sub(a.n, a.m)};
}

VertexKey range_key(const KGraph&, const MorphismKey& k) { return {k.segment.start, k.entry}; }

VertexKey source_key(const KGraph& g, const MorphismKey& k) {
    return {source(g, k.segment), sub(add(k.entry, k.degree), degree(g, k.segment))};
}

bool v_equiv(const KGraph& g, const VertexRep& a, const VertexRep& b) { return vertex_key(g, a) == vertex_key(g, b); }

bool p_equiv(const KGraph& g, const MorphismRep& a, const MorphismRep& b) {
    return morphism_key(g, a) == morphism_key(g, b);
}

MorphismRep identity_rep(const VertexRep& a) { return {a.x, a.m, a.m}; }
VertexRep range_rep(const MorphismRep& a) { return {a.x, a.m}; }
VertexRep source_rep(const MorphismRep& a) { return {a.x, a.n}; }

MorphismRep compose_tilde(const KGraph& g, const MorphismRep& a, const MorphismRep& b) {
    if (vertex_key(g, source_rep(a)) != vertex_key(g, range_rep(b)))
        throw input_error("classes are not composable");
    Morphism head = initial_segment(g, a.x, meet(a.n, degree(g, a.x)));
    KPath z = concat(g, head, shift(g, b.x, meet(b.m, degree(g, b.x))));
    return {z, a.m, sub(add(a.n, b.n), b.m)};
}

MorphismKey kappa(const KGraph& g, const KPath& x, const Degree& m, const Degree& n) {
    return morphism_key(g, {x, m, n});
}

MorphismRep iota(const KGraph& g, const Morphism& alpha, const KPath& x) {
    if (source(g, alpha) != x.range()) throw input_error("boundary path does not start at s(alpha)");
    return {concat(g, alpha, x), zero_degree(g.k()), degree(g, alpha)};
}

namespace {

bool is_zero(const Degree& d) {
    for (auto x : d)
        if (x != 0) return false;
    return true;
}

std::string csv(const Degree& d) {
    std::string s;
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    return s;
}

std::vector<char> support(const Degree& d) {
    std::vector<char> out(d.size(), 0);
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i] > 0;
    return out;
}

}  // namespace

std::string key_name(const KGraph& g, const VertexKey& k) {
    std::string base = g.skeleton().vertex_name(k.base);
    return is_zero(k.excess) ? base : base + "^" + csv(k.excess);
}

std::string key_name(const KGraph& g, const MorphismKey& k) {
    if (k.segment.edges.size() == 1 && is_zero(k.entry)) return g.skeleton().edge_name(k.segment.edges[0]);
    std::string s;
    for (const auto& e : k.segment.edges) s += (s.empty() ? "" : "_") + g.skeleton().edge_name(e);
    if (s.empty()) s = g.skeleton().vertex_name(k.segment.start);
    s += "^" + csv(k.entry);
    if (total(k.degree) != static_cast<std::int64_t>(k.segment.edges.size())) s += "+" + csv(k.degree);
    return s;
}

json key_json(const KGraph& g, const VertexKey& k) {
    return {{"base", g.skeleton().vertex_name(k.base)}, {"excess", k.excess}};
}

Desourcifier::Desourcifier(const KGraph& g, std::int64_t box) : g_(g), box_(box) {}

const std::vector<KPath>& Desourcifier::candidates(const VRef& w) {
    auto it = cache_.find(w);
    if (it == cache_.end()) it = cache_.emplace(w, boundary_candidates(g_, w, box_)).first;
    return it->second;
}

std::optional<KPath> Desourcifier::representative(const VRef& w, const std::vector<char>& zero_on) {
    Shift s = g_.reduce(w);
    VRef w0 = g_.skeleton().translate(w, s);
    Shift back{-s.dcol, -s.ddepth};
    for (const auto& z : candidates(w0)) {
        Degree d = degree(g_, z);
        bool ok = true;
        for (std::size_t i = 0; i < zero_on.size(); ++i)
            if (zero_on[i] && d[i] != 0) ok = false;
        if (!ok) continue;
        if (back.is_zero()) return z;
        KPath out{translate(g_, z.prefix, back), std::nullopt};
        if (z.tail) out.tail = translate(g_, *z.tail, back);
        return out;
    }
    return std::nullopt;
}

bool Desourcifier::admissible(const VertexKey& k) { return representative(k.base, support(k.excess)).has_value(); }

VertexRep Desourcifier::vertex_rep(const VertexKey& k) {
    auto z = representative(k.base, support(k.excess));
    if (!z) throw input_error("no boundary representative for class " + key_name(g_, k));
    return {*z, k.excess};
}

std::vector<std::pair<MorphismKey, MorphismRep>> Desourcifier::edges_into(const VertexKey& k, int color) {
    std::vector<std::pair<MorphismKey, MorphismRep>> out;
    const Degree ei = unit_degree(g_.k(), color);
    const Degree n = add(k.excess, ei);
    auto zero_on = support(k.excess);
    if (k.excess[static_cast<std::size_t>(color)] == 0) {
        for (const auto& f : g_.range_edges(k.base, color)) {
            Morphism mf{k.base, {f}};
            auto z = representative(source(g_, mf), zero_on);
            if (!z) continue;
            MorphismRep rep{concat(g_, mf, *z), k.excess, n};
            out.emplace_back(morphism_key(g_, rep), rep);
        }
    }
    zero_on[static_cast<std::size_t>(color)] = 1;
    if (auto z = representative(k.base, zero_on)) {
        MorphismRep rep{*z, k.excess, n};
        out.emplace_back(morphism_key(g_, rep), rep);
    }
    return out;
}

json Fragment::to_json() const {
    json out = kgraph_document_json(doc);
    out["iota"] = iota;
    out["interior_checked"] = interior.size();
    out["interior_sources"] = interior_sources;
    return out;
}

namespace {

void for_each_degree(const Degree& hi, const std::function<void(const Degree&)>& f) {
    Degree d(hi.size(), 0);
    while (true) {
        f(d);
        std::size_t i = 0;
        for (; i < d.size(); ++i) {
            if (d[i] < hi[i]) {
                ++d[i];
                break;
            }
            d[i] = 0;
        }
        if (i == d.size()) return;
    }
}

}  // namespace

Fragment materialize_truncation(const KGraph& g, const Degree& bound, std::int64_t columns, std::int64_t box) {
    const int k = g.k();
    if (static_cast<int>(bound.size()) != k) throw input_error("degree bound must have k entries");
    for (auto b : bound)
        if (b < 0 || b == kInf) throw input_error("degree bound must be finite and nonnegative");
    Desourcifier ds(g, box);
    const auto& sk = g.skeleton();

    std::vector<VRef> bases;
    if (const auto* f = g.finite()) {
        bases = f->all_vertices();
    } else {
        if (columns < 0) throw input_error("column window must be nonnegative");
        const auto* sg = g.staged();
        for (std::int64_t c = 0; c <= columns; ++c)
            for (int t = 0; t < sg->track_count(); ++t) bases.push_back(StagedGraph::track_vertex(t, c));
    }

    Fragment fr;
    fr.doc.k = k;
    std::map<VertexKey, std::string> vname;
    std::vector<VertexKey> order;
    for (const auto& w : bases) {
        if (!ds.representative(w, std::vector<char>(static_cast<std::size_t>(k), 0)))
            throw input_error("no boundary representative for vertex '" + sk.vertex_name(w) + "'");
        for_each_degree(bound, [&](const Degree& e) {
            VertexKey key{w, e};
            if (!ds.admissible(key)) return;
            std::string name = key_name(g, key);
            vname[key] = name;
            order.push_back(key);
            fr.doc.vertices.push_back(name);
            fr.vertices[name] = key;
        });
        fr.iota[sk.vertex_name(w)] = key_name(g, VertexKey{w, zero_degree(k)});
    }

    struct Edge {
        MorphismKey key;
        MorphismRep rep;
        int color;
    };
    std::map<MorphismKey, std::string> ename;
    std::map<VertexKey, std::vector<Edge>> into;
    auto interior = [&](const VertexKey& v) {
        for (int i = 0; i < k; ++i)
            if (v.excess[static_cast<std::size_t>(i)] >= bound[static_cast<std::size_t>(i)]) return false;
        return g.is_finite() || StagedGraph::column(v.base) < columns;
    };
    for (const auto& v : order) {
        std::vector<char> got(static_cast<std::size_t>(k), 0);
        for (int i = 0; i < k; ++i)
            for (auto& [key, rep] : ds.edges_into(v, i)) {
                auto src = source_key(g, key);
                if (!vname.count(src)) continue;
                std::string name = key_name(g, key);
                ename[key] = name;
                into[v].push_back({key, rep, i});
                got[static_cast<std::size_t>(i)] = 1;
                fr.doc.edges.push_back({name, vname.at(v), vname.at(src), i + 1});
                if (is_zero(key.entry) && key.segment.edges.size() == 1)
                    fr.iota[sk.edge_name(key.segment.edges[0])] = name;
            }
        if (interior(v)) {
            fr.interior.push_back(vname.at(v));
            json missing = json::array();
            for (int i = 0; i < k; ++i)
                if (!got[static_cast<std::size_t>(i)]) missing.push_back(i + 1);
            if (!missing.empty()) fr.interior_sources.push_back({{"vertex", vname.at(v)}, {"colors", missing}});
        }
    }

    // each bicolored pair with ascending colors, refactored in the other order
    for (const auto& v : order) {
        for (const auto& a : into[v]) {
            auto mid = source_key(g, a.key);
            for (const auto& b : into[mid]) {
                if (b.color <= a.color) continue;
                MorphismRep c = compose_tilde(g, a.rep, b.rep);
                Degree ej = unit_degree(k, b.color);
                auto first = morphism_key(g, {c.x, c.m, add(c.m, ej)});
                auto second = morphism_key(g, {c.x, add(c.m, ej), c.n});
                auto f1 = ename.find(first), f2 = ename.find(second);
                if (f1 == ename.end() || f2 == ename.end())
                    throw std::logic_error("refactored square leaves the fragment");
                fr.doc.squares.push_back({ename.at(a.key), ename.at(b.key), f1->second, f2->second});
            }
        }
    }
    return fr;
}

}  // namespace ckgraph
