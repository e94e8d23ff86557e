#include "ckgraph/kgraph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace ckgraph {

Degree zero_degree(int k) { return Degree(static_cast<std::size_t>(k), 0); }

Degree unit_degree(int k, int i) {
    Degree d = zero_degree(k);
    d[static_cast<std::size_t>(i)] = 1;
    return d;
}

Degree join(const Degree& a, const Degree& b) {
    Degree out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
    return out;
}

Degree meet(const Degree& a, const Degree& b) {
    Degree out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i], b[i]);
    return out;
}

bool leq(const Degree& a, const Degree& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Degree add(const Degree& a, const Degree& b) {
    Degree out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] == kInf || b[i] == kInf) ? kInf : a[i] + b[i];
    return out;
}

Degree sub(const Degree& a, const Degree& b) {
    Degree out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

std::int64_t total(const Degree& d) { return std::accumulate(d.begin(), d.end(), std::int64_t{0}); }

json degree_json(const Degree& d) {
    json out = json::array();
    for (auto v : d) {
        if (v == kInf)
            out.push_back("inf");
        else
            out.push_back(v);
    }
    return out;
}

Degree parse_degree(const std::string& csv) {
    Degree out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(std::remove(tok.begin(), tok.end(), ' '), tok.end());
        if (tok == "inf") {
            out.push_back(kInf);
            continue;
        }
        try {
            std::size_t used = 0;
            long long v = std::stoll(tok, &used);
            if (used != tok.size() || v < 0) throw std::invalid_argument("");
            out.push_back(v);
        } catch (const std::exception&) {
            throw input_error("bad degree entry '" + tok + "' in '" + csv + "'");
        }
    }
    if (out.empty()) throw input_error("empty degree '" + csv + "'");
    return out;
}

// ---------------------------------------------------------------- validation

namespace {

struct DocIndex {
    std::map<std::string, int> vertex, edge;
    std::vector<int> r, s, color;
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> flips;
};

}  // namespace

ValidationReport validate_kgraph(const KGraphDocument& doc) {
    GraphDocument plain{doc.vertices, {}};
    for (const auto& e : doc.edges) plain.edges.push_back({e.id, e.r, e.s});
    ValidationReport rep = validate(plain);
    if (doc.k < 1) rep.fail("k must be at least 1", {{"k", doc.k}});
    if (!rep.valid) return rep;

    DocIndex ix;
    for (std::size_t i = 0; i < doc.vertices.size(); ++i) ix.vertex[doc.vertices[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < doc.edges.size(); ++i) {
        const auto& e = doc.edges[i];
        ix.edge[e.id] = static_cast<int>(i);
        ix.r.push_back(ix.vertex.at(e.r));
        ix.s.push_back(ix.vertex.at(e.s));
        ix.color.push_back(e.color - 1);
        if (e.color < 1 || e.color > doc.k) rep.fail("edge '" + e.id + "' has color outside 1..k", {{"edge", e.id}});
    }
    if (!rep.valid) return rep;

    auto id = [&](int e) { return doc.edges[static_cast<std::size_t>(e)].id; };
    std::map<std::pair<int, int>, int> uses;
    for (const auto& sq : doc.squares) {
        json where = {{"square", json::array({json::array({sq.f, sq.g}), json::array({sq.g2, sq.f2})})}};
        std::array<const std::string*, 4> names = {&sq.f, &sq.g, &sq.g2, &sq.f2};
        bool known = true;
        for (auto* n : names)
            if (!ix.edge.count(*n)) {
                rep.fail("square names unknown edge '" + *n + "'", where);
                known = false;
            }
        if (!known) continue;
        int f = ix.edge[sq.f], g = ix.edge[sq.g], g2 = ix.edge[sq.g2], f2 = ix.edge[sq.f2];
        if (ix.color[f] != ix.color[f2] || ix.color[g] != ix.color[g2] || ix.color[f] == ix.color[g]) {
            rep.fail("square colors do not match: " + sq.f + " " + sq.g + " = " + sq.g2 + " " + sq.f2, where);
            continue;
        }
        if (ix.s[f] != ix.r[g] || ix.s[g2] != ix.r[f2] || ix.r[f] != ix.r[g2] || ix.s[g] != ix.s[f2]) {
            rep.fail("square endpoints do not match: " + sq.f + " " + sq.g + " = " + sq.g2 + " " + sq.f2, where);
            continue;
        }
        ++uses[{f, g}];
        ++uses[{g2, f2}];
        ix.flips[{f, g}].push_back({g2, f2});
        ix.flips[{g2, f2}].push_back({f, g});
    }

    // every bicolored composable pair exactly once
    for (int e = 0; e < static_cast<int>(doc.edges.size()); ++e)
        for (int f = 0; f < static_cast<int>(doc.edges.size()); ++f) {
            if (ix.s[e] != ix.r[f] || ix.color[e] == ix.color[f]) continue;
            auto it = uses.find({e, f});
            int n = it == uses.end() ? 0 : it->second;
            if (n == 0)
                rep.fail("bicolored path " + id(e) + " " + id(f) + " has no square",
                         {{"path", json::array({id(e), id(f)})}});
            else if (n > 1)
                rep.fail("bicolored path " + id(e) + " " + id(f) + " appears in " + std::to_string(n) + " squares",
                         {{"path", json::array({id(e), id(f)})}});
        }
    if (!rep.valid || doc.k < 3) return rep;

    auto flip = [&](int a, int b) { return ix.flips.at({a, b}).front(); };
    // cube condition: both ways of reversing a tricolored path agree
    for (int a = 0; a < static_cast<int>(doc.edges.size()); ++a)
        for (int b = 0; b < static_cast<int>(doc.edges.size()); ++b) {
            if (ix.s[a] != ix.r[b] || ix.color[a] == ix.color[b]) continue;
            for (int c = 0; c < static_cast<int>(doc.edges.size()); ++c) {
                if (ix.s[b] != ix.r[c] || ix.color[c] == ix.color[a] || ix.color[c] == ix.color[b]) continue;
                std::array<int, 3> p = {a, b, c}, q = {a, b, c};
                auto step = [&](std::array<int, 3>& w, int i) {
                    auto [x, y] = flip(w[i], w[i + 1]);
                    w[i] = x;
                    w[i + 1] = y;
                };
                step(p, 0), step(p, 1), step(p, 0);
                step(q, 1), step(q, 0), step(q, 1);
                if (p != q)
                    rep.fail("cube condition fails on " + id(a) + " " + id(b) + " " + id(c),
                             {{"path", json::array({id(a), id(b), id(c)})},
                              {"first", json::array({id(p[0]), id(p[1]), id(p[2])})},
                              {"second", json::array({id(q[0]), id(q[1]), id(q[2])})}});
            }
        }
    return rep;
}

// ---------------------------------------------------------------- KGraph

KGraph KGraph::from_document(const KGraphDocument& doc) {
    auto rep = validate_kgraph(doc);
    if (!rep.valid) throw input_error("invalid k-graph: " + rep.problems.front());
    KGraph out;
    out.k_ = doc.k;
    DirectedGraph g;
    for (const auto& v : doc.vertices) g.add_vertex(v);
    for (const auto& e : doc.edges) {
        g.add_edge(e.id, *g.find_vertex(e.r), *g.find_vertex(e.s));
        out.color_.push_back(e.color - 1);
    }
    for (const auto& sq : doc.squares) {
        int f = *g.find_edge(sq.f), gg = *g.find_edge(sq.g), g2 = *g.find_edge(sq.g2), f2 = *g.find_edge(sq.f2);
        out.flip_[{f, gg}] = {g2, f2};
        out.flip_[{g2, f2}] = {f, gg};
    }
    out.g_ = std::make_shared<AnyGraph>(std::move(g));
    return out;
}

KGraph KGraph::from_template(ColumnTemplate t) {
    if (t.k < 1) throw input_error("k-graph template needs k >= 1");
    if (!t.hairs.empty() || !t.sporadic_edges.empty() || !t.sporadic_vertices.empty())
        throw input_error("k-graph templates use tracks and edge templates only");
    KGraph out;
    out.k_ = t.k;
    out.g_ = std::make_shared<AnyGraph>(StagedGraph(std::move(t)));
    auto rep = validate_kgraph(out.window_document(2 * out.period() + 3));
    if (!rep.valid) throw input_error("invalid k-graph template: " + rep.problems.front());
    return out;
}

KGraph KGraph::from_digraph(const DirectedGraph& g) {
    KGraph out;
    out.k_ = 1;
    out.color_.assign(static_cast<std::size_t>(g.edge_count()), 0);
    out.g_ = std::make_shared<AnyGraph>(g);
    return out;
}

KGraph KGraph::from_digraph(const StagedGraph& g) {
    ColumnTemplate t = g.spec();
    t.k = 1;
    for (auto& e : t.templates) e.color = 0;
    KGraph out;
    out.k_ = 1;
    out.g_ = std::make_shared<AnyGraph>(StagedGraph(std::move(t)));
    return out;
}

std::int64_t KGraph::period() const { return staged() ? staged()->period() : 0; }

int KGraph::color(const ERef& e) const {
    if (finite()) return color_[static_cast<std::size_t>(e.idx)];
    return e.kind == 0 ? staged()->spec().templates[static_cast<std::size_t>(e.idx)].color : 0;
}

std::vector<ERef> KGraph::range_edges(const VRef& v, int c) const {
    std::vector<ERef> out;
    for (const auto& e : skeleton().range_edges(v))
        if (color(e) == c) out.push_back(e);
    return out;
}

std::optional<std::pair<ERef, ERef>> KGraph::flip(const ERef& e, const ERef& f) const {
    if (finite()) {
        auto it = flip_.find({e.idx, f.idx});
        if (it == flip_.end()) return std::nullopt;
        return std::pair{DirectedGraph::eref(it->second.first), DirectedGraph::eref(it->second.second)};
    }
    const auto* sg = staged();
    if (e.kind != 0 || f.kind != 0) return std::nullopt;
    const auto& T = sg->spec().templates;
    for (const auto& sq : sg->spec().squares) {
        int c = -1, d = -1;
        if (sq[0] == e.idx && sq[1] == f.idx) c = sq[2], d = sq[3];
        else if (sq[2] == e.idx && sq[3] == f.idx) c = sq[0], d = sq[1];
        else continue;
        VRef r = sg->range(e);
        const auto& C = T[static_cast<std::size_t>(c)];
        if (C.r_track != r.idx) continue;
        std::int64_t nc = r.a - C.r_off;
        if (!sg->instance_exists(c, nc)) continue;
        VRef mid = sg->source(StagedGraph::template_edge(c, nc));
        const auto& D = T[static_cast<std::size_t>(d)];
        if (D.r_track != mid.idx) continue;
        std::int64_t nd = mid.a - D.r_off;
        if (!sg->instance_exists(d, nd)) continue;
        ERef ce = StagedGraph::template_edge(c, nc), de = StagedGraph::template_edge(d, nd);
        if (sg->source(de) != sg->source(f)) continue;
        return std::pair{ce, de};
    }
    return std::nullopt;
}

std::vector<VRef> KGraph::fundamental_vertices() const {
    if (auto* f = finite()) return f->all_vertices();
    std::vector<VRef> out;
    const auto* sg = staged();
    for (int v = 0; v < static_cast<int>(sg->spec().sporadic_vertices.size()); ++v)
        out.push_back(StagedGraph::sporadic_vertex(v));
    for (std::int64_t c = 0; c < sg->period(); ++c)
        for (int t = 0; t < sg->track_count(); ++t) out.push_back(StagedGraph::track_vertex(t, c));
    return out;
}

Shift KGraph::reduce(const VRef& v) const {
    if (finite() || v.kind != 0) return {};
    std::int64_t P = period();
    return {floor_mod(v.a, P) - v.a, 0};
}

KGraphDocument KGraph::to_document() const {
    const auto* g = finite();
    if (!g) throw input_error("only finite k-graphs have a document form");
    KGraphDocument doc;
    doc.k = k_;
    auto plain = g->to_document();
    doc.vertices = plain.vertices;
    for (std::size_t i = 0; i < plain.edges.size(); ++i)
        doc.edges.push_back({plain.edges[i].id, plain.edges[i].r, plain.edges[i].s, color_[i] + 1});
    for (const auto& [ef, gh] : flip_) {
        if (color_[static_cast<std::size_t>(ef.first)] > color_[static_cast<std::size_t>(ef.second)]) continue;
        doc.squares.push_back({g->edge_id(ef.first), g->edge_id(ef.second), g->edge_id(gh.first), g->edge_id(gh.second)});
    }
    return doc;
}

KGraphDocument KGraph::window_document(std::int64_t n) const {
    if (finite()) return to_document();
    const auto* sg = staged();
    KGraphDocument doc;
    doc.k = k_;
    auto st = sg->stage(n);
    auto plain = st.to_document();
    doc.vertices = plain.vertices;
    for (int e = 0; e < st.edge_count(); ++e) {
        auto ref = sg->parse_edge(st.edge_id(e));
        doc.edges.push_back({plain.edges[static_cast<std::size_t>(e)].id, plain.edges[static_cast<std::size_t>(e)].r,
                             plain.edges[static_cast<std::size_t>(e)].s, color(*ref) + 1});
    }
    const auto& T = sg->spec().templates;
    auto inside = [&](const ERef& e) { return sg->valid_edge(e) && sg->source(e).a <= n; };
    for (const auto& sq : sg->spec().squares) {
        const auto &A = T[static_cast<std::size_t>(sq[0])], &B = T[static_cast<std::size_t>(sq[1])],
                   &C = T[static_cast<std::size_t>(sq[2])], &D = T[static_cast<std::size_t>(sq[3])];
        for (std::int64_t c = 0; c <= n; ++c) {
            ERef a = StagedGraph::template_edge(sq[0], c - A.r_off);
            if (!inside(a)) continue;
            VRef mid = sg->source(a);
            if (B.r_track != mid.idx || C.r_track != A.r_track) continue;
            ERef b = StagedGraph::template_edge(sq[1], mid.a - B.r_off);
            ERef cc = StagedGraph::template_edge(sq[2], c - C.r_off);
            if (!inside(b) || !inside(cc)) continue;
            VRef mid2 = sg->source(cc);
            if (D.r_track != mid2.idx) continue;
            ERef d = StagedGraph::template_edge(sq[3], mid2.a - D.r_off);
            if (!inside(d)) continue;
            doc.squares.push_back({sg->edge_name(a), sg->edge_name(b), sg->edge_name(cc), sg->edge_name(d)});
        }
    }
    return doc;
}

// ---------------------------------------------------------------- morphisms

Morphism vertex_morphism(const VRef& v) { return {v, {}}; }

Degree degree(const KGraph& g, const Morphism& m) {
    Degree d = zero_degree(g.k());
    for (const auto& e : m.edges) ++d[static_cast<std::size_t>(g.color(e))];
    return d;
}

VRef source(const KGraph& g, const Morphism& m) {
    return m.edges.empty() ? m.start : g.skeleton().source(m.edges.back());
}

std::vector<ERef> reorder(const KGraph& g, std::vector<ERef> edges, const std::vector<int>& colors) {
    for (std::size_t i = 0; i < colors.size(); ++i) {
        std::size_t j = i;
        while (j < edges.size() && g.color(edges[j]) != colors[i]) ++j;
        if (j == edges.size()) throw std::logic_error("reorder: color word does not match the path");
        for (std::size_t t = j; t > i; --t) {
            auto p = g.flip(edges[t - 1], edges[t]);
            if (!p)
                throw input_error("no square for " + g.skeleton().edge_name(edges[t - 1]) + " " +
                                  g.skeleton().edge_name(edges[t]));
            edges[t - 1] = p->first;
            edges[t] = p->second;
        }
    }
    return edges;
}

namespace {

std::vector<int> sorted_colors(const Degree& d) {
    std::vector<int> out;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::int64_t n = 0; n < d[i]; ++n) out.push_back(static_cast<int>(i));
    return out;
}

}  // namespace

Morphism normal_form(const KGraph& g, const VRef& start, std::vector<ERef> edges) {
    const Graph& sk = g.skeleton();
    VRef cur = start;
    if (!sk.valid_vertex(start)) throw input_error("invalid vertex");
    for (const auto& e : edges) {
        if (!sk.valid_edge(e) || sk.range(e) != cur)
            throw input_error("edges do not compose at '" + (sk.valid_edge(e) ? sk.edge_name(e) : std::string("?")) + "'");
        cur = sk.source(e);
    }
    Morphism m{start, {}};
    m.edges = reorder(g, std::move(edges), sorted_colors(degree(g, Morphism{start, edges})));
    return m;
}

Morphism compose(const KGraph& g, const Morphism& a, const Morphism& b) {
    if (source(g, a) != b.start) throw input_error("morphisms do not compose");
    std::vector<ERef> es = a.edges;
    es.insert(es.end(), b.edges.begin(), b.edges.end());
    Morphism m{a.start, {}};
    Degree d = add(degree(g, a), degree(g, b));
    m.edges = reorder(g, std::move(es), sorted_colors(d));
    return m;
}

Morphism segment(const KGraph& g, const Morphism& m, const Degree& a, const Degree& b) {
    Degree d = degree(g, m);
    for (std::size_t i = 0; i < d.size(); ++i)
        if (a[i] < 0 || a[i] > b[i] || b[i] > d[i]) throw input_error("segment bounds outside the degree");
    auto word = sorted_colors(a);
    auto mid = sorted_colors(sub(b, a));
    auto rest = sorted_colors(sub(d, b));
    word.insert(word.end(), mid.begin(), mid.end());
    word.insert(word.end(), rest.begin(), rest.end());
    auto es = reorder(g, m.edges, word);
    auto lo = static_cast<std::size_t>(total(a)), hi = static_cast<std::size_t>(total(b));
    Morphism out;
    out.start = lo == 0 ? m.start : g.skeleton().source(es[lo - 1]);
    out.edges.assign(es.begin() + static_cast<std::ptrdiff_t>(lo), es.begin() + static_cast<std::ptrdiff_t>(hi));
    return out;
}

Morphism translate(const KGraph& g, const Morphism& m, const Shift& s) {
    if (s.is_zero()) return m;
    Morphism out{g.skeleton().translate(m.start, s), {}};
    for (const auto& e : m.edges) out.edges.push_back(g.skeleton().translate(e, s));
    return out;
}

std::vector<Morphism> enumerate_morphisms(const KGraph& g, const VRef& v, const Degree& m, std::size_t limit) {
    std::vector<Morphism> out;
    std::vector<ERef> path;
    const int k = g.k();
    for (auto x : m)
        if (x < 0 || x == kInf) throw input_error("enumerate_morphisms needs a finite degree");
    std::function<void(const VRef&, int, std::int64_t)> go = [&](const VRef& u, int c, std::int64_t left) {
        while (c < k && left == 0) {
            ++c;
            left = c < k ? m[static_cast<std::size_t>(c)] : 0;
        }
        if (c == k) {
            if (out.size() >= limit) throw budget_exhausted("enumerate_morphisms: limit reached");
            out.push_back({v, path});
            return;
        }
        for (const auto& e : g.range_edges(u, c)) {
            path.push_back(e);
            go(g.skeleton().source(e), c, left - 1);
            path.pop_back();
        }
    };
    go(v, 0, m.empty() ? 0 : m[0]);
    return out;
}

namespace {

void for_box(const Degree& hi, const std::function<void(const Degree&)>& f) {
    Degree p = zero_degree(static_cast<int>(hi.size()));
    while (true) {
        f(p);
        std::size_t i = 0;
        while (i < p.size() && p[i] == hi[i]) p[i++] = 0;
        if (i == p.size()) return;
        ++p[i];
    }
}

}  // namespace

std::vector<Morphism> enumerate_up_to(const KGraph& g, const VRef& v, const Degree& m, std::size_t limit) {
    std::vector<Morphism> out;
    for_box(m, [&](const Degree& p) {
        auto part = enumerate_morphisms(g, v, p, limit);
        out.insert(out.end(), part.begin(), part.end());
        if (out.size() > limit) throw budget_exhausted("enumerate_up_to: limit reached");
    });
    return out;
}

std::vector<std::pair<Morphism, Morphism>> lambda_min(const KGraph& g, const Morphism& mu, const Morphism& nu) {
    std::vector<std::pair<Morphism, Morphism>> out;
    if (mu.start != nu.start) return out;
    Degree dm = degree(g, mu), dn = degree(g, nu), N = join(dm, dn);
    for (const auto& alpha : enumerate_morphisms(g, source(g, mu), sub(N, dm))) {
        Morphism w = compose(g, mu, alpha);
        if (segment(g, w, zero_degree(g.k()), dn) != nu) continue;
        out.push_back({alpha, segment(g, w, dn, N)});
    }
    return out;
}

std::vector<char> infinite_colors(const KGraph& g) {
    const int k = g.k();
    std::vector<char> out(static_cast<std::size_t>(k), 0);
    // nodes and arcs r -> s of the color subgraph, or of its column quotient
    std::vector<std::vector<std::pair<int, int>>> arcs(static_cast<std::size_t>(k));
    int nodes = 0;
    if (const auto* f = g.finite()) {
        nodes = f->vertex_count();
        for (int e = 0; e < f->edge_count(); ++e)
            arcs[static_cast<std::size_t>(g.color(DirectedGraph::eref(e)))].push_back({f->edge_range(e), f->edge_source(e)});
    } else {
        const auto* sg = g.staged();
        std::int64_t P = sg->period();
        int T = sg->track_count();
        nodes = static_cast<int>(T * P);
        for (std::size_t i = 0; i < sg->spec().templates.size(); ++i) {
            const auto& t = sg->spec().templates[i];
            for (std::int64_t n = 0; n < P; ++n) {
                if (floor_mod(n - t.phase, t.period) != 0) continue;
                int r = static_cast<int>(t.r_track * P + floor_mod(n + t.r_off, P));
                int s = static_cast<int>(t.s_track * P + floor_mod(n + t.s_off, P));
                arcs[static_cast<std::size_t>(t.color)].push_back({r, s});
            }
        }
    }
    for (int c = 0; c < k; ++c) {
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
        for (auto [r, s] : arcs[static_cast<std::size_t>(c)]) adj[static_cast<std::size_t>(r)].push_back(s);
        std::vector<int> state(static_cast<std::size_t>(nodes), 0);
        bool cyc = false;
        std::function<void(int)> dfs = [&](int u) {
            state[static_cast<std::size_t>(u)] = 1;
            for (int w : adj[static_cast<std::size_t>(u)]) {
                if (cyc) return;
                if (state[static_cast<std::size_t>(w)] == 1) cyc = true;
                else if (state[static_cast<std::size_t>(w)] == 0) dfs(w);
            }
            state[static_cast<std::size_t>(u)] = 2;
        };
        for (int u = 0; u < nodes && !cyc; ++u)
            if (!state[static_cast<std::size_t>(u)]) dfs(u);
        out[static_cast<std::size_t>(c)] = cyc;
    }
    return out;
}

namespace {

bool finite_acyclic(const KGraph& g) {
    if (!g.is_finite()) return false;
    auto inf = infinite_colors(g);
    return std::none_of(inf.begin(), inf.end(), [](char c) { return c; });
}

// longest color-i path in a finite graph whose colors are all acyclic
Degree longest_paths(const KGraph& g) {
    const auto* f = g.finite();
    Degree out = zero_degree(g.k());
    for (int c = 0; c < g.k(); ++c) {
        std::vector<std::int64_t> memo(static_cast<std::size_t>(f->vertex_count()), -1);
        std::function<std::int64_t(int)> len = [&](int v) {
            auto& m = memo[static_cast<std::size_t>(v)];
            if (m >= 0) return m;
            std::int64_t best = 0;
            for (const auto& e : g.range_edges(DirectedGraph::vref(v), c))
                best = std::max(best, 1 + len(f->edge_source(e.idx)));
            return m = best;
        };
        for (int v = 0; v < f->vertex_count(); ++v) out[static_cast<std::size_t>(c)] = std::max(out[static_cast<std::size_t>(c)], len(v));
    }
    return out;
}

}  // namespace

Decision is_exhaustive(const KGraph& g, const VRef& v, const std::vector<Morphism>& D, std::int64_t budget) {
    Degree N = zero_degree(g.k());
    for (const auto& nu : D) {
        if (nu.start != v) throw input_error("exhaustive set must lie in v Lambda");
        if (nu.edges.empty()) return Decision::yes({{"kind", "contains_vertex"}});
        N = join(N, degree(g, nu));
    }
    bool exact = finite_acyclic(g);
    bool convex = !exact && locally_convex(g);
    Degree bound = N;
    if (exact) bound = longest_paths(g);
    else if (!convex)
        for (auto& b : bound) b += budget;
    std::int64_t used = 0;
    for (const auto& mu : enumerate_up_to(g, v, bound)) {
        ++used;
        bool met = false;
        for (const auto& nu : D)
            if (!lambda_min(g, mu, nu).empty()) {
                met = true;
                break;
            }
        if (!met) return Decision::no({{"kind", "unmet"}, {"path", to_literal(g, mu)}}, used);
    }
    if (exact) return Decision::yes({{"kind", "full_enumeration"}, {"bound", degree_json(bound)}}, used);
    if (convex) return Decision::yes({{"kind", "degree_bound"}, {"bound", degree_json(bound)}}, used);
    return Decision::unknown("budget: no unmet path up to degree bound", used);
}

std::optional<json> convexity_witness(const KGraph& g) {
    const Graph& sk = g.skeleton();
    for (const auto& v : g.fundamental_vertices())
        for (int i = 0; i < g.k(); ++i)
            for (int j = 0; j < g.k(); ++j) {
                if (i == j) continue;
                auto li = g.range_edges(v, i);
                auto lj = g.range_edges(v, j);
                if (lj.empty()) continue;
                for (const auto& a : li)
                    if (!g.receives(sk.source(a), j))
                        return json{{"vertex", sk.vertex_name(v)},
                                    {"edge", sk.edge_name(a)},
                                    {"other", sk.edge_name(lj.front())},
                                    {"missing_color", j + 1}};
            }
    return std::nullopt;
}

bool locally_convex(const KGraph& g) { return !convexity_witness(g).has_value(); }

bool sourceless(const KGraph& g) {
    for (const auto& v : g.fundamental_vertices())
        for (int i = 0; i < g.k(); ++i)
            if (!g.receives(v, i)) return false;
    return true;
}

// ---------------------------------------------------------------- paths

KPath finite_kpath(const Morphism& m) { return {m, std::nullopt}; }

Shift tail_shift(const KGraph& g, const Morphism& tail) {
    VRef r = tail.start, s = source(g, tail);
    if (g.is_finite()) {
        if (r != s) throw input_error("tail does not close up");
        return {};
    }
    if (r.kind != 0 || s.kind != 0 || r.idx != s.idx || r.b != 0 || s.b != 0)
        throw input_error("tail does not close up");
    std::int64_t d = s.a - r.a;
    if (d < 0 || floor_mod(d, g.period()) != 0) throw input_error("tail does not close up under a period translation");
    return {d, 0};
}

KPath upk_path(const KGraph& g, const Morphism& prefix, const Morphism& tail) {
    if (source(g, prefix) != tail.start) throw input_error("tail does not start at the end of the prefix");
    if (tail.edges.empty()) throw input_error("empty tail");
    tail_shift(g, tail);
    return {prefix, normal_form(g, tail.start, tail.edges)};
}

Degree degree(const KGraph& g, const KPath& x) {
    Degree d = degree(g, x.prefix);
    if (x.tail) {
        Degree t = degree(g, *x.tail);
        for (std::size_t i = 0; i < d.size(); ++i)
            if (t[i] > 0) d[i] = kInf;
    }
    return d;
}

namespace {

// prefix followed by enough tail copies to cover n
Morphism unroll(const KGraph& g, const KPath& x, const Degree& n) {
    Degree dp = degree(g, x.prefix);
    if (!x.tail) {
        if (!leq(n, dp)) throw input_error("degree beyond a finite path");
        return x.prefix;
    }
    Degree dt = degree(g, *x.tail);
    std::int64_t copies = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (dt[i] == 0) {
            if (n[i] > dp[i]) throw input_error("degree beyond a finite coordinate");
            continue;
        }
        if (n[i] > dp[i]) copies = std::max(copies, (n[i] - dp[i] + dt[i] - 1) / dt[i]);
    }
    Shift T = tail_shift(g, *x.tail);
    std::vector<ERef> es = x.prefix.edges;
    for (std::int64_t c = 0; c < copies; ++c) {
        auto t = translate(g, *x.tail, T.times(c));
        es.insert(es.end(), t.edges.begin(), t.edges.end());
    }
    Degree d = dp;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += copies * dt[i];
    Morphism m{x.prefix.start, {}};
    m.edges = reorder(g, std::move(es), sorted_colors(d));
    return m;
}

Morphism rotate(const KGraph& g, const Morphism& tail, int i) {
    Degree d = degree(g, tail), e = unit_degree(g.k(), i);
    Morphism alpha = segment(g, tail, zero_degree(g.k()), e);
    Morphism beta = segment(g, tail, e, d);
    return compose(g, beta, translate(g, alpha, tail_shift(g, tail)));
}

Morphism rotate_by(const KGraph& g, Morphism tail, const Degree& u) {
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::int64_t n = 0; n < u[i]; ++n) tail = rotate(g, tail, static_cast<int>(i));
    return tail;
}

}  // namespace

Morphism initial_segment(const KGraph& g, const KPath& x, const Degree& n) {
    return segment(g, unroll(g, x, n), zero_degree(g.k()), n);
}

Morphism segment(const KGraph& g, const KPath& x, const Degree& m, const Degree& n) {
    return segment(g, unroll(g, x, n), m, n);
}

VRef vertex_at(const KGraph& g, const KPath& x, const Degree& n) { return segment(g, x, n, n).start; }

KPath shift(const KGraph& g, const KPath& x, const Degree& m) {
    if (!x.tail) return finite_kpath(segment(g, x.prefix, m, degree(g, x.prefix)));
    Degree dp = degree(g, x.prefix), dt = degree(g, *x.tail), N = dp;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] < 0) throw input_error("negative shift");
        if (dt[i] == 0 && m[i] > dp[i]) throw input_error("shift beyond a finite coordinate");
        if (dt[i] > 0) N[i] = std::max(m[i], dp[i]);
    }
    Morphism pre = segment(g, x, m, N);
    Morphism tail = rotate_by(g, *x.tail, sub(N, dp));
    return {pre, tail};
}

KPath concat(const KGraph& g, const Morphism& a, const KPath& x) {
    return {compose(g, a, x.prefix), x.tail};
}

bool equal(const KGraph& g, const KPath& x, const KPath& y) {
    if (x.is_finite() != y.is_finite()) return false;
    if (x.is_finite()) return x.prefix == y.prefix;
    Degree dx = degree(g, x), dy = degree(g, y);
    if (dx != dy) return false;
    Degree N = join(degree(g, x.prefix), degree(g, y.prefix));
    if (initial_segment(g, x, N) != initial_segment(g, y, N)) return false;
    // pure periodic parts from N on
    Morphism xi = rotate_by(g, *x.tail, sub(N, degree(g, x.prefix)));
    Morphism zeta = rotate_by(g, *y.tail, sub(N, degree(g, y.prefix)));
    Degree b = degree(g, zeta);
    KPath px{vertex_morphism(xi.start), xi};
    if (initial_segment(g, px, b) != zeta) return false;
    Morphism lhs = rotate_by(g, xi, b);
    Morphism rhs = translate(g, xi, tail_shift(g, zeta));
    return lhs == rhs;
}

bool shift_equivalent(const KGraph& g, const KPath& x, const KPath& y, const Degree& n) {
    Degree dx = degree(g, x), dy = degree(g, y);
    Degree px = degree(g, x.prefix), py = degree(g, y.prefix);
    Degree m(dx.size());
    for (std::size_t i = 0; i < dx.size(); ++i) {
        if ((dx[i] == kInf) != (dy[i] == kInf)) return false;
        if (dx[i] != kInf) {
            if (n[i] != dx[i] - dy[i]) return false;
            m[i] = dx[i];
        } else {
            m[i] = std::max({px[i], py[i] + n[i], n[i], std::int64_t{0}});
        }
    }
    return equal(g, shift(g, x, m), shift(g, y, sub(m, n)));
}

std::vector<Degree> lags_in_box(const KGraph& g, const KPath& x, const KPath& y, std::int64_t box) {
    Degree dx = degree(g, x), dy = degree(g, y);
    std::vector<Degree> out;
    Degree hi = zero_degree(g.k());
    for (std::size_t i = 0; i < dx.size(); ++i) {
        if ((dx[i] == kInf) != (dy[i] == kInf)) return out;
        if (dx[i] == kInf) hi[i] = 2 * box;
    }
    for_box(hi, [&](const Degree& p) {
        Degree n(dx.size());
        for (std::size_t i = 0; i < n.size(); ++i) n[i] = dx[i] == kInf ? p[i] - box : dx[i] - dy[i];
        if (shift_equivalent(g, x, y, n)) out.push_back(n);
    });
    return out;
}

std::vector<Morphism> rotation_states(const KGraph& g, const Morphism& tail) {
    auto canon = [&](const Morphism& t) { return translate(g, t, g.reduce(t.start)); };
    std::set<Morphism> seen{canon(tail)};
    std::vector<Morphism> todo{canon(tail)}, out;
    Degree d = degree(g, tail);
    while (!todo.empty()) {
        Morphism t = todo.back();
        todo.pop_back();
        out.push_back(t);
        for (int i = 0; i < g.k(); ++i) {
            if (d[static_cast<std::size_t>(i)] == 0) continue;
            Morphism r = canon(rotate(g, t, i));
            if (seen.insert(r).second) todo.push_back(r);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool le_infty_member(const KGraph& g, const KPath& x) {
    if (x.is_finite()) {
        VRef s = source(g, x.prefix);
        for (int i = 0; i < g.k(); ++i)
            if (g.receives(s, i)) return false;
        return true;
    }
    Degree dt = degree(g, *x.tail);
    for (const auto& rho : rotation_states(g, *x.tail))
        for (int i = 0; i < g.k(); ++i)
            if (dt[static_cast<std::size_t>(i)] == 0 && g.receives(rho.start, i)) return false;
    return true;
}

namespace {

// beta from r(rho) with no degree on the finite coordinates, ending at a total source
std::optional<json> dead_end_escape(const KGraph& g, const KPath& x, std::int64_t budget) {
    Degree dt = degree(g, *x.tail), bound = zero_degree(g.k());
    for (std::size_t i = 0; i < dt.size(); ++i)
        if (dt[i] > 0) bound[i] = budget;
    for (const auto& rho : rotation_states(g, *x.tail))
        for (const auto& beta : enumerate_up_to(g, rho.start, bound))
            if (g.total_source(source(g, beta)))
                return json{{"state", to_literal(g, rho)}, {"escape", to_literal(g, beta)}};
    return std::nullopt;
}

bool is_initial_segment(const KGraph& g, const Morphism& nu, const KPath& x) {
    Degree dn = degree(g, nu);
    if (!leq(dn, degree(g, x))) return false;
    return initial_segment(g, x, dn) == nu;
}

}  // namespace

Decision boundary_member(const KGraph& g, const KPath& x, std::int64_t budget) {
    if (le_infty_member(g, x)) return Decision::yes({{"kind", "le_infty"}});
    if (auto w = convexity_witness(g); !w) return Decision::no({{"kind", "locally_convex_not_le_infty"}});
    if (sourceless(g)) {
        auto d = degree(g, x);
        if (std::all_of(d.begin(), d.end(), [](std::int64_t v) { return v == kInf; }))
            return Decision::yes({{"kind", "sourceless_infinite"}});
        return Decision::no({{"kind", "sourceless_not_infinite"}});
    }
    if (x.tail)
        if (auto esc = dead_end_escape(g, x, budget + 1)) {
            json cert = *esc;
            cert["kind"] = "dead_end_escape";
            return Decision::yes(cert);
        }

    bool exact = finite_acyclic(g);
    Degree cap = exact ? longest_paths(g) : Degree(static_cast<std::size_t>(g.k()), budget);
    Degree dx = degree(g, x), hi = degree(g, x.prefix);
    if (x.tail) hi = add(hi, degree(g, *x.tail));
    for (std::size_t i = 0; i < hi.size(); ++i)
        if (dx[i] != kInf) hi[i] = dx[i];
    std::int64_t used = 0;
    std::optional<Decision> found;
    for_box(hi, [&](const Degree& n) {
        if (found) return;
        KPath rest = shift(g, x, n);
        VRef u = rest.range();
        std::vector<Morphism> D;
        for (const auto& nu : enumerate_up_to(g, u, cap)) {
            if (nu.edges.empty() || is_initial_segment(g, nu, rest)) continue;
            D.push_back(nu);
        }
        ++used;
        if (D.empty()) return;
        if (is_exhaustive(g, u, D, budget).is_yes()) {
            json ds = json::array();
            for (const auto& nu : D) ds.push_back(to_literal(g, nu));
            found = Decision::no({{"kind", "exhaustive_miss"}, {"n", degree_json(n)}, {"D", ds}}, used);
        }
    });
    if (found) return *found;
    if (exact) return Decision::yes({{"kind", "no_exhaustive_miss"}}, used);
    return Decision::unknown("budget: boundary membership undecided", used);
}

std::vector<KPath> boundary_candidates(const KGraph& g, const VRef& v, std::int64_t box) {
    std::vector<KPath> out;
    auto push = [&](const KPath& p) {
        for (const auto& q : out)
            if (equal(g, p, q)) return;
        out.push_back(p);
    };
    bool exact = finite_acyclic(g);
    Degree cap = exact ? longest_paths(g) : Degree(static_cast<std::size_t>(g.k()), box);
    auto prefixes = enumerate_up_to(g, v, cap);
    for (const auto& mu : prefixes)
        if (boundary_member(g, finite_kpath(mu)).is_yes()) push(finite_kpath(mu));
    if (exact) return out;
    Degree tbox(static_cast<std::size_t>(g.k()), box);
    for (const auto& mu : enumerate_up_to(g, v, tbox)) {
        VRef u = source(g, mu);
        for_box(tbox, [&](const Degree& a) {
            if (total(a) == 0) return;
            for (const auto& tau : enumerate_morphisms(g, u, a)) {
                KPath x;
                try {
                    x = upk_path(g, mu, tau);
                } catch (const input_error&) {
                    continue;
                }
                if (boundary_member(g, x).is_yes()) push(x);
            }
        });
    }
    return out;
}

// ---------------------------------------------------------------- literals

namespace {

std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

}  // namespace

KPath parse_kpath(const KGraph& g, const std::string& literal) {
    const Graph& sk = g.skeleton();
    auto semi = literal.find(';');
    auto head = tokens(literal.substr(0, semi));
    std::optional<VRef> start;
    std::vector<ERef> es;
    for (std::size_t i = 0; i < head.size(); ++i) {
        if (auto e = sk.parse_edge(head[i])) {
            es.push_back(*e);
            continue;
        }
        auto v = i == 0 ? sk.parse_vertex(head[i]) : std::nullopt;
        if (!v) throw input_error("unknown edge or vertex '" + head[i] + "'");
        start = *v;
    }
    if (!start && !es.empty()) start = sk.range(es.front());
    if (semi == std::string::npos) {
        if (!start) throw input_error("empty path literal");
        return finite_kpath(normal_form(g, *start, es));
    }
    auto tail_tok = tokens(literal.substr(semi + 1));
    std::vector<ERef> ts;
    for (const auto& t : tail_tok) {
        auto e = sk.parse_edge(t);
        if (!e) throw input_error("unknown edge '" + t + "'");
        ts.push_back(*e);
    }
    if (ts.empty()) throw input_error("empty tail in path literal");
    if (!start) start = sk.range(ts.front());
    Morphism pre = normal_form(g, *start, es);
    return upk_path(g, pre, normal_form(g, source(g, pre), ts));
}

std::string to_literal(const KGraph& g, const Morphism& m) {
    const Graph& sk = g.skeleton();
    if (m.edges.empty()) return sk.vertex_name(m.start);
    std::string out;
    for (const auto& e : m.edges) {
        if (!out.empty()) out += ' ';
        out += sk.edge_name(e);
    }
    return out;
}

std::string to_literal(const KGraph& g, const KPath& x) {
    if (!x.tail) return to_literal(g, x.prefix);
    std::string pre = x.prefix.edges.empty() ? g.skeleton().vertex_name(x.prefix.start) : to_literal(g, x.prefix);
    return pre + " ; " + to_literal(g, *x.tail);
}

json kpath_json(const KGraph& g, const KPath& x) {
    return {{"literal", to_literal(g, x)}, {"degree", degree_json(degree(g, x))}};
}

// ---------------------------------------------------------------- builders

namespace {

std::string point_name(const Degree& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + ")";
}

}  // namespace

KGraph omega(int k, const Degree& m) {
    if (k < 1 || static_cast<int>(m.size()) != k) throw input_error("omega needs k >= 1 and m with k entries");
    std::vector<int> inf;
    for (int i = 0; i < k; ++i)
        if (m[static_cast<std::size_t>(i)] == kInf) inf.push_back(i);
    if (inf.size() > 1) throw input_error("omega supports at most one infinite coordinate");

    if (inf.empty()) {
        KGraphDocument doc;
        doc.k = k;
        auto ename = [&](const Degree& p, int i) { return "e" + std::to_string(i + 1) + point_name(p); };
        for_box(m, [&](const Degree& p) { doc.vertices.push_back(point_name(p)); });
        for_box(m, [&](const Degree& p) {
            for (int i = 0; i < k; ++i) {
                if (p[static_cast<std::size_t>(i)] == m[static_cast<std::size_t>(i)]) continue;
                Degree q = add(p, unit_degree(k, i));
                doc.edges.push_back({ename(p, i), point_name(p), point_name(q), i + 1});
            }
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j) {
                    Degree pi = add(p, unit_degree(k, i)), pj = add(p, unit_degree(k, j));
                    if (!leq(add(pi, unit_degree(k, j)), m)) continue;
                    doc.squares.push_back({ename(p, i), ename(pi, j), ename(p, j), ename(pj, i)});
                }
        });
        return KGraph::from_document(doc);
    }

    // one infinite coordinate j: tracks are the points of the finite box
    int j = inf.front();
    Degree box = m;
    box[static_cast<std::size_t>(j)] = 0;
    ColumnTemplate t;
    t.k = k;
    std::map<Degree, int> track;
    auto tname = [&](const Degree& p) {
        std::string s = "p";
        bool first = true;
        for (int i = 0; i < k; ++i) {
            if (i == j) continue;
            s += (first ? "" : "x") + std::to_string(p[static_cast<std::size_t>(i)]);
            first = false;
        }
        return s == "p" ? std::string("p0") : s;
    };
    for_box(box, [&](const Degree& p) {
        track[p] = static_cast<int>(t.tracks.size());
        t.tracks.push_back(tname(p));
    });
    std::map<std::pair<Degree, int>, int> tmpl;
    for_box(box, [&](const Degree& p) {
        for (int i = 0; i < k; ++i) {
            EdgeTemplate e;
            e.id = "e" + std::to_string(i + 1) + tname(p);
            e.color = i;
            e.r_track = track[p];
            if (i == j) {
                e.s_track = track[p];
                e.s_off = 1;
            } else {
                if (p[static_cast<std::size_t>(i)] == m[static_cast<std::size_t>(i)]) continue;
                e.s_track = track[add(p, unit_degree(k, i))];
            }
            tmpl[{p, i}] = static_cast<int>(t.templates.size());
            t.templates.push_back(e);
        }
    });
    for_box(box, [&](const Degree& p) {
        for (int i = 0; i < k; ++i)
            for (int l = i + 1; l < k; ++l) {
                Degree pi = p, pl = p;
                if (i != j) pi = add(p, unit_degree(k, i));
                if (l != j) pl = add(p, unit_degree(k, l));
                Degree both = pi;
                if (l != j) both = add(both, unit_degree(k, l));
                if (!leq(both, box)) continue;
                t.squares.push_back({tmpl[{p, i}], tmpl[{pi, l}], tmpl[{p, l}], tmpl[{pl, i}]});
            }
    });
    return KGraph::from_template(std::move(t));
}

KGraph robertson() {
    ColumnTemplate t;
    t.k = 2;
    t.tracks = {"v", "w", "a"};
    // x_n : v_{n-1} <- v_n, t_n : w_{n-1} <- w_n, d_n : v_n <- w_n, f_n : v_{n-1} <- a_{n-1}
    t.templates = {{"x", 0, -1, 0, 0, 1, 0, 0}, {"t", 1, -1, 1, 0, 1, 0, 0}, {"d", 0, 0, 1, 0, 1, 0, 1},
                   {"f", 0, -1, 2, -1, 1, 0, 0}};
    t.squares = {{0, 2, 2, 1}};
    return KGraph::from_template(std::move(t));
}

KGraph parallel_rows() {
    ColumnTemplate t;
    t.k = 2;
    t.tracks = {"v"};
    t.templates = {{"s", 0, 0, 0, 1, 1, 0, 0}, {"d", 0, 0, 0, 1, 1, 0, 1}};
    t.squares = {{0, 1, 1, 0}};
    return KGraph::from_template(std::move(t));
}

KGraph corner() {
    KGraphDocument doc;
    doc.k = 2;
    doc.vertices = {"v", "u", "w"};
    doc.edges = {{"alpha", "v", "u", 1}, {"beta", "v", "w", 2}};
    return KGraph::from_document(doc);
}

std::vector<std::string> kgraph_family_names() { return {"omega", "robertson", "parallel_rows", "corner"}; }

KGraphFamily kgraph_family(const std::string& full, const Degree& m) {
    std::string name = full.rfind("thesis:", 0) == 0 ? full.substr(7) : full;
    if (name == "omega") {
        Degree mm = m.empty() ? Degree{3, 2} : m;
        auto g = omega(static_cast<int>(mm.size()), mm);
        std::map<std::string, std::string> paths;
        Degree zero = zero_degree(static_cast<int>(mm.size()));
        if (g.is_finite()) paths["vertex"] = point_name(zero);
        return {name, g, paths};
    }
    if (name == "robertson")
        return {name, robertson(), {{"x", "v_0 ; x_1"}, {"y", "d_0 ; t_1"}, {"alpha", "x_1 f_2"}, {"top", "w_0 ; t_1"}}};
    if (name == "parallel_rows") return {name, parallel_rows(), {{"x", "v_0 ; s_0 d_1"}}};
    if (name == "corner") return {name, corner(), {{"alpha", "alpha"}, {"beta", "beta"}, {"v", "v"}}};
    throw input_error("unknown k-graph family '" + name + "'");
}

}  // namespace ckgraph
