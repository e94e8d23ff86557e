#include "ckgraph/staged_analysis.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

#include "ckgraph/structure.hpp"

namespace ckgraph {

namespace {

constexpr std::int64_t kOver = -1;  // saturated count

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
    if (a == kOver || b == kOver) return kOver;
    std::int64_t out;
    return add_overflows(a, b, out) ? kOver : out;
}

ClassCount finite_count(std::int64_t v, json cert = json::object()) {
    ClassCount c;
    if (v == kOver) {
        c.kind = ClassCount::Kind::unknown;
        c.reason = "count overflow";
        return c;
    }
    c.value = v;
    c.certificate = std::move(cert);
    return c;
}

ClassCount infinite_count(json cert) {
    ClassCount c;
    c.kind = ClassCount::Kind::infinite;
    c.certificate = std::move(cert);
    return c;
}

ClassCount unknown_count(std::string reason) {
    ClassCount c;
    c.kind = ClassCount::Kind::unknown;
    c.reason = std::move(reason);
    return c;
}

bool active(const EdgeTemplate& t, std::int64_t phase_of_col, std::int64_t off) {
    return floor_mod(phase_of_col - off - t.phase, t.period) == 0;
}

}  // namespace

bool add_overflows(std::int64_t a, std::int64_t b, std::int64_t& out) { return __builtin_add_overflow(a, b, &out); }
bool mul_overflows(std::int64_t a, std::int64_t b, std::int64_t& out) { return __builtin_mul_overflow(a, b, &out); }

json ClassCount::to_json() const {
    json j;
    switch (kind) {
        case Kind::finite: j["count"] = value; break;
        case Kind::infinite: j["count"] = "infinite"; break;
        case Kind::unknown: j["count"] = "unknown"; j["reason"] = reason; break;
    }
    if (!certificate.empty()) j["certificate"] = certificate;
    return j;
}

struct StagedAnalyzer::Scan {
    std::int64_t col = 0;
    std::vector<std::int64_t> prev_n, cur_n, spor_n;
    std::vector<char> prev_s, cur_s, spor_s;
    std::map<std::int64_t, std::vector<std::pair<int, std::int64_t>>> seeds;
    std::int64_t last_seed = -1;
    bool empty = false;
};

StagedAnalyzer::StagedAnalyzer(const StagedGraph& g, std::int64_t budget) : g_(g), budget_(budget) {
    const auto& spec = g_.spec();
    T_ = g_.track_count();
    P_ = g_.period();
    into_delta1_.assign(P_, {});
    into_delta0_.assign(P_, {});
    topo_.assign(P_, {});
    for (std::int64_t phi = 0; phi < P_; ++phi) {
        for (int i = 0; i < (int)spec.templates.size(); ++i) {
            const auto& t = spec.templates[i];
            if (!active(t, phi, t.s_off)) continue;
            (t.delta() == 1 ? into_delta1_ : into_delta0_)[phi].push_back(i);
        }
        // closure order inside one column
        std::vector<int> indeg(T_, 0);
        for (int i : into_delta0_[phi]) ++indeg[spec.templates[i].s_track];
        std::deque<int> q;
        for (int t = 0; t < T_; ++t)
            if (!indeg[t]) q.push_back(t);
        while (!q.empty()) {
            int t = q.front();
            q.pop_front();
            topo_[phi].push_back(t);
            for (int i : into_delta0_[phi])
                if (spec.templates[i].r_track == t && --indeg[spec.templates[i].s_track] == 0)
                    q.push_back(spec.templates[i].s_track);
        }
        if ((int)topo_[phi].size() < T_ && !vertical_) {
            DirectedGraph col;
            for (const auto& tr : spec.tracks) col.add_vertex(tr);
            std::vector<int> tmpl;
            for (int i : into_delta0_[phi]) {
                col.add_edge(spec.templates[i].id, spec.templates[i].r_track, spec.templates[i].s_track);
                tmpl.push_back(i);
            }
            auto cyc = some_cycle(col);
            json names = json::array();
            for (const auto& e : cyc->edges) {
                const auto& t = spec.templates[tmpl[e.idx]];
                names.push_back(g_.edge_name(StagedGraph::template_edge(tmpl[e.idx], phi - t.s_off)));
            }
            vertical_ = json{{"kind", "vertical_cycle"}, {"cycle", names}};
        }
    }

    // sporadic part
    int ns = (int)spec.sporadic_vertices.size();
    {
        DirectedGraph sp;
        for (const auto& v : spec.sporadic_vertices) sp.add_vertex(v);
        for (const auto& e : spec.sporadic_edges)
            if (!e.s_on_track) sp.add_edge(e.id, e.r, e.s_index);
        if (auto cyc = some_cycle(sp); cyc && !vertical_) {
            json names = json::array();
            for (const auto& e : cyc->edges) names.push_back(sp.edge_id(e.idx));
            vertical_ = json{{"kind", "sporadic_cycle"}, {"cycle", names}};
        }
        if (!vertical_) {
            std::vector<int> indeg(ns, 0);
            for (int e = 0; e < sp.edge_count(); ++e) ++indeg[sp.edge_source(e)];
            std::deque<int> q;
            for (int v = 0; v < ns; ++v)
                if (!indeg[v]) q.push_back(v);
            while (!q.empty()) {
                int v = q.front();
                q.pop_front();
                sporadic_order_.push_back(v);
                for (int e : sp.in_range(v))
                    if (--indeg[sp.edge_source(e)] == 0) q.push_back(sp.edge_source(e));
            }
        }
    }
    if (vertical_) return;

    // quotient graph on (track, phase)
    DirectedGraph q;
    std::vector<int> qt;  // template of each quotient edge
    for (int t = 0; t < T_; ++t)
        for (std::int64_t phi = 0; phi < P_; ++phi) q.add_vertex(spec.tracks[t] + "@" + std::to_string(phi));
    for (int i = 0; i < (int)spec.templates.size(); ++i) {
        const auto& t = spec.templates[i];
        for (std::int64_t phi = 0; phi < P_; ++phi) {
            if (!active(t, phi, t.r_off)) continue;
            std::int64_t to = floor_mod(phi + t.delta(), P_);
            q.add_edge(t.id + "@" + std::to_string(phi), int(t.r_track * P_ + phi), int(t.s_track * P_ + to));
            qt.push_back(i);
        }
    }
    auto comps = strong_components(q);
    recurrent_.assign(q.vertex_count(), 0);
    for (int v = 0; v < q.vertex_count(); ++v) recurrent_[v] = comps.nontrivial[comps.comp[v]];
    auto lift = [&](const std::vector<int>& qedges, std::int64_t c) {
        std::vector<ERef> out;
        for (int e : qedges) {
            const auto& t = spec.templates[qt[e]];
            out.push_back(StagedGraph::template_edge(qt[e], c - t.r_off));
            c += t.delta();
        }
        return std::pair{out, c};
    };
    auto shortest_back = [&](int from, int to, int comp) {
        std::vector<int> via(q.vertex_count(), -2);
        std::deque<int> dq{from};
        via[from] = -1;
        while (!dq.empty()) {
            int x = dq.front();
            dq.pop_front();
            for (int e : q.in_range(x)) {
                int s = q.edge_source(e);
                if (comps.comp[s] != comp || via[s] != -2) continue;
                via[s] = e;
                dq.push_back(s);
            }
        }
        std::vector<int> path;
        for (int x = to; x != from; x = q.edge_range(via[x])) path.push_back(via[x]);
        std::reverse(path.begin(), path.end());
        return path;
    };
    for (int c = 0; c < comps.count && !branching_; ++c) {
        if (!comps.nontrivial[c]) continue;
        int nodes = 0, edges = 0;
        for (int v = 0; v < q.vertex_count(); ++v)
            if (comps.comp[v] == c) ++nodes;
        for (int e = 0; e < q.edge_count(); ++e)
            if (comps.comp[q.edge_range(e)] == c && comps.comp[q.edge_source(e)] == c) ++edges;
        if (edges == nodes) continue;
        for (int v = 0; v < q.vertex_count() && !branching_; ++v) {
            if (comps.comp[v] != c) continue;
            std::vector<int> out;
            for (int e : q.in_range(v))
                if (comps.comp[q.edge_source(e)] == c) out.push_back(e);
            if (out.size() < 2) continue;
            std::vector<int> alpha{out[0]}, beta{out[1]};
            auto ra = shortest_back(q.edge_source(out[0]), v, c);
            auto rb = shortest_back(q.edge_source(out[1]), v, c);
            alpha.insert(alpha.end(), ra.begin(), ra.end());
            beta.insert(beta.end(), rb.begin(), rb.end());
            std::int64_t phi = v % P_;
            int track = int(v / P_);
            auto [la, end_a] = lift(alpha, phi);
            auto [lb, end_b] = lift(beta, phi);
            std::int64_t va = end_a - phi, vb = end_b - phi;
            // beta^{va} then alpha forever meets alpha^{vb}
            std::vector<ERef> head;
            std::int64_t col = phi;
            for (std::int64_t i = 0; i < va; ++i) {
                auto [piece, next] = lift(beta, col);
                head.insert(head.end(), piece.begin(), piece.end());
                col = next;
            }
            auto [block, unused] = lift(alpha, col);
            (void)unused;
            Path x{StagedGraph::track_vertex(track, phi), {}, Tail{la, Shift{va, 0}}};
            Path y{StagedGraph::track_vertex(track, phi), head, Tail{block, Shift{va, 0}}};
            json la_j = json::array(), lb_j = json::array();
            for (int e : alpha) la_j.push_back(spec.templates[qt[e]].id);
            for (int e : beta) lb_j.push_back(spec.templates[qt[e]].id);
            branching_ = json{{"kind", "branching"},
                              {"track", spec.tracks[track]},
                              {"phase", phi},
                              {"loops", {la_j, lb_j}},
                              {"advance", {va, vb}},
                              {"ray", to_literal(g_, normalize(g_, x))},
                              {"detour", to_literal(g_, normalize(g_, y))}};
        }
    }
    if (branching_) return;

    for (int c = 0; c < comps.count; ++c) {
        if (!comps.nontrivial[c]) continue;
        int v0 = -1;
        for (int v = 0; v < q.vertex_count() && v0 < 0; ++v)
            if (comps.comp[v] == c) v0 = v;
        std::vector<int> cyc;
        int v = v0;
        do {
            int next = -1;
            for (int e : q.in_range(v))
                if (comps.comp[q.edge_source(e)] == c) next = e;
            cyc.push_back(next);
            v = q.edge_source(next);
        } while (v != v0);
        std::int64_t phi = v0 % P_;
        auto [block0, end0] = lift(cyc, phi);
        std::int64_t V = end0 - phi;
        for (std::int64_t col = phi; col < phi + V; col += P_) {
            auto [block, end] = lift(cyc, col);
            (void)end;
            rays_.push_back(normalize(g_, Path{StagedGraph::track_vertex(int(v0 / P_), col), {}, Tail{block, Shift{V, 0}}}));
        }
    }
}

std::vector<VRef> StagedAnalyzer::representatives() const {
    std::vector<VRef> out;
    for (int t = 0; t < T_; ++t)
        for (std::int64_t c = 0; c < P_; ++c) out.push_back(StagedGraph::track_vertex(t, c));
    for (int v = 0; v < (int)g_.spec().sporadic_vertices.size(); ++v) out.push_back(StagedGraph::sporadic_vertex(v));
    return out;
}

std::optional<VRef> StagedAnalyzer::some_source() const {
    for (auto& v : representatives())
        if (g_.range_edges(v).empty()) return v;
    return std::nullopt;
}

StagedAnalyzer::Scan StagedAnalyzer::start_scan(const VRef& w) const {
    const auto& spec = g_.spec();
    Scan s;
    s.prev_n.assign(T_, 0);
    s.cur_n.assign(T_, 0);
    s.prev_s.assign(T_, 0);
    s.cur_s.assign(T_, 0);
    int ns = (int)spec.sporadic_vertices.size();
    s.spor_n.assign(ns, 0);
    s.spor_s.assign(ns, 0);
    if (w.kind == 0) {
        s.seeds[w.a].push_back({w.idx, 1});
        s.last_seed = w.a;
        s.col = w.a - 1;
        return s;
    }
    s.spor_n[w.idx] = 1;
    s.spor_s[w.idx] = 1;
    for (int v : sporadic_order_) {
        if (!s.spor_s[v]) continue;
        for (const auto& e : spec.sporadic_edges) {
            if (e.r != v) continue;
            if (e.s_on_track) {
                s.seeds[e.s_col].push_back({e.s_index, s.spor_n[v]});
            } else {
                s.spor_n[e.s_index] = sat_add(s.spor_n[e.s_index], s.spor_n[v]);
                s.spor_s[e.s_index] = 1;
            }
        }
    }
    if (s.seeds.empty()) {
        s.empty = true;
        return s;
    }
    s.col = s.seeds.begin()->first - 1;
    s.last_seed = s.seeds.rbegin()->first;
    return s;
}

void StagedAnalyzer::advance(Scan& s) const {
    const auto& spec = g_.spec();
    ++s.col;
    std::swap(s.prev_n, s.cur_n);
    std::swap(s.prev_s, s.cur_s);
    std::fill(s.cur_n.begin(), s.cur_n.end(), 0);
    std::fill(s.cur_s.begin(), s.cur_s.end(), 0);
    std::int64_t phi = floor_mod(s.col, P_);
    if (auto it = s.seeds.find(s.col); it != s.seeds.end())
        for (auto [t, n] : it->second) {
            s.cur_n[t] = sat_add(s.cur_n[t], n);
            s.cur_s[t] = 1;
        }
    if (s.col >= 1)
        for (int i : into_delta1_[phi]) {
            const auto& t = spec.templates[i];
            s.cur_n[t.s_track] = sat_add(s.cur_n[t.s_track], s.prev_n[t.r_track]);
            s.cur_s[t.s_track] |= s.prev_s[t.r_track];
        }
    for (int tr : topo_[phi])
        for (int i : into_delta0_[phi]) {
            const auto& t = spec.templates[i];
            if (t.s_track != tr) continue;
            s.cur_n[tr] = sat_add(s.cur_n[tr], s.cur_n[t.r_track]);
            s.cur_s[tr] |= s.cur_s[t.r_track];
        }
}

ClassCount StagedAnalyzer::paths_between(const VRef& w, const VRef& u) const {
    if (vertical_) return unknown_count("vertical cycle");
    if (w.b > 0) {
        bool same = u.kind == w.kind && u.idx == w.idx && (u.kind == 1 || u.a == w.a) && u.b >= w.b;
        return finite_count(same ? 1 : 0);
    }
    if (u.b > 0) return paths_between(w, VRef{u.kind, u.idx, u.a, 0});
    if (u.kind == 1) {
        if (w.kind == 0) return finite_count(0);
        return finite_count(start_scan(w).spor_n[u.idx]);
    }
    Scan s = start_scan(w);
    if (s.empty || u.a <= s.col) return finite_count(0);
    if (u.a - s.col > budget_) return unknown_count("column budget exhausted");
    while (s.col < u.a) advance(s);
    return finite_count(s.cur_n[u.idx]);
}

ClassCount StagedAnalyzer::count(const VRef& w, const Path& x0) const {
    if (vertical_) return unknown_count("vertical cycle");
    Path x = normalize(g_, x0);
    if (x.is_finite()) {
        VRef s = x.source(g_);
        if (!g_.range_edges(s).empty()) throw input_error("path is not a boundary path");
        return paths_between(w, s);
    }
    const auto& tail = *x.tail;
    if (tail.shift.dcol == 0 && tail.shift.ddepth > 0) {
        const auto& h = g_.spec().hairs[tail.block.front().idx];
        VRef attach = h.on_track ? StagedGraph::track_vertex(h.index, tail.block.front().a)
                                 : StagedGraph::sporadic_vertex(h.index);
        if (w.b > 0) {
            bool same = w.kind == attach.kind && w.idx == attach.idx && (w.kind == 1 || w.a == attach.a);
            return finite_count(same ? 1 : 0, {{"kind", "hair"}});
        }
        auto c = paths_between(w, attach);
        if (c.finite()) c.certificate = {{"kind", "hair"}, {"attach", g_.vertex_name(attach)}};
        return c;
    }
    if (tail.shift.dcol == 0) return unknown_count("vertical cycle");
    return ray_count(w, x);
}

ClassCount StagedAnalyzer::ray_count(const VRef& w, const Path& x) const {
    if (w.b > 0) return finite_count(0);
    const auto& spec = g_.spec();
    const auto& tail = *x.tail;
    std::int64_t V = tail.shift.dcol;
    struct Link {
        int track, tmpl;
        std::int64_t col, n;
    };
    std::vector<Link> links;
    for (const auto& e : tail.block) {
        VRef s = g_.source(e);
        links.push_back({s.idx, e.idx, s.a, e.a});
    }
    bool on_ray = false;
    if (w.kind == 0)
        for (const auto& l : links)
            if (l.track == w.idx && floor_mod(w.a - l.col, V) == 0) on_ray = true;

    Scan s = start_scan(w);
    if (s.empty) return finite_count(on_ray ? 1 : 0);
    std::int64_t Lp = std::lcm(P_, V);
    std::map<std::pair<std::int64_t, std::vector<char>>, std::int64_t> seen;
    struct Event {
        std::int64_t col;
        std::string edge;
        std::int64_t paths;
    };
    std::vector<Event> events;
    std::int64_t start_col = s.col + 1;
    for (;;) {
        advance(s);
        if (s.col - start_col > budget_) return unknown_count("column budget exhausted");
        if (s.col > s.last_seed) {
            auto key = std::pair{floor_mod(s.col, Lp), s.prev_s};
            if (auto it = seen.find(key); it != seen.end()) {
                std::int64_t c0 = it->second;
                std::int64_t total = on_ray ? 1 : 0;
                json merges = json::array();
                for (const auto& ev : events) {
                    if (ev.col >= c0)
                        return infinite_count({{"kind", "periodic_merge"},
                                               {"edge", ev.edge},
                                               {"column", ev.col},
                                               {"period", s.col - c0}});
                    total = sat_add(total, ev.paths);
                    merges.push_back({{"edge", ev.edge}, {"paths", ev.paths}});
                }
                return finite_count(total, {{"kind", "merge_scan"}, {"on_ray", on_ray}, {"merges", merges}});
            }
            seen.emplace(key, s.col);
        }
        std::int64_t phi = floor_mod(s.col, P_);
        for (const auto& l : links) {
            if (floor_mod(s.col - l.col, V) != 0) continue;
            std::int64_t own_n = l.n + (s.col - l.col);
            auto consider = [&](const ERef& e, std::int64_t paths, bool reach) {
                if (!reach) return;
                events.push_back({s.col, g_.edge_name(e), paths});
            };
            for (int i : into_delta1_[phi]) {
                const auto& t = spec.templates[i];
                std::int64_t n = s.col - t.s_off;
                if (t.s_track != l.track || s.col < 1 || (i == l.tmpl && n == own_n)) continue;
                consider(StagedGraph::template_edge(i, n), s.prev_n[t.r_track], s.prev_s[t.r_track]);
            }
            for (int i : into_delta0_[phi]) {
                const auto& t = spec.templates[i];
                std::int64_t n = s.col - t.s_off;
                if (t.s_track != l.track || (i == l.tmpl && n == own_n)) continue;
                consider(StagedGraph::template_edge(i, n), s.cur_n[t.r_track], s.cur_s[t.r_track]);
            }
            for (int i = 0; i < (int)spec.sporadic_edges.size(); ++i) {
                const auto& e = spec.sporadic_edges[i];
                if (!e.s_on_track || e.s_index != l.track || e.s_col != s.col) continue;
                consider(ERef{2, i, 0, 0}, s.spor_n[e.r], s.spor_s[e.r]);
            }
        }
    }
}

SplitScan StagedAnalyzer::splitting(const VRef& w) const {
    const auto& spec = g_.spec();
    SplitScan out;
    if (w.b > 0 || vertical_) {
        out.exhausted = bool(vertical_);
        return out;
    }
    Scan s = start_scan(w);
    // pairs among sporadic edges
    int ns = (int)spec.sporadic_vertices.size();
    for (int v = 0; v < ns; ++v) {
        std::vector<std::string> in;
        for (const auto& e : spec.sporadic_edges)
            if (!e.s_on_track && e.s_index == v && s.spor_s[e.r]) in.push_back(e.id);
        std::int64_t m = (std::int64_t)in.size();
        if (m >= 2 && out.witness.empty()) out.witness = {{"pair", {in[0], in[1]}}, {"source", spec.sporadic_vertices[v]}};
        out.finite_pairs += m * (m - 1) / 2;
    }
    if (s.empty) return out;
    std::map<std::pair<std::int64_t, std::vector<char>>, std::int64_t> seen;
    struct Event {
        std::int64_t col, pairs;
        json witness;
    };
    std::vector<Event> events;
    std::int64_t start_col = s.col + 1;
    for (;;) {
        advance(s);
        if (s.col - start_col > budget_) {
            out.exhausted = true;
            return out;
        }
        if (s.col > s.last_seed) {
            auto key = std::pair{floor_mod(s.col, P_), s.prev_s};
            if (auto it = seen.find(key); it != seen.end()) {
                for (const auto& ev : events) {
                    if (ev.col >= it->second) {
                        out.infinitely_many = true;
                        out.witness = ev.witness;
                        out.witness["period"] = s.col - it->second;
                        return out;
                    }
                    out.finite_pairs += ev.pairs;
                    if (out.witness.empty()) out.witness = ev.witness;
                }
                return out;
            }
            seen.emplace(key, s.col);
        }
        std::int64_t phi = floor_mod(s.col, P_);
        for (int tr = 0; tr < T_; ++tr) {
            std::vector<ERef> in;
            if (s.col >= 1)
                for (int i : into_delta1_[phi])
                    if (spec.templates[i].s_track == tr && s.prev_s[spec.templates[i].r_track])
                        in.push_back(StagedGraph::template_edge(i, s.col - spec.templates[i].s_off));
            for (int i : into_delta0_[phi])
                if (spec.templates[i].s_track == tr && s.cur_s[spec.templates[i].r_track])
                    in.push_back(StagedGraph::template_edge(i, s.col - spec.templates[i].s_off));
            for (int i = 0; i < (int)spec.sporadic_edges.size(); ++i) {
                const auto& e = spec.sporadic_edges[i];
                if (e.s_on_track && e.s_index == tr && e.s_col == s.col && s.spor_s[e.r]) in.push_back(ERef{2, i, 0, 0});
            }
            std::int64_t m = (std::int64_t)in.size();
            if (m < 2) continue;
            events.push_back({s.col,
                              m * (m - 1) / 2,
                              {{"pair", {g_.edge_name(in[0]), g_.edge_name(in[1])}},
                               {"source", g_.vertex_name(StagedGraph::track_vertex(tr, s.col))}}});
        }
    }
}

bool StagedAnalyzer::covers_recurrent(const VRef& w) const {
    if (vertical_ || w.b > 0) return false;
    Scan s = start_scan(w);
    if (s.empty) return false;
    std::map<std::pair<std::int64_t, std::vector<char>>, std::int64_t> seen;
    std::vector<std::pair<std::int64_t, bool>> ok;
    std::int64_t start_col = s.col + 1;
    for (;;) {
        advance(s);
        if (s.col - start_col > budget_) return false;
        if (s.col > s.last_seed) {
            auto key = std::pair{floor_mod(s.col, P_), s.prev_s};
            if (auto it = seen.find(key); it != seen.end()) {
                for (auto [c, good] : ok)
                    if (c >= it->second && !good) return false;
                return true;
            }
            seen.emplace(key, s.col);
        }
        std::int64_t phi = floor_mod(s.col, P_);
        bool good = true;
        for (int t = 0; t < T_; ++t)
            if (recurrent_[t * P_ + phi] && !s.cur_s[t]) good = false;
        ok.push_back({s.col, good});
    }
}

ClassCount StagedAnalyzer::boundary_sup(const VRef& w) const {
    const auto& spec = g_.spec();
    if (vertical_) return unknown_count("vertical cycle");
    if (w.b > 0) return finite_count(1, {{"kind", "hair"}});
    Scan s = start_scan(w);
    std::int64_t best = 0;
    json best_at = json::object();
    auto note = [&](std::int64_t v, const VRef& at) {
        if (v == kOver || (best != kOver && v > best)) {
            best = v;
            best_at = g_.vertex_name(at);
        }
    };
    int ns = (int)spec.sporadic_vertices.size();
    for (int v = 0; v < ns; ++v) {
        auto sv = StagedGraph::sporadic_vertex(v);
        if (s.spor_s[v] && (g_.hair_on_sporadic(v) >= 0 || g_.range_edges(sv).empty())) note(s.spor_n[v], sv);
    }
    // targets: (track, phase) carrying a hair or receiving no edges
    std::vector<char> target(T_ * P_, 0);
    for (int t = 0; t < T_; ++t)
        for (std::int64_t phi = 0; phi < P_; ++phi) {
            bool src = g_.hair_on_track(t) < 0;
            for (const auto& e : spec.templates)
                if (e.r_track == t && active(e, phi, e.r_off)) src = false;
            target[t * P_ + phi] = (g_.hair_on_track(t) >= 0 || src) ? 1 : 0;
        }
    if (s.empty) return finite_count(best, {{"kind", "boundary_sup"}, {"at", best_at}});
    while (s.col < s.last_seed) {
        advance(s);
        std::int64_t phi = floor_mod(s.col, P_);
        for (int t = 0; t < T_; ++t)
            if (s.cur_s[t] && target[t * P_ + phi]) note(s.cur_n[t], StagedGraph::track_vertex(t, s.col));
    }
    // one-column step graph on (track, phase); weights capped at 2
    DirectedGraph h;
    for (int t = 0; t < T_; ++t)
        for (std::int64_t phi = 0; phi < P_; ++phi) h.add_vertex(std::to_string(t) + "@" + std::to_string(phi));
    for (std::int64_t phi = 0; phi < P_; ++phi)
        for (int t = 0; t < T_; ++t) {
            Scan u;
            u.prev_n.assign(T_, 0);
            u.cur_n.assign(T_, 0);
            u.prev_s.assign(T_, 0);
            u.cur_s.assign(T_, 0);
            u.cur_n[t] = 1;
            u.cur_s[t] = 1;
            u.col = P_ + phi;
            advance(u);
            std::int64_t to = floor_mod(phi + 1, P_);
            for (int t2 = 0; t2 < T_; ++t2)
                for (std::int64_t k = 0; k < std::min<std::int64_t>(u.cur_n[t2] == kOver ? 2 : u.cur_n[t2], 2); ++k)
                    h.add_edge("h" + std::to_string(h.edge_count()), int(t * P_ + phi), int(t2 * P_ + to));
        }
    std::vector<char> fwd(h.vertex_count(), 0), back(h.vertex_count(), 0);
    {
        std::int64_t phi = floor_mod(s.col, P_);
        std::deque<int> q;
        for (int t = 0; t < T_; ++t)
            if (s.cur_s[t]) {
                fwd[t * P_ + phi] = 1;
                q.push_back(int(t * P_ + phi));
            }
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int e : h.in_range(x))
                if (!fwd[h.edge_source(e)]) {
                    fwd[h.edge_source(e)] = 1;
                    q.push_back(h.edge_source(e));
                }
        }
        for (int x = 0; x < h.vertex_count(); ++x)
            if (target[x]) {
                back[x] = 1;
                q.push_back(x);
            }
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int e : h.in_source(x))
                if (!back[h.edge_range(e)]) {
                    back[h.edge_range(e)] = 1;
                    q.push_back(h.edge_range(e));
                }
        }
    }
    std::vector<char> live(h.vertex_count(), 0);
    DirectedGraph r;
    std::vector<int> rid(h.vertex_count(), -1), hid;
    for (int x = 0; x < h.vertex_count(); ++x)
        if (fwd[x] && back[x]) {
            live[x] = 1;
            rid[x] = r.add_vertex(h.vertex_id(x));
            hid.push_back(x);
        }
    for (int e = 0; e < h.edge_count(); ++e)
        if (live[h.edge_range(e)] && live[h.edge_source(e)])
            r.add_edge(h.edge_id(e), rid[h.edge_range(e)], rid[h.edge_source(e)]);
    auto comps = strong_components(r);
    std::vector<int> nodes(comps.count, 0), inner(comps.count, 0);
    for (int x = 0; x < r.vertex_count(); ++x) ++nodes[comps.comp[x]];
    for (int e = 0; e < r.edge_count(); ++e)
        if (comps.comp[r.edge_range(e)] == comps.comp[r.edge_source(e)]) ++inner[comps.comp[r.edge_range(e)]];
    auto node_json = [&](int x) {
        int t = int(hid[x] / P_);
        return json{{"track", spec.tracks[t]}, {"phase", hid[x] % P_}};
    };
    for (int c = 0; c < comps.count; ++c)
        if (comps.nontrivial[c] && inner[c] != nodes[c]) {
            for (int x = 0; x < r.vertex_count(); ++x)
                if (comps.comp[x] == c)
                    return infinite_count({{"kind", "exponential_growth"}, {"node", node_json(x)}});
        }
    // no chain from one cycle to another
    for (int c = 0; c < comps.count; ++c) {
        if (!comps.nontrivial[c]) continue;
        int x0 = -1;
        for (int x = 0; x < r.vertex_count() && x0 < 0; ++x)
            if (comps.comp[x] == c) x0 = x;
        auto reach = reach_from(r, x0);
        for (int x = 0; x < r.vertex_count(); ++x)
            if (reach[x] && comps.comp[x] != c && comps.nontrivial[comps.comp[x]])
                return infinite_count(
                    {{"kind", "polynomial_growth"}, {"from", node_json(x0)}, {"to", node_json(x)}});
    }
    // bounded; iterate the live coordinates until the state repeats
    std::map<std::pair<std::int64_t, std::vector<std::int64_t>>, std::int64_t> seen;
    for (std::int64_t steps = 0;; ++steps) {
        std::int64_t phi = floor_mod(s.col, P_);
        for (int t = 0; t < T_; ++t)
            if (!live[t * P_ + phi]) {
                s.cur_n[t] = 0;
                s.cur_s[t] = 0;
            }
        for (int t = 0; t < T_; ++t)
            if (s.cur_s[t] && target[t * P_ + phi]) note(s.cur_n[t], StagedGraph::track_vertex(t, s.col));
        if (!seen.emplace(std::pair{phi, s.cur_n}, s.col).second) break;
        if (steps > budget_) return unknown_count("column budget exhausted");
        advance(s);
    }
    return finite_count(best, {{"kind", "boundary_sup"}, {"at", best_at}});
}

}  // namespace ckgraph
