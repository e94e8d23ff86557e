#include "ckgraph/classify.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "ckgraph/paths.hpp"
#include "ckgraph/staged_analysis.hpp"
#include "ckgraph/structure.hpp"

namespace ckgraph {

bool ClassificationReport::any_unknown() const {
    for (const auto& [k, d] : properties)
        if (d.is_unknown()) return true;
    return false;
}

json ClassificationReport::to_json() const {
    json j = json::object();
    for (const char* p : kProperties)
        if (auto it = properties.find(p); it != properties.end()) j[p] = it->second.to_json();
    json out{{"properties", j}};
    if (!notes.empty()) out["notes"] = notes;
    return out;
}

bool implications_respected(const ClassificationReport& r) {
    for (std::size_t i = 0; i < kImplicationChain.size(); ++i)
        for (std::size_t j = i + 1; j < kImplicationChain.size(); ++j) {
            auto a = r.properties.find(kImplicationChain[i]);
            auto b = r.properties.find(kImplicationChain[j]);
            if (a == r.properties.end() || b == r.properties.end()) continue;
            if (a->second.is_yes() && b->second.is_no()) return false;
        }
    return true;
}

bool propagate_implications(ClassificationReport& r) {
    if (!implications_respected(r)) return false;
    const auto n = kImplicationChain.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto& a = r.properties[kImplicationChain[i]];
            auto& b = r.properties[kImplicationChain[j]];
            if (a.is_yes() && b.is_unknown()) b = Decision::yes({{"kind", "implied"}, {"by", kImplicationChain[i]}});
        }
    for (std::size_t j = n; j-- > 0;)
        for (std::size_t i = 0; i < j; ++i) {
            auto& a = r.properties[kImplicationChain[i]];
            auto& b = r.properties[kImplicationChain[j]];
            if (b.is_no() && a.is_unknown()) a = Decision::no({{"kind", "implied"}, {"by", kImplicationChain[j]}});
        }
    return true;
}

namespace {

json names(const Graph& g, const std::vector<ERef>& es) {
    json out = json::array();
    for (const auto& e : es) out.push_back(g.edge_name(e));
    return out;
}

// shortest path from vertex a to vertex b inside component comp, as edges
std::vector<ERef> path_within(const DirectedGraph& g, const Components& c, int a, int b) {
    std::vector<int> via(g.vertex_count(), -2);
    std::deque<int> q{a};
    via[a] = -1;
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        for (int e : g.in_range(x)) {
            int s = g.edge_source(e);
            if (c.comp[s] != c.comp[a] || via[s] != -2) continue;
            via[s] = e;
            q.push_back(s);
        }
    }
    std::vector<ERef> out;
    for (int x = b; x != a; x = g.edge_range(via[x])) out.push_back(DirectedGraph::eref(via[x]));
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace

ClassificationReport classify_digraph(const DirectedGraph& g) {
    ClassificationReport r;
    auto comps = strong_components(g);
    std::optional<Cycle> any_cycle;
    std::optional<std::pair<Cycle, ERef>> with_entry;
    std::optional<Cycle> without_entry;
    std::optional<json> entry_on_cycle;
    for (int c = 0; c < comps.count; ++c) {
        if (!comps.nontrivial[c]) continue;
        Cycle a = cycle_in_component(g, comps, c);
        if (!any_cycle) any_cycle = a;
        auto entries = cycle_entries(g, a);
        if (entries.empty()) {
            if (!without_entry) without_entry = a;
            continue;
        }
        if (!with_entry) with_entry = {a, entries.front()};
        for (const auto& f : entries) {
            int rf = g.edge_range(f.idx), sf = g.edge_source(f.idx);
            if (comps.comp[sf] != c || entry_on_cycle) continue;
            std::vector<ERef> beta{f};
            auto back = path_within(g, comps, sf, rf);
            beta.insert(beta.end(), back.begin(), back.end());
            entry_on_cycle = json{{"kind", "entry_on_cycle"},
                                  {"cycle", names(g, a.edges)},
                                  {"entry", g.edge_name(f)},
                                  {"entry_cycle", names(g, beta)}};
        }
    }

    if (any_cycle) {
        json cert{{"kind", "cycle"}, {"cycle", names(g, any_cycle->edges)}, {"self_lag", any_cycle->edges.size()}};
        std::string lit = ";";
        for (const auto& e : any_cycle->edges) lit += " " + g.edge_name(e);
        cert["path"] = lit;
        r.properties["principal"] = Decision::no(cert);
        r.properties["af"] = Decision::no(cert);
    } else {
        r.properties["principal"] = Decision::yes({{"kind", "no_cycles"}});
        r.properties["af"] = Decision::yes({{"kind", "no_cycles"}});
    }

    if (without_entry) {
        r.properties["simple"] = Decision::no({{"kind", "cycle_without_entry"}, {"cycle", names(g, without_entry->edges)}});
    } else {
        auto cof = is_cofinal(g);
        r.properties["simple"] = cof.is_yes() ? Decision::yes({{"kind", "entries_and_cofinal"}}) : cof;
    }

    if (with_entry)
        r.properties["liminal"] = Decision::no({{"kind", "cycle_entry"},
                                                {"cycle", names(g, with_entry->first.edges)},
                                                {"entry", g.edge_name(with_entry->second)}});
    else
        r.properties["liminal"] = Decision::yes({{"kind", "no_cycle_entries"}});

    if (entry_on_cycle)
        r.properties["postliminal"] = Decision::no(*entry_on_cycle);
    else
        r.properties["postliminal"] = Decision::yes({{"kind", "no_entry_on_cycle"}});

    if (!any_cycle) {
        // paths to each source bound the shift classes
        int n = g.vertex_count();
        std::vector<int> order;
        {
            std::vector<int> indeg(n, 0);
            for (int e = 0; e < g.edge_count(); ++e) ++indeg[g.edge_source(e)];
            std::deque<int> q;
            for (int v = 0; v < n; ++v)
                if (!indeg[v]) q.push_back(v);
            while (!q.empty()) {
                int v = q.front();
                q.pop_front();
                order.push_back(v);
                for (int e : g.in_range(v))
                    if (--indeg[g.edge_source(e)] == 0) q.push_back(g.edge_source(e));
            }
        }
        json bound = json::object();
        for (int v = 0; v < n; ++v) {
            std::vector<std::int64_t> cnt(n, 0);
            cnt[v] = 1;
            for (int u : order)
                for (int e : g.in_range(u)) {
                    std::int64_t out;
                    cnt[g.edge_source(e)] = add_overflows(cnt[g.edge_source(e)], cnt[u], out) ? -1 : out;
                }
            std::int64_t m = 0;
            for (int u = 0; u < n; ++u)
                if (g.in_range(u).empty()) m = (cnt[u] < 0 || m < 0) ? -1 : std::max(m, cnt[u]);
            bound[g.vertex_id(v)] = m;
        }
        auto pairs = splitting_pairs(g);
        r.properties["bounded_trace"] = Decision::yes({{"kind", "bound"}, {"M", bound}});
        r.properties["fell"] = Decision::yes({{"kind", "finite_splitting_pairs"}, {"count", pairs.size()}});
        r.properties["continuous_trace"] = Decision::yes({{"kind", "finite_splitting_pairs"}, {"count", pairs.size()}});
    } else if (with_entry) {
        for (const char* p : {"bounded_trace", "fell", "continuous_trace"})
            r.properties[p] = Decision::no({{"kind", "implied"}, {"by", "liminal"}});
    } else {
        for (const char* p : {"bounded_trace", "fell", "continuous_trace"})
            r.properties[p] = Decision::unknown("non-principal");
    }
    propagate_implications(r);
    return r;
}

ClassificationReport classify_digraph(const StagedGraph& g, std::int64_t budget) {
    ClassificationReport r;
    StagedAnalyzer an(g, budget);
    auto lit = [&](const Path& x) { return to_literal(g, x); };
    auto vname = [&](const VRef& v) { return g.vertex_name(v); };

    if (an.vertical_cycle()) {
        r.properties["principal"] = Decision::no(*an.vertical_cycle());
        r.properties["af"] = Decision::no(*an.vertical_cycle());
        for (const char* p : {"simple", "liminal", "postliminal", "bounded_trace", "fell", "continuous_trace"})
            r.properties[p] = Decision::unknown("cycle inside a column");
        const auto& cyc = (*an.vertical_cycle())["cycle"];
        std::set<std::string> on_cycle(cyc.begin(), cyc.end());
        for (const auto& name : cyc) {
            auto e = g.parse_edge(name.get<std::string>());
            if (!e) continue;
            for (const auto& f : g.range_edges(g.range(*e))) {
                if (on_cycle.count(g.edge_name(f))) continue;
                r.properties["liminal"] = Decision::no({{"kind", "cycle_entry"}, {"cycle", cyc}, {"entry", g.edge_name(f)}});
                propagate_implications(r);
                return r;
            }
        }
        return r;
    }
    r.properties["principal"] = Decision::yes({{"kind", "no_cycles"}});
    r.properties["af"] = Decision::yes({{"kind", "no_cycles"}});

    // cofinality fails at hairs and sources, since columns only advance
    std::optional<Decision> not_cofinal;
    const auto& spec = g.spec();
    if (an.has_hairs() && g.track_count() > 0) {
        const auto& h = spec.hairs.front();
        VRef a = h.on_track ? StagedGraph::track_vertex(h.index, 0) : StagedGraph::sporadic_vertex(h.index);
        VRef deep{a.kind, a.idx, a.a, 1};
        std::string other;
        if (!an.ray_classes().empty()) {
            other = lit(an.ray_classes().front());
        } else {
            VRef b = h.on_track ? StagedGraph::track_vertex(h.index, 1) : StagedGraph::track_vertex(0, 1);
            if (g.hair_on_track(b.idx) >= 0)
                other = "; @" + vname(b);
            else
                other = vname(b);
        }
        not_cofinal = Decision::no({{"kind", "not_cofinal"}, {"vertex", vname(deep)}, {"boundary_path", {{"path", other}}}});
    } else if (auto s = an.some_source(); s && g.track_count() > 0) {
        VRef later = StagedGraph::track_vertex(0, std::max<std::int64_t>(StagedGraph::column(*s), 0) + 1);
        not_cofinal = Decision::no({{"kind", "not_cofinal"}, {"vertex", vname(later)}, {"boundary_path", {{"path", vname(*s)}}}});
    }

    if (an.branching()) {
        r.properties["postliminal"] = Decision::no(*an.branching());
        for (const char* p : {"liminal", "bounded_trace", "fell", "continuous_trace"})
            r.properties[p] = Decision::no({{"kind", "implied"}, {"by", "postliminal"}});
        bool covered = !not_cofinal;
        for (const auto& w : an.representatives()) covered = covered && an.covers_recurrent(w);
        r.properties["simple"] = not_cofinal ? *not_cofinal
                                 : covered   ? Decision::yes({{"kind", "reach_covers_recurrent_tracks"}})
                                             : Decision::unknown("branching rays");
        return r;
    }

    auto reps = an.representatives();
    const auto& rays = an.ray_classes();

    // liminal and bounded trace: class counts from every representative
    std::optional<Decision> liminal, bounded;
    json bound = json::object();
    bool unknown_count = false;
    for (const auto& w : reps) {
        std::int64_t m = 0;
        bool m_known = true;
        for (const auto& x : rays) {
            auto c = an.count(w, x);
            if (c.infinite()) {
                if (!liminal)
                    liminal = Decision::no({{"kind", "infinite_class"},
                                            {"vertex", vname(w)},
                                            {"path", lit(x)},
                                            {"merge", c.certificate}});
                m_known = false;
            } else if (!c.finite()) {
                unknown_count = true;
                m_known = false;
            } else {
                m = std::max(m, c.value);
            }
        }
        auto b = an.boundary_sup(w);
        if (b.infinite()) {
            if (!bounded)
                bounded = Decision::no({{"kind", "unbounded_classes"}, {"vertex", vname(w)}, {"growth", b.certificate}});
            m_known = false;
        } else if (!b.finite()) {
            unknown_count = true;
            m_known = false;
        } else {
            m = std::max(m, b.value);
        }
        if (m_known) bound[vname(w)] = m;
    }
    if (liminal) {
        r.properties["liminal"] = *liminal;
        r.properties["bounded_trace"] = Decision::no({{"kind", "implied"}, {"by", "liminal"}});
    } else if (unknown_count) {
        r.properties["liminal"] = Decision::unknown("class count undecided within budget");
        r.properties["bounded_trace"] = bounded ? *bounded : Decision::unknown("class count undecided within budget");
    } else {
        r.properties["liminal"] = Decision::yes({{"kind", "finite_classes"}, {"rays", rays.size()}});
        r.properties["bounded_trace"] = bounded ? *bounded : Decision::yes({{"kind", "bound"}, {"M", bound}});
    }

    // postliminal: a lift of each ray class sees only its own tails
    std::optional<Decision> post;
    bool post_unknown = false;
    for (const auto& x : rays) {
        auto c = an.count(x.start, x);
        if (c.finite() && c.value == 1) continue;
        if (c.finite() || c.infinite()) {
            post = Decision::no({{"kind", "divertable_ray"}, {"path", lit(x)}, {"count", c.to_json()}});
            break;
        }
        post_unknown = true;
    }
    if (post)
        r.properties["postliminal"] = *post;
    else if (post_unknown)
        r.properties["postliminal"] = Decision::unknown("class count undecided within budget");
    else
        r.properties["postliminal"] = Decision::yes({{"kind", "rays_not_divertable"}, {"rays", rays.size()}});

    // Fell: splitting pairs below each ray
    std::optional<Decision> fell;
    bool fell_unknown = false;
    for (const auto& x : rays) {
        auto s = an.splitting(x.start);
        if (s.infinitely_many) {
            fell = Decision::no({{"kind", "splitting_family"}, {"path", lit(x)}, {"witness", s.witness}});
            break;
        }
        if (s.exhausted) fell_unknown = true;
    }
    r.properties["fell"] = fell ? *fell
                           : fell_unknown ? Decision::unknown("reach scan did not stabilize")
                                          : Decision::yes({{"kind", "finite_splitting_pairs_along_rays"}});

    std::optional<Decision> cts;
    bool cts_unknown = false;
    json finite_pairs = json::object();
    for (const auto& w : reps) {
        auto s = an.splitting(w);
        if (s.infinitely_many) {
            cts = Decision::no({{"kind", "splitting_family"}, {"vertex", vname(w)}, {"witness", s.witness}});
            break;
        }
        if (s.exhausted) cts_unknown = true;
        finite_pairs[vname(w)] = s.finite_pairs;
    }
    r.properties["continuous_trace"] =
        cts ? *cts
        : cts_unknown ? Decision::unknown("reach scan did not stabilize")
                      : Decision::yes({{"kind", "finite_splitting_pairs"}, {"pairs", finite_pairs}});

    // simple: no cycles, so only cofinality matters
    if (not_cofinal) {
        r.properties["simple"] = *not_cofinal;
    } else {
        std::optional<Decision> miss;
        bool miss_unknown = false;
        for (const auto& w : reps) {
            for (const auto& x : rays) {
                auto c = an.count(w, x);
                if (c.finite() && c.value == 0) {
                    miss = Decision::no({{"kind", "not_cofinal"}, {"vertex", vname(w)}, {"boundary_path", {{"path", lit(x)}}}});
                    break;
                }
                if (!c.finite() && !c.infinite()) miss_unknown = true;
            }
            if (miss) break;
        }
        r.properties["simple"] = miss ? *miss
                                 : miss_unknown ? Decision::unknown("class count undecided within budget")
                                                : Decision::yes({{"kind", "cofinal_no_cycles"}});
    }
    propagate_implications(r);
    return r;
}

ClassificationReport classify_digraph(const Graph& g, std::int64_t budget) {
    if (auto* d = dynamic_cast<const DirectedGraph*>(&g)) return classify_digraph(*d);
    if (auto* s = dynamic_cast<const StagedGraph*>(&g)) return classify_digraph(*s, budget);
    throw input_error("unsupported graph type");
}

}  // namespace ckgraph
