#include "ckgraph/structure.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace ckgraph {

std::vector<VRef> sources(const DirectedGraph& g) {
    std::vector<VRef> out;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.in_range(v).empty()) out.push_back(DirectedGraph::vref(v));
    return out;
}

std::vector<char> reach_from(const DirectedGraph& g, int v) {
    std::vector<char> seen(g.vertex_count(), 0);
    std::deque<int> q{v};
    seen[v] = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int e : g.in_range(u)) {
            int s = g.edge_source(e);
            if (!seen[s]) {
                seen[s] = 1;
                q.push_back(s);
            }
        }
    }
    return seen;
}

Components strong_components(const DirectedGraph& g) {
    // iterative Tarjan
    int n = g.vertex_count();
    Components c;
    c.comp.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<char> on(n, 0);
    int counter = 0;
    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        std::vector<std::pair<int, std::size_t>> work{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on[root] = 1;
        while (!work.empty()) {
            auto& [u, i] = work.back();
            const auto& out = g.in_range(u);
            if (i < out.size()) {
                int w = g.edge_source(out[i++]);
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on[w] = 1;
                    work.push_back({w, 0});
                } else if (on[w]) {
                    low[u] = std::min(low[u], index[w]);
                }
                continue;
            }
            if (low[u] == index[u]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on[w] = 0;
                    c.comp[w] = c.count;
                } while (w != u);
                ++c.count;
            }
            int done = u;
            work.pop_back();
            if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
        }
    }
    c.nontrivial.assign(c.count, 0);
    for (int e = 0; e < g.edge_count(); ++e)
        if (c.comp[g.edge_range(e)] == c.comp[g.edge_source(e)]) c.nontrivial[c.comp[g.edge_range(e)]] = 1;
    return c;
}

namespace {

Cycle canonical(const Graph& g, std::vector<ERef> edges) {
    auto best = std::min_element(edges.begin(), edges.end(), [&](const ERef& a, const ERef& b) {
        return g.edge_name(a) < g.edge_name(b);
    });
    std::rotate(edges.begin(), best, edges.end());
    return Cycle{std::move(edges)};
}

std::vector<std::string> names(const Graph& g, const std::vector<ERef>& es) {
    std::vector<std::string> out;
    for (const auto& e : es) out.push_back(g.edge_name(e));
    return out;
}

}  // namespace

std::vector<Cycle> find_cycles(const DirectedGraph& g, std::size_t max_cycles) {
    // each simple cycle is found once, from its least vertex index
    std::vector<Cycle> out;
    int n = g.vertex_count();
    std::vector<char> on_path(n, 0);
    std::vector<ERef> path;
    for (int start = 0; start < n; ++start) {
        std::function<void(int)> dfs = [&](int u) {
            for (int e : g.in_range(u)) {
                int s = g.edge_source(e);
                if (s < start) continue;
                if (s == start) {
                    path.push_back(DirectedGraph::eref(e));
                    out.push_back(canonical(g, path));
                    path.pop_back();
                    if (out.size() > max_cycles) throw budget_exhausted("cycle enumeration budget exceeded");
                } else if (!on_path[s]) {
                    on_path[s] = 1;
                    path.push_back(DirectedGraph::eref(e));
                    dfs(s);
                    path.pop_back();
                    on_path[s] = 0;
                }
            }
        };
        on_path[start] = 1;
        dfs(start);
        on_path[start] = 0;
    }
    std::sort(out.begin(), out.end(), [&](const Cycle& a, const Cycle& b) {
        return names(g, a.edges) < names(g, b.edges);
    });
    return out;
}

bool is_cycle(const Graph& g, const Cycle& c) {
    if (c.edges.empty()) return false;
    std::vector<VRef> srcs;
    for (std::size_t i = 0; i < c.edges.size(); ++i) {
        if (!g.valid_edge(c.edges[i])) return false;
        const auto& next = c.edges[(i + 1) % c.edges.size()];
        if (g.source(c.edges[i]) != g.range(next)) return false;
        srcs.push_back(g.source(c.edges[i]));
    }
    std::sort(srcs.begin(), srcs.end());
    return std::adjacent_find(srcs.begin(), srcs.end()) == srcs.end();
}

std::vector<ERef> cycle_entries(const Graph& g, const Cycle& c) {
    std::vector<ERef> out;
    for (const auto& a : c.edges)
        for (const auto& f : g.range_edges(g.range(a)))
            if (f != a) out.push_back(f);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

std::vector<EdgePair> pairs_among(const Graph& g, const std::vector<ERef>& edges) {
    std::vector<EdgePair> out;
    for (std::size_t i = 0; i < edges.size(); ++i)
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            if (edges[i] == edges[j] || g.source(edges[i]) != g.source(edges[j])) continue;
            auto a = edges[i], b = edges[j];
            if (g.edge_name(b) < g.edge_name(a)) std::swap(a, b);
            out.push_back({a, b});
        }
    std::sort(out.begin(), out.end(), [&](const EdgePair& x, const EdgePair& y) {
        return std::pair(g.edge_name(x.first), g.edge_name(x.second)) <
               std::pair(g.edge_name(y.first), g.edge_name(y.second));
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<EdgePair> splitting_pairs(const DirectedGraph& g) { return pairs_among(g, g.all_edges()); }

std::vector<EdgePair> splitting_pairs(const DirectedGraph& g, const std::set<int>& vertices) {
    std::vector<char> seen(g.vertex_count(), 0);
    for (int v : vertices) {
        auto r = reach_from(g, v);
        for (int u = 0; u < g.vertex_count(); ++u) seen[u] |= r[u];
    }
    std::vector<ERef> edges;
    for (int e = 0; e < g.edge_count(); ++e)
        if (seen[g.edge_range(e)]) edges.push_back(DirectedGraph::eref(e));
    return pairs_among(g, edges);
}

std::vector<EdgePair> splitting_pairs(const Graph& g, const std::vector<std::vector<ERef>>& paths) {
    std::vector<ERef> edges;
    for (const auto& p : paths) edges.insert(edges.end(), p.begin(), p.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return pairs_among(g, edges);
}

namespace {

std::vector<int> component_cycle(const DirectedGraph& g, const Components& c, int comp) {
    int u = -1;
    for (int v = 0; v < g.vertex_count() && u < 0; ++v)
        if (c.comp[v] == comp) u = v;
    int first = -1;
    for (int e : g.in_range(u))
        if (c.comp[g.edge_source(e)] == comp) {
            first = e;
            break;
        }
    int s0 = g.edge_source(first);
    std::vector<int> via(g.vertex_count(), -2);
    std::deque<int> q{s0};
    via[s0] = -1;
    while (!q.empty() && via[u] == -2) {
        int x = q.front();
        q.pop_front();
        for (int e : g.in_range(x)) {
            int s = g.edge_source(e);
            if (c.comp[s] != comp || via[s] != -2) continue;
            via[s] = e;
            q.push_back(s);
        }
    }
    std::vector<int> tail;
    for (int x = u; x != s0; x = g.edge_range(via[x])) tail.push_back(via[x]);
    std::reverse(tail.begin(), tail.end());
    std::vector<int> cyc{first};
    if (s0 != u) cyc.insert(cyc.end(), tail.begin(), tail.end());
    return cyc;
}

}  // namespace

Cycle cycle_in_component(const DirectedGraph& g, const Components& c, int comp) {
    Cycle out;
    for (int e : component_cycle(g, c, comp)) out.edges.push_back(DirectedGraph::eref(e));
    return out;
}

std::optional<Cycle> some_cycle(const DirectedGraph& g) {
    auto c = strong_components(g);
    for (int i = 0; i < c.count; ++i)
        if (c.nontrivial[i]) return cycle_in_component(g, c, i);
    return std::nullopt;
}

Decision is_cofinal(const DirectedGraph& g) {
    auto comps = strong_components(g);
    auto srcs = sources(g);
    for (int v = 0; v < g.vertex_count(); ++v) {
        auto r = reach_from(g, v);
        for (const auto& s : srcs)
            if (!r[s.idx])
                return Decision::no({{"kind", "not_cofinal"},
                                     {"vertex", g.vertex_id(v)},
                                     {"boundary_path", {{"vertex", g.vertex_id(s.idx)}, {"path", g.vertex_id(s.idx)}}}});
        std::vector<char> hit(comps.count, 0);
        for (int u = 0; u < g.vertex_count(); ++u)
            if (r[u]) hit[comps.comp[u]] = 1;
        for (int c = 0; c < comps.count; ++c) {
            if (!comps.nontrivial[c] || hit[c]) continue;
            Cycle cyc = cycle_in_component(g, comps, c);
            std::string lit = ";";
            for (const auto& e : cyc.edges) lit += " " + g.edge_id(e.idx);
            return Decision::no({{"kind", "not_cofinal"},
                                 {"vertex", g.vertex_id(v)},
                                 {"boundary_path", {{"cycle", names(g, cyc.edges)}, {"path", lit}}}});
        }
    }
    return Decision::yes({{"kind", "reachability_closure"}});
}

json cycle_json(const Graph& g, const Cycle& c) { return names(g, c.edges); }

}  // namespace ckgraph
