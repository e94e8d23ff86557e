#include "ckgraph/kclassify.hpp"

#include <algorithm>
#include <deque>

namespace ckgraph {

json Grading::to_json() const { return {{"weights", weights}, {"column_weight", column_weight}}; }

namespace {

// arcs a -> b with g(b) - g(a) = w
struct Arc {
    int a, b;
    std::int64_t w;
};

bool solvable(int nodes, const std::vector<Arc>& arcs) {
    std::vector<std::vector<std::pair<int, std::int64_t>>> adj(static_cast<std::size_t>(nodes));
    for (const auto& x : arcs) {
        adj[static_cast<std::size_t>(x.a)].push_back({x.b, x.w});
        adj[static_cast<std::size_t>(x.b)].push_back({x.a, -x.w});
    }
    std::vector<std::optional<std::int64_t>> pot(static_cast<std::size_t>(nodes));
    for (int s = 0; s < nodes; ++s) {
        if (pot[static_cast<std::size_t>(s)]) continue;
        pot[static_cast<std::size_t>(s)] = 0;
        std::deque<int> q{s};
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (auto [v, w] : adj[static_cast<std::size_t>(u)]) {
                std::int64_t want = *pot[static_cast<std::size_t>(u)] + w;
                auto& pv = pot[static_cast<std::size_t>(v)];
                if (!pv) {
                    pv = want;
                    q.push_back(v);
                } else if (*pv != want) {
                    return false;
                }
            }
        }
    }
    return true;
}

bool next_weights(std::vector<std::int64_t>& c) {
    for (auto& x : c) {
        if (x < 2) {
            ++x;
            return true;
        }
        x = 0;
    }
    return false;
}

}  // namespace

std::optional<Grading> find_grading(const KGraph& g, const std::vector<int>& positive) {
    const int k = g.k();
    for (std::int64_t w = 0; w <= (g.is_finite() ? 0 : 1); ++w) {
        std::vector<std::int64_t> c(static_cast<std::size_t>(k), 0);
        do {
            std::vector<Arc> arcs;
            int nodes = 0;
            if (const auto* f = g.finite()) {
                nodes = f->vertex_count();
                for (int e = 0; e < f->edge_count(); ++e)
                    arcs.push_back({f->edge_range(e), f->edge_source(e),
                                    c[static_cast<std::size_t>(g.color(DirectedGraph::eref(e)))]});
            } else {
                const auto* sg = g.staged();
                nodes = sg->track_count();
                for (const auto& t : sg->spec().templates)
                    arcs.push_back({t.r_track, t.s_track, c[static_cast<std::size_t>(t.color)] - w * t.delta()});
            }
            bool pos = std::all_of(positive.begin(), positive.end(),
                                   [&](int i) { return c[static_cast<std::size_t>(i)] > 0; });
            if (pos && solvable(nodes, arcs)) return Grading{c, w};
        } while (next_weights(c));
    }
    return std::nullopt;
}

namespace {

std::vector<int> colors_of(const std::vector<char>& mask) {
    std::vector<int> out;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.push_back(static_cast<int>(i));
    return out;
}

json one_based(const std::vector<int>& cs) {
    json out = json::array();
    for (int c : cs) out.push_back(c + 1);
    return out;
}

// every vertex at column >= 1 is the source of at most one color-j edge
std::optional<json> column_merge_violation(const StagedGraph& g, int j) {
    const std::int64_t P = g.period();
    for (int t = 0; t < g.track_count(); ++t)
        for (std::int64_t p = 0; p < P; ++p) {
            json hits = json::array();
            for (const auto& e : g.spec().templates) {
                if (e.color != j || e.s_track != t) continue;
                if (floor_mod(p - e.s_off - e.phase, e.period) == 0) hits.push_back(e.id);
            }
            if (hits.size() > 1)
                return json{{"track", g.spec().tracks[static_cast<std::size_t>(t)]}, {"phase", p}, {"edges", hits}};
        }
    return std::nullopt;
}

// nonzero, small in l1, first nonzero entry positive
bool smaller_lag(const Degree& n, const std::optional<Degree>& best) {
    auto l1 = [](const Degree& d) {
        std::int64_t s = 0;
        for (auto x : d) s += x < 0 ? -x : x;
        return s;
    };
    auto lead = [](const Degree& d) {
        for (auto x : d)
            if (x != 0) return x;
        return std::int64_t{0};
    };
    if (lead(n) <= 0) return false;
    if (!best) return true;
    if (l1(n) != l1(*best)) return l1(n) < l1(*best);
    return n > *best;
}

}  // namespace

ClassificationReport classify_kgraph(const KGraph& g, std::int64_t budget) {
    if (g.k() == 1) {
        auto r = classify_digraph(g.skeleton(), std::int64_t{1} << 16);
        r.notes["delegated"] = "classify_digraph";
        return r;
    }
    ClassificationReport r;
    const bool finite = g.is_finite();
    auto inf = infinite_colors(g);
    auto J = colors_of(inf);
    r.notes["infinite_colors"] = one_based(J);
    r.notes["locally_convex"] = locally_convex(g);

    if (finite && J.empty()) {
        // the boundary path space is finite and every path ends at a total source
        json ends = json::object();
        for (const auto& v : g.finite()->all_vertices())
            for (const auto& x : boundary_candidates(g, v, 1)) {
                std::string s = g.skeleton().vertex_name(source(g, x.prefix));
                if (!ends.contains(s)) ends[s] = to_literal(g, x);
            }
        json cert{{"kind", "finite_acyclic"}, {"boundary_sources", ends}};
        for (const char* p : {"principal", "af", "liminal", "postliminal", "bounded_trace", "fell", "continuous_trace"})
            r.properties[p] = Decision::yes(cert);
        if (ends.size() <= 1)
            r.properties["simple"] = Decision::yes({{"kind", "single_orbit"}, {"boundary_sources", ends}});
        else {
            auto it = ends.begin();
            json a = *it++;
            json b = *it;
            r.properties["simple"] = Decision::no({{"kind", "two_orbits"}, {"paths", {a, b}}});
        }
        return r;
    }

    auto unknown = [&](const std::string& why) { return Decision::unknown(why); };
    for (const char* p : kProperties) r.properties[p] = unknown("scope: no criterion applies within the path family");
    if (!finite) r.properties["af"] = unknown("scope: af is not decided for infinite k-graphs");

    auto grading = J.size() <= 1 ? find_grading(g, J) : std::nullopt;
    bool principal = false;
    if (grading) {
        json cert = grading->to_json();
        cert["kind"] = "grading";
        cert["infinite_colors"] = one_based(J);
        r.properties["principal"] = Decision::yes(cert);
        principal = true;
    } else {
        std::int64_t used = 0;
        for (const auto& v : g.fundamental_vertices()) {
            for (const auto& x : boundary_candidates(g, v, budget)) {
                if (x.is_finite()) continue;
                ++used;
                std::optional<Degree> best;
                for (const auto& n : lags_in_box(g, x, x, budget))
                    if (smaller_lag(n, best)) best = n;
                if (best) {
                    r.properties["principal"] =
                        Decision::no({{"kind", "self_lag"}, {"path", to_literal(g, x)}, {"lag", *best}}, used);
                    break;
                }
            }
            if (r.properties["principal"].is_no()) break;
        }
        if (r.properties["principal"].is_unknown())
            r.properties["principal"] = Decision::unknown("budget: no self lag found and no grading", used);
    }

    if (!principal) {
        for (const char* p : {"bounded_trace", "fell", "continuous_trace"})
            r.properties[p] = unknown("non-principal");
        propagate_implications(r);
        return r;
    }

    if (!finite && J.size() == 1) {
        int j = J[0];
        if (auto bad = column_merge_violation(*g.staged(), j)) {
            r.notes["column_merge"] = *bad;
        } else {
            r.properties["continuous_trace"] =
                Decision::yes({{"kind", "column_merge"}, {"color", j + 1}, {"period", g.period()}});
        }
    }
    propagate_implications(r);
    return r;
}

std::optional<KPath> monolithic_extension(const KGraph& g, const KPath& x, const KPath& y, const Morphism& eta,
                                          const Morphism& zeta) {
    if (source(g, eta) != source(g, zeta)) return std::nullopt;
    Degree de = degree(g, eta), dz = degree(g, zeta);
    if (!leq(de, degree(g, x)) || !leq(dz, degree(g, y))) return std::nullopt;
    if (initial_segment(g, x, de) != eta || initial_segment(g, y, dz) != zeta) return std::nullopt;
    KPath t = shift(g, x, de);
    if (!equal(g, t, shift(g, y, dz))) return std::nullopt;
    return t;
}

}  // namespace ckgraph
