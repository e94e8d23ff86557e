#include "kpaths.hpp"

#include <functional>

namespace oracle {

std::vector<KPath> pool(const KGraph& g, std::int64_t box) {
    std::vector<KPath> out;
    for (const auto& v : g.fundamental_vertices())
        for (auto& x : boundary_candidates(g, v, box)) out.push_back(std::move(x));
    return out;
}

std::vector<KPath> window_pool(const KGraph& g, std::int64_t cols, std::int64_t box) {
    if (g.is_finite()) return pool(g, box);
    std::vector<KPath> out;
    for (std::int64_t c = 0; c <= cols; ++c)
        for (int t = 0; t < g.staged()->track_count(); ++t)
            for (auto& x : boundary_candidates(g, StagedGraph::track_vertex(t, c), box)) out.push_back(std::move(x));
    return out;
}

Degree random_degree(std::mt19937& rng, int k, std::int64_t hi) {
    std::uniform_int_distribution<std::int64_t> d(0, hi);
    Degree out(static_cast<std::size_t>(k));
    for (auto& x : out) x = d(rng);
    return out;
}

bool v_oracle(const KGraph& g, const VertexRep& a, const VertexRep& b) {
    Degree ca = meet(a.m, degree(g, a.x)), cb = meet(b.m, degree(g, b.x));
    return source(g, initial_segment(g, a.x, ca)) == source(g, initial_segment(g, b.x, cb)) &&
           sub(a.m, ca) == sub(b.m, cb);
}

bool p_oracle(const KGraph& g, const MorphismRep& a, const MorphismRep& b) {
    Degree da = degree(g, a.x), db = degree(g, b.x);
    Degree a1 = meet(a.m, da), a2 = meet(a.n, da), b1 = meet(b.m, db), b2 = meet(b.n, db);
    Morphism sa = segment(g, initial_segment(g, a.x, a2), a1, a2);
    Morphism sb = segment(g, initial_segment(g, b.x, b2), b1, b2);
    return sa == sb && sub(a.m, a1) == sub(b.m, b1) && sub(a.n, a.m) == sub(b.n, b.m);
}

std::vector<MorphismRep> random_reps(const KGraph& g, const std::vector<KPath>& xs, std::mt19937& rng, int count,
                                     std::int64_t hi) {
    std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
    std::vector<MorphismRep> out;
    for (int i = 0; i < count; ++i) {
        Degree m = random_degree(rng, g.k(), hi);
        out.push_back({xs[pick(rng)], m, add(m, random_degree(rng, g.k(), hi))});
    }
    return out;
}

bool kappa_lagged(const KGraph& g, const KPath& x, const KPath& y, const Degree& n, std::int64_t M, std::int64_t w) {
    const int k = g.k();
    Degree base(static_cast<std::size_t>(k), M);
    Degree other = sub(base, n);
    std::vector<Degree> pts;
    std::function<void(Degree&, std::size_t)> rec = [&](Degree& d, std::size_t i) {
        if (i == d.size()) {
            pts.push_back(d);
            return;
        }
        for (std::int64_t t = 0; t <= w; ++t) {
            d[i] = t;
            rec(d, i + 1);
        }
    };
    Degree d(static_cast<std::size_t>(k));
    rec(d, 0);
    for (const auto& a : pts)
        for (const auto& b : pts) {
            if (!leq(a, b)) continue;
            if (kappa(g, x, add(base, a), add(base, b)) != kappa(g, y, add(other, a), add(other, b))) return false;
        }
    return true;
}

}  // namespace oracle
