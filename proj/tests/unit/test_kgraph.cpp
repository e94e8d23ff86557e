#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <ckgraph/kgraph.hpp>

using namespace ckgraph;

namespace {

// one vertex, n_c loops of each color c, squares given by permutations:
// a_i b_j = b_j a_{twist[(c1,c2)][j][i]} for colors c1 < c2
KGraphDocument loop_cube(const std::vector<int>& loops,
                         const std::map<std::pair<int, int>, std::map<int, std::vector<int>>>& twist = {}) {
    KGraphDocument doc;
    doc.k = static_cast<int>(loops.size());
    doc.vertices = {"v"};
    auto name = [](int c, int i) { return std::string(1, static_cast<char>('a' + c)) + std::to_string(i); };
    for (int c = 0; c < doc.k; ++c)
        for (int i = 0; i < loops[c]; ++i) doc.edges.push_back({name(c, i), "v", "v", c + 1});
    for (int c1 = 0; c1 < doc.k; ++c1)
        for (int c2 = c1 + 1; c2 < doc.k; ++c2)
            for (int i = 0; i < loops[c1]; ++i)
                for (int j = 0; j < loops[c2]; ++j) {
                    int i2 = i;
                    auto t = twist.find({c1, c2});
                    if (t != twist.end() && t->second.count(j)) i2 = t->second.at(j)[i];
                    doc.squares.push_back({name(c1, i), name(c2, j), name(c2, j), name(c1, i2)});
                }
    return doc;
}

// Paths with a given color word, quotiented by single square moves read
// straight off the document.
std::size_t interleaving_classes(const KGraphDocument& doc, const std::string& v, const Degree& m,
                                 std::map<std::vector<std::string>, int>* class_of = nullptr) {
    std::map<std::string, const KEdgeDecl*> edge;
    for (const auto& e : doc.edges) edge[e.id] = &e;
    std::map<std::pair<std::string, std::string>, std::pair<std::string, std::string>> move;
    for (const auto& s : doc.squares) {
        move[{s.f, s.g}] = {s.g2, s.f2};
        move[{s.g2, s.f2}] = {s.f, s.g};
    }
    std::vector<int> word;
    for (std::size_t c = 0; c < m.size(); ++c)
        for (std::int64_t n = 0; n < m[c]; ++n) word.push_back(static_cast<int>(c) + 1);
    std::vector<std::vector<std::string>> all;
    std::sort(word.begin(), word.end());
    do {
        std::vector<std::string> p;
        std::function<void(const std::string&)> go = [&](const std::string& at) {
            if (p.size() == word.size()) {
                all.push_back(p);
                return;
            }
            for (const auto& e : doc.edges)
                if (e.r == at && e.color == word[p.size()]) {
                    p.push_back(e.id);
                    go(e.s);
                    p.pop_back();
                }
        };
        go(v);
    } while (std::next_permutation(word.begin(), word.end()));

    std::map<std::vector<std::string>, int> idx;
    for (std::size_t i = 0; i < all.size(); ++i) idx[all[i]] = static_cast<int>(i);
    std::vector<int> parent(all.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t t = 0; t + 1 < all[i].size(); ++t) {
            auto it = move.find({all[i][t], all[i][t + 1]});
            if (it == move.end()) continue;
            auto q = all[i];
            q[t] = it->second.first;
            q[t + 1] = it->second.second;
            parent[find(static_cast<int>(i))] = find(idx.at(q));
        }
    std::set<int> roots;
    for (std::size_t i = 0; i < all.size(); ++i) roots.insert(find(static_cast<int>(i)));
    if (class_of)
        for (std::size_t i = 0; i < all.size(); ++i) (*class_of)[all[i]] = find(static_cast<int>(i));
    return roots.size();
}

Morphism morphism_of(const KGraph& g, const std::vector<std::string>& names) {
    std::vector<ERef> es;
    for (const auto& n : names) es.push_back(*g.skeleton().parse_edge(n));
    return normal_form(g, g.skeleton().range(es.front()), es);
}

void check_interleavings(const KGraph& g, const KGraphDocument& doc, const Degree& box) {
    for (const auto& v : doc.vertices) {
        VRef vr = *g.skeleton().parse_vertex(v);
        Degree m = zero_degree(doc.k);
        std::function<void(std::size_t)> each = [&](std::size_t i) {
            if (i == m.size()) {
                if (total(m) == 0 || total(m) > 3) return;
                std::map<std::vector<std::string>, int> cls;
                auto n = interleaving_classes(doc, v, m, &cls);
                auto ms = enumerate_morphisms(g, vr, m);
                CHECK(ms.size() == n);
                // every ordering converges to one normal form per class
                std::map<int, Morphism> seen;
                std::set<Morphism> forms;
                for (const auto& [p, c] : cls) {
                    auto nf = morphism_of(g, p);
                    forms.insert(nf);
                    auto it = seen.find(c);
                    if (it == seen.end())
                        seen.emplace(c, nf);
                    else
                        CHECK(it->second == nf);
                }
                CHECK(forms.size() == n);
                return;
            }
            for (m[i] = 0; m[i] <= box[i]; ++m[i]) each(i + 1);
            m[i] = 0;
        };
        each(0);
    }
}

std::string pt(const Degree& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + ")";
}

// x ~_n y checked on windows far along both paths, without the tail algebra
bool window_equivalent(const KGraph& g, const KPath& x, const KPath& y, const Degree& n, std::int64_t far) {
    Degree dx = degree(g, x), dy = degree(g, y);
    Degree m(dx.size()), w(dx.size());
    for (std::size_t i = 0; i < dx.size(); ++i) {
        if ((dx[i] == kInf) != (dy[i] == kInf)) return false;
        if (dx[i] != kInf) {
            if (dx[i] - dy[i] != n[i]) return false;
            m[i] = dx[i];
            w[i] = 0;
        } else {
            m[i] = far + std::max<std::int64_t>(n[i], 0);
            w[i] = far;
        }
    }
    return segment(g, x, m, add(m, w)) == segment(g, y, sub(m, n), add(sub(m, n), w));
}

std::vector<KPath> sample_upk(const KGraph& g, std::mt19937& rng, int count) {
    std::vector<KPath> out;
    auto vs = g.fundamental_vertices();
    std::uniform_int_distribution<int> pick(0, static_cast<int>(vs.size()) - 1), small(0, 2);
    for (int attempt = 0; attempt < 4000 && static_cast<int>(out.size()) < count; ++attempt) {
        VRef v = vs[pick(rng)];
        Degree pd(static_cast<std::size_t>(g.k())), td(static_cast<std::size_t>(g.k()));
        for (auto& d : pd) d = small(rng);
        for (auto& d : td) d = small(rng);
        auto pres = enumerate_morphisms(g, v, pd);
        if (pres.empty()) continue;
        auto pre = pres[std::uniform_int_distribution<std::size_t>(0, pres.size() - 1)(rng)];
        auto tails = enumerate_morphisms(g, source(g, pre), td);
        if (tails.empty()) continue;
        auto tail = tails[std::uniform_int_distribution<std::size_t>(0, tails.size() - 1)(rng)];
        try {
            out.push_back(upk_path(g, pre, tail));
        } catch (const input_error&) {
        }
    }
    return out;
}

}  // namespace

TEST_CASE("omega builders are valid k-graphs") {
    for (const auto& m : std::vector<Degree>{{3}, {3, 2}, {1, 1}, {2, 0}, {1, 1, 1}, {2, 1, 1}, {1, 2, 2}}) {
        auto g = omega(static_cast<int>(m.size()), m);
        auto rep = validate_kgraph(g.to_document());
        CHECK_MESSAGE(rep.valid, pt(m));
    }
    auto g = omega(2, {3, 2});
    auto v = *g.skeleton().parse_vertex("(0,0)");
    CHECK(enumerate_morphisms(g, v, {1, 1}).size() == 1);
    CHECK(locally_convex(g));
    // unique morphism (p, q) for every p <= q with r = p and s = q
    auto verts = g.fundamental_vertices();
    for (const auto& p : verts) {
        auto all = enumerate_up_to(g, p, {3, 2});
        std::set<std::string> targets;
        for (const auto& mu : all) {
            auto s = g.skeleton().vertex_name(source(g, mu));
            CHECK(targets.insert(s).second);
        }
        std::string pn = g.skeleton().vertex_name(p);
        int a = pn[1] - '0', b = pn[3] - '0';
        CHECK(targets.size() == static_cast<std::size_t>((3 - a + 1) * (2 - b + 1)));
        for (const auto& mu : all) {
            auto s = g.skeleton().vertex_name(source(g, mu));
            Degree d = degree(g, mu);
            CHECK(s == pt({a + d[0], b + d[1]}));
        }
    }
    for (const auto& m : std::vector<Degree>{{kInf, 2}, {1, kInf}, {kInf, 1, 1}}) {
        auto h = omega(static_cast<int>(m.size()), m);
        CHECK(!h.is_finite());
        CHECK(validate_kgraph(h.window_document(6)).valid);
    }
    CHECK_THROWS_AS(omega(2, {kInf, kInf}), input_error);
}

TEST_CASE("missing or perturbed squares are rejected") {
    auto doc = omega(2, {1, 1}).to_document();
    REQUIRE(doc.squares.size() == 1);
    auto broken = doc;
    broken.squares.clear();
    auto rep = validate_kgraph(broken);
    CHECK(!rep.valid);
    CHECK(rep.details[0].contains("path"));

    std::mt19937 rng(11);
    int rejected = 0;
    std::vector<KGraphDocument> bases = {omega(2, {2, 2}).to_document(), omega(3, {1, 1, 1}).to_document(),
                                         omega(2, {3, 1}).to_document()};
    for (int trial = 0; trial < 50; ++trial) {
        auto d = bases[trial % bases.size()];
        REQUIRE(validate_kgraph(d).valid);
        std::uniform_int_distribution<std::size_t> sq(0, d.squares.size() - 1);
        std::size_t i = sq(rng);
        switch (trial % 3) {
            case 0: d.squares.erase(d.squares.begin() + static_cast<std::ptrdiff_t>(i)); break;
            case 1: d.squares.push_back(d.squares[i]); break;
            default: {
                // replace one edge by a different edge
                std::array<std::string*, 4> slot = {&d.squares[i].f, &d.squares[i].g, &d.squares[i].g2,
                                                    &d.squares[i].f2};
                std::string* s = slot[std::uniform_int_distribution<int>(0, 3)(rng)];
                std::string old = *s;
                while (*s == old) *s = d.edges[std::uniform_int_distribution<std::size_t>(0, d.edges.size() - 1)(rng)].id;
            }
        }
        if (!validate_kgraph(d).valid) ++rejected;
    }
    CHECK(rejected == 50);
}

TEST_CASE("cube condition") {
    auto plain = loop_cube({3, 1, 1});
    CHECK(validate_kgraph(plain).valid);
    // twists by b0 and c0 that commute keep associativity
    auto commuting = loop_cube({3, 1, 1}, {{{0, 1}, {{0, {1, 0, 2}}}}, {{0, 2}, {{0, {1, 0, 2}}}}});
    CHECK(validate_kgraph(commuting).valid);
    auto twisted = loop_cube({3, 1, 1}, {{{0, 1}, {{0, {1, 0, 2}}}}, {{0, 2}, {{0, {0, 2, 1}}}}});
    auto rep = validate_kgraph(twisted);
    REQUIRE(!rep.valid);
    CHECK(rep.problems[0].find("cube") != std::string::npos);
}

TEST_CASE("normal forms against the interleaving oracle") {
    for (const auto& m : std::vector<Degree>{{2, 2}, {1, 1, 1}, {3, 1}}) {
        auto g = omega(static_cast<int>(m.size()), m);
        check_interleavings(g, g.to_document(), {3, 3, 3});
    }
    auto twisted = loop_cube({2, 2}, {{{0, 1}, {{0, {1, 0}}}}});
    check_interleavings(KGraph::from_document(twisted), twisted, {2, 2});
    auto three = loop_cube({2, 1, 2}, {{{0, 2}, {{1, {1, 0}}}}});
    check_interleavings(KGraph::from_document(three), three, {2, 1, 2});
    auto rob = robertson();
    auto win = rob.window_document(3);
    check_interleavings(KGraph::from_document(win), win, {3, 1});
}

TEST_CASE("degree is additive and segments factor") {
    auto g = KGraph::from_document(loop_cube({2, 2, 1}, {{{0, 1}, {{1, {1, 0}}}}}));
    auto v = *g.skeleton().parse_vertex("v");
    auto left = enumerate_up_to(g, v, {1, 1, 1});
    for (const auto& a : left)
        for (const auto& b : left) {
            auto ab = compose(g, a, b);
            CHECK(degree(g, ab) == add(degree(g, a), degree(g, b)));
            CHECK(segment(g, ab, zero_degree(3), degree(g, a)) == a);
            CHECK(segment(g, ab, degree(g, a), degree(g, ab)) == b);
        }
}

TEST_CASE("minimal common extensions") {
    auto g = omega(2, {3, 2});
    auto v = *g.skeleton().parse_vertex("(0,0)");
    auto all = enumerate_up_to(g, v, {3, 2});
    for (const auto& mu : all) {
        auto self = lambda_min(g, mu, mu);
        REQUIRE(self.size() == 1);
        CHECK(self[0].first == vertex_morphism(source(g, mu)));
        CHECK(self[0].second == vertex_morphism(source(g, mu)));
        for (const auto& nu : all) CHECK(lambda_min(g, mu, nu).size() == 1);
    }

    auto c = corner();
    auto alpha = parse_kpath(c, "alpha").prefix, beta = parse_kpath(c, "beta").prefix;
    CHECK(lambda_min(c, alpha, beta).empty());

    auto h = KGraph::from_document(loop_cube({2, 2}, {{{0, 1}, {{0, {1, 0}}}}}));
    auto hv = *h.skeleton().parse_vertex("v");
    auto ms = enumerate_up_to(h, hv, {2, 1});
    for (const auto& mu : ms)
        for (const auto& nu : ms) {
            auto a = lambda_min(h, mu, nu), b = lambda_min(h, nu, mu);
            std::set<std::pair<Morphism, Morphism>> sa(a.begin(), a.end()), sb;
            for (const auto& [x, y] : b) sb.insert({y, x});
            CHECK(sa == sb);
            for (const auto& [x, y] : a) CHECK(compose(h, mu, x) == compose(h, nu, y));
        }
}

TEST_CASE("exhaustive sets") {
    auto g = omega(2, {3, 2});
    auto v = *g.skeleton().parse_vertex("(0,0)");
    CHECK(is_exhaustive(g, v, {vertex_morphism(v)}).is_yes());
    auto full = enumerate_morphisms(g, v, {3, 2});
    REQUIRE(full.size() == 1);
    CHECK(is_exhaustive(g, v, full).is_yes());

    auto c = corner();
    auto cv = *c.skeleton().parse_vertex("v");
    auto alpha = parse_kpath(c, "alpha").prefix;
    auto d = is_exhaustive(c, cv, {alpha});
    REQUIRE(d.is_no());
    CHECK(d.certificate["path"] == "beta");
    auto beta = parse_kpath(c, "beta").prefix;
    CHECK(is_exhaustive(c, cv, {alpha, beta}).is_yes());

    // agreement with enumeration to a larger bound on random subsets
    std::mt19937 rng(5);
    auto h = omega(2, {2, 2});
    for (int t = 0; t < 30; ++t) {
        auto hv = *h.skeleton().parse_vertex("(0,0)");
        auto cand = enumerate_up_to(h, hv, {2, 2});
        std::vector<Morphism> D;
        for (const auto& mu : cand)
            if (!mu.edges.empty() && std::uniform_int_distribution<int>(0, 3)(rng) == 0) D.push_back(mu);
        bool brute = true;
        for (const auto& mu : enumerate_up_to(h, hv, {4, 4})) {
            bool met = false;
            for (const auto& nu : D) met = met || !lambda_min(h, mu, nu).empty();
            brute = brute && met;
        }
        auto got = is_exhaustive(h, hv, D);
        CHECK(!got.is_unknown());
        CHECK(got.is_yes() == brute);
    }
}

TEST_CASE("local convexity") {
    CHECK(locally_convex(omega(2, {3, 2})));
    CHECK(locally_convex(omega(2, {kInf, 2})));
    CHECK(!locally_convex(corner()));
    CHECK(!locally_convex(robertson()));
    DirectedGraph one;
    int a = one.add_vertex("a"), b = one.add_vertex("b");
    one.add_edge("e", a, b);
    one.add_edge("f", a, a);
    CHECK(locally_convex(KGraph::from_digraph(one)));
}

TEST_CASE("le infty membership") {
    auto g = omega(2, {3, 2});
    auto to_top = initial_segment(g, finite_kpath(enumerate_morphisms(g, *g.skeleton().parse_vertex("(0,0)"), {3, 2})[0]),
                                  {3, 2});
    CHECK(le_infty_member(g, finite_kpath(to_top)));
    auto inner = enumerate_morphisms(g, *g.skeleton().parse_vertex("(0,0)"), {2, 2})[0];
    CHECK(!le_infty_member(g, finite_kpath(inner)));

    auto r = robertson();
    auto x = parse_kpath(r, "v_0 ; x_1");
    CHECK(degree(r, x) == Degree{kInf, 0});
    CHECK(!le_infty_member(r, x));

    auto h = KGraph::from_document(loop_cube({2, 2}));
    auto full = parse_kpath(h, "v ; a0 b1");
    CHECK(degree(h, full) == Degree{kInf, kInf});
    CHECK(le_infty_member(h, full));
}

TEST_CASE("boundary membership") {
    auto r = robertson();
    auto x = parse_kpath(r, "v_0 ; x_1");
    auto bx = boundary_member(r, x);
    CHECK(bx.is_yes());
    CHECK(bx.certificate["kind"] == "dead_end_escape");
    auto y = parse_kpath(r, "d_0 ; t_1");
    CHECK(boundary_member(r, y).is_yes());

    auto w = omega(2, {kInf, 2});
    for (int p1 = 0; p1 < 3; ++p1)
        for (int p2 = 0; p2 <= 2; ++p2) {
            std::string lit;
            for (int b = p2; b < 2; ++b) lit += "e2p" + std::to_string(b) + "_" + std::to_string(p1) + " ";
            if (lit.empty()) lit = "p2_" + std::to_string(p1) + " ";
            lit += "; e1p2_" + std::to_string(p1);
            auto xp = parse_kpath(w, lit);
            CHECK(degree(w, xp) == Degree{kInf, 2 - p2});
            CHECK(boundary_member(w, xp).is_yes());
        }

    auto g = omega(2, {3, 2});
    auto inner = enumerate_morphisms(g, *g.skeleton().parse_vertex("(0,0)"), {3, 1})[0];
    CHECK(boundary_member(g, finite_kpath(inner)).is_no());

    // corner: the boundary paths are the two edges
    auto c = corner();
    CHECK(boundary_member(c, parse_kpath(c, "alpha")).is_yes());
    CHECK(boundary_member(c, parse_kpath(c, "beta")).is_yes());
    auto cv = boundary_member(c, parse_kpath(c, "v"));
    CHECK(cv.is_no());
    CHECK(!le_infty_member(c, parse_kpath(c, "v")));
}

TEST_CASE("boundary agrees with le infty on locally convex graphs") {
    std::vector<KGraph> gs = {omega(2, {3, 2}), omega(3, {1, 1, 1}), omega(2, {kInf, 2}),
                              KGraph::from_document(loop_cube({2, 1}))};
    std::mt19937 rng(3);
    for (const auto& g : gs) {
        REQUIRE(locally_convex(g));
        for (const auto& v : g.fundamental_vertices()) {
            for (const auto& mu : enumerate_up_to(g, v, Degree(static_cast<std::size_t>(g.k()), 2))) {
                auto p = finite_kpath(mu);
                CHECK(boundary_member(g, p).is_yes() == le_infty_member(g, p));
            }
        }
        if (!g.is_finite() || g.k() == 2)
            for (const auto& p : sample_upk(g, rng, 20)) CHECK(boundary_member(g, p).is_yes() == le_infty_member(g, p));
    }
}

TEST_CASE("self lag in the parallel rows graph") {
    auto g = parallel_rows();
    auto x = parse_kpath(g, "v_0 ; s_0 d_1");
    CHECK(degree(g, x) == Degree{kInf, kInf});
    CHECK(shift_equivalent(g, x, x, {1, -1}));
    CHECK(!shift_equivalent(g, x, x, {1, 0}));
    CHECK(equal(g, shift(g, x, {1, 0}), shift(g, x, {0, 1})));
    auto lags = lags_in_box(g, x, x, 2);
    CHECK(std::find(lags.begin(), lags.end(), Degree{1, -1}) != lags.end());
    CHECK(std::find(lags.begin(), lags.end(), Degree{0, 0}) != lags.end());
}

TEST_CASE("shift equivalence on k-graph paths") {
    std::mt19937 rng(17);
    std::vector<KGraph> gs = {parallel_rows(), robertson(), omega(2, {kInf, 2}),
                              KGraph::from_document(loop_cube({2, 2}, {{{0, 1}, {{0, {1, 0}}}}}))};
    for (const auto& g : gs) {
        auto xs = sample_upk(g, rng, 12);
        REQUIRE(!xs.empty());
        for (const auto& x : xs) {
            CHECK(shift_equivalent(g, x, x, zero_degree(g.k())));
            // equal paths: unrolled and rotated representatives
            Degree d = degree(g, x), one = zero_degree(g.k());
            for (std::size_t i = 0; i < d.size(); ++i)
                if (d[i] == kInf) one[i] = 1;
            auto sx = shift(g, x, one);
            CHECK(equal(g, concat(g, initial_segment(g, x, one), sx), x));
        }
        for (const auto& x : xs)
            for (const auto& y : xs) {
                auto lags = lags_in_box(g, x, y, 3);
                for (const auto& n : lags) {
                    CHECK(window_equivalent(g, x, y, n, 12));
                    Degree neg(n.size());
                    for (std::size_t i = 0; i < n.size(); ++i) neg[i] = -n[i];
                    CHECK(shift_equivalent(g, y, x, neg));
                    for (const auto& z : xs)
                        for (const auto& m : lags_in_box(g, y, z, 3))
                            CHECK(shift_equivalent(g, x, z, add(n, m)));
                }
                if (lags.empty() && degree(g, x).size() == degree(g, y).size()) {
                    Degree n = zero_degree(g.k());
                    Degree dx = degree(g, x), dy = degree(g, y);
                    bool same_inf = true;
                    for (std::size_t i = 0; i < n.size(); ++i) {
                        if ((dx[i] == kInf) != (dy[i] == kInf)) same_inf = false;
                        else if (dx[i] != kInf) n[i] = dx[i] - dy[i];
                    }
                    if (same_inf) CHECK(!window_equivalent(g, x, y, n, 12));
                }
            }
    }
}

TEST_CASE("path literals round trip") {
    auto r = robertson();
    for (const auto& lit : {"v_0 ; x_1", "d_0 ; t_1", "x_1 f_2", "v_2", "d_0 t_1 ; t_2"}) {
        auto x = parse_kpath(r, lit);
        auto back = parse_kpath(r, to_literal(r, x));
        CHECK(equal(r, x, back));
    }
    CHECK_THROWS_AS(parse_kpath(r, "x_1 ; t_2"), input_error);
    CHECK_THROWS_AS(parse_kpath(r, "nope"), input_error);
}

TEST_CASE("boundary candidates on finite graphs") {
    auto c = corner();
    auto b = boundary_candidates(c, *c.skeleton().parse_vertex("v"), 2);
    CHECK(b.size() == 2);
    auto g = omega(2, {3, 2});
    auto all = boundary_candidates(g, *g.skeleton().parse_vertex("(1,0)"), 3);
    REQUIRE(all.size() == 1);
    CHECK(g.skeleton().vertex_name(source(g, all[0].prefix)) == "(3,2)");
}
