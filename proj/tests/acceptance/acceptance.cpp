// One line per acceptance criterion; exit status is nonzero if any fails.
#include <array>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <ckgraph/ck.hpp>
#include <ckgraph/classify.hpp>
#include <ckgraph/desourcify.hpp>
#include <ckgraph/families.hpp>
#include <ckgraph/groupoid.hpp>
#include <ckgraph/kclassify.hpp>
#include <ckgraph/kgraph.hpp>
#include <ckgraph/structure.hpp>

#include "kpaths.hpp"
#include "oracles.hpp"

using namespace ckgraph;

namespace {

// collects failed expectations; the first few are reported
struct Tally {
    int checks = 0;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok) failures.push_back(what);
    }
    bool ok() const { return failures.empty(); }
    std::string summary() const {
        std::ostringstream s;
        s << checks << " checks";
        if (!failures.empty()) {
            s << ", " << failures.size() << " failed:";
            for (std::size_t i = 0; i < failures.size() && i < 4; ++i) s << " [" << failures[i] << "]";
        }
        return s.str();
    }
};

ClassificationReport family_report(const std::string& name) {
    return classify_digraph(as_graph(digraph_family(name).graph));
}

void verdicts(Tally& t) {
    auto lpe = classify_digraph(loop_plus_edge());
    t.expect(lpe.at("liminal").is_no(), "loop_plus_edge liminal No");

    auto two = family_report("two_row");
    t.expect(two.at("liminal").is_no(), "two_row liminal No");
    t.expect(two.at("postliminal").is_yes(), "two_row postliminal Yes");

    t.expect(family_report("alternating").at("postliminal").is_no(), "alternating postliminal No");

    auto tt = family_report("thesis:2times");
    t.expect(tt.at("bounded_trace").is_yes(), "2times bounded trace Yes");
    t.expect(tt.at("fell").is_no(), "2times Fell No");

    t.expect(classify_kgraph(omega(2, {3, 2})).at("liminal").is_yes(), "omega(2,(3,2)) liminal Yes");

    auto pr = classify_kgraph(parallel_rows());
    t.expect(pr.at("principal").is_no(), "parallel rows principal No");
    t.expect(pr.at("principal").certificate.value("lag", json()) == json::array({1, -1}),
             "parallel rows lag certificate (1,-1)");

    std::vector<std::pair<std::string, KGraph>> ct = {
        {"omega(2,(inf,2))", omega(2, {kInf, 2})}, {"corner", corner()}, {"robertson", robertson()}};
    for (const auto& [name, g] : ct)
        t.expect(classify_kgraph(g).at("continuous_trace").is_yes(), name + " continuous trace Yes");

    auto r = robertson();
    auto x = parse_kpath(r, "v_0 ; x_1");
    t.expect(boundary_member(r, x).is_yes(), "robertson x in the boundary");
    t.expect(!le_infty_member(r, x), "robertson x not in the le-infty space");
}

void multiplicities(Tally& t) {
    auto check = [&](const std::string& name, std::int64_t lo, std::int64_t hi) {
        auto start = std::chrono::steady_clock::now();
        auto p = multiplicity_profile(sequence_family(name));
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        t.expect(p.lower && *p.lower == Ratio(lo), name + " M_L");
        t.expect(p.upper && *p.upper == Ratio(hi), name + " M_U");
        t.expect(p.certified(), name + " certified");
        t.expect(secs < 10.0, name + " under 10 s");
    };
    check("thesis:2times", 2, 2);
    for (int k = 2; k <= 4; ++k) check("thesis:ktimes:" + std::to_string(k), k, k);
    check("thesis:ml2mu3", 2, 3);
}

void oracle_equivalence(Tally& t) {
    std::mt19937 rng(2024);
    for (int i = 0; i < 500; ++i) {
        auto g = oracle::random_graph(rng, 6, 10);
        auto r = classify_digraph(g);
        t.expect(r.at("liminal").is_yes() == oracle::literal_liminal(g), "liminal graph " + std::to_string(i));
        t.expect(r.at("postliminal").is_yes() == oracle::literal_postliminal(g),
                 "postliminal graph " + std::to_string(i));
    }
}

void shift_laws(Tally& t) {
    std::mt19937 rng(7);
    int triples = 0;
    for (int i = 0; i < 300; ++i) {
        auto g = oracle::random_graph(rng, 3, 6);
        auto x = oracle::random_up_path(g, rng), y = oracle::random_up_path(g, rng),
             z = oracle::random_up_path(g, rng);
        if (!x || !y || !z) continue;
        ++triples;
        t.expect(shift_equivalent(g, *x, *x).contains(0), "reflexive");
        auto xy = shift_equivalent(g, *x, *y), yz = shift_equivalent(g, *y, *z), xz = shift_equivalent(g, *x, *z);
        t.expect(xy.negate() == shift_equivalent(g, *y, *x), "symmetric");
        if (auto n = xy.any())
            if (auto m = yz.any()) t.expect(xz.contains(*n + *m), "transitive");
    }
    t.expect(triples > 100, "enough shift-equivalence triples");
}

void groupoid_axioms(Tally& t) {
    std::mt19937 rng(17);
    std::size_t triples = 0;
    for (int i = 0; i < 40; ++i) {
        auto g = oracle::random_graph(rng, 3, 5);
        auto pool = oracle::enumerate_boundary(g, 2, 2);
        if (pool.size() > 18) pool.resize(18);
        std::vector<GroupoidElement> els;
        for (const auto& x : pool)
            for (const auto& y : pool) {
                auto lags = shift_equivalent(g, x, y);
                for (std::int64_t n = -3; n <= 3; ++n)
                    if (lags.contains(n)) els.push_back(make_element(g, x, n, y));
            }
        for (const auto& a : els) {
            t.expect(inverse(inverse(a)) == a, "G1");
            t.expect(compose(a, inverse(a)) == range_unit(a) && compose(inverse(a), a) == source_unit(a), "G3");
            for (const auto& b : els) {
                if (!composable(a, b)) continue;
                auto ab = compose(a, b);
                t.expect(compose(inverse(a), ab) == b && compose(ab, inverse(b)) == a, "G3 cancellation");
                for (const auto& c : els) {
                    if (!composable(b, c)) continue;
                    t.expect(compose(ab, c) == compose(a, compose(b, c)), "G2");
                    ++triples;
                }
            }
        }
    }
    t.expect(triples > 1000, "enough composable triples");
}

void equivalence_laws(Tally& t) {
    std::mt19937 rng(5);
    for (const auto& g : {omega(2, {3, 2}), robertson(), omega(2, {kInf, 2}), corner()}) {
        auto reps = oracle::random_reps(g, oracle::pool(g, 2), rng, 40, 3);
        for (const auto& a : reps)
            for (const auto& b : reps) {
                VertexRep va{a.x, a.m}, vb{b.x, b.m};
                t.expect(v_equiv(g, va, vb) == oracle::v_oracle(g, va, vb), "vertex relation vs oracle");
                t.expect(v_equiv(g, va, vb) == v_equiv(g, vb, va), "vertex relation symmetric");
                t.expect(p_equiv(g, a, b) == oracle::p_oracle(g, a, b), "morphism relation vs oracle");
                t.expect(p_equiv(g, a, b) == p_equiv(g, b, a), "morphism relation symmetric");
            }
        for (const auto& a : reps) t.expect(p_equiv(g, a, a) && v_equiv(g, {a.x, a.m}, {a.x, a.m}), "reflexive");
        std::uniform_int_distribution<std::size_t> pick(0, reps.size() - 1);
        for (int i = 0; i < 2000; ++i) {
            const auto &a = reps[pick(rng)], &b = reps[pick(rng)], &c = reps[pick(rng)];
            if (p_equiv(g, a, b) && p_equiv(g, b, c)) t.expect(p_equiv(g, a, c), "morphism relation transitive");
            VertexRep va{a.x, a.n}, vb{b.x, b.n}, vc{c.x, c.n};
            if (v_equiv(g, va, vb) && v_equiv(g, vb, vc)) t.expect(v_equiv(g, va, vc), "vertex relation transitive");
        }
    }
}

void composition(Tally& t) {
    std::mt19937 rng(8);
    int swapped = 0, triples = 0;
    for (const auto& g : {omega(2, {3, 2}), robertson()}) {
        auto reps = oracle::random_reps(g, oracle::pool(g, 2), rng, 300, 2);
        std::map<VertexKey, std::vector<MorphismRep>> by_range;
        for (const auto& r : reps) by_range[vertex_key(g, range_rep(r))].push_back(r);
        const std::vector<MorphismRep> none;
        auto partner = [&](const MorphismRep& a) -> const std::vector<MorphismRep>& {
            auto it = by_range.find(vertex_key(g, source_rep(a)));
            return it == by_range.end() ? none : it->second;
        };
        for (const auto& a : reps)
            for (const auto& b : partner(a)) {
                auto ab = compose_tilde(g, a, b);
                for (const auto& a2 : reps) {
                    if (&a2 == &a || !p_equiv(g, a, a2)) continue;
                    for (const auto& b2 : partner(a2)) {
                        if (!p_equiv(g, b, b2)) continue;
                        t.expect(p_equiv(g, compose_tilde(g, a2, b2), ab), "representative independence");
                        ++swapped;
                    }
                }
                for (const auto& c : partner(b)) {
                    if (triples > 3000) break;
                    ++triples;
                    t.expect(morphism_key(g, compose_tilde(g, ab, c)) ==
                                 morphism_key(g, compose_tilde(g, a, compose_tilde(g, b, c))),
                             "associativity");
                }
            }
    }
    t.expect(swapped > 20 && triples > 100, "enough composable classes");
}

void kappa_laws(Tally& t) {
    int upk = 0;
    for (const auto& g : {robertson(), omega(2, {kInf, 2}), parallel_rows(), omega(2, {3, 2})}) {
        auto xs = oracle::window_pool(g, 3, 1);
        for (const auto& x : xs)
            for (const auto& y : xs) {
                upk += !x.is_finite() && !y.is_finite();
                for (std::int64_t p = -2; p <= 2; ++p)
                    for (std::int64_t q = -2; q <= 2; ++q) {
                        Degree n{p, q};
                        t.expect(shift_equivalent(g, x, y, n) == oracle::kappa_lagged(g, x, y, n, 12, 2),
                                 "kappa preserves and reflects shift equivalence");
                    }
            }
    }
    t.expect(upk >= 200, "at least 200 pairs of infinite paths");

    for (const auto& g : {robertson(), omega(2, {3, 2}), omega(2, {kInf, 2}), parallel_rows()})
        for (const auto& x : oracle::pool(g, 1)) {
            Degree hi = meet(degree(g, x), Degree(static_cast<std::size_t>(g.k()), 2));
            for (std::int64_t i = 0; i <= hi[0]; ++i)
                for (std::int64_t j = 0; j <= hi[1]; ++j) {
                    Degree n{i, j};
                    KPath sx = shift(g, x, n);
                    for (const auto& a : std::vector<Degree>{{0, 0}, {1, 0}, {0, 2}, {2, 1}})
                        for (const auto& b : std::vector<Degree>{{0, 0}, {1, 1}, {3, 0}, {0, 3}}) {
                            Degree ab = add(a, b);
                            t.expect(kappa(g, sx, a, ab) == kappa(g, x, add(n, a), add(n, ab)),
                                     "kappa commutes with the shift");
                        }
                }
        }
}

void implication_chain(Tally& t) {
    std::mt19937 rng(31);
    for (int i = 0; i < 300; ++i) {
        auto g = oracle::random_graph(rng, 6, 10);
        t.expect(implications_respected(classify_digraph(g)), "random digraph " + std::to_string(i));
    }
    for (auto name : digraph_family_names()) {
        if (name == "ktimes:<k>") name = "ktimes:3";
        t.expect(implications_respected(family_report(name)), name);
    }
    for (const auto& g : {omega(2, {3, 2}), omega(2, {kInf, 2}), corner(), robertson(), parallel_rows()})
        t.expect(implications_respected(classify_kgraph(g)), "k-graph family");
}

void property_suites(Tally& t) {
    shift_laws(t);
    groupoid_axioms(t);
    equivalence_laws(t);
    composition(t);
    kappa_laws(t);
    implication_chain(t);
}

void factorization_and_ck(Tally& t) {
    for (const auto& m : std::vector<Degree>{{1}, {3}, {1, 1}, {2, 0}, {3, 2}, {2, 2}, {1, 1, 1}, {2, 1, 1}, {1, 2, 2}})
        t.expect(validate_kgraph(omega(static_cast<int>(m.size()), m).to_document()).valid, "omega builder");
    for (const auto& m : std::vector<Degree>{{kInf, 2}, {1, kInf}, {kInf, 1, 1}})
        t.expect(validate_kgraph(omega(static_cast<int>(m.size()), m).window_document(6)).valid,
                 "infinite omega builder");

    std::mt19937 rng(11);
    std::vector<KGraphDocument> bases = {omega(2, {2, 2}).to_document(), omega(3, {1, 1, 1}).to_document(),
                                         omega(2, {3, 1}).to_document()};
    for (int trial = 0; trial < 50; ++trial) {
        auto d = bases[static_cast<std::size_t>(trial) % bases.size()];
        std::size_t i = std::uniform_int_distribution<std::size_t>(0, d.squares.size() - 1)(rng);
        switch (trial % 3) {
            case 0: d.squares.erase(d.squares.begin() + static_cast<std::ptrdiff_t>(i)); break;
            case 1: d.squares.push_back(d.squares[i]); break;
            default: {
                std::array<std::string*, 4> slot = {&d.squares[i].f, &d.squares[i].g, &d.squares[i].g2,
                                                    &d.squares[i].f2};
                std::string* s = slot[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 3)(rng))];
                std::string old = *s;
                while (*s == old)
                    *s = d.edges[std::uniform_int_distribution<std::size_t>(0, d.edges.size() - 1)(rng)].id;
            }
        }
        t.expect(!validate_kgraph(d).valid, "perturbation " + std::to_string(trial) + " rejected");
    }

    struct Case {
        std::string name;
        KGraph graph;
        CKFamily family;
    };
    std::vector<Case> cases = {
        {"loop", KGraph::from_digraph(single_loop_graph()), single_loop_family()},
        {"parallel", KGraph::from_digraph(parallel_edges_graph()), parallel_edges_family()},
        {"omega_2_11", omega(2, {1, 1}), ck_boundary_family(omega(2, {1, 1}))},
        {"omega_2_21", omega(2, {2, 1}), ck_boundary_family(omega(2, {2, 1}))},
        {"omega_3_111", omega(3, {1, 1, 1}), ck_boundary_family(omega(3, {1, 1, 1}))},
        {"corner", corner(), ck_boundary_family(corner())}};
    int mutations = 0;
    for (const auto& c : cases) {
        t.expect(ck_verify(c.graph, c.family).ok(), c.name + " passes");
        std::vector<std::string> gens;
        for (const auto& [n, m] : c.family.vertex) gens.push_back(n);
        for (const auto& [n, m] : c.family.edge) gens.push_back(n);
        for (const auto& gen : gens)
            for (auto mut : {Mutation::scale, Mutation::zero, Mutation::transpose, Mutation::bump}) {
                auto m = mutate(c.family, gen, mut);
                if (m.vertex == c.family.vertex && m.edge == c.family.edge) continue;
                ++mutations;
                t.expect(!ck_verify(c.graph, m).ok(), c.name + " mutation of " + gen + " flagged");
            }
    }
    t.expect(mutations > 50, "enough mutations");
}

void truncation_figure(Tally& t) {
    auto g = robertson();
    auto fr = materialize_truncation(g, {3, 3}, 3);
    t.expect(validate_kgraph(fr.doc).valid, "truncation is a 2-graph");
    t.expect(fr.interior_sources.empty(), "interior vertices are sourceless");
    t.expect(!fr.interior.empty(), "interior is nonempty");

    const auto* sg = g.staged();
    auto track = [&](const VertexKey& k) { return sg->spec().tracks[static_cast<std::size_t>(k.base.idx)]; };
    auto visible = [&](const VertexKey& k) {
        std::int64_t y = track(k) == "w" ? 1 + k.excess[1] : -k.excess[1];
        return y >= -2 && y <= 1 && k.excess[0] <= 1;
    };
    std::map<std::int64_t, int> verts, inner, across;
    for (const auto& [name, k] : fr.vertices)
        if (visible(k)) ++verts[StagedGraph::column(k.base)];
    for (const auto& e : fr.doc.edges) {
        const auto &r = fr.vertices.at(e.r), &s = fr.vertices.at(e.s);
        if (!visible(r) || !visible(s)) continue;
        auto cr = StagedGraph::column(r.base), cs = StagedGraph::column(s.base);
        ++(cr == cs ? inner : across)[cr];
    }
    for (std::int64_t c = 0; c <= 3; ++c) {
        t.expect(verts[c] == 10, "10 vertices in column " + std::to_string(c));
        t.expect(inner[c] == 13, "13 edges in column " + std::to_string(c));
    }
    for (std::int64_t c = 0; c < 3; ++c) t.expect(across[c] == 4, "4 edges leaving column " + std::to_string(c));
    t.expect(fr.doc.vertices.size() == 96 && fr.doc.edges.size() == 164 && fr.doc.squares.size() == 69,
             "96 vertices, 164 edges, 69 squares");
}

void witnesses(Tally& t) {
    auto f = sequence_family("thesis:2times");
    const auto& lim = f.limits.at(0);
    auto rep = k_times_witness_check(f, lim, lim.witnesses);
    t.expect(rep.passed() && rep.certified(), "2times witnesses certified");

    auto nh = sequence_family("thesis:nonhausdorff");
    for (const auto& l : nh.limits) {
        auto r = k_times_witness_check(nh, l, l.witnesses);
        t.expect(r.passed() && r.certified(), "nonhausdorff " + l.name + " witnesses certified");
    }

    auto dup = lim.witnesses;
    dup[1] = dup[0];
    auto bad = k_times_witness_check(f, lim, dup);
    t.expect(bad.conditions.size() == 3, "three conditions reported");
    if (bad.conditions.size() == 3) {
        t.expect(bad.conditions[0].passed && bad.conditions[1].passed, "duplicate passes (i) and (ii)");
        t.expect(!bad.conditions[2].passed, "duplicate fails (iii)");
    }
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Tally&)>>> criteria = {
        {"classification verdicts on the named examples", verdicts},
        {"multiplicity numbers", multiplicities},
        {"derived verdicts agree with the path-space oracle on 500 graphs", oracle_equivalence},
        {"algebraic property suites", property_suites},
        {"factorization and Cuntz-Krieger checks", factorization_and_ck},
        {"Robertson truncation structure", truncation_figure},
        {"k-times witness verification", witnesses},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Tally t;
        auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(t);
        } catch (const std::exception& e) {
            t.failures.push_back(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !t.ok();
        std::printf("criterion %zu %s: %s (%s, %.1f s)\n", i + 1, t.ok() ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    t.summary().c_str(), secs);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
