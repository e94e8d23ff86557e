#include <doctest.h>

#include <chrono>

#include <ckgraph/classify.hpp>
#include <ckgraph/families.hpp>
#include <ckgraph/structure.hpp>

#include "oracles.hpp"

using namespace ckgraph;

namespace {

ClassificationReport family_report(const std::string& name) {
    auto fam = digraph_family(name);
    return classify_digraph(as_graph(fam.graph));
}

std::vector<int> edge_indices(const DirectedGraph& g, const json& names) {
    std::vector<int> out;
    for (const auto& n : names) out.push_back(*g.find_edge(n.get<std::string>()));
    return out;
}

bool closed_walk(const DirectedGraph& g, const std::vector<int>& es) {
    if (es.empty()) return false;
    for (std::size_t i = 0; i + 1 < es.size(); ++i)
        if (g.edge_source(es[i]) != g.edge_range(es[i + 1])) return false;
    return g.edge_source(es.back()) == g.edge_range(es.front());
}

}  // namespace

TEST_CASE("loop plus edge") {
    auto r = classify_digraph(loop_plus_edge());
    REQUIRE(r.at("liminal").is_no());
    CHECK(r.at("liminal").certificate["kind"] == "cycle_entry");
    CHECK(r.at("liminal").certificate["cycle"] == json::array({"g"}));
    CHECK(r.at("liminal").certificate["entry"] == "f");
    CHECK(r.at("postliminal").is_yes());
    CHECK(r.at("principal").is_no());
    CHECK(r.at("simple").is_no());
}

TEST_CASE("two-row and alternating graphs") {
    auto two = family_report("two_row");
    CHECK(two.at("liminal").is_no());
    CHECK(two.at("postliminal").is_yes());
    CHECK(two.at("principal").is_yes());
    CHECK(two.at("simple").is_no());

    auto alt = family_report("alternating");
    CHECK(alt.at("postliminal").is_no());
    CHECK(alt.at("liminal").is_no());
    CHECK(alt.at("simple").is_yes());
}

TEST_CASE("k-times families") {
    auto two = family_report("thesis:2times");
    REQUIRE(two.at("bounded_trace").is_yes());
    CHECK(two.at("bounded_trace").certificate["M"]["v_1"] == 2);
    CHECK(two.at("bounded_trace").certificate["M"]["w_1"] == 1);
    REQUIRE(two.at("fell").is_no());
    CHECK(two.at("continuous_trace").is_no());
    CHECK(two.at("liminal").is_yes());
    CHECK(two.at("postliminal").is_yes());

    for (int k : {1, 3, 4}) {
        auto r = family_report("ktimes:" + std::to_string(k));
        REQUIRE(r.at("bounded_trace").is_yes());
        CHECK(r.at("bounded_trace").certificate["M"]["v_1"] == k);
        CHECK(r.at("fell").is_yes() == (k == 1));
    }
    auto ml = family_report("ml2mu3");
    REQUIRE(ml.at("bounded_trace").is_yes());
    CHECK(ml.at("bounded_trace").certificate["M"]["v_1"] == 3);

    auto nh = family_report("nonhausdorff");
    CHECK(nh.at("bounded_trace").is_yes());
    CHECK(nh.at("fell").is_no());
    CHECK(family_report("lag").at("continuous_trace").is_yes());
}

TEST_CASE("empty graph") {
    auto r = classify_digraph(DirectedGraph{});
    for (const char* p : kProperties) CHECK_MESSAGE(r.at(p).is_yes(), p);
}

TEST_CASE("implication propagation") {
    ClassificationReport r;
    r.properties["continuous_trace"] = Decision::yes();
    r.properties["postliminal"] = Decision::unknown("x");
    CHECK(propagate_implications(r));
    CHECK(r.at("postliminal").is_yes());
    CHECK(r.at("fell").is_yes());

    ClassificationReport bad;
    bad.properties["fell"] = Decision::yes();
    bad.properties["liminal"] = Decision::no({{"kind", "x"}});
    CHECK_FALSE(implications_respected(bad));
    CHECK_FALSE(propagate_implications(bad));
}

TEST_CASE("derived verdicts agree with the literal path-space oracle") {
    std::mt19937 rng(2024);
    int graphs = 0, lim_no = 0, post_no = 0;
    for (; graphs < 500; ++graphs) {
        auto g = oracle::random_graph(rng, 6, 10);
        auto r = classify_digraph(g);
        bool lim = oracle::literal_liminal(g), post = oracle::literal_postliminal(g);
        CHECK(r.at("liminal").is_yes() == lim);
        CHECK(r.at("postliminal").is_yes() == post);
        lim_no += !lim;
        post_no += !post;
    }
    MESSAGE("graphs " << graphs << ", liminal No " << lim_no << ", postliminal No " << post_no);
    CHECK(lim_no > 50);
    CHECK(post_no > 20);
    CHECK(graphs - lim_no > 50);
}

TEST_CASE("structural criteria and certificates") {
    std::mt19937 rng(77);
    for (int t = 0; t < 500; ++t) {
        auto g = oracle::random_graph(rng, 6, 10);
        auto r = classify_digraph(g);
        CHECK(implications_respected(r));
        for (const char* p : kProperties) {
            const auto& d = r.at(p);
            if (d.is_no()) CHECK_MESSAGE(!d.certificate.empty(), p);
        }

        auto cycles = oracle::brute_cycles(g);
        CHECK(r.at("principal").is_yes() == cycles.empty());
        CHECK(r.at("af").is_yes() == cycles.empty());
        bool entry = false;
        for (const auto& c : cycles) entry |= !oracle::brute_entries(g, edge_indices(g, c)).empty();
        CHECK(r.at("liminal").is_no() == entry);
        if (cycles.empty()) CHECK(r.at("continuous_trace").is_yes());

        if (r.at("principal").is_no()) {
            const auto& c = r.at("principal").certificate;
            auto es = edge_indices(g, c["cycle"]);
            CHECK(closed_walk(g, es));
            auto x = parse_path(g, c["path"].get<std::string>());
            CHECK(shift_equivalent(g, x, x).contains(c["self_lag"].get<std::int64_t>()));
            CHECK(c["self_lag"].get<std::int64_t>() != 0);
        }
        if (r.at("liminal").is_no()) {
            const auto& c = r.at("liminal").certificate;
            auto es = edge_indices(g, c["cycle"]);
            CHECK(closed_walk(g, es));
            CHECK(oracle::brute_entries(g, es).count(c["entry"].get<std::string>()));
        }
        if (r.at("postliminal").is_no()) {
            const auto& c = r.at("postliminal").certificate;
            auto es = edge_indices(g, c["cycle"]);
            CHECK(oracle::brute_entries(g, es).count(c["entry"].get<std::string>()));
            auto back = edge_indices(g, c["entry_cycle"]);
            CHECK(closed_walk(g, back));
            CHECK(g.edge_id(back.front()) == c["entry"]);
        }
        if (r.at("simple").is_no() && r.at("simple").certificate["kind"] == "cycle_without_entry") {
            auto es = edge_indices(g, r.at("simple").certificate["cycle"]);
            CHECK(closed_walk(g, es));
            CHECK(oracle::brute_entries(g, es).empty());
        }
    }
}

TEST_CASE("bound M counts paths to sources on acyclic graphs") {
    DirectedGraph g;
    int a = g.add_vertex("a"), b = g.add_vertex("b"), c = g.add_vertex("c"), d = g.add_vertex("d");
    g.add_edge("p", a, b);
    g.add_edge("q", a, c);
    g.add_edge("r", b, d);
    g.add_edge("s", c, d);
    g.add_edge("t", a, d);
    auto r = classify_digraph(g);
    REQUIRE(r.at("bounded_trace").is_yes());
    CHECK(r.at("bounded_trace").certificate["M"]["a"] == 3);
    CHECK(r.at("bounded_trace").certificate["M"]["d"] == 1);
    CHECK(r.at("fell").certificate["count"] == 3);
}
