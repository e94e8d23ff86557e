#include <doctest.h>

#include <filesystem>

#include <ckgraph/desourcify.hpp>
#include <ckgraph/families.hpp>
#include <ckgraph/io.hpp>
#include <ckgraph/kgraph.hpp>

#include "oracles.hpp"

using namespace ckgraph;

TEST_CASE("graph documents round-trip") {
    std::mt19937 rng(5);
    for (int t = 0; t < 200; ++t) {
        auto g = oracle::random_graph(rng);
        auto doc = g.to_document();
        auto back = graph_document_from_json(json::parse(graph_document_json(doc).dump()));
        CHECK(back == doc);
        CHECK(DirectedGraph::from_document(back).to_document() == doc);
    }
}

TEST_CASE("k-graph documents round-trip") {
    std::vector<KGraphDocument> docs = {omega(2, {3, 2}).to_document(), omega(3, {1, 2, 1}).to_document(),
                                        corner().to_document(), robertson().window_document(3),
                                        materialize_truncation(robertson(), {2, 2}, 2).doc};
    for (const auto& doc : docs) {
        auto text = kgraph_document_json(doc).dump();
        auto back = kgraph_document_from_json(json::parse(text));
        CHECK(back == doc);
        CHECK(kgraph_document_json(back).dump() == text);
    }
}

TEST_CASE("column templates round-trip") {
    std::vector<ColumnTemplate> ts = {two_row_template(), alternating_template(), k_times_template(3),
                                      ml2mu3_template(), nonhausdorff_template(), lag_template(),
                                      add_heads(loop_plus_edge()).spec(), robertson().staged()->spec(),
                                      parallel_rows().staged()->spec()};
    for (const auto& t : ts) {
        auto back = template_from_json(json::parse(template_json(t).dump()));
        CHECK(back == t);
    }
}

TEST_CASE("shipped fixtures re-emit unchanged") {
    std::size_t seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(CKGRAPH_FIXTURES_DIR)) {
        if (entry.path().extension() != ".json") continue;
        json j = read_json_file(entry.path().string());
        if (!j.contains("vertices") && !j.contains("tracks")) continue;
        CAPTURE(entry.path().string());
        json body = j;
        body.erase("paths");
        switch (document_kind(j)) {
            case DocumentKind::graph:
                CHECK(graph_document_json(graph_document_from_json(j)) == body);
                break;
            case DocumentKind::kgraph:
                CHECK(kgraph_document_json(kgraph_document_from_json(j)) == body);
                break;
            case DocumentKind::column_template:
                CHECK(template_json(template_from_json(j)) == body);
                break;
        }
        ++seen;
    }
    CHECK(seen >= 14);
}

TEST_CASE("malformed documents name the field") {
    auto msg = [](const json& j, auto reader) -> std::string {
        try {
            reader(j);
        } catch (const input_error& e) {
            return e.what();
        }
        return "";
    };
    auto g = [](const json& j) { graph_document_from_json(j); };
    auto k = [](const json& j) { kgraph_document_from_json(j); };
    auto t = [](const json& j) { template_from_json(j); };
    CHECK(msg(json::parse(R"({"vertices":["a"],"edges":[{"id":"e","r":"a"}]})"), g).find("\"s\"") != std::string::npos);
    CHECK(msg(json::parse(R"({"vertices":"a","edges":[]})"), g).find("vertices") != std::string::npos);
    CHECK(msg(json::parse(R"({"k":2,"vertices":["a"],"edges":[],"squares":[["x"]]})"), k).find("square") !=
          std::string::npos);
    CHECK(msg(json::parse(R"({"tracks":["v"],"templates":[{"id":"e","r":{"track":"w"},"s":{"track":"v"}}]})"), t)
              .find("unknown track 'w'") != std::string::npos);
    CHECK_THROWS_AS(document_kind(json::array()), input_error);
    CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), input_error);
}
