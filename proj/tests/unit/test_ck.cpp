#include <doctest.h>

#include <ckgraph/ck.hpp>

using namespace ckgraph;

namespace {

struct Case {
    std::string name;
    KGraph graph;
    CKFamily family;
};

std::vector<Case> valid_cases() {
    return {{"loop", KGraph::from_digraph(single_loop_graph()), single_loop_family()},
            {"parallel", KGraph::from_digraph(parallel_edges_graph()), parallel_edges_family()},
            {"omega_2_11", omega(2, {1, 1}), ck_boundary_family(omega(2, {1, 1}))},
            {"omega_2_21", omega(2, {2, 1}), ck_boundary_family(omega(2, {2, 1}))},
            {"omega_3_111", omega(3, {1, 1, 1}), ck_boundary_family(omega(3, {1, 1, 1}))},
            {"corner", corner(), ck_boundary_family(corner())}};
}

}  // namespace

TEST_CASE("single loop") {
    auto g = single_loop_graph();
    CHECK(ck_verify(g, single_loop_family()).ok());
    auto f = single_loop_family();
    f.edge["e"] = Matrix(1);
    auto rep = ck_verify(g, f);
    CHECK(rep.violates("CK(i)"));
}

TEST_CASE("parallel edges into one vertex") {
    auto rep = ck_verify(parallel_edges_graph(), parallel_edges_family());
    CHECK(rep.ok());
    CHECK(rep.relations_checked > 0);
    // ranges of S_f and S_g are orthogonal and sum to P_v
    auto f = parallel_edges_family();
    CHECK((f.edge["f"] * f.edge["f"].transpose() + f.edge["g"] * f.edge["g"].transpose()) == f.vertex["v"]);
    CHECK((f.edge["f"].transpose() * f.edge["g"]).is_zero());
}

TEST_CASE("boundary representations satisfy the relations") {
    for (const auto& c : valid_cases()) {
        auto rep = ck_verify(c.graph, c.family);
        CHECK_MESSAGE(rep.ok(), c.name << " " << rep.to_json().dump());
    }
    // the corner acts on its four boundary paths
    CHECK(ck_boundary_family(corner()).dim == 4);
    CHECK(ck_boundary_family(omega(2, {2, 1})).dim == 6);
}

TEST_CASE("every single-relation mutation is flagged") {
    int flagged = 0, total = 0;
    for (const auto& c : valid_cases()) {
        std::vector<std::string> gens;
        for (const auto& [n, m] : c.family.vertex) gens.push_back(n);
        for (const auto& [n, m] : c.family.edge) gens.push_back(n);
        for (const auto& gen : gens)
            for (auto mut : {Mutation::scale, Mutation::zero, Mutation::transpose, Mutation::bump}) {
                auto m = mutate(c.family, gen, mut);
                if (m.vertex == c.family.vertex && m.edge == c.family.edge) continue;
                ++total;
                auto rep = ck_verify(c.graph, m);
                if (!rep.ok())
                    ++flagged;
                else
                    FAIL_CHECK(c.name << " " << gen << " mutation " << static_cast<int>(mut) << " passed");
            }
    }
    CHECK(total > 50);
    CHECK(flagged == total);
}

TEST_CASE("CK4 catches a missing summand") {
    // drop the part of P_v coming from beta in the corner representation
    auto c = corner();
    auto f = ck_boundary_family(c);
    f.edge["beta"] = Matrix(f.dim);
    f.vertex["w"] = Matrix(f.dim);
    auto rep = ck_verify(c, f);
    CHECK(rep.violates("CK4"));
}

TEST_CASE("bad families are input errors") {
    auto f = single_loop_family();
    f.edge.clear();
    CHECK_THROWS_AS(ck_verify(single_loop_graph(), f), input_error);
    auto h = parallel_edges_family();
    h.vertex["u"] = Matrix(2);
    CHECK_THROWS_AS(ck_verify(parallel_edges_graph(), h), input_error);
}
