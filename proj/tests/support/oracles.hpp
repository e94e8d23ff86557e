#pragma once

#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <ckgraph/graph.hpp>
#include <ckgraph/paths.hpp>

namespace oracle {

using namespace ckgraph;

DirectedGraph random_graph(std::mt19937& rng, int max_vertices = 6, int max_edges = 10);

// simple cycles by walking every closed walk of length <= |V|
std::set<std::vector<std::string>> brute_cycles(const DirectedGraph& g);

// edges f with r(f) on the cycle that are not the cycle edge at that vertex
std::set<std::string> brute_entries(const DirectedGraph& g, const std::vector<int>& cycle_edges);

std::vector<char> brute_reach(const DirectedGraph& g, const std::set<int>& from);

// lags n with |n| <= D and x_i = y_{i-n} on a window past both heads
std::set<std::int64_t> brute_lags(const Graph& g, const Path& x, const Path& y, std::int64_t D);

// random head . block^inf built from a random walk and a random closed walk
std::optional<Path> random_up_path(const DirectedGraph& g, std::mt19937& rng, int max_head = 4, int max_block = 4);

// all normalized UP paths with head <= H and primitive block <= L, and the
// finite boundary paths of length <= H
std::vector<Path> enumerate_boundary(const DirectedGraph& g, int H, int L);
// same enumeration, stopping once visit returns true; returns whether it stopped
bool enumerate_boundary(const DirectedGraph& g, int H, int L, const std::function<bool(const Path&)>& visit);

// literal depth-bounded checks of the path-space conditions
bool literal_liminal(const DirectedGraph& g);
bool literal_postliminal(const DirectedGraph& g);

}  // namespace oracle
