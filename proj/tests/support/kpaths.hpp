#pragma once

#include <random>
#include <vector>

#include <ckgraph/desourcify.hpp>
#include <ckgraph/kgraph.hpp>

namespace oracle {

using namespace ckgraph;

// boundary candidates from every fundamental vertex
std::vector<KPath> pool(const KGraph& g, std::int64_t box);
// boundary paths from the vertices of columns 0..cols
std::vector<KPath> window_pool(const KGraph& g, std::int64_t cols, std::int64_t box);

Degree random_degree(std::mt19937& rng, int k, std::int64_t hi);

// (V1) and (V2) read off directly
bool v_oracle(const KGraph& g, const VertexRep& a, const VertexRep& b);
// (P1), (P2) and (P3) read off directly
bool p_oracle(const KGraph& g, const MorphismRep& a, const MorphismRep& b);

std::vector<MorphismRep> random_reps(const KGraph& g, const std::vector<KPath>& xs, std::mt19937& rng, int count,
                                     std::int64_t hi);

// sigma^M kappa(x) = sigma^{M-n} kappa(y) on a window of segments
bool kappa_lagged(const KGraph& g, const KPath& x, const KPath& y, const Degree& n, std::int64_t M, std::int64_t w);

}  // namespace oracle
