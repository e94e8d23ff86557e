#pragma once

#include <optional>

#include "ckgraph/classify.hpp"
#include "ckgraph/kgraph.hpp"

namespace ckgraph {

// Integer potential g on vertices with g(s(e)) - g(r(e)) = weights[c(e)].
// On periodic graphs g(track, col) = column_weight * col + offset[track].
struct Grading {
    std::vector<std::int64_t> weights;
    std::int64_t column_weight = 0;
    json to_json() const;
};
// the weights on `positive` colors are required to be nonzero
std::optional<Grading> find_grading(const KGraph& g, const std::vector<int>& positive = {});

// Verdicts for k-graphs. k = 1 delegates to classify_digraph.
ClassificationReport classify_kgraph(const KGraph& g, std::int64_t budget = 2);

// (x, y) = (eta t, zeta t) for one shared t; returns t
std::optional<KPath> monolithic_extension(const KGraph& g, const KPath& x, const KPath& y, const Morphism& eta,
                                          const Morphism& zeta);

}  // namespace ckgraph
