#pragma once

#include <array>
#include <map>
#include <string>

#include "ckgraph/graph.hpp"
#include "ckgraph/staged.hpp"

namespace ckgraph {

inline constexpr std::array<const char*, 8> kProperties = {
    "principal", "af", "simple", "liminal", "postliminal", "bounded_trace", "fell", "continuous_trace"};

// strongest first: each entry implies the next one
inline constexpr std::array<const char*, 5> kImplicationChain = {
    "continuous_trace", "fell", "bounded_trace", "liminal", "postliminal"};

struct ClassificationReport {
    std::map<std::string, Decision> properties;
    json notes = json::object();

    const Decision& at(const std::string& p) const { return properties.at(p); }
    bool any_unknown() const;
    json to_json() const;
};

// Fill undecided entries along the implication chain. Returns false when
// the decided entries already contradict it.
bool propagate_implications(ClassificationReport& r);
bool implications_respected(const ClassificationReport& r);

ClassificationReport classify_digraph(const DirectedGraph& g);
ClassificationReport classify_digraph(const StagedGraph& g, std::int64_t budget = 1 << 16);
ClassificationReport classify_digraph(const Graph& g, std::int64_t budget = 1 << 16);

}  // namespace ckgraph
