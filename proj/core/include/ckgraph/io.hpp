#pragma once

#include <string>

#include "ckgraph/graph.hpp"
#include "ckgraph/kgraph.hpp"
#include "ckgraph/staged.hpp"

namespace ckgraph {

// All readers throw input_error on malformed documents.

json graph_document_json(const GraphDocument& doc);
GraphDocument graph_document_from_json(const json& j);

// squares as [[["f","g"],["g2","f2"]], ...], colors 1-based
json kgraph_document_json(const KGraphDocument& doc);
KGraphDocument kgraph_document_from_json(const json& j);

// {"tracks":[{"id"}],"templates":[{"id","r":{"track","offset"},"s":{"track","offset"},...}],
//  "hairs":[{"attach_track"}|{"attach_vertex"}],"sporadic":{"vertices","edges"},"rays","squares","k","origin"}
json template_json(const ColumnTemplate& t);
ColumnTemplate template_from_json(const json& j);

json read_json_file(const std::string& path);

enum class DocumentKind { graph, kgraph, column_template };
DocumentKind document_kind(const json& j);

}  // namespace ckgraph
