#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "polarscope/graph.hpp"

namespace polarscope {

// Resolves an attribute value for a node id; std::nullopt omits the <data>.
using NodeAttrFn = std::function<std::optional<std::string>(const std::string&)>;

struct GraphmlSpec {
    std::string graph_id = "G";
    // (attr.name, attr.type, resolver); types: "string", "long", "double", "boolean"
    std::vector<std::tuple<std::string, std::string, NodeAttrFn>> node_attrs;
    bool include_weight = true;
};

// Nodes ordered by id, edges by (source id, target id): identical graphs
// serialize to identical bytes regardless of construction order.
std::string graphml_string(const Graph& g, const GraphmlSpec& spec = {});
void write_graphml(const std::string& path, const Graph& g, const GraphmlSpec& spec = {});

struct ImportedGraph {
    Graph graph{true};
    std::map<std::string, std::map<std::string, std::string>> node_attrs;  // id -> name -> value
};

// Round-trips files this library wrote (plus similarly-shaped GraphML).
ImportedGraph read_graphml_string(const std::string& xml);
ImportedGraph read_graphml(const std::string& path);

// "source,target,weight" with the same ordering guarantees.
std::string edgelist_csv_string(const Graph& g);
void write_edgelist_csv(const std::string& path, const Graph& g);
Graph read_edgelist_csv(const std::string& path, bool directed);

std::string xml_escape(std::string_view s);

}  // namespace polarscope
