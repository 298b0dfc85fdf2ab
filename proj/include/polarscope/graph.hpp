#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace polarscope {

using NodeId = std::uint32_t;

struct Arc {
    NodeId to;
    std::int64_t weight;
};

// Weighted graph over string-keyed nodes. Edges accumulate (parallel
// insertions sum their weights) and the structure is frozen by finalize();
// adjacency comes out sorted by neighbor so traversal order is a function of
// node identity, not insertion order. Undirected graphs store each edge once,
// canonicalized by node-id string order, and mirror it in both adjacency
// lists.
class Graph {
  public:
    explicit Graph(bool directed = true) : directed_(directed) {}

    bool directed() const { return directed_; }

    NodeId add_node(std::string_view id);
    void add_edge(std::string_view from, std::string_view to, std::int64_t weight = 1);
    void add_edge(NodeId from, NodeId to, std::int64_t weight = 1);
    void finalize();
    bool finalized() const { return finalized_; }

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return edges_.size(); }  // after finalize: distinct pairs
    std::int64_t total_weight() const { return total_weight_; }

    const std::string& id(NodeId n) const { return ids_[n]; }
    const std::vector<std::string>& node_ids() const { return ids_; }
    std::optional<NodeId> find(std::string_view id) const;
    bool has_node(std::string_view id) const { return find(id).has_value(); }

    // frozen views
    std::span<const Arc> out(NodeId n) const;
    std::span<const Arc> in(NodeId n) const;
    // undirected neighborhood: union of out and in with weights summed; for
    // undirected graphs this is just the mirrored adjacency
    std::span<const Arc> neighbors(NodeId n) const;

    std::size_t out_degree(NodeId n) const { return out(n).size(); }
    std::size_t in_degree(NodeId n) const { return in(n).size(); }
    std::int64_t weighted_out_degree(NodeId n) const;
    std::int64_t weighted_in_degree(NodeId n) const;
    // sum of incident undirected weights (directed edges symmetrized)
    std::int64_t weighted_degree(NodeId n) const;

    struct EdgeRecord {
        NodeId from, to;
        std::int64_t weight;
    };
    // sorted by (from, to) node index; for undirected graphs from/to are in
    // canonical (id-lexicographic) order
    const std::vector<EdgeRecord>& edges() const { return edges_; }

    std::optional<std::int64_t> edge_weight(NodeId from, NodeId to) const;

    // connected components, weak for directed graphs; each component's nodes
    // sorted by id string, components ordered by (size desc, first id asc)
    std::vector<std::vector<NodeId>> weak_components() const;
    std::vector<std::vector<NodeId>> strong_components() const;  // Tarjan

    // node-induced subgraph; node ids carry over
    Graph induced(const std::vector<NodeId>& nodes) const;

    // undirected simple view with symmetrized weights (w(u,v)+w(v,u))
    Graph symmetrized() const;

  private:
    bool directed_;
    bool finalized_ = false;
    std::vector<std::string> ids_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<EdgeRecord> edges_;      // staging pre-finalize, merged after
    std::vector<Arc> out_arcs_, in_arcs_;
    std::vector<std::uint64_t> out_off_, in_off_;  // CSR offsets, size n+1
    std::vector<Arc> nbr_arcs_;
    std::vector<std::uint64_t> nbr_off_;
    std::int64_t total_weight_ = 0;
};

}  // namespace polarscope
