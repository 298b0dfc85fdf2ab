#include "polarscope/graph.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace polarscope {

NodeId Graph::add_node(std::string_view id) {
    auto it = index_.find(std::string(id));
    if (it != index_.end()) return it->second;
    NodeId n = static_cast<NodeId>(ids_.size());
    ids_.emplace_back(id);
    index_.emplace(ids_.back(), n);
    return n;
}

void Graph::add_edge(std::string_view from, std::string_view to, std::int64_t weight) {
    add_edge(add_node(from), add_node(to), weight);
}

void Graph::add_edge(NodeId from, NodeId to, std::int64_t weight) {
    if (finalized_) throw std::logic_error("add_edge after finalize");
    if (!directed_ && ids_[to] < ids_[from]) std::swap(from, to);
    edges_.push_back({from, to, weight});
}

void Graph::finalize() {
    if (finalized_) return;
    std::sort(edges_.begin(), edges_.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
        if (a.from != b.from) return a.from < b.from;
        return a.to < b.to;
    });
    // merge parallel edges
    std::size_t w = 0;
    for (std::size_t r = 0; r < edges_.size(); ++r) {
        if (w > 0 && edges_[w - 1].from == edges_[r].from && edges_[w - 1].to == edges_[r].to) {
            edges_[w - 1].weight += edges_[r].weight;
        } else {
            edges_[w++] = edges_[r];
        }
    }
    edges_.resize(w);
    total_weight_ = 0;
    for (const auto& e : edges_) total_weight_ += e.weight;

    const std::size_t n = ids_.size();
    auto build = [&](bool by_from, std::vector<Arc>& arcs, std::vector<std::uint64_t>& off) {
        off.assign(n + 1, 0);
        for (const auto& e : edges_) off[(by_from ? e.from : e.to) + 1]++;
        for (std::size_t i = 0; i < n; ++i) off[i + 1] += off[i];
        arcs.resize(edges_.size());
        std::vector<std::uint64_t> cur(off.begin(), off.end() - 1);
        for (const auto& e : edges_) {
            if (by_from) arcs[cur[e.from]++] = {e.to, e.weight};
            else arcs[cur[e.to]++] = {e.from, e.weight};
        }
        // incoming arcs need a per-node sort by neighbor (outgoing are already
        // ordered by the edge sort)
        if (!by_from)
            for (std::size_t i = 0; i < n; ++i)
                std::sort(arcs.begin() + off[i], arcs.begin() + off[i + 1],
                          [](const Arc& a, const Arc& b) { return a.to < b.to; });
    };
    build(true, out_arcs_, out_off_);
    build(false, in_arcs_, in_off_);

    // symmetrized neighborhood
    nbr_off_.assign(n + 1, 0);
    std::vector<Arc> merged;
    merged.reserve(edges_.size() * 2);
    for (std::size_t i = 0; i < n; ++i) {
        auto o = out(static_cast<NodeId>(i));
        auto in_ = in(static_cast<NodeId>(i));
        std::size_t a = 0, b = 0, start = merged.size();
        while (a < o.size() || b < in_.size()) {
            if (b >= in_.size() || (a < o.size() && o[a].to < in_[b].to)) {
                merged.push_back(o[a++]);
            } else if (a >= o.size() || in_[b].to < o[a].to) {
                merged.push_back(in_[b++]);
            } else {
                if (directed_) {
                    merged.push_back({o[a].to, o[a].weight + in_[b].weight});
                } else {
                    merged.push_back(o[a]);  // same undirected edge seen twice
                }
                ++a;
                ++b;
            }
        }
        nbr_off_[i + 1] = nbr_off_[i] + (merged.size() - start);
    }
    nbr_arcs_ = std::move(merged);
    finalized_ = true;
}

std::optional<NodeId> Graph::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::span<const Arc> Graph::out(NodeId n) const {
    return {out_arcs_.data() + out_off_[n], out_arcs_.data() + out_off_[n + 1]};
}

std::span<const Arc> Graph::in(NodeId n) const {
    return {in_arcs_.data() + in_off_[n], in_arcs_.data() + in_off_[n + 1]};
}

std::span<const Arc> Graph::neighbors(NodeId n) const {
    return {nbr_arcs_.data() + nbr_off_[n], nbr_arcs_.data() + nbr_off_[n + 1]};
}

std::int64_t Graph::weighted_out_degree(NodeId n) const {
    std::int64_t s = 0;
    for (const Arc& a : out(n)) s += a.weight;
    return s;
}

std::int64_t Graph::weighted_in_degree(NodeId n) const {
    std::int64_t s = 0;
    for (const Arc& a : in(n)) s += a.weight;
    return s;
}

std::int64_t Graph::weighted_degree(NodeId n) const {
    std::int64_t s = 0;
    for (const Arc& a : neighbors(n)) s += a.weight;
    return s;
}

std::optional<std::int64_t> Graph::edge_weight(NodeId from, NodeId to) const {
    if (!directed_ && ids_[to] < ids_[from]) std::swap(from, to);
    auto o = out(from);
    auto it = std::lower_bound(o.begin(), o.end(), to,
                               [](const Arc& a, NodeId t) { return a.to < t; });
    if (it != o.end() && it->to == to) return it->weight;
    return std::nullopt;
}

std::vector<std::vector<NodeId>> Graph::weak_components() const {
    const std::size_t n = ids_.size();
    std::vector<NodeId> comp(n, static_cast<NodeId>(-1));
    std::vector<NodeId> stack;
    NodeId ncomp = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] != static_cast<NodeId>(-1)) continue;
        comp[s] = ncomp;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (const Arc& a : neighbors(v)) {
                if (comp[a.to] == static_cast<NodeId>(-1)) {
                    comp[a.to] = ncomp;
                    stack.push_back(a.to);
                }
            }
        }
        ++ncomp;
    }
    std::vector<std::vector<NodeId>> groups(ncomp);
    for (NodeId v = 0; v < n; ++v) groups[comp[v]].push_back(v);
    for (auto& g : groups)
        std::sort(g.begin(), g.end(),
                  [this](NodeId a, NodeId b) { return ids_[a] < ids_[b]; });
    std::sort(groups.begin(), groups.end(),
              [this](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
                  if (a.size() != b.size()) return a.size() > b.size();
                  return ids_[a.front()] < ids_[b.front()];
              });
    return groups;
}

std::vector<std::vector<NodeId>> Graph::strong_components() const {
    // iterative Tarjan
    const std::size_t n = ids_.size();
    std::vector<std::uint32_t> index(n, 0), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<NodeId> stk;
    std::vector<std::vector<NodeId>> out_comps;
    std::uint32_t counter = 1;

    struct Frame {
        NodeId v;
        std::size_t child;
    };
    std::vector<Frame> call;
    for (NodeId s = 0; s < n; ++s) {
        if (index[s]) continue;
        call.push_back({s, 0});
        while (!call.empty()) {
            auto& f = call.back();
            NodeId v = f.v;
            if (f.child == 0) {
                index[v] = low[v] = counter++;
                stk.push_back(v);
                on_stack[v] = true;
            }
            auto o = out(v);
            bool descended = false;
            while (f.child < o.size()) {
                NodeId w = o[f.child++].to;
                if (!index[w]) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                std::vector<NodeId> comp;
                while (true) {
                    NodeId w = stk.back();
                    stk.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                    if (w == v) break;
                }
                std::sort(comp.begin(), comp.end(),
                          [this](NodeId a, NodeId b) { return ids_[a] < ids_[b]; });
                out_comps.push_back(std::move(comp));
            }
            call.pop_back();
            if (!call.empty()) {
                NodeId parent = call.back().v;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }
    std::sort(out_comps.begin(), out_comps.end(),
              [this](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
                  if (a.size() != b.size()) return a.size() > b.size();
                  return ids_[a.front()] < ids_[b.front()];
              });
    return out_comps;
}

Graph Graph::induced(const std::vector<NodeId>& nodes) const {
    Graph g(directed_);
    std::vector<bool> keep(ids_.size(), false);
    for (NodeId v : nodes) keep[v] = true;
    // deterministic node order: sorted by id string
    std::vector<NodeId> order = nodes;
    std::sort(order.begin(), order.end(),
              [this](NodeId a, NodeId b) { return ids_[a] < ids_[b]; });
    for (NodeId v : order) g.add_node(ids_[v]);
    for (const auto& e : edges_)
        if (keep[e.from] && keep[e.to]) g.add_edge(ids_[e.from], ids_[e.to], e.weight);
    g.finalize();
    return g;
}

Graph Graph::symmetrized() const {
    if (!directed_) {
        Graph g = *this;
        return g;
    }
    Graph g(false);
    for (const auto& id : ids_) g.add_node(id);
    for (const auto& e : edges_) g.add_edge(ids_[e.from], ids_[e.to], e.weight);
    g.finalize();
    return g;
}

}  // namespace polarscope
