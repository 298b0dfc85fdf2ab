#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polarscope/corpus.hpp"
#include "polarscope/graph.hpp"

namespace polarscope {

enum class InteractionKind { Retweet, Reply, Mention, Quote };

const char* to_string(InteractionKind k);
std::optional<InteractionKind> interaction_kind_from(std::string_view name);

// Directed weighted account network for one interaction kind. Edge direction
// is actor -> acted-upon: a retweet points from the retweeter to the original
// author, so weighted in-degree counts how often an account was retweeted.
struct InteractionNetwork {
    InteractionKind kind = InteractionKind::Retweet;
    std::optional<int> phase;  // absent = whole corpus
    Graph graph{true};
    // account ids that appear only as targets (never authored a tweet in scope)
    std::vector<std::string> observed_only;

    bool is_observed_only(std::string_view account_id) const;
};

// Builds the network from every interaction record of `kind` in the given
// phase (or all phases). Self-interactions are kept; targets with unknown
// account ids (empty) are dropped.
InteractionNetwork build_network(const PhasedCorpus& corpus, InteractionKind kind,
                                 std::optional<int> phase = std::nullopt);

struct ComponentSelection {
    Graph graph{true};                 // induced subgraph on the chosen component
    std::size_t component_nodes = 0;
    std::size_t total_nodes = 0;
    double coverage = 0.0;             // component_nodes / total_nodes
};

// Largest weakly (default) or strongly connected component.
ComponentSelection largest_component(const Graph& g, bool strong = false);

struct NetworkStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;          // distinct directed pairs
    std::int64_t total_weight = 0;  // raw interaction count
    std::size_t observed_only = 0;
    std::size_t weak_components = 0;
    std::size_t lcc_nodes = 0;
    double lcc_coverage = 0.0;
};

NetworkStats network_stats(const InteractionNetwork& net);

}  // namespace polarscope
