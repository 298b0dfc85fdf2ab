#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polarscope/affiliation.hpp"
#include "polarscope/graph.hpp"
#include "polarscope/network.hpp"

namespace polarscope {

struct ClusterParams {
    int target_clusters = 2;
    double conductance_threshold = 0.4;  // no cut accepted above this
    std::size_t min_cluster_size = 10;
    std::uint64_t seed = 1;
    int max_iterations = 3000;   // power-iteration cap per cut
    double tolerance = 1e-9;
    bool use_weights = true;     // false: binarize edges before cutting

    std::string describe() const;
};

struct Partition {
    // account-id sets, disjoint, ordered by (size desc, first id asc);
    // members sorted by id
    std::vector<std::vector<std::string>> clusters;
    std::vector<double> cut_conductances;  // conductance of each accepted cut
    bool single_cluster = false;           // no admissible cut existed
    std::string params;                    // provenance

    std::size_t cluster_of(const std::string& account_id) const;  // npos when absent
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// phi(S) = w(S, V\S) / min(vol S, vol V\S) on the weight-symmetrized view;
// self-loops contribute volume, never cut.
double conductance(const Graph& undirected, const std::vector<NodeId>& side);

// Recursive minimum-conductance bisection via spectral sweep on the
// symmetrized graph. Deterministic for a fixed (input, params.seed).
Partition cluster_graph(const Graph& g, const ClusterParams& params);

struct RetweetClustering {
    Partition partition;
    double lcc_coverage = 0.0;   // LCC nodes / network nodes
    std::size_t lcc_nodes = 0;
};

// Clusters the largest weakly connected component of the retweet network.
RetweetClustering cluster_retweet_network(const InteractionNetwork& net,
                                          const ClusterParams& params);

// accounts ranked by how often they were retweeted (weighted in-degree),
// ties broken by id
std::vector<std::pair<std::string, std::int64_t>> top_retweeted(const InteractionNetwork& net,
                                                                std::size_t k);

struct ClusterProfile {
    std::size_t size = 0;
    std::vector<std::pair<std::string, std::int64_t>> top_retweeted;
};

std::vector<ClusterProfile> profile_clusters(const Partition& p, const InteractionNetwork& net,
                                             std::size_t k);

// Propagates seed labels to whole clusters. A cluster containing seeds from
// both groups is a conflict (throws std::runtime_error listing the culprits);
// clusters without seeds stay unlabeled, i.e. their members remain
// Unaffiliated.
AffiliationMap assign_affiliations(const Partition& p, const std::vector<SeedLabel>& seeds);

}  // namespace polarscope
