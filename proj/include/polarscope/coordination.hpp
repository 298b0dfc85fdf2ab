#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polarscope/affiliation.hpp"
#include "polarscope/corpus.hpp"
#include "polarscope/graph.hpp"

namespace polarscope {

enum class CoActivityKind { CoRetweet, CoHashtag, CoUrl, CoDomain, CoMention };

const char* to_string(CoActivityKind k);
std::optional<CoActivityKind> co_activity_kind_from(std::string_view name);

enum class Windowing { Sliding, FixedBins };

struct CoActivityParams {
    CoActivityKind kind = CoActivityKind::CoRetweet;
    std::int64_t gamma_seconds = 60;
    Windowing windowing = Windowing::Sliding;
    std::set<std::string> exclusions;  // reason keys, matched post-normalization
    std::int64_t min_edge_weight = 1;

    void validate() const;  // throws std::invalid_argument
    std::string describe() const;
};

struct CoActivityGraph {
    CoActivityKind kind = CoActivityKind::CoRetweet;
    Graph accounts{false};  // undirected account–account, weight = co-action events
    // bigraph part (filled by bigraph()): reason key -> (account -> uses)
    std::map<std::string, std::map<std::string, std::int64_t>> reason_edges;
};

// Reason keys: co_retweet = root original tweet id; co_hashtag = lowercase
// hashtag; co_url = canonical URL; co_domain = registered domain; co_mention
// = mentioned account id. Sliding: +1 per unordered cross-account event pair
// within gamma per reason. Fixed bins: +1 per (reason, bin) in which both
// accounts acted, bins anchored at the first corpus tweet.
CoActivityGraph co_activity(const Corpus& corpus, const CoActivityParams& params);

// Same account–account graph plus account->reason use edges (all uses of
// paired reason keys, whether or not the account co-acted).
CoActivityGraph bigraph(const Corpus& corpus, const CoActivityParams& params);

struct ComponentSummary {
    std::vector<std::string> members;  // sorted
    std::map<Affiliation, std::int64_t> affiliation_counts;
    std::map<int, std::int64_t> clique_census;  // maximal-clique size (3..6; >6 under key 7)
    int max_clique_size = 0;
    bool clique_search_capped = false;
};

struct CoordinationReport {
    std::size_t total_components = 0;
    std::vector<ComponentSummary> components;  // largest first
};

CoordinationReport coordination_report(const CoActivityGraph& graph, const AffiliationMap& aff,
                                       std::size_t top_components = 5,
                                       std::size_t clique_step_budget = 2'000'000);

// GraphML with node kind {account, reason}, reason subtype and affiliation
// attributes; reason node ids are prefixed "reason:".
std::string coordination_graphml(const CoActivityGraph& graph, const AffiliationMap& aff);

}  // namespace polarscope
