#pragma once

#include <array>
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

struct HashtagComentionNetwork {
    Graph graph{false};  // nodes: lowercase hashtags; weight: distinct co-using accounts
    std::optional<Affiliation> group;  // nullopt = whole corpus
    int min_weight = 5;
    std::set<std::string> excluded;
};

// Edge weight = number of distinct in-scope accounts that used both hashtags
// anywhere in their tweets (not necessarily together). Edges below min_weight
// are dropped; only surviving endpoints become nodes.
HashtagComentionNetwork hashtag_comention(const Corpus& corpus, const AffiliationMap& aff,
                                          std::optional<Affiliation> group, int min_weight = 5,
                                          const std::set<std::string>& exclude = {});

// Account–account network where w(u,v) = sum over the restricted hashtag
// universe of use_u(tag) * use_v(tag).
Graph account_cohashtag_network(const Corpus& corpus, const std::set<std::string>& hashtag_set);

struct PartisanHashtags {
    std::vector<std::pair<std::string, std::int64_t>> supporter_seed;  // (tag, group uses)
    std::vector<std::pair<std::string, std::int64_t>> opposer_seed;
    bool short_of_k = false;               // fewer exclusive tags than requested
    std::vector<std::string> removed_global;  // corpus-global top tags taken out
    std::set<std::string> universe;        // final hashtag set
    std::vector<TweetIndex> tweet_subset;  // tweets containing any seed tag
};

// Top-k hashtags used exclusively by each labeled group, the tweets that use
// them, their co-occurring tags, minus the corpus-global top
// `global_exclude_k` tags.
PartisanHashtags partisan_hashtags(const Corpus& corpus, const AffiliationMap& aff, int k = 10,
                                   int global_exclude_k = 10);

struct GroupUsage {
    std::int64_t tweets = 0;
    std::int64_t hashtag_uses = 0;
    std::optional<double> hashtags_per_tweet;
    std::vector<std::pair<std::string, std::int64_t>> top_hashtags;  // desc, tie lexicographic
    std::vector<double> top_hashtags_per_tweet;                      // aligned with top_hashtags
    // canonical external URLs, use count desc (full rank-frequency series)
    std::vector<std::pair<std::string, std::int64_t>> url_rank_frequency;
    std::int64_t url_uses = 0;
    std::int64_t unique_urls = 0;
    std::optional<double> mean_url_reuse;
    // per-tweet entity-count histograms
    std::map<int, std::int64_t> hashtags_per_tweet_hist;
    std::map<int, std::int64_t> mentions_per_tweet_hist;
};

struct UsageDistributions {
    std::array<GroupUsage, 3> groups;  // kGroups order: Supporter, Opposer, Unaffiliated
};

UsageDistributions usage_distributions(const Corpus& corpus, const AffiliationMap& aff,
                                       std::size_t top_n = 10);

enum class UrlCategory { Narrative, Conspiracy, Debunking, Other, Uncategorized };
inline constexpr std::array<const char*, 5> kUrlCategoryNames = {
    "NARRATIVE", "CONSPIRACY", "DEBUNKING", "OTHER", "UNCATEGORIZED"};

struct UrlCategoryMap {
    std::map<std::string, UrlCategory> by_canonical;
    std::string provenance_sha256;

    // "url,category" rows; keys canonicalized on load; unknown category names
    // are rejected
    static UrlCategoryMap from_csv(const std::string& content);
    UrlCategory lookup(const std::string& canonical_url) const;
};

struct UrlCategoryTable {
    int phase_count = 0;
    // [group][phase-1, overall at phase_count][category]
    std::array<std::vector<std::array<std::int64_t, 5>>, 3> cells;
};

// Counts external-URL uses per category; platform-internal links excluded.
UrlCategoryTable categorize_urls(const PhasedCorpus& corpus, const AffiliationMap& aff,
                                 const UrlCategoryMap& map);

struct TopHashtagCell {
    std::vector<std::pair<std::string, std::int64_t>> tags;  // tweet-occurrence counts
    bool tie_overflow = false;  // result exceeds k because of ties at the cut
};

struct TopHashtagTable {
    int phase_count = 0;
    std::array<std::vector<TopHashtagCell>, 3> cells;  // [group][phase-1, overall]
};

TopHashtagTable top_hashtag_table(const PhasedCorpus& corpus, const AffiliationMap& aff,
                                  std::size_t k = 10);

struct LocationCoding {
    std::map<std::string, std::string> country_of;  // trimmed location_text -> country

    static LocationCoding from_csv(const std::string& content);
};

struct LocationRow {
    std::string country;  // "UNCODED" when the string is not in the coding file
    std::int64_t accounts = 0;
    double proportion = 0.0;
};

struct LocationSummary {
    std::array<std::vector<LocationRow>, 3> groups;    // desc by accounts, tie by country
    std::array<std::int64_t, 3> accounts_considered{};  // nonempty-location accounts in scope
};

// Accounts carry their last snapshot's location. Unaffiliated accounts only
// count when their location string occurs >= min_unaffiliated_uses times
// within the group.
LocationSummary location_summary(const Corpus& corpus, const AffiliationMap& aff,
                                 const LocationCoding& coding, int min_unaffiliated_uses = 2);

}  // namespace polarscope
