#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polarscope/affiliation.hpp"
#include "polarscope/time_utils.hpp"

namespace polarscope {

struct GroupSpec {
    int n = 0;
    double originals_per_account = 1.0;  // Poisson means
    double retweets_per_account = 0.0;
    double replies_per_account = 0.0;
    double quotes_per_account = 0.0;
    double intra_fraction = 0.9;  // probability a retweet/reply stays in-group
    double hashtags_per_tweet = 1.0;
    double mentions_per_tweet = 0.0;
    double url_prob = 0.1;
    // probability of each text shape: hashtags_only, hashtags_url,
    // mentions_hashtags, mentions_hashtags_url, other (free text)
    std::array<double, 5> pattern_mix{0.05, 0.05, 0.02, 0.01, 0.87};
    std::vector<std::string> hashtags;
    std::vector<std::string> exclusive_hashtags;
    std::vector<std::string> urls;
    std::vector<double> phase_multipliers;  // empty = uniform across phases
    std::int64_t friends_lo = 50, friends_hi = 2000;
    std::int64_t followers_lo = 50, followers_hi = 2000;
    std::int64_t statuses_lo = 100, statuses_hi = 50000;
    std::int64_t age_lo = 100, age_hi = 3000;
};

struct PartitionSpec {
    double p_in = 0.0;  // same-group pair retweet probability
    double p_out = 0.0;
    bool enabled() const { return p_in > 0.0 || p_out > 0.0; }
};

struct CliqueSpec {
    std::string kind = "co_retweet";
    Affiliation group = Affiliation::Unaffiliated;
    int size = 0;
    std::int64_t gamma_true = 30;
    int reasons = 3;
};

struct BurstSpec {
    int count = 26;
    std::int64_t window = 540;
    std::string text = "#always #the #same #reply";
    Affiliation group = Affiliation::Supporter;  // burst source's true group
};

struct BotProfile {
    int count = 1;
    std::int64_t statuses = 100000;
    std::int64_t age_days = 1000;
    std::int64_t friends = 1000;
    std::int64_t followers = 1000;
    double tweets_per_day = 20.0;  // within the corpus span
};

struct BackgroundSpec {
    int accounts = 0;
    std::int64_t events = 0;  // retweets spread uniformly over the span
    int reasons = 0;          // distinct retweeted originals
};

struct ScenarioConfig {
    std::uint64_t seed = 1;
    Timestamp start_time = 1577836800;  // 2020-01-01T00:00:00Z
    int days = 14;
    std::vector<Timestamp> phase_boundaries;
    GroupSpec supporters, opposers, unaffiliated;
    PartitionSpec partition;
    std::vector<CliqueSpec> cliques;
    std::vector<BurstSpec> bursts;
    std::vector<BotProfile> bots;
    BackgroundSpec background;

    void validate() const;  // throws std::invalid_argument
    static ScenarioConfig from_json(const std::string& text);
    static ScenarioConfig from_json_file(const std::string& path);
};

struct PlantedClique {
    std::string kind;
    std::vector<std::string> members;
    std::int64_t gamma_true = 0;
    std::vector<std::string> reason_keys;
};

struct PlantedBurst {
    std::string source;
    std::string target;
    std::int64_t count = 0;
    std::int64_t window = 0;
    Timestamp start = 0;
};

struct GroundTruth {
    std::uint64_t seed = 0;
    std::vector<std::string> supporters;  // sorted account ids
    std::vector<std::string> opposers;
    std::vector<PlantedClique> cliques;
    std::vector<PlantedBurst> bursts;
    std::vector<std::string> bots;
    std::vector<std::string> supporter_hashtags;  // partisan-exclusive sets
    std::vector<std::string> opposer_hashtags;
    std::int64_t tweets = 0;

    Affiliation true_affiliation(const std::string& account_id) const;
    AffiliationMap affiliations() const;

    std::string to_json() const;
    static GroundTruth from_json(const std::string& text);
    static GroundTruth from_json_file(const std::string& path);
};

// Streams the corpus as canonical JSONL; memory stays O(accounts + reasons).
// Generation-time self-checks verify every planted clique and burst.
GroundTruth generate(const ScenarioConfig& config, std::ostream& corpus_out);
GroundTruth generate_files(const ScenarioConfig& config, const std::string& corpus_path,
                           const std::string& truth_path);

}  // namespace polarscope
