#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polarscope/time_utils.hpp"

namespace polarscope {

struct AccountSnapshot {
    std::string account_id;
    std::string screen_name;
    std::string location_text;  // empty = not set
    std::int64_t friends_count = 0;
    std::int64_t followers_count = 0;
    std::int64_t statuses_count = 0;
    Timestamp account_created_at = 0;

    // Whole days between account creation and the observation; clamped at 0.
    std::int64_t age_days(Timestamp observed_at) const {
        std::int64_t d = (observed_at - account_created_at) / 86400;
        return d < 0 ? 0 : d;
    }
};

struct TweetRef {
    std::string tweet_id;
    std::string account_id;
};

struct TweetRecord {
    std::string tweet_id;
    Timestamp created_at = 0;
    AccountSnapshot author;
    std::string text;
    std::vector<std::string> hashtags;  // stored lowercase
    std::vector<std::string> mentions;  // account ids
    std::vector<std::string> urls;      // expanded, as observed
    std::optional<TweetRef> retweet_of;
    std::optional<TweetRef> reply_to;
    std::optional<TweetRef> quote_of;
    std::string lang;  // empty = not set

    bool is_retweet() const { return retweet_of.has_value(); }
    bool is_reply() const { return reply_to.has_value(); }
    bool is_quote() const { return quote_of.has_value(); }
};

struct ParseReport {
    std::int64_t lines = 0;
    std::int64_t parsed = 0;
    std::int64_t skipped_malformed = 0;
    std::int64_t skipped_duplicate = 0;
    std::vector<std::string> samples;  // "line 12: missing field 'id'", capped
    static constexpr std::size_t kMaxSamples = 25;

    void note(std::int64_t line_no, std::string_view why);
};

using TweetIndex = std::uint32_t;

// Immutable, time-ordered view of a tweet collection plus the lookup indexes
// every downstream stage shares. Ordering and index iteration are functions
// of the input bytes alone.
class Corpus {
  public:
    Corpus() = default;

    static Corpus from_jsonl(std::istream& in, ParseReport* report = nullptr);
    static Corpus from_jsonl_file(const std::string& path, ParseReport* report = nullptr);
    static Corpus from_records(std::vector<TweetRecord> records);  // sorts + indexes

    const std::vector<TweetRecord>& tweets() const { return tweets_; }
    std::size_t size() const { return tweets_.size(); }
    bool empty() const { return tweets_.empty(); }
    const TweetRecord& operator[](TweetIndex i) const { return tweets_[i]; }

    const std::map<std::string, std::vector<TweetIndex>>& by_account() const {
        return by_account_;
    }
    const std::map<std::string, std::vector<TweetIndex>>& by_hashtag() const {
        return by_hashtag_;
    }
    const std::map<std::string, std::vector<TweetIndex>>& by_url() const { return by_url_; }
    // original tweet id -> indexes of its direct retweets in the corpus
    const std::map<std::string, std::vector<TweetIndex>>& retweets_of() const {
        return retweets_of_;
    }

    std::optional<TweetIndex> find_tweet(std::string_view tweet_id) const;
    std::size_t account_count() const { return by_account_.size(); }

    // Most recent author snapshot for an account (accounts appear only as authors).
    const AccountSnapshot* last_snapshot(const std::string& account_id) const;

    // Root of a retweet chain: follows retweet_of through the corpus; returns
    // the ultimate original tweet id (which may not be present in the corpus).
    std::string root_original(TweetIndex retweet) const;

    Timestamp first_time() const { return tweets_.empty() ? 0 : tweets_.front().created_at; }
    Timestamp last_time() const { return tweets_.empty() ? 0 : tweets_.back().created_at; }

  private:
    void build_indexes();

    std::vector<TweetRecord> tweets_;  // sorted by (created_at, tweet_id)
    std::map<std::string, std::vector<TweetIndex>> by_account_;
    std::map<std::string, std::vector<TweetIndex>> by_hashtag_;
    std::map<std::string, std::vector<TweetIndex>> by_url_;
    std::map<std::string, std::vector<TweetIndex>> retweets_of_;
    std::map<std::string, TweetIndex> by_tweet_id_;
};

struct PhaseConfig {
    std::vector<Timestamp> boundaries;  // strictly increasing
    std::vector<std::string> names;     // optional; resized to boundaries.size()+1

    void validate() const;  // throws std::invalid_argument
    int phase_count() const { return static_cast<int>(boundaries.size()) + 1; }
    // 1-based: index of the first boundary strictly greater than t, so a tweet
    // at a boundary instant opens the later phase.
    int phase_of(Timestamp t) const;
    std::string phase_name(int phase) const;  // 1-based
};

struct PhaseStats {
    std::int64_t tweets = 0;
    std::int64_t accounts = 0;  // distinct authors active in the phase
};

class PhasedCorpus {
  public:
    PhasedCorpus(const Corpus& corpus, PhaseConfig config);

    const Corpus& corpus() const { return *corpus_; }
    const PhaseConfig& config() const { return config_; }
    int phase_count() const { return config_.phase_count(); }
    int phase_of(TweetIndex i) const { return phase_of_[i]; }
    const std::vector<PhaseStats>& per_phase() const { return stats_; }  // [0]=phase 1

  private:
    const Corpus* corpus_;
    PhaseConfig config_;
    std::vector<int> phase_of_;
    std::vector<PhaseStats> stats_;
};

struct GrowthPoint {
    Timestamp bucket_start = 0;
    std::int64_t new_accounts = 0;
    std::int64_t cumulative_accounts = 0;
};

// Cumulative distinct posting accounts per fixed-width time bucket, first
// tweet anchored at bucket 0; last point equals the corpus account count.
std::vector<GrowthPoint> growth_curve(const Corpus& corpus, std::int64_t bucket_seconds);

struct MetaDiscussionReport {
    std::string term;
    std::int64_t matching_tweets = 0;
    std::int64_t total_tweets = 0;
    double ratio = 0.0;
    std::vector<std::pair<std::string, std::int64_t>> per_day;  // "YYYY-MM-DD" -> count
};

// Tweets whose text uses `term` (case-insensitive) without a '#' immediately
// before it — discussion *about* the tag rather than use of it.
MetaDiscussionReport meta_discussion_report(const Corpus& corpus, std::string_view term);

}  // namespace polarscope
