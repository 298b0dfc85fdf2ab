#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polarscope/affiliation.hpp"
#include "polarscope/corpus.hpp"

namespace polarscope {

// ---------------------------------------------------------------------------
// text patterns

enum class TextPattern : int {
    HashtagsOnly = 0,
    HashtagsUrl = 1,
    MentionsHashtags = 2,
    MentionsHashtagsUrl = 3,
    Other = 4,
};
inline constexpr std::array<TextPattern, 5> kPatterns = {
    TextPattern::HashtagsOnly, TextPattern::HashtagsUrl, TextPattern::MentionsHashtags,
    TextPattern::MentionsHashtagsUrl, TextPattern::Other};

const char* to_string(TextPattern p);

// Pattern of a single text: mentions/hashtags/URLs are stripped; a non-OTHER
// label applies only when nothing but whitespace remains.
TextPattern classify_text(std::string_view text);

struct PatternCell {
    std::array<std::int64_t, 5> counts{};  // by TextPattern
    std::int64_t tweets = 0;
    std::optional<double> pct(TextPattern p) const {
        if (tweets == 0) return std::nullopt;
        return 100.0 * static_cast<double>(counts[static_cast<int>(p)]) /
               static_cast<double>(tweets);
    }
};

struct PatternReport {
    int phase_count = 0;
    // cells[group][phase-1]; cells[group][phase_count] = overall
    std::array<std::vector<PatternCell>, kGroupCount> cells;

    const PatternCell& cell(Affiliation g, int phase) const {  // phase 0 = overall
        const auto& row = cells[static_cast<int>(g)];
        return phase == 0 ? row[static_cast<std::size_t>(phase_count)]
                          : row[static_cast<std::size_t>(phase - 1)];
    }
};

// Every tweet is labeled (retweets on their full text); counts per
// group x phase plus an overall column.
PatternReport classify_patterns(const PhasedCorpus& phased, const AffiliationMap& aff);

// ---------------------------------------------------------------------------
// reply bursts

struct BurstParams {
    std::int64_t window_seconds = 9 * 60;
    std::int64_t min_count = 10;
    double similarity = 0.8;  // token-Jaccard near-duplicate threshold

    void validate() const;
};

struct ReplyBurst {
    std::string source;
    std::string target;
    std::int64_t count = 0;
    Timestamp start = 0;
    Timestamp end = 0;
    std::vector<std::string> sample_texts;  // up to 3 distinct
};

// Runs of near-duplicate replies from one account to one target inside the
// window; insensitive to input order.
std::vector<ReplyBurst> detect_reply_bursts(const Corpus& corpus, const BurstParams& params = {});

// ---------------------------------------------------------------------------
// reputation + bot scores

struct ReputationInputs {
    std::int64_t friends = 0;
    std::int64_t followers = 0;
};

// followers / (friends + followers); both zero -> std::domain_error.
double reputation(const ReputationInputs& in);

enum class BotBucket { Human, Undecided, Bot };
const char* to_string(BotBucket b);

// Human iff cap < 0.2; Bot iff cap > 0.6; boundaries fall to Undecided.
BotBucket bot_bucket(double cap);

struct BotScore {
    std::string account_id;
    double cap = 0.0;
    std::optional<double> english_score;
    BotBucket bucket = BotBucket::Undecided;
    std::string source;
};

class BotScoreClient {
  public:
    virtual ~BotScoreClient() = default;
    virtual std::optional<BotScore> score(const std::string& account_id) = 0;
    virtual std::string name() const = 0;
};

// Offline stub over a CSV of `account_id,cap,english_score`.
class CsvBotScores : public BotScoreClient {
  public:
    static CsvBotScores from_csv(const std::string& text);
    static CsvBotScores from_csv_file(const std::string& path);

    std::optional<BotScore> score(const std::string& account_id) override;
    std::string name() const override { return "csv"; }
    std::size_t size() const { return scores_.size(); }

  private:
    std::map<std::string, BotScore> scores_;
};

// Minimal HTTP client: GET {base}/{account_id} with a bearer token; expects
// a JSON object with "cap" and optional "english". Network failures and
// non-200 responses yield no score.
class HttpBotScores : public BotScoreClient {
  public:
    HttpBotScores(std::string base_url, std::string token);

    std::optional<BotScore> score(const std::string& account_id) override;
    std::string name() const override { return "http"; }

  private:
    std::string host_;
    std::string path_prefix_;
    std::string token_;
};

enum class MinTweetsScope { Total, EachSide };

struct ScoreSelection {
    std::int64_t min_unaffiliated_tweets = 3;
    MinTweetsScope scope = MinTweetsScope::Total;
    int boundary_phase = 3;  // EachSide splits activity at this phase's start
};

struct BucketCell {
    std::int64_t accounts = 0;
    std::vector<std::int64_t> tweets_per_phase;  // [0] = phase 1
    std::int64_t tweets_total = 0;
};

struct BotScoreReport {
    std::vector<BotScore> scores;            // sorted by account id
    std::map<BotBucket, BucketCell> buckets;
    std::vector<std::string> unscored;       // selected but no score available
    std::int64_t selected = 0;
};

// Scores every labeled account plus Unaffiliated accounts clearing the tweet
// threshold; buckets them and tallies per-phase tweet contributions.
BotScoreReport score_accounts(BotScoreClient& client, const PhasedCorpus& phased,
                              const AffiliationMap& aff, const ScoreSelection& sel = {});

// ---------------------------------------------------------------------------
// activity profiles

struct ActivityProfile {
    std::string account_id;
    Timestamp bucket0 = 0;
    std::int64_t bucket_seconds = 86400;
    std::vector<std::int64_t> counts;  // dense over the corpus span
    std::int64_t corpus_tweets = 0;
    std::optional<double> lifetime_rate;  // statuses/day; absent when age is 0 or unknown
};

std::vector<ActivityProfile> account_activity_profile(const Corpus& corpus,
                                                      const std::vector<std::string>& account_ids,
                                                      std::int64_t bucket_seconds = 86400);

}  // namespace polarscope
