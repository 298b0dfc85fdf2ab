#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "polarscope/corpus.hpp"

using namespace polarscope;
using testutil::TweetSpec;

namespace {

std::string line(const std::string& id, const std::string& user, const std::string& at,
                 const std::string& extra = "") {
    return "{\"id\":\"" + id + "\",\"created_at\":\"" + at + "\",\"user\":{\"id\":\"" + user +
           "\",\"screen_name\":\"" + user +
           "\",\"friends_count\":10,\"followers_count\":20,\"statuses_count\":30,"
           "\"created_at\":\"2015-01-01T00:00:00Z\"},\"text\":\"hello #One world\","
           "\"lang\":\"en\",\"entities\":{\"hashtags\":[\"One\"],\"mentions\":[],\"urls\":[]}" +
           extra + "}";
}

}  // namespace

TEST_CASE("jsonl ingest parses, orders, and indexes") {
    std::string corpus_text =
        line("t2", "alice", "2020-01-02T00:00:00Z") + "\n" +
        line("t1", "bob", "2020-01-01T00:00:00Z",
             ",\"retweet_of\":{\"id\":\"t9\",\"user_id\":\"carol\"}") + "\n" +
        line("t3", "alice", "2020-01-03T00:00:00Z",
             ",\"reply_to\":{\"id\":\"t2\",\"user_id\":\"alice\"}") + "\n";
    std::istringstream in(corpus_text);
    ParseReport report;
    Corpus c = Corpus::from_jsonl(in, &report);
    CHECK(report.lines == 3);
    CHECK(report.parsed == 3);
    REQUIRE(c.size() == 3);
    // time-ordered regardless of input order
    CHECK(c[0].tweet_id == "t1");
    CHECK(c[1].tweet_id == "t2");
    CHECK(c[2].tweet_id == "t3");
    CHECK(c[0].is_retweet());
    CHECK(c[2].is_reply());
    CHECK(c.account_count() == 2);
    CHECK(c.by_account().at("alice").size() == 2);
    CHECK(c.by_hashtag().at("one").size() == 3);  // hashtags lowercased
    CHECK(c.retweets_of().at("t9").size() == 1);
    CHECK(c.find_tweet("t2").has_value());
    CHECK_FALSE(c.find_tweet("nope").has_value());
    CHECK(c.first_time() < c.last_time());
}

TEST_CASE("malformed and duplicate lines are counted, not fatal") {
    std::string corpus_text = line("t1", "a", "2020-01-01T00:00:00Z") + "\n" +
                              "this is not json\n" +
                              "{\"id\":\"t2\"}\n" +                      // missing fields
                              line("t1", "a", "2020-01-01T00:00:00Z") +  // duplicate id
                              "\n\n" +                                   // blank line skipped
                              line("t3", "b", "2020-01-02T00:00:00Z") + "\n";
    std::istringstream in(corpus_text);
    ParseReport report;
    Corpus c = Corpus::from_jsonl(in, &report);
    CHECK(c.size() == 2);
    CHECK(report.skipped_malformed == 2);
    CHECK(report.skipped_duplicate == 1);
    CHECK(!report.samples.empty());
}

TEST_CASE("last snapshot wins for account metadata") {
    Corpus c = testutil::corpus_of({
        {.id = "t1", .account = "a", .at = 100},
        {.id = "t2", .account = "a", .at = 200},
    });
    // from_records keeps whatever snapshots were attached; via JSONL the later
    // tweet's user object is the later snapshot
    std::string corpus_text =
        "{\"id\":\"t1\",\"created_at\":\"2020-01-01T00:00:00Z\",\"user\":{\"id\":\"a\","
        "\"screen_name\":\"a\",\"friends_count\":1,\"followers_count\":1,\"statuses_count\":1,"
        "\"created_at\":\"2015-01-01T00:00:00Z\"},\"text\":\"x\",\"entities\":{}}\n"
        "{\"id\":\"t2\",\"created_at\":\"2020-01-02T00:00:00Z\",\"user\":{\"id\":\"a\","
        "\"screen_name\":\"a\",\"friends_count\":7,\"followers_count\":9,\"statuses_count\":5,"
        "\"created_at\":\"2015-01-01T00:00:00Z\"},\"text\":\"y\",\"entities\":{}}\n";
    std::istringstream in(corpus_text);
    Corpus c2 = Corpus::from_jsonl(in);
    const AccountSnapshot* snap = c2.last_snapshot("a");
    REQUIRE(snap != nullptr);
    CHECK(snap->friends_count == 7);
    CHECK(snap->followers_count == 9);
    CHECK(c2.last_snapshot("missing") == nullptr);
}

TEST_CASE("root_original follows retweet chains") {
    Corpus c = testutil::corpus_of({
        {.id = "orig", .account = "a", .at = 10},
        {.id = "rt1", .account = "b", .at = 20, .retweet_of_id = "orig",
         .retweet_of_account = "a"},
        {.id = "rt2", .account = "c", .at = 30, .retweet_of_id = "rt1",
         .retweet_of_account = "b"},
        {.id = "rt3", .account = "d", .at = 40, .retweet_of_id = "ghost",
         .retweet_of_account = "z"},
    });
    CHECK(c.root_original(*c.find_tweet("rt1")) == "orig");
    CHECK(c.root_original(*c.find_tweet("rt2")) == "orig");   // two hops
    CHECK(c.root_original(*c.find_tweet("rt3")) == "ghost");  // target outside corpus
}

TEST_CASE("phase boundaries open the later phase") {
    PhaseConfig cfg;
    cfg.boundaries = {*parse_iso8601("2020-01-07T06:00:00Z"),
                      *parse_iso8601("2020-01-08T19:00:00Z")};
    cfg.validate();
    CHECK(cfg.phase_count() == 3);
    CHECK(cfg.phase_of(*parse_iso8601("2020-01-07T05:59:59Z")) == 1);
    CHECK(cfg.phase_of(*parse_iso8601("2020-01-07T06:00:00Z")) == 2);
    CHECK(cfg.phase_of(*parse_iso8601("2020-01-08T18:59:59Z")) == 2);
    CHECK(cfg.phase_of(*parse_iso8601("2020-01-08T19:00:00Z")) == 3);
    CHECK(cfg.phase_of(0) == 1);
}

TEST_CASE("phase config validation") {
    PhaseConfig ok;  // no boundaries = one phase
    ok.validate();
    CHECK(ok.phase_count() == 1);
    PhaseConfig bad;
    bad.boundaries = {100, 100};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    PhaseConfig decreasing;
    decreasing.boundaries = {200, 100};
    CHECK_THROWS_AS(decreasing.validate(), std::invalid_argument);
}

TEST_CASE("phased corpus tallies per-phase tweets and accounts") {
    Corpus c = testutil::corpus_of({
        {.id = "t1", .account = "a", .at = 10},
        {.id = "t2", .account = "b", .at = 20},
        {.id = "t3", .account = "a", .at = 110},
        {.id = "t4", .account = "a", .at = 120},
    });
    PhaseConfig cfg;
    cfg.boundaries = {100};
    PhasedCorpus pc(c, cfg);
    CHECK(pc.phase_of(*c.find_tweet("t2")) == 1);
    CHECK(pc.phase_of(*c.find_tweet("t3")) == 2);
    REQUIRE(pc.per_phase().size() == 2);
    CHECK(pc.per_phase()[0].tweets == 2);
    CHECK(pc.per_phase()[0].accounts == 2);
    CHECK(pc.per_phase()[1].tweets == 2);
    CHECK(pc.per_phase()[1].accounts == 1);
}

TEST_CASE("growth curve is cumulative distinct accounts") {
    Corpus c = testutil::corpus_of({
        {.id = "t1", .account = "a", .at = 0},
        {.id = "t2", .account = "a", .at = 50},
        {.id = "t3", .account = "b", .at = 120},
        {.id = "t4", .account = "c", .at = 130},
        {.id = "t5", .account = "a", .at = 250},
    });
    auto curve = growth_curve(c, 100);
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].new_accounts == 1);
    CHECK(curve[0].cumulative_accounts == 1);
    CHECK(curve[1].new_accounts == 2);
    CHECK(curve[1].cumulative_accounts == 3);
    CHECK(curve[2].new_accounts == 0);
    CHECK(curve[2].cumulative_accounts == 3);
    CHECK(curve.back().cumulative_accounts ==
          static_cast<std::int64_t>(c.account_count()));
    CHECK(growth_curve(Corpus{}, 100).empty());
}

TEST_CASE("meta-discussion counts unprefixed term uses") {
    std::vector<testutil::TweetSpec> specs;
    // 3 tweets discuss the tag without '#', 2 use the hashtag itself, 5 unrelated
    for (int i = 0; i < 3; ++i)
        specs.push_back({.id = "d" + std::to_string(i), .account = "a",
                         .at = Timestamp(86400 * i),
                         .text = "the ArsonEmergency tag is being gamed"});
    for (int i = 0; i < 2; ++i)
        specs.push_back({.id = "h" + std::to_string(i), .account = "b",
                         .at = Timestamp(10 + i), .text = "stay safe #ArsonEmergency",
                         .hashtags = {"arsonemergency"}});
    for (int i = 0; i < 5; ++i)
        specs.push_back({.id = "u" + std::to_string(i), .account = "c",
                         .at = Timestamp(20 + i), .text = "unrelated chatter"});
    Corpus c = testutil::corpus_of(specs);
    MetaDiscussionReport rep = meta_discussion_report(c, "arsonemergency");
    CHECK(rep.matching_tweets == 3);
    CHECK(rep.total_tweets == 10);
    CHECK(rep.ratio == doctest::Approx(0.3));
    REQUIRE(rep.per_day.size() == 3);  // one discussion tweet per day
    CHECK(rep.per_day[0].first == "1970-01-01");
    CHECK(rep.per_day[0].second == 1);
}

TEST_CASE("age_days clamps at zero") {
    AccountSnapshot s;
    s.account_created_at = 1000;
    CHECK(s.age_days(1000 + 3 * 86400) == 3);
    CHECK(s.age_days(500) == 0);
}
