#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <thread>

#include <httplib.h>

#include "helpers.hpp"
#include "polarscope/inauthenticity.hpp"

using namespace polarscope;

TEST_CASE("text patterns: entity-only texts vs residue") {
    // pure entity combinations
    CHECK(classify_text("#fire #arson") == TextPattern::HashtagsOnly);
    CHECK(classify_text("#fire https://example.com/x") == TextPattern::HashtagsUrl);
    CHECK(classify_text("@user #fire") == TextPattern::MentionsHashtags);
    CHECK(classify_text("@user #fire www.example.com") == TextPattern::MentionsHashtagsUrl);
    CHECK(classify_text("#tag_1") == TextPattern::HashtagsOnly);  // _ and digits are token chars
    CHECK(classify_text("#t @x") == TextPattern::MentionsHashtags);  // order free
    CHECK(classify_text("  #fire\t\n#arson ") == TextPattern::HashtagsOnly);

    // residue of any kind forces OTHER
    CHECK(classify_text("#fire is spreading") == TextPattern::Other);
    CHECK(classify_text("#fire.") == TextPattern::Other);   // trailing punctuation
    CHECK(classify_text("# fire") == TextPattern::Other);   // bare marker
    CHECK(classify_text("#fire \xf0\x9f\x94\xa5") == TextPattern::Other);  // emoji
    CHECK(classify_text("#t httpx://weird") == TextPattern::Other);

    // hashtags are mandatory for every non-OTHER label
    CHECK(classify_text("@user https://example.com/x") == TextPattern::Other);
    CHECK(classify_text("") == TextPattern::Other);
    CHECK(classify_text(" \t ") == TextPattern::Other);
}

TEST_CASE("pattern report: group x phase cells plus overall") {
    Corpus c = testutil::corpus_of({
        {.id = "t1", .account = "s1", .at = 10, .text = "#a #b"},
        {.id = "t2", .account = "s1", .at = 150, .text = "@u #a"},
        {.id = "t3", .account = "s1", .at = 160, .text = "check this out"},
        {.id = "t4", .account = "o1", .at = 20, .text = "#a www.example.com"},
        // a retweet is classified on its full text like any other tweet
        {.id = "t5", .account = "o1", .at = 30, .text = "#a #b", .retweet_of_id = "t1",
         .retweet_of_account = "s1"},
        {.id = "t6", .account = "o1", .at = 40, .text = "RT @s1: #a #b", .retweet_of_id = "t1",
         .retweet_of_account = "s1"},
    });
    PhaseConfig pcfg;
    pcfg.boundaries = {100};
    PhasedCorpus pc(c, pcfg);
    AffiliationMap aff;
    aff.set("s1", Affiliation::Supporter);
    aff.set("o1", Affiliation::Opposer);

    PatternReport rep = classify_patterns(pc, aff);
    CHECK(rep.phase_count == 2);

    const PatternCell& sup1 = rep.cell(Affiliation::Supporter, 1);
    CHECK(sup1.tweets == 1);
    CHECK(sup1.counts[static_cast<int>(TextPattern::HashtagsOnly)] == 1);
    const PatternCell& sup2 = rep.cell(Affiliation::Supporter, 2);
    CHECK(sup2.tweets == 2);
    CHECK(sup2.counts[static_cast<int>(TextPattern::MentionsHashtags)] == 1);
    CHECK(sup2.counts[static_cast<int>(TextPattern::Other)] == 1);
    const PatternCell& sup_all = rep.cell(Affiliation::Supporter, 0);
    CHECK(sup_all.tweets == 3);
    REQUIRE(sup_all.pct(TextPattern::HashtagsOnly).has_value());
    CHECK(*sup_all.pct(TextPattern::HashtagsOnly) == doctest::Approx(100.0 / 3.0));

    const PatternCell& opp_all = rep.cell(Affiliation::Opposer, 0);
    CHECK(opp_all.tweets == 3);
    CHECK(opp_all.counts[static_cast<int>(TextPattern::HashtagsUrl)] == 1);
    CHECK(opp_all.counts[static_cast<int>(TextPattern::HashtagsOnly)] == 1);  // t5
    CHECK(opp_all.counts[static_cast<int>(TextPattern::Other)] == 1);         // t6 "RT ...:"

    const PatternCell& unaff = rep.cell(Affiliation::Unaffiliated, 0);
    CHECK(unaff.tweets == 0);
    CHECK_FALSE(unaff.pct(TextPattern::Other).has_value());
}

namespace {

std::vector<testutil::TweetSpec> burst_specs(const std::string& source, const std::string& target,
                                             int n, Timestamp start, std::int64_t spacing,
                                             const std::string& text, int id_base) {
    std::vector<testutil::TweetSpec> specs;
    for (int i = 0; i < n; ++i)
        specs.push_back({.id = "reply" + std::to_string(id_base + i), .account = source,
                         .at = start + i * spacing, .text = text,
                         .reply_to_id = "tgt" + std::to_string(id_base + i),
                         .reply_to_account = target});
    return specs;
}

}  // namespace

TEST_CASE("reply bursts: planted burst found regardless of input order") {
    std::vector<testutil::TweetSpec> specs =
        burst_specs("spammer", "victim", 12, 1000, 30, "get the #facts here", 0);
    // background chatter from other accounts
    for (int i = 0; i < 40; ++i)
        specs.push_back({.id = "bg" + std::to_string(i), .account = "acc" + std::to_string(i % 7),
                         .at = Timestamp(900 + i * 17), .text = "text " + std::to_string(i)});
    std::mt19937_64 rng(5);
    std::shuffle(specs.begin(), specs.end(), rng);

    std::vector<ReplyBurst> bursts = detect_reply_bursts(testutil::corpus_of(specs));
    REQUIRE(bursts.size() == 1);
    CHECK(bursts[0].source == "spammer");
    CHECK(bursts[0].target == "victim");
    CHECK(bursts[0].count == 12);
    CHECK(bursts[0].start == 1000);
    CHECK(bursts[0].end == 1000 + 11 * 30);
    CHECK(bursts[0].sample_texts == std::vector<std::string>{"get the #facts here"});

    SUBCASE("a different permutation yields the identical burst") {
        std::shuffle(specs.begin(), specs.end(), rng);
        std::vector<ReplyBurst> again = detect_reply_bursts(testutil::corpus_of(specs));
        REQUIRE(again.size() == 1);
        CHECK(again[0].count == bursts[0].count);
        CHECK(again[0].start == bursts[0].start);
        CHECK(again[0].end == bursts[0].end);
    }
}

TEST_CASE("reply bursts: thresholds, similarity boundary, window restart") {
    SUBCASE("one short of min_count is silent") {
        auto specs = burst_specs("s", "t", 9, 0, 10, "same words every time", 0);
        CHECK(detect_reply_bursts(testutil::corpus_of(specs)).empty());
    }
    SUBCASE("jaccard exactly at the threshold still clusters") {
        // 9 tokens, 8 shared -> 8/10 = 0.8
        std::string a = "w1 w2 w3 w4 w5 w6 w7 w8 xx";
        std::string b = "w1 w2 w3 w4 w5 w6 w7 w8 yy";
        std::vector<testutil::TweetSpec> specs;
        for (int i = 0; i < 12; ++i)
            specs.push_back({.id = "r" + std::to_string(i), .account = "s", .at = Timestamp(i * 10),
                             .text = i % 2 ? a : b, .reply_to_id = "x" + std::to_string(i),
                             .reply_to_account = "t"});
        Corpus c = testutil::corpus_of(specs);
        std::vector<ReplyBurst> at_default = detect_reply_bursts(c);
        REQUIRE(at_default.size() == 1);
        CHECK(at_default[0].count == 12);
        CHECK(at_default[0].sample_texts.size() == 2);  // both distinct texts sampled

        BurstParams stricter;
        stricter.similarity = 0.81;  // the cross pair at 0.8 now fails
        CHECK(detect_reply_bursts(c, stricter).empty());
    }
    SUBCASE("replies spaced past the window break into runs") {
        // 12 replies, 60s apart: only the first 10 fit one 540s window
        auto specs = burst_specs("s", "t", 12, 0, 60, "identical reply text", 0);
        std::vector<ReplyBurst> bursts = detect_reply_bursts(testutil::corpus_of(specs));
        REQUIRE(bursts.size() == 1);
        CHECK(bursts[0].count == 10);
        CHECK(bursts[0].end == 540);
    }
    SUBCASE("source-target pairs are tracked independently") {
        auto specs = burst_specs("s", "t1", 6, 0, 10, "same words", 0);
        auto more = burst_specs("s", "t2", 6, 0, 10, "same words", 100);
        specs.insert(specs.end(), more.begin(), more.end());
        CHECK(detect_reply_bursts(testutil::corpus_of(specs)).empty());  // 6+6, never 12

        auto s2 = burst_specs("a1", "t", 10, 0, 10, "same words", 200);
        auto s3 = burst_specs("a2", "t", 11, 0, 10, "same words", 300);
        s2.insert(s2.end(), s3.begin(), s3.end());
        std::vector<ReplyBurst> two = detect_reply_bursts(testutil::corpus_of(s2));
        REQUIRE(two.size() == 2);
        CHECK(two[0].count == 11);  // ordered by size, largest first
        CHECK(two[0].source == "a2");
        CHECK(two[1].count == 10);
    }
    SUBCASE("parameters validate") {
        BurstParams p;
        p.window_seconds = 0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p.window_seconds = 60;
        p.min_count = 1;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p.min_count = 10;
        p.similarity = 1.5;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
}

TEST_CASE("reputation and bot buckets") {
    CHECK(reputation({100, 300}) == doctest::Approx(0.75));
    CHECK(reputation({0, 5}) == doctest::Approx(1.0));
    CHECK(reputation({5, 0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(reputation({0, 0}), std::domain_error);
    CHECK_THROWS_AS(reputation({-1, 10}), std::invalid_argument);

    CHECK(bot_bucket(0.19) == BotBucket::Human);
    CHECK(bot_bucket(0.2) == BotBucket::Undecided);   // boundary is undecided
    CHECK(bot_bucket(0.59) == BotBucket::Undecided);
    CHECK(bot_bucket(0.6) == BotBucket::Undecided);   // boundary is undecided
    CHECK(bot_bucket(0.61) == BotBucket::Bot);
}

TEST_CASE("csv bot scores: parsing and validation") {
    CsvBotScores scores = CsvBotScores::from_csv(
        "account_id,cap,english_score\n"
        "acct1,0.1,0.95\n"
        "acct2,0.65,\n"
        "acct3,0.3,0.5\n");
    CHECK(scores.size() == 3);
    auto s1 = scores.score("acct1");
    REQUIRE(s1.has_value());
    CHECK(s1->bucket == BotBucket::Human);
    CHECK(s1->english_score == 0.95);
    auto s2 = scores.score("acct2");
    REQUIRE(s2.has_value());
    CHECK(s2->bucket == BotBucket::Bot);
    CHECK_FALSE(s2->english_score.has_value());
    CHECK(scores.score("acct3")->bucket == BotBucket::Undecided);
    CHECK_FALSE(scores.score("missing").has_value());

    // headerless files parse too
    CHECK(CsvBotScores::from_csv("a,0.5\n").size() == 1);

    CHECK_THROWS_AS(CsvBotScores::from_csv("a,1.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(CsvBotScores::from_csv("a,0.5,2.0\n"), std::invalid_argument);
    CHECK_THROWS_AS(CsvBotScores::from_csv("lonefield\n"), std::invalid_argument);
}

TEST_CASE("http bot scores: bearer auth, parsing, failure modes") {
    httplib::Server srv;
    std::string seen_auth;
    srv.Get("/scores/known", [&](const httplib::Request& req, httplib::Response& res) {
        if (req.has_header("Authorization")) seen_auth = req.get_header_value("Authorization");
        res.set_content("{\"cap\":0.7,\"english\":0.9}", "application/json");
    });
    srv.Get("/scores/badcap", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"cap\":1.7}", "application/json");
    });
    srv.Get("/scores/notjson", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("not json at all", "text/plain");
    });
    int port = srv.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread listener([&] { srv.listen_after_bind(); });
    srv.wait_until_ready();

    HttpBotScores client("http://127.0.0.1:" + std::to_string(port) + "/scores/", "tok123");
    auto s = client.score("known");
    REQUIRE(s.has_value());
    CHECK(s->cap == doctest::Approx(0.7));
    CHECK(s->bucket == BotBucket::Bot);
    REQUIRE(s->english_score.has_value());
    CHECK(*s->english_score == doctest::Approx(0.9));
    CHECK(s->source == "http");
    CHECK(seen_auth == "Bearer tok123");

    CHECK_FALSE(client.score("missing").has_value());   // 404
    CHECK_FALSE(client.score("badcap").has_value());    // cap out of range
    CHECK_FALSE(client.score("notjson").has_value());

    srv.stop();
    listener.join();
}

TEST_CASE("account scoring: selection scopes and bucket tallies") {
    Corpus c = testutil::corpus_of({
        {.id = "t1", .account = "s1", .at = 10},
        {.id = "t2", .account = "s1", .at = 20},
        {.id = "t3", .account = "o1", .at = 30},
        {.id = "t4", .account = "u_busy", .at = 10},
        {.id = "t5", .account = "u_busy", .at = 20},
        {.id = "t6", .account = "u_busy", .at = 150},
        {.id = "t7", .account = "u_quiet", .at = 10},
        {.id = "t8", .account = "u_quiet", .at = 20},
    });
    PhaseConfig pcfg;
    pcfg.boundaries = {100};
    PhasedCorpus pc(c, pcfg);
    AffiliationMap aff;
    aff.set("s1", Affiliation::Supporter);
    aff.set("o1", Affiliation::Opposer);

    CsvBotScores client = CsvBotScores::from_csv(
        "s1,0.1\n"
        "u_busy,0.7\n");

    BotScoreReport rep = score_accounts(client, pc, aff);
    // labeled accounts are always selected; u_busy clears the 3-tweet bar
    CHECK(rep.selected == 3);
    CHECK(rep.unscored == std::vector<std::string>{"o1"});
    REQUIRE(rep.scores.size() == 2);
    CHECK(rep.scores[0].account_id == "s1");  // sorted by account id
    CHECK(rep.scores[1].account_id == "u_busy");

    const BucketCell& human = rep.buckets.at(BotBucket::Human);
    CHECK(human.accounts == 1);
    CHECK(human.tweets_total == 2);
    CHECK(human.tweets_per_phase == std::vector<std::int64_t>{2, 0});
    const BucketCell& bot = rep.buckets.at(BotBucket::Bot);
    CHECK(bot.accounts == 1);
    CHECK(bot.tweets_per_phase == std::vector<std::int64_t>{2, 1});
    CHECK(rep.buckets.count(BotBucket::Undecided) == 0);

    SUBCASE("each-side scope needs activity on both sides of the boundary") {
        Corpus c2 = testutil::corpus_of({
            {.id = "a1", .account = "u_both", .at = 10},
            {.id = "a2", .account = "u_both", .at = 20},
            {.id = "a3", .account = "u_both", .at = 30},
            {.id = "a4", .account = "u_both", .at = 110},
            {.id = "a5", .account = "u_both", .at = 120},
            {.id = "a6", .account = "u_both", .at = 130},
            {.id = "b1", .account = "u_onesided", .at = 10},
            {.id = "b2", .account = "u_onesided", .at = 20},
            {.id = "b3", .account = "u_onesided", .at = 30},
            {.id = "b4", .account = "u_onesided", .at = 40},
            {.id = "b5", .account = "u_onesided", .at = 50},
        });
        PhasedCorpus pc2(c2, pcfg);
        ScoreSelection sel;
        sel.scope = MinTweetsScope::EachSide;
        sel.boundary_phase = 2;
        CsvBotScores none = CsvBotScores::from_csv("");
        BotScoreReport r2 = score_accounts(none, pc2, AffiliationMap{}, sel);
        CHECK(r2.selected == 1);
        CHECK(r2.unscored == std::vector<std::string>{"u_both"});
    }
}

TEST_CASE("activity profiles: dense buckets and lifetime rate") {
    std::vector<TweetRecord> records;
    for (int d : {0, 1, 2}) {
        TweetRecord t = testutil::make_tweet(
            {.id = "t" + std::to_string(d), .account = "p1", .at = d * 86400 + 10 * d});
        t.author.statuses_count = 1000;
        t.author.account_created_at = (2 * 86400 + 20) - 10 * 86400;  // 10 days before the end
        records.push_back(std::move(t));
    }
    TweetRecord fresh_rec = testutil::make_tweet({.id = "tx", .account = "newborn", .at = 100});
    fresh_rec.author.statuses_count = 50;
    fresh_rec.author.account_created_at = 2 * 86400 + 20;  // the corpus end: zero whole days
    records.push_back(std::move(fresh_rec));
    Corpus c = Corpus::from_records(std::move(records));

    auto profiles = account_activity_profile(c, {"p1", "ghost", "newborn"});
    REQUIRE(profiles.size() == 3);

    const ActivityProfile& p1 = profiles[0];
    CHECK(p1.counts == std::vector<std::int64_t>{1, 1, 1});
    CHECK(p1.corpus_tweets == 3);
    REQUIRE(p1.lifetime_rate.has_value());
    CHECK(*p1.lifetime_rate == doctest::Approx(100.0));

    const ActivityProfile& ghost = profiles[1];
    CHECK(ghost.corpus_tweets == 0);
    CHECK(ghost.counts == std::vector<std::int64_t>{0, 0, 0});
    CHECK_FALSE(ghost.lifetime_rate.has_value());

    // account created at the corpus end has zero whole days of age
    const ActivityProfile& fresh = profiles[2];
    CHECK(fresh.corpus_tweets == 1);
    CHECK_FALSE(fresh.lifetime_rate.has_value());

    CHECK_THROWS_AS(account_activity_profile(c, {"p1"}, 0), std::invalid_argument);
}
