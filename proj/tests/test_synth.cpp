#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "polarscope/coordination.hpp"
#include "polarscope/corpus.hpp"
#include "polarscope/inauthenticity.hpp"
#include "polarscope/io.hpp"
#include "polarscope/synth.hpp"

using namespace polarscope;

namespace {

ScenarioConfig small_scenario() {
    ScenarioConfig cfg;
    cfg.seed = 42;
    cfg.days = 7;
    cfg.phase_boundaries = {cfg.start_time + 2 * 86400, cfg.start_time + 4 * 86400};
    cfg.supporters.n = 30;
    cfg.supporters.originals_per_account = 3.0;
    cfg.supporters.retweets_per_account = 2.0;
    cfg.supporters.hashtags = {"update", "fires"};
    cfg.supporters.exclusive_hashtags = {"supfact1", "supfact2"};
    cfg.opposers.n = 20;
    cfg.opposers.originals_per_account = 3.0;
    cfg.opposers.retweets_per_account = 2.0;
    cfg.opposers.hashtags = {"update", "fires"};
    cfg.opposers.exclusive_hashtags = {"oppclaim1"};
    cfg.unaffiliated.n = 25;
    cfg.unaffiliated.originals_per_account = 2.0;
    cfg.partition.p_in = 0.15;
    cfg.partition.p_out = 0.01;

    CliqueSpec rt;
    rt.kind = "co_retweet";
    rt.group = Affiliation::Unaffiliated;
    rt.size = 5;
    rt.gamma_true = 30;
    rt.reasons = 3;
    cfg.cliques.push_back(rt);
    CliqueSpec ht;
    ht.kind = "co_hashtag";
    ht.group = Affiliation::Supporter;
    ht.size = 4;
    ht.gamma_true = 45;
    ht.reasons = 2;
    cfg.cliques.push_back(ht);

    BurstSpec burst;
    burst.count = 15;
    burst.window = 540;
    burst.group = Affiliation::Opposer;
    cfg.bursts.push_back(burst);

    BotProfile bot;
    bot.count = 2;
    bot.statuses = 90000;
    bot.age_days = 900;
    bot.friends = 800;
    bot.followers = 120;
    bot.tweets_per_day = 10.0;
    cfg.bots.push_back(bot);

    cfg.background.accounts = 10;
    cfg.background.events = 60;
    cfg.background.reasons = 5;
    return cfg;
}

std::optional<std::int64_t> pair_weight(const Graph& g, const std::string& a,
                                        const std::string& b) {
    auto na = g.find(a), nb = g.find(b);
    if (!na || !nb) return std::nullopt;
    if (auto w = g.edge_weight(*na, *nb)) return w;
    return g.edge_weight(*nb, *na);
}

}  // namespace

TEST_CASE("a fixed seed regenerates the corpus byte for byte") {
    ScenarioConfig cfg = small_scenario();
    std::ostringstream first, second;
    GroundTruth t1 = generate(cfg, first);
    GroundTruth t2 = generate(cfg, second);
    CHECK(first.str() == second.str());
    CHECK(t1.to_json() == t2.to_json());
    CHECK_FALSE(first.str().empty());

    SUBCASE("a different seed diverges") {
        cfg.seed = 43;
        std::ostringstream other;
        generate(cfg, other);
        CHECK(other.str() != first.str());
    }
}

TEST_CASE("generated corpus parses cleanly and matches the recorded truth") {
    ScenarioConfig cfg = small_scenario();
    std::ostringstream out;
    GroundTruth truth = generate(cfg, out);
    std::istringstream in(out.str());
    ParseReport report;
    Corpus corpus = Corpus::from_jsonl(in, &report);

    CHECK(report.skipped_malformed == 0);
    CHECK(report.skipped_duplicate == 0);
    CHECK(static_cast<std::int64_t>(corpus.size()) == truth.tweets);
    CHECK(report.parsed == truth.tweets);

    SUBCASE("affiliation lists cover the planted populations") {
        CHECK(std::is_sorted(truth.supporters.begin(), truth.supporters.end()));
        CHECK(std::is_sorted(truth.opposers.begin(), truth.opposers.end()));
        CHECK(truth.true_affiliation("S000000") == Affiliation::Supporter);
        CHECK(truth.true_affiliation("O000000") == Affiliation::Opposer);
        CHECK(truth.true_affiliation("BOT0") == Affiliation::Unaffiliated);
        // the burst troll was drawn from the opposer population
        CHECK(truth.true_affiliation("TROLL0") == Affiliation::Opposer);
        AffiliationMap aff = truth.affiliations();
        CHECK(aff.of("S000012") == Affiliation::Supporter);
        CHECK(aff.of("G000003") == Affiliation::Unaffiliated);
        CHECK(aff.group_sizes()[Affiliation::Supporter] ==
              static_cast<std::int64_t>(truth.supporters.size()));
    }

    SUBCASE("planted cliques are pairwise coordinated at their true window") {
        REQUIRE(truth.cliques.size() == 2);
        for (const PlantedClique& q : truth.cliques) {
            CHECK(static_cast<int>(q.reason_keys.size()) >= 1);
            CoActivityParams params;
            auto kind = co_activity_kind_from(q.kind);
            REQUIRE(kind.has_value());
            params.kind = *kind;
            params.gamma_seconds = q.gamma_true;
            CoActivityGraph g = co_activity(corpus, params);
            for (std::size_t i = 0; i < q.members.size(); ++i)
                for (std::size_t j = i + 1; j < q.members.size(); ++j) {
                    auto w = pair_weight(g.accounts, q.members[i], q.members[j]);
                    REQUIRE(w.has_value());
                    // one co-event per planted reason, plus any incidental ones
                    CHECK(*w >= static_cast<std::int64_t>(q.reason_keys.size()));
                }
        }
        // the supporter clique recruited supporter accounts
        const PlantedClique& sup_clique = truth.cliques[1];
        for (const std::string& m : sup_clique.members)
            CHECK(truth.true_affiliation(m) == Affiliation::Supporter);
    }

    SUBCASE("the planted burst is recovered by the detector") {
        REQUIRE(truth.bursts.size() == 1);
        const PlantedBurst& b = truth.bursts[0];
        CHECK(b.source == "TROLL0");
        CHECK(b.count == 15);
        BurstParams params;
        params.window_seconds = b.window;
        std::vector<ReplyBurst> found = detect_reply_bursts(corpus, params);
        bool hit = false;
        for (const ReplyBurst& rb : found)
            if (rb.source == b.source && rb.target == b.target) {
                hit = true;
                CHECK(rb.count == b.count);
                CHECK(rb.start == b.start);
                CHECK(rb.end - rb.start <= b.window);
            }
        CHECK(hit);
    }

    SUBCASE("bots carry their profile and expected corpus activity") {
        REQUIRE(truth.bots == std::vector<std::string>{"BOT0", "BOT1"});
        const AccountSnapshot* snap = corpus.last_snapshot("BOT0");
        REQUIRE(snap != nullptr);
        CHECK(snap->statuses_count == 90000);
        CHECK(snap->friends_count == 800);
        CHECK(snap->followers_count == 120);
        CHECK(snap->age_days(corpus.last_time()) >= 900);
        // tweets_per_day * days, emitted exactly
        CHECK(corpus.by_account().at("BOT0").size() == 70);
    }
}

TEST_CASE("exclusive hashtags stay inside their group when no content crosses") {
    ScenarioConfig cfg;
    cfg.seed = 7;
    cfg.days = 5;
    cfg.supporters.n = 20;
    cfg.supporters.originals_per_account = 4.0;
    cfg.supporters.retweets_per_account = 2.0;
    cfg.supporters.intra_fraction = 1.0;
    cfg.supporters.hashtags = {"common"};
    cfg.supporters.exclusive_hashtags = {"suponly"};
    cfg.opposers.n = 20;
    cfg.opposers.originals_per_account = 4.0;
    cfg.opposers.retweets_per_account = 2.0;
    cfg.opposers.intra_fraction = 1.0;
    cfg.opposers.hashtags = {"common"};
    cfg.opposers.exclusive_hashtags = {"opponly"};

    std::ostringstream out;
    GroundTruth truth = generate(cfg, out);
    CHECK(truth.supporter_hashtags == std::vector<std::string>{"suponly"});
    CHECK(truth.opposer_hashtags == std::vector<std::string>{"opponly"});

    std::istringstream in(out.str());
    Corpus corpus = Corpus::from_jsonl(in);
    bool crossed = false;
    for (const TweetRecord& t : corpus.tweets()) {
        Affiliation a = truth.true_affiliation(t.author.account_id);
        for (const std::string& h : t.hashtags) {
            if (a == Affiliation::Opposer && h == "suponly") crossed = true;
            if (a == Affiliation::Supporter && h == "opponly") crossed = true;
        }
    }
    CHECK_FALSE(crossed);
}

TEST_CASE("pattern mix is approximately honored") {
    ScenarioConfig cfg;
    cfg.seed = 11;
    cfg.days = 5;
    cfg.supporters.n = 100;
    cfg.supporters.originals_per_account = 4.0;
    cfg.supporters.pattern_mix = {0.5, 0.0, 0.0, 0.0, 0.5};
    std::ostringstream out;
    generate(cfg, out);
    std::istringstream in(out.str());
    Corpus corpus = Corpus::from_jsonl(in);
    std::int64_t entity_only = 0, total = 0;
    for (const TweetRecord& t : corpus.tweets()) {
        ++total;
        if (classify_text(t.text) == TextPattern::HashtagsOnly) ++entity_only;
    }
    REQUIRE(total > 200);
    double frac = static_cast<double>(entity_only) / static_cast<double>(total);
    CHECK(frac > 0.38);
    CHECK(frac < 0.62);
}

TEST_CASE("scenario validation rejects inconsistent plans") {
    ScenarioConfig base = small_scenario();
    CHECK_NOTHROW(base.validate());

    SUBCASE("clique larger than its pool") {
        ScenarioConfig c = base;
        c.cliques[0].size = c.unaffiliated.n + 1;
        CHECK_THROWS_WITH_AS(c.validate(), "scenario: clique size must fit inside its group",
                             std::invalid_argument);
    }
    SUBCASE("unknown co-activity kind") {
        ScenarioConfig c = base;
        c.cliques[0].kind = "co_sneeze";
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("probabilities must be probabilities") {
        ScenarioConfig c = base;
        c.partition.p_in = 1.5;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("pattern mix cannot sum above one") {
        ScenarioConfig c = base;
        c.supporters.pattern_mix = {0.9, 0.9, 0.0, 0.0, 0.0};
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("phase boundaries must increase inside the span") {
        ScenarioConfig c = base;
        c.phase_boundaries = {c.start_time + 86400, c.start_time + 86400};
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        c.phase_boundaries = {c.start_time + 100 * 86400};
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("background events need accounts and reasons") {
        ScenarioConfig c = base;
        c.background = {0, 100, 0};
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("bursts need a positive window") {
        ScenarioConfig c = base;
        c.bursts[0].window = 0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("days must be positive") {
        ScenarioConfig c = base;
        c.days = 0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
}

TEST_CASE("scenario json covers groups, plants, and iso timestamps") {
    ScenarioConfig cfg = ScenarioConfig::from_json(R"({
        "seed": 9,
        "start_time": "2019-11-01T00:00:00Z",
        "days": 10,
        "phase_boundaries": ["2019-11-04T06:00:00Z", 1572918400],
        "supporters": {"n": 12, "originals_per_account": 2.5,
                       "exclusive_hashtags": ["tagx"],
                       "pattern_mix": {"hashtags_only": 0.2, "other": 0.8}},
        "opposers": {"n": 8},
        "unaffiliated": {"n": 5},
        "planted_partition": {"p_in": 0.2, "p_out": 0.01},
        "cliques": [{"kind": "co_url", "group": "Opposer", "size": 3,
                     "gamma_true": 20, "reasons": 4}],
        "bursts": [{"count": 12, "window": 300, "group": "Supporter", "text": "#x #y"}],
        "bots": [{"count": 1, "statuses": 50000, "tweets_per_day": 5.5}],
        "background": {"accounts": 4, "events": 10, "reasons": 2}
    })");
    CHECK(cfg.seed == 9);
    CHECK(cfg.start_time == 1572566400);
    CHECK(cfg.days == 10);
    REQUIRE(cfg.phase_boundaries.size() == 2);
    CHECK(cfg.phase_boundaries[0] == 1572847200);
    CHECK(cfg.phase_boundaries[1] == 1572918400);
    CHECK(cfg.supporters.n == 12);
    CHECK(cfg.supporters.originals_per_account == 2.5);
    CHECK(cfg.supporters.exclusive_hashtags == std::vector<std::string>{"tagx"});
    CHECK(cfg.supporters.pattern_mix[0] == 0.2);
    CHECK(cfg.supporters.pattern_mix[4] == 0.8);
    CHECK(cfg.partition.p_in == 0.2);
    REQUIRE(cfg.cliques.size() == 1);
    CHECK(cfg.cliques[0].kind == "co_url");
    CHECK(cfg.cliques[0].group == Affiliation::Opposer);
    CHECK(cfg.cliques[0].reasons == 4);
    REQUIRE(cfg.bursts.size() == 1);
    CHECK(cfg.bursts[0].text == "#x #y");
    REQUIRE(cfg.bots.size() == 1);
    CHECK(cfg.bots[0].tweets_per_day == 5.5);
    CHECK(cfg.background.accounts == 4);

    CHECK_THROWS_AS(ScenarioConfig::from_json(R"({"start_time": "whenever"})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(ScenarioConfig::from_json(R"({"cliques": [{"group": "Fencesitter"}]})"),
                    std::invalid_argument);
}

TEST_CASE("ground truth json round-trips") {
    ScenarioConfig cfg = small_scenario();
    std::ostringstream out;
    GroundTruth truth = generate(cfg, out);
    GroundTruth back = GroundTruth::from_json(truth.to_json());
    CHECK(back.seed == truth.seed);
    CHECK(back.supporters == truth.supporters);
    CHECK(back.opposers == truth.opposers);
    CHECK(back.bots == truth.bots);
    CHECK(back.tweets == truth.tweets);
    CHECK(back.supporter_hashtags == truth.supporter_hashtags);
    CHECK(back.opposer_hashtags == truth.opposer_hashtags);
    REQUIRE(back.cliques.size() == truth.cliques.size());
    for (std::size_t i = 0; i < back.cliques.size(); ++i) {
        CHECK(back.cliques[i].kind == truth.cliques[i].kind);
        CHECK(back.cliques[i].members == truth.cliques[i].members);
        CHECK(back.cliques[i].gamma_true == truth.cliques[i].gamma_true);
        CHECK(back.cliques[i].reason_keys == truth.cliques[i].reason_keys);
    }
    REQUIRE(back.bursts.size() == truth.bursts.size());
    CHECK(back.bursts[0].source == truth.bursts[0].source);
    CHECK(back.bursts[0].target == truth.bursts[0].target);
    CHECK(back.bursts[0].count == truth.bursts[0].count);
    CHECK(back.bursts[0].window == truth.bursts[0].window);
    CHECK(back.bursts[0].start == truth.bursts[0].start);
}

TEST_CASE("generate_files writes the corpus and truth to disk") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "polarscope_synth_test";
    fs::create_directories(dir);
    ScenarioConfig cfg = small_scenario();
    fs::path corpus_path = dir / "corpus.jsonl";
    fs::path truth_path = dir / "truth.json";
    GroundTruth truth = generate_files(cfg, corpus_path.string(), truth_path.string());

    std::ostringstream expect;
    GroundTruth same = generate(cfg, expect);
    CHECK(read_file_to_string(corpus_path.string()) == expect.str());
    CHECK(read_file_to_string(truth_path.string()) == same.to_json());
    CHECK(truth.tweets == same.tweets);

    GroundTruth loaded = GroundTruth::from_json_file(truth_path.string());
    CHECK(loaded.supporters == truth.supporters);
    fs::remove_all(dir);
}
