#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "polarscope/coordination.hpp"
#include "polarscope/graph_io.hpp"
#include "polarscope/url_utils.hpp"

using namespace polarscope;

namespace {

using EdgeMap = std::map<std::pair<std::string, std::string>, std::int64_t>;

EdgeMap edges_of(const CoActivityGraph& g) {
    EdgeMap out;
    for (const auto& e : g.accounts.edges()) {
        std::string a = g.accounts.id(e.from), b = g.accounts.id(e.to);
        if (b < a) std::swap(a, b);
        out[{a, b}] = e.weight;
    }
    return out;
}

EdgeMap edges_of(
    const std::vector<std::pair<std::pair<std::string, std::string>, std::int64_t>>& rows) {
    EdgeMap out;
    for (const auto& [pair, w] : rows) out[pair] = w;
    return out;
}

// One tweet per raw event, shaped so the reason key comes out as written.
Corpus embed(const std::vector<oracle::Event>& events, CoActivityKind kind) {
    std::vector<testutil::TweetSpec> specs;
    int n = 0;
    for (const auto& e : events) {
        testutil::TweetSpec s;
        s.id = "t" + std::to_string(100000 + n++);
        s.account = e.account;
        s.at = e.at;
        switch (kind) {
            case CoActivityKind::CoRetweet:
                s.retweet_of_id = e.reason;  // ghost original outside the corpus
                s.retweet_of_account = "ghost";
                break;
            case CoActivityKind::CoHashtag:
                s.hashtags = {e.reason};
                break;
            case CoActivityKind::CoUrl:
                s.urls = {"https://" + e.reason + ".example.com/x"};
                break;
            case CoActivityKind::CoDomain:
                s.urls = {"https://www." + e.reason + ".com/p" + std::to_string(n)};
                break;
            case CoActivityKind::CoMention:
                s.mentions = {e.reason};
                break;
        }
        specs.push_back(std::move(s));
    }
    return testutil::corpus_of(specs);
}

// The reason key the library should derive for an embedded event.
std::string expected_reason(const std::string& reason, CoActivityKind kind) {
    switch (kind) {
        case CoActivityKind::CoUrl: return "https://" + reason + ".example.com/x";
        case CoActivityKind::CoDomain: return reason + ".com";
        default: return reason;
    }
}

}  // namespace

TEST_CASE("sliding-window co-activity matches the all-pairs oracle for every kind") {
    std::mt19937_64 rng(4711);
    std::uniform_int_distribution<int> acct(0, 24);
    std::uniform_int_distribution<int> reason(0, 11);
    std::uniform_int_distribution<std::int64_t> when(0, 500);
    for (CoActivityKind kind :
         {CoActivityKind::CoRetweet, CoActivityKind::CoHashtag, CoActivityKind::CoUrl,
          CoActivityKind::CoDomain, CoActivityKind::CoMention}) {
        std::vector<oracle::Event> events;
        for (int i = 0; i < 250; ++i)
            events.push_back({"acc" + std::to_string(10 + acct(rng)),
                              "rsn" + std::to_string(reason(rng)), when(rng)});
        Corpus c = embed(events, kind);

        CoActivityParams params;
        params.kind = kind;
        params.gamma_seconds = 40;
        CoActivityGraph got = co_activity(c, params);

        std::vector<oracle::Event> keyed = events;
        for (auto& e : keyed) e.reason = expected_reason(e.reason, kind);
        EdgeMap expect = edges_of(oracle::co_activity(keyed, 40));
        CHECK(edges_of(got) == expect);
    }
}

TEST_CASE("retweet reasons resolve through chains to the root original") {
    Corpus c = testutil::corpus_of({
        {.id = "o1", .account = "root_author", .at = 0},
        {.id = "r1", .account = "ra", .at = 10, .retweet_of_id = "o1",
         .retweet_of_account = "root_author"},
        // a retweet of the retweet shares the same root reason
        {.id = "r2", .account = "rb", .at = 15, .retweet_of_id = "r1", .retweet_of_account = "ra"},
    });
    CoActivityParams params;
    params.gamma_seconds = 30;
    CoActivityGraph g = co_activity(c, params);
    EdgeMap e = edges_of(g);
    REQUIRE(e.size() == 1);
    CHECK(e.at({"ra", "rb"}) == 1);
    // the original author never co-acted: posting the original is not an event
    CHECK_FALSE(g.accounts.has_node("root_author"));
}

TEST_CASE("url reasons are canonical, so spelling variants pair up") {
    Corpus c = testutil::corpus_of({
        {.id = "t1", .account = "u1", .at = 0, .urls = {"https://Example.COM/a/"}},
        {.id = "t2", .account = "u2", .at = 5, .urls = {"https://example.com/a"}},
    });
    CoActivityParams params;
    params.kind = CoActivityKind::CoUrl;
    params.gamma_seconds = 60;
    EdgeMap e = edges_of(co_activity(c, params));
    REQUIRE(e.size() == 1);
    CHECK(e.at({"u1", "u2"}) == 1);

    SUBCASE("exclusions match the canonical key") {
        params.exclusions = {canonicalize_url("https://example.com/a/")};
        CHECK(co_activity(c, params).accounts.node_count() == 0);
    }
}

TEST_CASE("a wider window never loses pairs") {
    std::mt19937_64 rng(88);
    std::uniform_int_distribution<int> acct(0, 9);
    std::uniform_int_distribution<std::int64_t> when(0, 300);
    std::vector<oracle::Event> events;
    for (int i = 0; i < 120; ++i)
        events.push_back({"acc" + std::to_string(acct(rng)), "same", when(rng)});
    Corpus c = embed(events, CoActivityKind::CoHashtag);
    CoActivityParams narrow, wide;
    narrow.kind = wide.kind = CoActivityKind::CoHashtag;
    narrow.gamma_seconds = 10;
    wide.gamma_seconds = 100;
    EdgeMap en = edges_of(co_activity(c, narrow));
    EdgeMap ew = edges_of(co_activity(c, wide));
    for (const auto& [pair, w] : en) {
        REQUIRE(ew.count(pair) == 1);
        CHECK(ew.at(pair) >= w);
    }
}

TEST_CASE("fixed bins anchor at the first corpus tweet and count bins, not pairs") {
    Corpus c = testutil::corpus_of({
        {.id = "t0", .account = "anchor", .at = 0},  // sets t0; contributes no event
        {.id = "t1", .account = "a", .at = 10, .hashtags = {"h"}},
        {.id = "t2", .account = "a", .at = 20, .hashtags = {"h"}},
        {.id = "t3", .account = "b", .at = 30, .hashtags = {"h"}},
        {.id = "t4", .account = "a", .at = 59, .hashtags = {"h"}},
        {.id = "t5", .account = "d", .at = 61, .hashtags = {"h"}},
    });
    CoActivityParams params;
    params.kind = CoActivityKind::CoHashtag;
    params.gamma_seconds = 60;
    params.windowing = Windowing::FixedBins;
    EdgeMap e = edges_of(co_activity(c, params));
    // bin [0,60): {a,b}; bin [60,120): {d} alone
    REQUIRE(e.size() == 1);
    CHECK(e.at({"a", "b"}) == 1);  // a acted three times in the bin, still one count

    SUBCASE("the sliding window pairs across the bin edge") {
        params.windowing = Windowing::Sliding;
        EdgeMap es = edges_of(co_activity(c, params));
        CHECK(es.count({"a", "d"}) == 1);  // 59 vs 61
        CHECK(es.at({"a", "b"}) == 3);     // each of a's events pairs with b's
    }
}

TEST_CASE("minimum edge weight filters and parameters validate") {
    Corpus c = testutil::corpus_of({
        {.id = "t1", .account = "a", .at = 0, .hashtags = {"h"}},
        {.id = "t2", .account = "b", .at = 5, .hashtags = {"h"}},
        {.id = "t3", .account = "a", .at = 10, .hashtags = {"h"}},
        {.id = "t4", .account = "c", .at = 12, .hashtags = {"h"}},
    });
    CoActivityParams params;
    params.kind = CoActivityKind::CoHashtag;
    params.gamma_seconds = 6;
    // pairs: (a@0,b@5), (b@5,a@10), (a@10,c@12) -> ab:2 ac:1 bc:0
    params.min_edge_weight = 2;
    EdgeMap e = edges_of(co_activity(c, params));
    REQUIRE(e.size() == 1);
    CHECK(e.at({"a", "b"}) == 2);
    CHECK(co_activity(c, params).accounts.node_count() == 2);  // c pruned with its edge

    CoActivityParams bad;
    bad.gamma_seconds = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.gamma_seconds = 60;
    bad.min_edge_weight = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("bigraph keeps every acting account and tallies reason uses") {
    Corpus c = testutil::corpus_of({
        {.id = "t1", .account = "m1", .at = 0, .mentions = {"target"}},
        {.id = "t2", .account = "m1", .at = 8, .mentions = {"target"}},
        {.id = "t3", .account = "m2", .at = 5, .mentions = {"target"}},
        {.id = "t4", .account = "m3", .at = 500, .mentions = {"other"}},
    });
    CoActivityParams params;
    params.kind = CoActivityKind::CoMention;
    params.gamma_seconds = 60;
    CoActivityGraph bg = bigraph(c, params);
    CHECK(bg.accounts.has_node("m3"));  // no co-action, still a node
    EdgeMap e = edges_of(bg);
    CHECK(e.at({"m1", "m2"}) == 2);
    REQUIRE(bg.reason_edges.count("target") == 1);
    CHECK(bg.reason_edges.at("target").at("m1") == 2);
    CHECK(bg.reason_edges.at("target").at("m2") == 1);
    CHECK(bg.reason_edges.at("other").at("m3") == 1);

    SUBCASE("plain co-activity drops the unpaired account") {
        CoActivityGraph plain = co_activity(c, params);
        CHECK_FALSE(plain.accounts.has_node("m3"));
        CHECK(plain.reason_edges.empty());
    }
}

TEST_CASE("coordination report: component order, affiliations, clique census") {
    CoActivityGraph g;
    g.kind = CoActivityKind::CoRetweet;
    const char* quad[] = {"a", "b", "c", "d"};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) g.accounts.add_edge(quad[i], quad[j]);
    g.accounts.add_edge("a", "e");  // pendant keeps the component at 5 members
    g.accounts.add_edge("x", "y");
    g.accounts.add_edge("y", "z");
    g.accounts.add_edge("z", "x");
    g.accounts.finalize();

    AffiliationMap aff;
    aff.set("a", Affiliation::Supporter);
    aff.set("b", Affiliation::Supporter);
    aff.set("x", Affiliation::Opposer);

    CoordinationReport rep = coordination_report(g, aff);
    CHECK(rep.total_components == 2);
    REQUIRE(rep.components.size() == 2);

    const ComponentSummary& big = rep.components[0];
    CHECK(big.members == std::vector<std::string>{"a", "b", "c", "d", "e"});
    CHECK(big.affiliation_counts.at(Affiliation::Supporter) == 2);
    CHECK(big.affiliation_counts.at(Affiliation::Unaffiliated) == 3);
    CHECK(big.max_clique_size == 4);
    CHECK(big.clique_census.at(4) == 1);
    CHECK(big.clique_census.count(3) == 0);  // the pendant pair is below census size
    CHECK_FALSE(big.clique_search_capped);

    const ComponentSummary& tri = rep.components[1];
    CHECK(tri.members == std::vector<std::string>{"x", "y", "z"});
    CHECK(tri.max_clique_size == 3);
    CHECK(tri.clique_census.at(3) == 1);

    SUBCASE("top_components truncates the detail list, not the total") {
        CoordinationReport top1 = coordination_report(g, aff, 1);
        CHECK(top1.total_components == 2);
        CHECK(top1.components.size() == 1);
    }
    SUBCASE("a tiny step budget caps the clique search") {
        CoordinationReport capped = coordination_report(g, aff, 5, 1);
        CHECK(capped.components[0].clique_search_capped);
    }
}

TEST_CASE("cliques of seven or more share one census bucket") {
    CoActivityGraph g;
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j)
            g.accounts.add_edge("k" + std::to_string(i), "k" + std::to_string(j));
    g.accounts.finalize();
    CoordinationReport rep = coordination_report(g, AffiliationMap{});
    REQUIRE(rep.components.size() == 1);
    CHECK(rep.components[0].max_clique_size == 8);
    CHECK(rep.components[0].clique_census.at(7) == 1);
}

TEST_CASE("coordination graphml labels accounts and reasons") {
    Corpus c = testutil::corpus_of({
        {.id = "t1", .account = "m1", .at = 0, .mentions = {"target"}},
        {.id = "t2", .account = "m2", .at = 5, .mentions = {"target"}},
    });
    CoActivityParams params;
    params.kind = CoActivityKind::CoMention;
    params.gamma_seconds = 60;
    CoActivityGraph bg = bigraph(c, params);
    AffiliationMap aff;
    aff.set("m1", Affiliation::Supporter);

    std::string xml = coordination_graphml(bg, aff);
    ImportedGraph imported = read_graphml_string(xml);
    CHECK(imported.graph.node_count() == 3);
    CHECK(imported.node_attrs.at("m1").at("kind") == "account");
    CHECK(imported.node_attrs.at("m1").at("affiliation") == "Supporter");
    CHECK(imported.node_attrs.at("m2").at("affiliation") == "Unaffiliated");
    CHECK(imported.node_attrs.at("reason:target").at("kind") == "reason");
    CHECK(imported.node_attrs.at("reason:target").at("subtype") == "mentioned_account");
    CHECK(imported.node_attrs.at("m1").count("subtype") == 0);  // omitted for accounts
    // account-account edge plus one use edge per account
    CHECK(imported.graph.edge_count() == 3);
}
