#pragma once

// Shared fixture builders for the test suites.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "polarscope/corpus.hpp"
#include "polarscope/graph.hpp"

namespace testutil {

inline std::string node_name(std::size_t i) {
    return "n" + std::to_string(100 + i);  // fixed width keeps id order == index order
}

// Directed G(n, p) with weights in [1, max_w]; no self-loops.
inline polarscope::Graph random_directed(std::mt19937_64& rng, std::size_t n, double p,
                                         std::int64_t max_w = 3) {
    polarscope::Graph g(true);
    for (std::size_t i = 0; i < n; ++i) g.add_node(node_name(i));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> w(1, max_w);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && coin(rng) < p) g.add_edge(node_name(i), node_name(j), w(rng));
    g.finalize();
    return g;
}

// Connected undirected-style graph: random spanning tree + extra arcs, every
// edge inserted in both directions (so directed algorithms see a symmetric
// graph with a unique dominant eigenpair).
inline polarscope::Graph random_connected(std::mt19937_64& rng, std::size_t n, double extra_p,
                                          std::int64_t max_w = 3) {
    polarscope::Graph g(true);
    for (std::size_t i = 0; i < n; ++i) g.add_node(node_name(i));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> w(1, max_w);
    for (std::size_t i = 1; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::size_t j = pick(rng);
        std::int64_t wt = w(rng);
        g.add_edge(node_name(i), node_name(j), wt);
        g.add_edge(node_name(j), node_name(i), wt);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng) < extra_p) {
                std::int64_t wt = w(rng);
                g.add_edge(node_name(i), node_name(j), wt);
                g.add_edge(node_name(j), node_name(i), wt);
            }
    g.finalize();
    return g;
}

struct TweetSpec {
    std::string id;
    std::string account;
    polarscope::Timestamp at = 0;
    std::string text;
    std::vector<std::string> hashtags;
    std::vector<std::string> mentions;
    std::vector<std::string> urls;
    std::string retweet_of_id, retweet_of_account;
    std::string reply_to_id, reply_to_account;
    std::string quote_of_id, quote_of_account;
};

inline polarscope::TweetRecord make_tweet(const TweetSpec& s) {
    polarscope::TweetRecord t;
    t.tweet_id = s.id;
    t.created_at = s.at;
    t.author.account_id = s.account;
    t.author.screen_name = s.account;
    t.text = s.text;
    t.hashtags = s.hashtags;
    t.mentions = s.mentions;
    t.urls = s.urls;
    if (!s.retweet_of_id.empty())
        t.retweet_of = polarscope::TweetRef{s.retweet_of_id, s.retweet_of_account};
    if (!s.reply_to_id.empty())
        t.reply_to = polarscope::TweetRef{s.reply_to_id, s.reply_to_account};
    if (!s.quote_of_id.empty())
        t.quote_of = polarscope::TweetRef{s.quote_of_id, s.quote_of_account};
    return t;
}

inline polarscope::Corpus corpus_of(const std::vector<TweetSpec>& specs) {
    std::vector<polarscope::TweetRecord> records;
    records.reserve(specs.size());
    for (const TweetSpec& s : specs) records.push_back(make_tweet(s));
    return polarscope::Corpus::from_records(std::move(records));
}

}  // namespace testutil
