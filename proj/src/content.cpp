#include "polarscope/content.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <unordered_map>

#include "polarscope/csv.hpp"
#include "polarscope/digest.hpp"
#include "polarscope/text.hpp"
#include "polarscope/url_utils.hpp"

namespace polarscope {

namespace {

int group_index(Affiliation a) {
    switch (a) {
        case Affiliation::Supporter: return 0;
        case Affiliation::Opposer: return 1;
        case Affiliation::Unaffiliated: return 2;
    }
    return 2;
}

// rank desc by count, ties lexicographic ascending
void rank_counts(std::vector<std::pair<std::string, std::int64_t>>& rows) {
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
}

std::string_view trim_ws(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

HashtagComentionNetwork hashtag_comention(const Corpus& corpus, const AffiliationMap& aff,
                                          std::optional<Affiliation> group, int min_weight,
                                          const std::set<std::string>& exclude) {
    HashtagComentionNetwork net;
    net.group = group;
    net.min_weight = min_weight;
    for (const auto& raw : exclude) net.excluded.insert(to_lower(raw));

    // distinct hashtags per in-scope account
    std::map<std::string, std::set<std::string>> tags_of_account;
    for (const auto& [account, idxs] : corpus.by_account()) {
        if (group && aff.of(account) != *group) continue;
        auto& tags = tags_of_account[account];
        for (TweetIndex i : idxs)
            for (const auto& h : corpus[i].hashtags)
                if (!net.excluded.count(h)) tags.insert(h);
    }
    // pair -> distinct account count
    std::map<std::pair<std::string_view, std::string_view>, std::int64_t> pair_accounts;
    for (const auto& [account, tags] : tags_of_account) {
        (void)account;
        for (auto it = tags.begin(); it != tags.end(); ++it)
            for (auto jt = std::next(it); jt != tags.end(); ++jt)
                pair_accounts[{*it, *jt}]++;
    }
    for (const auto& [pair, count] : pair_accounts)
        if (count >= min_weight) net.graph.add_edge(pair.first, pair.second, count);
    net.graph.finalize();
    return net;
}

Graph account_cohashtag_network(const Corpus& corpus, const std::set<std::string>& hashtag_set) {
    if (hashtag_set.empty()) throw std::invalid_argument("hashtag universe is empty");
    // per tag: account -> use count (occurrences, not tweets)
    std::map<std::string_view, std::map<std::string_view, std::int64_t>> uses;
    for (const TweetRecord& t : corpus.tweets())
        for (const auto& h : t.hashtags)
            if (hashtag_set.count(h)) uses[h][t.author.account_id]++;

    std::map<std::pair<std::string_view, std::string_view>, std::int64_t> weights;
    for (const auto& [tag, accounts] : uses) {
        (void)tag;
        for (auto it = accounts.begin(); it != accounts.end(); ++it)
            for (auto jt = std::next(it); jt != accounts.end(); ++jt)
                weights[{it->first, jt->first}] += it->second * jt->second;
    }
    Graph g(false);
    for (const auto& [pair, w] : weights) g.add_edge(pair.first, pair.second, w);
    g.finalize();
    return g;
}

PartisanHashtags partisan_hashtags(const Corpus& corpus, const AffiliationMap& aff, int k,
                                   int global_exclude_k) {
    PartisanHashtags out;
    // occurrence counts per tag, per author group and global
    std::map<std::string, std::array<std::int64_t, 3>> by_group;
    std::map<std::string, std::int64_t> global;
    for (const TweetRecord& t : corpus.tweets()) {
        int gi = group_index(aff.of(t.author.account_id));
        for (const auto& h : t.hashtags) {
            by_group[h][gi]++;
            global[h]++;
        }
    }
    std::vector<std::pair<std::string, std::int64_t>> sup, opp;
    for (const auto& [tag, counts] : by_group) {
        if (counts[0] > 0 && counts[1] == 0) sup.emplace_back(tag, counts[0]);
        if (counts[1] > 0 && counts[0] == 0) opp.emplace_back(tag, counts[1]);
    }
    rank_counts(sup);
    rank_counts(opp);
    if (sup.size() < static_cast<std::size_t>(k) || opp.size() < static_cast<std::size_t>(k))
        out.short_of_k = true;
    if (sup.size() > static_cast<std::size_t>(k)) sup.resize(k);
    if (opp.size() > static_cast<std::size_t>(k)) opp.resize(k);
    out.supporter_seed = std::move(sup);
    out.opposer_seed = std::move(opp);

    std::set<std::string> seeds;
    for (const auto& [tag, _] : out.supporter_seed) seeds.insert(tag);
    for (const auto& [tag, _] : out.opposer_seed) seeds.insert(tag);

    std::set<TweetIndex> subset;
    for (const auto& tag : seeds) {
        auto it = corpus.by_hashtag().find(tag);
        if (it != corpus.by_hashtag().end()) subset.insert(it->second.begin(), it->second.end());
    }
    out.tweet_subset.assign(subset.begin(), subset.end());

    std::set<std::string> universe;
    for (TweetIndex i : out.tweet_subset)
        for (const auto& h : corpus[i].hashtags) universe.insert(h);

    std::vector<std::pair<std::string, std::int64_t>> ranked(global.begin(), global.end());
    rank_counts(ranked);
    for (int i = 0; i < global_exclude_k && i < static_cast<int>(ranked.size()); ++i) {
        out.removed_global.push_back(ranked[i].first);
        universe.erase(ranked[i].first);
    }
    out.universe = std::move(universe);
    return out;
}

UsageDistributions usage_distributions(const Corpus& corpus, const AffiliationMap& aff,
                                       std::size_t top_n) {
    UsageDistributions out;
    std::array<std::map<std::string, std::int64_t>, 3> tag_uses;
    std::array<std::map<std::string, std::int64_t>, 3> url_uses;
    for (const TweetRecord& t : corpus.tweets()) {
        int gi = group_index(aff.of(t.author.account_id));
        GroupUsage& gu = out.groups[gi];
        gu.tweets++;
        gu.hashtag_uses += static_cast<std::int64_t>(t.hashtags.size());
        gu.hashtags_per_tweet_hist[static_cast<int>(t.hashtags.size())]++;
        gu.mentions_per_tweet_hist[static_cast<int>(t.mentions.size())]++;
        for (const auto& h : t.hashtags) tag_uses[gi][h]++;
        for (const auto& u : t.urls) {
            if (is_platform_url(u)) continue;
            url_uses[gi][canonicalize_url(u)]++;
            out.groups[gi].url_uses++;
        }
    }
    for (int gi = 0; gi < 3; ++gi) {
        GroupUsage& gu = out.groups[gi];
        if (gu.tweets > 0)
            gu.hashtags_per_tweet =
                static_cast<double>(gu.hashtag_uses) / static_cast<double>(gu.tweets);
        std::vector<std::pair<std::string, std::int64_t>> tags(tag_uses[gi].begin(),
                                                               tag_uses[gi].end());
        rank_counts(tags);
        if (tags.size() > top_n) tags.resize(top_n);
        for (const auto& [tag, uses] : tags)
            gu.top_hashtags_per_tweet.push_back(
                gu.tweets ? static_cast<double>(uses) / static_cast<double>(gu.tweets) : 0.0);
        gu.top_hashtags = std::move(tags);

        std::vector<std::pair<std::string, std::int64_t>> urls(url_uses[gi].begin(),
                                                               url_uses[gi].end());
        rank_counts(urls);
        gu.unique_urls = static_cast<std::int64_t>(urls.size());
        if (gu.unique_urls > 0)
            gu.mean_url_reuse =
                static_cast<double>(gu.url_uses) / static_cast<double>(gu.unique_urls);
        gu.url_rank_frequency = std::move(urls);
    }
    return out;
}

UrlCategoryMap UrlCategoryMap::from_csv(const std::string& content) {
    UrlCategoryMap out;
    out.provenance_sha256 = sha256_hex(content);
    csv::File f = csv::parse(content);
    bool first = true;
    for (const auto& l : f.lines) {
        if (l.comment || l.fields.empty()) continue;
        if (first) {
            first = false;
            if (l.fields.size() >= 2 && to_lower(l.fields[0]) == "url") continue;  // header
        }
        if (l.fields.size() < 2) throw std::invalid_argument("url coding row needs url,category");
        std::string cat = to_lower(l.fields[1]);
        UrlCategory c;
        if (cat == "narrative") c = UrlCategory::Narrative;
        else if (cat == "conspiracy") c = UrlCategory::Conspiracy;
        else if (cat == "debunking") c = UrlCategory::Debunking;
        else if (cat == "other") c = UrlCategory::Other;
        else throw std::invalid_argument("unknown URL category '" + l.fields[1] + "'");
        out.by_canonical[canonicalize_url(l.fields[0])] = c;
    }
    return out;
}

UrlCategory UrlCategoryMap::lookup(const std::string& canonical_url) const {
    auto it = by_canonical.find(canonical_url);
    return it == by_canonical.end() ? UrlCategory::Uncategorized : it->second;
}

UrlCategoryTable categorize_urls(const PhasedCorpus& phased, const AffiliationMap& aff,
                                 const UrlCategoryMap& map) {
    UrlCategoryTable table;
    table.phase_count = phased.phase_count();
    const int P = table.phase_count;
    for (auto& v : table.cells) v.assign(P + 1, {});
    const Corpus& corpus = phased.corpus();
    for (TweetIndex i = 0; i < corpus.size(); ++i) {
        const TweetRecord& t = corpus[i];
        int gi = group_index(aff.of(t.author.account_id));
        int p = phased.phase_of(i) - 1;
        for (const auto& u : t.urls) {
            if (is_platform_url(u)) continue;
            int cat = static_cast<int>(map.lookup(canonicalize_url(u)));
            table.cells[gi][p][cat]++;
            table.cells[gi][P][cat]++;
        }
    }
    return table;
}

TopHashtagTable top_hashtag_table(const PhasedCorpus& phased, const AffiliationMap& aff,
                                  std::size_t k) {
    TopHashtagTable table;
    table.phase_count = phased.phase_count();
    const int P = table.phase_count;
    for (auto& v : table.cells) v.assign(P + 1, TopHashtagCell{});
    // tweet-occurrence counts: a tweet contributes at most 1 per tag
    std::array<std::vector<std::map<std::string, std::int64_t>>, 3> counts;
    for (auto& v : counts) v.resize(P + 1);
    const Corpus& corpus = phased.corpus();
    for (TweetIndex i = 0; i < corpus.size(); ++i) {
        const TweetRecord& t = corpus[i];
        int gi = group_index(aff.of(t.author.account_id));
        int p = phased.phase_of(i) - 1;
        std::set<std::string_view> seen;
        for (const auto& h : t.hashtags) {
            if (!seen.insert(h).second) continue;
            counts[gi][p][h]++;
            counts[gi][P][h]++;
        }
    }
    for (int gi = 0; gi < 3; ++gi)
        for (int c = 0; c <= P; ++c) {
            std::vector<std::pair<std::string, std::int64_t>> rows(counts[gi][c].begin(),
                                                                   counts[gi][c].end());
            rank_counts(rows);
            TopHashtagCell& cell = table.cells[gi][c];
            if (rows.size() > k) {
                std::int64_t cut = rows[k - 1].second;
                std::size_t end = k;
                while (end < rows.size() && rows[end].second == cut) ++end;
                if (end > k) cell.tie_overflow = true;
                rows.resize(end);
            }
            cell.tags = std::move(rows);
        }
    return table;
}

LocationCoding LocationCoding::from_csv(const std::string& content) {
    LocationCoding out;
    csv::File f = csv::parse(content);
    bool first = true;
    for (const auto& l : f.lines) {
        if (l.comment || l.fields.empty()) continue;
        if (first) {
            first = false;
            if (l.fields.size() >= 2 && to_lower(l.fields[0]) == "location_text") continue;
        }
        if (l.fields.size() < 2) continue;
        out.country_of[std::string(trim_ws(l.fields[0]))] = l.fields[1];
    }
    return out;
}

LocationSummary location_summary(const Corpus& corpus, const AffiliationMap& aff,
                                 const LocationCoding& coding, int min_unaffiliated_uses) {
    LocationSummary out;
    // location string use counts among Unaffiliated accounts
    std::map<std::string, std::int64_t> unaff_strings;
    std::array<std::vector<std::string>, 3> locations;  // per group, one per account
    for (const auto& [account, idxs] : corpus.by_account()) {
        (void)idxs;
        const AccountSnapshot* snap = corpus.last_snapshot(account);
        std::string loc(trim_ws(snap->location_text));
        if (loc.empty()) continue;
        int gi = group_index(aff.of(account));
        locations[gi].push_back(loc);
        if (gi == 2) unaff_strings[loc]++;
    }
    for (int gi = 0; gi < 3; ++gi) {
        std::map<std::string, std::int64_t> per_country;
        std::int64_t considered = 0;
        for (const auto& loc : locations[gi]) {
            if (gi == 2 && unaff_strings[loc] < min_unaffiliated_uses) continue;
            auto it = coding.country_of.find(loc);
            per_country[it == coding.country_of.end() ? "UNCODED" : it->second]++;
            ++considered;
        }
        out.accounts_considered[gi] = considered;
        std::vector<std::pair<std::string, std::int64_t>> rows(per_country.begin(),
                                                               per_country.end());
        rank_counts(rows);
        for (const auto& [country, n] : rows)
            out.groups[gi].push_back(
                {country, n,
                 considered ? static_cast<double>(n) / static_cast<double>(considered) : 0.0});
    }
    return out;
}

}  // namespace polarscope
