#include "polarscope/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <unordered_set>

#include "polarscope/text.hpp"

namespace polarscope {

using nlohmann::json;

void ParseReport::note(std::int64_t line_no, std::string_view why) {
    if (samples.size() < kMaxSamples)
        samples.push_back("line " + std::to_string(line_no) + ": " + std::string(why));
}

namespace {

std::optional<std::string> as_id_string(const json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s.empty()) return std::nullopt;
        return s;
    }
    if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return std::to_string(j.get<std::uint64_t>());
    return std::nullopt;
}

std::int64_t as_count(const json& j) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_unsigned()) return static_cast<std::int64_t>(j.get<std::uint64_t>());
    if (j.is_number_float()) return static_cast<std::int64_t>(j.get<double>());
    if (j.is_string()) {
        try {
            return std::stoll(j.get<std::string>());
        } catch (...) {
            return 0;
        }
    }
    return 0;
}

std::optional<Timestamp> parse_any_time(const json& j) {
    if (!j.is_string()) return std::nullopt;
    const std::string s = j.get<std::string>();
    if (auto t = parse_iso8601(s)) return t;
    return parse_twitter_time(s);
}

std::string normalize_hashtag(std::string_view raw) {
    if (!raw.empty() && raw.front() == '#') raw.remove_prefix(1);
    return to_lower(raw);
}

bool looks_like_v11(const json& j) {
    if (j.contains("id_str")) return true;
    auto it = j.find("entities");
    return it != j.end() && it->is_object() && it->contains("user_mentions");
}

std::optional<TweetRef> ref_from(const json& j, const char* id_key, const char* user_key) {
    if (!j.is_object()) return std::nullopt;
    auto idit = j.find(id_key);
    if (idit == j.end()) return std::nullopt;
    auto id = as_id_string(*idit);
    if (!id) return std::nullopt;
    TweetRef r;
    r.tweet_id = *id;
    if (auto uit = j.find(user_key); uit != j.end())
        if (auto uid = as_id_string(*uit)) r.account_id = *uid;
    return r;
}

// Canonical schema.
std::optional<TweetRecord> record_from_canonical(const json& j, std::string& err) {
    TweetRecord r;
    auto id = j.contains("id") ? as_id_string(j["id"]) : std::nullopt;
    if (!id) { err = "missing field 'id'"; return std::nullopt; }
    r.tweet_id = *id;
    auto t = j.contains("created_at") ? parse_any_time(j["created_at"]) : std::nullopt;
    if (!t) { err = "bad or missing 'created_at'"; return std::nullopt; }
    r.created_at = *t;
    auto uit = j.find("user");
    if (uit == j.end() || !uit->is_object()) { err = "missing object 'user'"; return std::nullopt; }
    const json& u = *uit;
    auto uid = u.contains("id") ? as_id_string(u["id"]) : std::nullopt;
    if (!uid) { err = "missing field 'user.id'"; return std::nullopt; }
    r.author.account_id = *uid;
    if (u.contains("screen_name") && u["screen_name"].is_string())
        r.author.screen_name = u["screen_name"].get<std::string>();
    if (u.contains("location") && u["location"].is_string())
        r.author.location_text = u["location"].get<std::string>();
    if (u.contains("friends_count")) r.author.friends_count = as_count(u["friends_count"]);
    if (u.contains("followers_count")) r.author.followers_count = as_count(u["followers_count"]);
    if (u.contains("statuses_count")) r.author.statuses_count = as_count(u["statuses_count"]);
    if (u.contains("created_at"))
        if (auto ct = parse_any_time(u["created_at"])) r.author.account_created_at = *ct;
    if (j.contains("text") && j["text"].is_string()) r.text = j["text"].get<std::string>();
    if (j.contains("lang") && j["lang"].is_string()) r.lang = j["lang"].get<std::string>();
    if (auto eit = j.find("entities"); eit != j.end() && eit->is_object()) {
        const json& e = *eit;
        if (auto h = e.find("hashtags"); h != e.end() && h->is_array())
            for (const auto& tag : *h)
                if (tag.is_string()) r.hashtags.push_back(normalize_hashtag(tag.get<std::string>()));
        if (auto m = e.find("mentions"); m != e.end() && m->is_array())
            for (const auto& men : *m)
                if (auto mid = as_id_string(men)) r.mentions.push_back(*mid);
        if (auto uu = e.find("urls"); uu != e.end() && uu->is_array())
            for (const auto& url : *uu)
                if (url.is_string()) r.urls.push_back(url.get<std::string>());
    }
    if (j.contains("retweet_of")) r.retweet_of = ref_from(j["retweet_of"], "id", "user_id");
    if (j.contains("reply_to")) r.reply_to = ref_from(j["reply_to"], "id", "user_id");
    if (j.contains("quote_of")) r.quote_of = ref_from(j["quote_of"], "id", "user_id");
    return r;
}

// Twitter API v1.1 shape.
std::optional<TweetRecord> record_from_v11(const json& j, std::string& err) {
    TweetRecord r;
    auto id = j.contains("id_str") ? as_id_string(j["id_str"])
              : j.contains("id")   ? as_id_string(j["id"])
                                   : std::nullopt;
    if (!id) { err = "missing field 'id_str'"; return std::nullopt; }
    r.tweet_id = *id;
    auto t = j.contains("created_at") ? parse_any_time(j["created_at"]) : std::nullopt;
    if (!t) { err = "bad or missing 'created_at'"; return std::nullopt; }
    r.created_at = *t;
    auto uit = j.find("user");
    if (uit == j.end() || !uit->is_object()) { err = "missing object 'user'"; return std::nullopt; }
    const json& u = *uit;
    auto uid = u.contains("id_str") ? as_id_string(u["id_str"])
               : u.contains("id")   ? as_id_string(u["id"])
                                    : std::nullopt;
    if (!uid) { err = "missing field 'user.id_str'"; return std::nullopt; }
    r.author.account_id = *uid;
    if (u.contains("screen_name") && u["screen_name"].is_string())
        r.author.screen_name = u["screen_name"].get<std::string>();
    if (u.contains("location") && u["location"].is_string())
        r.author.location_text = u["location"].get<std::string>();
    if (u.contains("friends_count")) r.author.friends_count = as_count(u["friends_count"]);
    if (u.contains("followers_count")) r.author.followers_count = as_count(u["followers_count"]);
    if (u.contains("statuses_count")) r.author.statuses_count = as_count(u["statuses_count"]);
    if (u.contains("created_at"))
        if (auto ct = parse_any_time(u["created_at"])) r.author.account_created_at = *ct;

    const json* rt = nullptr;
    if (auto rit = j.find("retweeted_status"); rit != j.end() && rit->is_object()) rt = &*rit;

    auto text_of = [](const json& o) -> std::string {
        if (o.contains("full_text") && o["full_text"].is_string())
            return o["full_text"].get<std::string>();
        if (o.contains("text") && o["text"].is_string()) return o["text"].get<std::string>();
        return {};
    };
    if (rt) {
        // retweets carry the original text, not the truncated "RT @x: ..." copy
        r.text = text_of(*rt);
        if (r.text.empty()) {
            r.text = text_of(j);
            if (r.text.rfind("RT @", 0) == 0) {
                std::size_t colon = r.text.find(": ");
                if (colon != std::string::npos) r.text = r.text.substr(colon + 2);
            }
        }
    } else {
        r.text = text_of(j);
    }
    if (j.contains("lang") && j["lang"].is_string()) r.lang = j["lang"].get<std::string>();

    // entities: prefer the retweet's own entity lists; fall back to the
    // original's when the truncated copy dropped them
    const json* ent = nullptr;
    if (auto eit = j.find("entities"); eit != j.end() && eit->is_object()) ent = &*eit;
    if (rt && (!ent || !ent->contains("hashtags")))
        if (auto eit = rt->find("entities"); eit != rt->end() && eit->is_object()) ent = &*eit;
    if (ent) {
        const json& e = *ent;
        if (auto h = e.find("hashtags"); h != e.end() && h->is_array())
            for (const auto& tag : *h)
                if (tag.is_object() && tag.contains("text") && tag["text"].is_string())
                    r.hashtags.push_back(normalize_hashtag(tag["text"].get<std::string>()));
        if (auto m = e.find("user_mentions"); m != e.end() && m->is_array())
            for (const auto& men : *m)
                if (men.is_object() && men.contains("id_str"))
                    if (auto mid = as_id_string(men["id_str"])) r.mentions.push_back(*mid);
        if (auto uu = e.find("urls"); uu != e.end() && uu->is_array())
            for (const auto& url : *uu) {
                if (!url.is_object()) continue;
                if (url.contains("expanded_url") && url["expanded_url"].is_string())
                    r.urls.push_back(url["expanded_url"].get<std::string>());
                else if (url.contains("url") && url["url"].is_string())
                    r.urls.push_back(url["url"].get<std::string>());
            }
    }
    if (rt) {
        TweetRef ref;
        if (auto rid = rt->contains("id_str") ? as_id_string((*rt)["id_str"]) : std::nullopt)
            ref.tweet_id = *rid;
        if (auto ru = rt->find("user"); ru != rt->end() && ru->is_object())
            if (auto ruid = ru->contains("id_str") ? as_id_string((*ru)["id_str"]) : std::nullopt)
                ref.account_id = *ruid;
        if (!ref.tweet_id.empty()) r.retweet_of = ref;
    }
    if (j.contains("in_reply_to_status_id_str") && !j["in_reply_to_status_id_str"].is_null()) {
        if (auto rid = as_id_string(j["in_reply_to_status_id_str"])) {
            TweetRef ref;
            ref.tweet_id = *rid;
            if (j.contains("in_reply_to_user_id_str"))
                if (auto ruid = as_id_string(j["in_reply_to_user_id_str"]))
                    ref.account_id = *ruid;
            r.reply_to = ref;
        }
    }
    if (auto qit = j.find("quoted_status"); qit != j.end() && qit->is_object()) {
        const json& q = *qit;
        TweetRef ref;
        if (auto qid = q.contains("id_str") ? as_id_string(q["id_str"]) : std::nullopt)
            ref.tweet_id = *qid;
        if (auto qu = q.find("user"); qu != q.end() && qu->is_object())
            if (auto quid = qu->contains("id_str") ? as_id_string((*qu)["id_str"]) : std::nullopt)
                ref.account_id = *quid;
        if (!ref.tweet_id.empty()) r.quote_of = ref;
    }
    return r;
}

}  // namespace

Corpus Corpus::from_jsonl(std::istream& in, ParseReport* report) {
    ParseReport local;
    ParseReport& rep = report ? *report : local;
    std::vector<TweetRecord> records;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        ++rep.lines;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            ++rep.skipped_malformed;
            rep.note(line_no, "invalid JSON object");
            continue;
        }
        std::string err;
        auto rec = looks_like_v11(j) ? record_from_v11(j, err) : record_from_canonical(j, err);
        if (!rec) {
            ++rep.skipped_malformed;
            rep.note(line_no, err);
            continue;
        }
        if (!seen_ids.insert(rec->tweet_id).second) {
            ++rep.skipped_duplicate;
            rep.note(line_no, "duplicate tweet id " + rec->tweet_id);
            continue;
        }
        records.push_back(std::move(*rec));
        ++rep.parsed;
    }
    return from_records(std::move(records));
}

Corpus Corpus::from_jsonl_file(const std::string& path, ParseReport* report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open corpus file " + path);
    return from_jsonl(in, report);
}

Corpus Corpus::from_records(std::vector<TweetRecord> records) {
    Corpus c;
    c.tweets_ = std::move(records);
    std::sort(c.tweets_.begin(), c.tweets_.end(), [](const TweetRecord& a, const TweetRecord& b) {
        if (a.created_at != b.created_at) return a.created_at < b.created_at;
        return a.tweet_id < b.tweet_id;
    });
    c.build_indexes();
    return c;
}

void Corpus::build_indexes() {
    for (TweetIndex i = 0; i < tweets_.size(); ++i) {
        const TweetRecord& t = tweets_[i];
        by_account_[t.author.account_id].push_back(i);
        by_tweet_id_.emplace(t.tweet_id, i);
        for (const auto& h : t.hashtags) {
            auto& v = by_hashtag_[h];
            if (v.empty() || v.back() != i) v.push_back(i);  // dedupe repeated tag in one tweet
        }
        for (const auto& u : t.urls) {
            auto& v = by_url_[u];
            if (v.empty() || v.back() != i) v.push_back(i);
        }
        if (t.retweet_of) retweets_of_[t.retweet_of->tweet_id].push_back(i);
    }
}

std::optional<TweetIndex> Corpus::find_tweet(std::string_view tweet_id) const {
    auto it = by_tweet_id_.find(std::string(tweet_id));
    if (it == by_tweet_id_.end()) return std::nullopt;
    return it->second;
}

const AccountSnapshot* Corpus::last_snapshot(const std::string& account_id) const {
    auto it = by_account_.find(account_id);
    if (it == by_account_.end() || it->second.empty()) return nullptr;
    return &tweets_[it->second.back()].author;
}

std::string Corpus::root_original(TweetIndex retweet) const {
    const TweetRecord* cur = &tweets_[retweet];
    std::string root = cur->retweet_of ? cur->retweet_of->tweet_id : cur->tweet_id;
    std::unordered_set<std::string> seen;  // cycle guard for malformed chains
    while (true) {
        if (!seen.insert(root).second) break;
        auto idx = find_tweet(root);
        if (!idx) break;
        const TweetRecord& t = tweets_[*idx];
        if (!t.retweet_of) break;
        root = t.retweet_of->tweet_id;
    }
    return root;
}

void PhaseConfig::validate() const {
    for (std::size_t i = 1; i < boundaries.size(); ++i)
        if (boundaries[i] <= boundaries[i - 1])
            throw std::invalid_argument("phase boundaries must be strictly increasing");
    if (!names.empty() && names.size() != boundaries.size() + 1)
        throw std::invalid_argument("phase names must be boundaries+1 long");
}

int PhaseConfig::phase_of(Timestamp t) const {
    int p = 1;
    for (Timestamp b : boundaries) {
        if (t < b) break;
        ++p;
    }
    return p;
}

std::string PhaseConfig::phase_name(int phase) const {
    if (!names.empty() && phase >= 1 && phase <= static_cast<int>(names.size()))
        return names[phase - 1];
    return "Phase " + std::to_string(phase);
}

PhasedCorpus::PhasedCorpus(const Corpus& corpus, PhaseConfig config)
    : corpus_(&corpus), config_(std::move(config)) {
    config_.validate();
    phase_of_.resize(corpus.size());
    stats_.assign(config_.phase_count(), PhaseStats{});
    std::vector<std::unordered_set<std::string_view>> authors(config_.phase_count());
    for (TweetIndex i = 0; i < corpus.size(); ++i) {
        int p = config_.phase_of(corpus[i].created_at);
        phase_of_[i] = p;
        stats_[p - 1].tweets++;
        authors[p - 1].insert(corpus[i].author.account_id);
    }
    for (int p = 0; p < config_.phase_count(); ++p)
        stats_[p].accounts = static_cast<std::int64_t>(authors[p].size());
}

std::vector<GrowthPoint> growth_curve(const Corpus& corpus, std::int64_t bucket_seconds) {
    if (bucket_seconds <= 0) throw std::invalid_argument("bucket_seconds must be positive");
    std::vector<GrowthPoint> out;
    if (corpus.empty()) return out;
    Timestamp t0 = corpus.first_time();
    std::unordered_set<std::string_view> seen;
    std::int64_t bucket = 0;
    GrowthPoint cur{t0, 0, 0};
    for (const TweetRecord& t : corpus.tweets()) {
        std::int64_t b = (t.created_at - t0) / bucket_seconds;
        while (b > bucket) {
            out.push_back(cur);
            ++bucket;
            cur.bucket_start = t0 + bucket * bucket_seconds;
            cur.new_accounts = 0;
        }
        if (seen.insert(t.author.account_id).second) {
            cur.new_accounts++;
            cur.cumulative_accounts++;
        }
    }
    out.push_back(cur);
    return out;
}

MetaDiscussionReport meta_discussion_report(const Corpus& corpus, std::string_view term) {
    MetaDiscussionReport rep;
    rep.term = std::string(term);
    rep.total_tweets = static_cast<std::int64_t>(corpus.size());
    std::map<std::string, std::int64_t> days;
    for (const TweetRecord& t : corpus.tweets()) {
        if (!contains_unprefixed_term(t.text, term)) continue;
        rep.matching_tweets++;
        days[format_utc_date(t.created_at)]++;
    }
    rep.ratio = rep.total_tweets ? static_cast<double>(rep.matching_tweets) /
                                       static_cast<double>(rep.total_tweets)
                                 : 0.0;
    rep.per_day.assign(days.begin(), days.end());
    return rep;
}

}  // namespace polarscope
