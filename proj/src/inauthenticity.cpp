#include "polarscope/inauthenticity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "polarscope/csv.hpp"
#include "polarscope/io.hpp"
#include "polarscope/text.hpp"

#include <httplib.h>
#include <json.hpp>

namespace polarscope {

const char* to_string(TextPattern p) {
    switch (p) {
        case TextPattern::HashtagsOnly: return "HASHTAGS_ONLY";
        case TextPattern::HashtagsUrl: return "HASHTAGS_URL";
        case TextPattern::MentionsHashtags: return "MENTIONS_HASHTAGS";
        case TextPattern::MentionsHashtagsUrl: return "MENTIONS_HASHTAGS_URL";
        case TextPattern::Other: return "OTHER";
    }
    return "?";
}

namespace {

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_';
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool starts_url(std::string_view s, std::size_t i) {
    return s.compare(i, 7, "http://") == 0 || s.compare(i, 8, "https://") == 0 ||
           s.compare(i, 4, "www.") == 0;
}

}  // namespace

TextPattern classify_text(std::string_view text) {
    bool mentions = false, hashtags = false, urls = false, residue = false;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (is_space(c)) {
            ++i;
        } else if ((c == '@' || c == '#') && i + 1 < text.size() && is_word_char(text[i + 1])) {
            (c == '@' ? mentions : hashtags) = true;
            i += 2;
            while (i < text.size() && is_word_char(text[i])) ++i;
        } else if (starts_url(text, i)) {
            urls = true;
            while (i < text.size() && !is_space(text[i])) ++i;
        } else {
            residue = true;
            ++i;
        }
    }
    if (residue || !hashtags) return TextPattern::Other;
    if (mentions) return urls ? TextPattern::MentionsHashtagsUrl : TextPattern::MentionsHashtags;
    return urls ? TextPattern::HashtagsUrl : TextPattern::HashtagsOnly;
}

PatternReport classify_patterns(const PhasedCorpus& phased, const AffiliationMap& aff) {
    const Corpus& corpus = phased.corpus();
    PatternReport report;
    report.phase_count = phased.phase_count();
    for (auto& row : report.cells)
        row.assign(static_cast<std::size_t>(report.phase_count) + 1, PatternCell{});
    for (TweetIndex i = 0; i < corpus.size(); ++i) {
        const TweetRecord& t = corpus[i];
        int g = static_cast<int>(aff.of(t.author.account_id));
        int p = phased.phase_of(i);
        TextPattern label = classify_text(t.text);
        for (std::size_t cell : {static_cast<std::size_t>(p - 1),
                                 static_cast<std::size_t>(report.phase_count)}) {
            ++report.cells[g][cell].counts[static_cast<int>(label)];
            ++report.cells[g][cell].tweets;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------

void BurstParams::validate() const {
    if (window_seconds <= 0) throw std::invalid_argument("bursts: window must be positive");
    if (min_count < 2) throw std::invalid_argument("bursts: min_count must be >= 2");
    if (similarity < 0.0 || similarity > 1.0)
        throw std::invalid_argument("bursts: similarity must be in [0,1]");
}

namespace {

struct Reply {
    Timestamp t;
    TweetIndex idx;
};

}  // namespace

std::vector<ReplyBurst> detect_reply_bursts(const Corpus& corpus, const BurstParams& params) {
    params.validate();
    std::map<std::pair<std::string, std::string>, std::vector<Reply>> groups;
    for (TweetIndex i = 0; i < corpus.size(); ++i) {
        const TweetRecord& t = corpus[i];
        if (!t.is_reply() || t.reply_to->account_id.empty()) continue;
        groups[{t.author.account_id, t.reply_to->account_id}].push_back({t.created_at, i});
    }

    std::vector<ReplyBurst> bursts;
    for (auto& [key, replies] : groups) {
        // corpus order is already (time, id); groups preserve it
        std::vector<std::vector<std::string>> tokens(replies.size());
        for (std::size_t i = 0; i < replies.size(); ++i)
            tokens[i] = token_set(corpus[replies[i].idx].text);

        std::size_t i = 0;
        while (i < replies.size()) {
            std::size_t j = i;
            while (j < replies.size() &&
                   replies[j].t - replies[i].t <= params.window_seconds)
                ++j;
            // complete-link duplicate clusters within the run [i, j)
            std::vector<std::vector<std::size_t>> clusters;
            for (std::size_t k = i; k < j; ++k) {
                bool placed = false;
                for (auto& cl : clusters) {
                    bool all = true;
                    for (std::size_t m : cl)
                        if (jaccard(tokens[k], tokens[m]) < params.similarity) {
                            all = false;
                            break;
                        }
                    if (all) {
                        cl.push_back(k);
                        placed = true;
                        break;
                    }
                }
                if (!placed) clusters.push_back({k});
            }
            const std::vector<std::size_t>* best = nullptr;
            for (const auto& cl : clusters)
                if (best == nullptr || cl.size() > best->size()) best = &cl;
            if (best != nullptr && static_cast<std::int64_t>(best->size()) >= params.min_count) {
                ReplyBurst b;
                b.source = key.first;
                b.target = key.second;
                b.count = static_cast<std::int64_t>(best->size());
                b.start = replies[best->front()].t;
                b.end = replies[best->back()].t;
                std::set<std::string> seen;
                for (std::size_t m : *best) {
                    const std::string& text = corpus[replies[m].idx].text;
                    if (seen.insert(text).second) b.sample_texts.push_back(text);
                    if (b.sample_texts.size() == 3) break;
                }
                bursts.push_back(std::move(b));
                i = best->back() + 1;
            } else {
                ++i;
            }
        }
    }
    std::sort(bursts.begin(), bursts.end(), [](const ReplyBurst& a, const ReplyBurst& b) {
        return std::tie(b.count, b.source, b.target) < std::tie(a.count, a.source, a.target);
    });
    return bursts;
}

// ---------------------------------------------------------------------------

double reputation(const ReputationInputs& in) {
    if (in.friends < 0 || in.followers < 0)
        throw std::invalid_argument("reputation: counts must be nonnegative");
    if (in.friends + in.followers == 0)
        throw std::domain_error("reputation: undefined for zero friends and followers");
    return static_cast<double>(in.followers) / static_cast<double>(in.friends + in.followers);
}

const char* to_string(BotBucket b) {
    switch (b) {
        case BotBucket::Human: return "human";
        case BotBucket::Undecided: return "undecided";
        case BotBucket::Bot: return "bot";
    }
    return "?";
}

BotBucket bot_bucket(double cap) {
    if (cap < 0.2) return BotBucket::Human;
    if (cap > 0.6) return BotBucket::Bot;
    return BotBucket::Undecided;
}

CsvBotScores CsvBotScores::from_csv(const std::string& text) {
    csv::File file = csv::parse(text);
    CsvBotScores out;
    bool first = true;
    for (const csv::Line& line : file.lines) {
        if (line.comment) continue;
        const auto& f = line.fields;
        if (first && !f.empty() && f[0] == "account_id") {
            first = false;
            continue;
        }
        first = false;
        if (f.empty() || (f.size() == 1 && f[0].empty())) continue;
        if (f.size() < 2) throw std::invalid_argument("bot score CSV: expected at least 2 fields");
        BotScore s;
        s.account_id = f[0];
        s.cap = std::stod(f[1]);
        if (s.cap < 0.0 || s.cap > 1.0)
            throw std::invalid_argument("bot score CSV: cap out of [0,1] for " + s.account_id);
        if (f.size() > 2 && !f[2].empty()) {
            s.english_score = std::stod(f[2]);
            if (*s.english_score < 0.0 || *s.english_score > 1.0)
                throw std::invalid_argument("bot score CSV: english score out of [0,1] for " +
                                            s.account_id);
        }
        s.bucket = bot_bucket(s.cap);
        s.source = "csv";
        out.scores_[s.account_id] = std::move(s);
    }
    return out;
}

CsvBotScores CsvBotScores::from_csv_file(const std::string& path) {
    return from_csv(read_file_to_string(path));
}

std::optional<BotScore> CsvBotScores::score(const std::string& account_id) {
    auto it = scores_.find(account_id);
    if (it == scores_.end()) return std::nullopt;
    return it->second;
}

HttpBotScores::HttpBotScores(std::string base_url, std::string token) : token_(std::move(token)) {
    // split "scheme://host[:port]" from the path prefix
    std::size_t scheme = base_url.find("://");
    std::size_t path = base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    host_ = base_url.substr(0, path);
    if (path != std::string::npos) path_prefix_ = base_url.substr(path);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::optional<BotScore> HttpBotScores::score(const std::string& account_id) {
    httplib::Client cli(host_);
    cli.set_connection_timeout(5);
    cli.set_read_timeout(10);
    httplib::Headers headers;
    if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
    httplib::Result res = cli.Get(path_prefix_ + "/" + account_id, headers);
    if (!res || res->status != 200) return std::nullopt;
    nlohmann::json body = nlohmann::json::parse(res->body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("cap") ||
        !body["cap"].is_number())
        return std::nullopt;
    BotScore s;
    s.account_id = account_id;
    s.cap = body["cap"].get<double>();
    if (s.cap < 0.0 || s.cap > 1.0) return std::nullopt;
    if (body.contains("english") && body["english"].is_number())
        s.english_score = body["english"].get<double>();
    s.bucket = bot_bucket(s.cap);
    s.source = "http";
    return s;
}

BotScoreReport score_accounts(BotScoreClient& client, const PhasedCorpus& phased,
                              const AffiliationMap& aff, const ScoreSelection& sel) {
    const Corpus& corpus = phased.corpus();
    int phases = phased.phase_count();

    std::vector<std::string> selected;
    for (const auto& [account, indexes] : corpus.by_account()) {
        if (aff.is_labeled(account)) {
            selected.push_back(account);
            continue;
        }
        if (sel.scope == MinTweetsScope::Total) {
            if (static_cast<std::int64_t>(indexes.size()) >= sel.min_unaffiliated_tweets)
                selected.push_back(account);
        } else {
            std::int64_t before = 0, after = 0;
            for (TweetIndex i : indexes)
                (phased.phase_of(i) < sel.boundary_phase ? before : after) += 1;
            if (before >= sel.min_unaffiliated_tweets && after >= sel.min_unaffiliated_tweets)
                selected.push_back(account);
        }
    }

    BotScoreReport report;
    report.selected = static_cast<std::int64_t>(selected.size());
    for (const std::string& account : selected) {
        std::optional<BotScore> s = client.score(account);
        if (!s) {
            report.unscored.push_back(account);
            continue;
        }
        s->account_id = account;
        s->bucket = bot_bucket(s->cap);
        BucketCell& cell = report.buckets[s->bucket];
        if (cell.tweets_per_phase.empty())
            cell.tweets_per_phase.assign(static_cast<std::size_t>(phases), 0);
        ++cell.accounts;
        for (TweetIndex i : corpus.by_account().at(account)) {
            ++cell.tweets_per_phase[static_cast<std::size_t>(phased.phase_of(i) - 1)];
            ++cell.tweets_total;
        }
        report.scores.push_back(std::move(*s));
    }
    return report;
}

// ---------------------------------------------------------------------------

std::vector<ActivityProfile> account_activity_profile(const Corpus& corpus,
                                                      const std::vector<std::string>& account_ids,
                                                      std::int64_t bucket_seconds) {
    if (bucket_seconds <= 0)
        throw std::invalid_argument("activity profile: bucket must be positive");
    Timestamp t0 = corpus.first_time();
    std::size_t nbuckets =
        corpus.empty()
            ? 0
            : static_cast<std::size_t>((corpus.last_time() - t0) / bucket_seconds) + 1;

    std::vector<ActivityProfile> out;
    for (const std::string& id : account_ids) {
        ActivityProfile p;
        p.account_id = id;
        p.bucket0 = t0;
        p.bucket_seconds = bucket_seconds;
        p.counts.assign(nbuckets, 0);
        auto it = corpus.by_account().find(id);
        if (it != corpus.by_account().end()) {
            for (TweetIndex i : it->second) {
                ++p.counts[static_cast<std::size_t>((corpus[i].created_at - t0) / bucket_seconds)];
                ++p.corpus_tweets;
            }
        }
        if (const AccountSnapshot* snap = corpus.last_snapshot(id); snap != nullptr) {
            std::int64_t age = snap->age_days(corpus.last_time());
            if (age > 0)
                p.lifetime_rate = static_cast<double>(snap->statuses_count) /
                                  static_cast<double>(age);
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace polarscope
