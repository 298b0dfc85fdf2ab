#include "polarscope/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "polarscope/coordination.hpp"
#include "polarscope/io.hpp"
#include "polarscope/text.hpp"
#include "polarscope/url_utils.hpp"

#include <json.hpp>

namespace polarscope {

using json = nlohmann::json;

namespace {

void check_prob(double p, const char* what) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument(std::string("scenario: ") + what + " must be in [0,1]");
}

void check_group(const GroupSpec& g, const char* name) {
    if (g.n < 0) throw std::invalid_argument(std::string("scenario: ") + name + ".n negative");
    check_prob(g.intra_fraction, "intra_fraction");
    check_prob(g.url_prob, "url_prob");
    double mix = 0.0;
    for (double p : g.pattern_mix) {
        check_prob(p, "pattern_mix entry");
        mix += p;
    }
    if (mix > 1.0 + 1e-9) throw std::invalid_argument("scenario: pattern_mix sums above 1");
    for (double m : g.phase_multipliers)
        if (m < 0.0) throw std::invalid_argument("scenario: negative phase multiplier");
}

}  // namespace

void ScenarioConfig::validate() const {
    if (days < 1) throw std::invalid_argument("scenario: days must be >= 1");
    check_group(supporters, "supporters");
    check_group(opposers, "opposers");
    check_group(unaffiliated, "unaffiliated");
    check_prob(partition.p_in, "p_in");
    check_prob(partition.p_out, "p_out");
    Timestamp end = start_time + static_cast<Timestamp>(days) * 86400;
    Timestamp prev = start_time;
    for (Timestamp b : phase_boundaries) {
        if (b <= prev || b >= end)
            throw std::invalid_argument("scenario: phase boundaries must increase inside the span");
        prev = b;
    }
    for (const CliqueSpec& c : cliques) {
        if (!co_activity_kind_from(c.kind))
            throw std::invalid_argument("scenario: unknown co-activity kind " + c.kind);
        int pool = c.group == Affiliation::Supporter  ? supporters.n
                   : c.group == Affiliation::Opposer ? opposers.n
                                                     : unaffiliated.n;
        if (c.size < 2 || c.size > pool)
            throw std::invalid_argument("scenario: clique size must fit inside its group");
        if (c.gamma_true <= 0 || c.reasons < 1)
            throw std::invalid_argument("scenario: clique needs gamma_true > 0 and reasons >= 1");
    }
    for (const BurstSpec& b : bursts)
        if (b.count < 1 || b.window <= 0)
            throw std::invalid_argument("scenario: burst needs count >= 1 and window > 0");
    for (const BotProfile& b : bots)
        if (b.count < 0 || b.age_days < 0 || b.friends < 0 || b.followers < 0 ||
            b.statuses < 0 || b.tweets_per_day < 0)
            throw std::invalid_argument("scenario: bot profile fields must be nonnegative");
    if (background.events > 0 && (background.accounts < 1 || background.reasons < 1))
        throw std::invalid_argument("scenario: background events need accounts and reasons");
}

// ---------------------------------------------------------------------------
// config / truth JSON

namespace {

Timestamp time_field(const json& j, const char* key, Timestamp fallback) {
    if (!j.contains(key)) return fallback;
    if (j[key].is_number_integer()) return j[key].get<Timestamp>();
    auto t = parse_iso8601(j[key].get<std::string>());
    if (!t) throw std::invalid_argument(std::string("scenario: bad timestamp in ") + key);
    return *t;
}

Affiliation group_field(const json& j, const char* key, Affiliation fallback) {
    if (!j.contains(key)) return fallback;
    auto a = affiliation_from(j[key].get<std::string>());
    if (!a) throw std::invalid_argument("scenario: unknown group " + j[key].get<std::string>());
    return *a;
}

GroupSpec group_from(const json& j) {
    GroupSpec g;
    g.n = j.value("n", g.n);
    g.originals_per_account = j.value("originals_per_account", g.originals_per_account);
    g.retweets_per_account = j.value("retweets_per_account", g.retweets_per_account);
    g.replies_per_account = j.value("replies_per_account", g.replies_per_account);
    g.quotes_per_account = j.value("quotes_per_account", g.quotes_per_account);
    g.intra_fraction = j.value("intra_fraction", g.intra_fraction);
    g.hashtags_per_tweet = j.value("hashtags_per_tweet", g.hashtags_per_tweet);
    g.mentions_per_tweet = j.value("mentions_per_tweet", g.mentions_per_tweet);
    g.url_prob = j.value("url_prob", g.url_prob);
    if (j.contains("pattern_mix")) {
        const json& m = j["pattern_mix"];
        const char* keys[5] = {"hashtags_only", "hashtags_url", "mentions_hashtags",
                               "mentions_hashtags_url", "other"};
        for (int i = 0; i < 5; ++i) g.pattern_mix[static_cast<std::size_t>(i)] = m.value(keys[i], 0.0);
    }
    g.hashtags = j.value("hashtags", g.hashtags);
    g.exclusive_hashtags = j.value("exclusive_hashtags", g.exclusive_hashtags);
    g.urls = j.value("urls", g.urls);
    g.phase_multipliers = j.value("phase_multipliers", g.phase_multipliers);
    g.friends_lo = j.value("friends_lo", g.friends_lo);
    g.friends_hi = j.value("friends_hi", g.friends_hi);
    g.followers_lo = j.value("followers_lo", g.followers_lo);
    g.followers_hi = j.value("followers_hi", g.followers_hi);
    g.statuses_lo = j.value("statuses_lo", g.statuses_lo);
    g.statuses_hi = j.value("statuses_hi", g.statuses_hi);
    g.age_lo = j.value("age_lo", g.age_lo);
    g.age_hi = j.value("age_hi", g.age_hi);
    return g;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    ScenarioConfig c;
    c.seed = j.value("seed", c.seed);
    c.start_time = time_field(j, "start_time", c.start_time);
    c.days = j.value("days", c.days);
    if (j.contains("phase_boundaries"))
        for (const auto& b : j["phase_boundaries"]) {
            if (b.is_number_integer())
                c.phase_boundaries.push_back(b.get<Timestamp>());
            else if (auto t = parse_iso8601(b.get<std::string>()))
                c.phase_boundaries.push_back(*t);
            else
                throw std::invalid_argument("scenario: bad phase boundary");
        }
    if (j.contains("supporters")) c.supporters = group_from(j["supporters"]);
    if (j.contains("opposers")) c.opposers = group_from(j["opposers"]);
    if (j.contains("unaffiliated")) c.unaffiliated = group_from(j["unaffiliated"]);
    if (j.contains("planted_partition")) {
        c.partition.p_in = j["planted_partition"].value("p_in", 0.0);
        c.partition.p_out = j["planted_partition"].value("p_out", 0.0);
    }
    if (j.contains("cliques"))
        for (const auto& q : j["cliques"]) {
            CliqueSpec s;
            s.kind = q.value("kind", s.kind);
            s.group = group_field(q, "group", s.group);
            s.size = q.value("size", s.size);
            s.gamma_true = q.value("gamma_true", s.gamma_true);
            s.reasons = q.value("reasons", s.reasons);
            c.cliques.push_back(std::move(s));
        }
    if (j.contains("bursts"))
        for (const auto& q : j["bursts"]) {
            BurstSpec s;
            s.count = q.value("count", s.count);
            s.window = q.value("window", s.window);
            s.text = q.value("text", s.text);
            s.group = group_field(q, "group", s.group);
            c.bursts.push_back(std::move(s));
        }
    if (j.contains("bots"))
        for (const auto& q : j["bots"]) {
            BotProfile b;
            b.count = q.value("count", b.count);
            b.statuses = q.value("statuses", b.statuses);
            b.age_days = q.value("age_days", b.age_days);
            b.friends = q.value("friends", b.friends);
            b.followers = q.value("followers", b.followers);
            b.tweets_per_day = q.value("tweets_per_day", b.tweets_per_day);
            c.bots.push_back(b);
        }
    if (j.contains("background")) {
        c.background.accounts = j["background"].value("accounts", 0);
        c.background.events = j["background"].value("events", std::int64_t{0});
        c.background.reasons = j["background"].value("reasons", 0);
    }
    c.validate();
    return c;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
    return from_json(read_file_to_string(path));
}

Affiliation GroundTruth::true_affiliation(const std::string& account_id) const {
    if (std::binary_search(supporters.begin(), supporters.end(), account_id))
        return Affiliation::Supporter;
    if (std::binary_search(opposers.begin(), opposers.end(), account_id))
        return Affiliation::Opposer;
    return Affiliation::Unaffiliated;
}

AffiliationMap GroundTruth::affiliations() const {
    AffiliationMap m;
    for (const auto& id : supporters) m.set(id, Affiliation::Supporter);
    for (const auto& id : opposers) m.set(id, Affiliation::Opposer);
    m.provenance = "synthetic ground truth, seed " + std::to_string(seed);
    return m;
}

std::string GroundTruth::to_json() const {
    json j;
    j["seed"] = seed;
    j["supporters"] = supporters;
    j["opposers"] = opposers;
    j["bots"] = bots;
    j["supporter_hashtags"] = supporter_hashtags;
    j["opposer_hashtags"] = opposer_hashtags;
    j["tweets"] = tweets;
    j["cliques"] = json::array();
    for (const PlantedClique& c : cliques)
        j["cliques"].push_back({{"kind", c.kind},
                                {"members", c.members},
                                {"gamma_true", c.gamma_true},
                                {"reason_keys", c.reason_keys}});
    j["bursts"] = json::array();
    for (const PlantedBurst& b : bursts)
        j["bursts"].push_back({{"source", b.source},
                               {"target", b.target},
                               {"count", b.count},
                               {"window", b.window},
                               {"start", b.start}});
    return j.dump(2) + "\n";
}

GroundTruth GroundTruth::from_json(const std::string& text) {
    json j = json::parse(text);
    GroundTruth t;
    t.seed = j.value("seed", std::uint64_t{0});
    t.supporters = j.value("supporters", t.supporters);
    t.opposers = j.value("opposers", t.opposers);
    t.bots = j.value("bots", t.bots);
    t.supporter_hashtags = j.value("supporter_hashtags", t.supporter_hashtags);
    t.opposer_hashtags = j.value("opposer_hashtags", t.opposer_hashtags);
    t.tweets = j.value("tweets", std::int64_t{0});
    if (j.contains("cliques"))
        for (const auto& q : j["cliques"]) {
            PlantedClique c;
            c.kind = q.value("kind", c.kind);
            c.members = q.value("members", c.members);
            c.gamma_true = q.value("gamma_true", std::int64_t{0});
            c.reason_keys = q.value("reason_keys", c.reason_keys);
            t.cliques.push_back(std::move(c));
        }
    if (j.contains("bursts"))
        for (const auto& q : j["bursts"]) {
            PlantedBurst b;
            b.source = q.value("source", b.source);
            b.target = q.value("target", b.target);
            b.count = q.value("count", std::int64_t{0});
            b.window = q.value("window", std::int64_t{0});
            b.start = q.value("start", Timestamp{0});
            t.bursts.push_back(std::move(b));
        }
    return t;
}

GroundTruth GroundTruth::from_json_file(const std::string& path) {
    return from_json(read_file_to_string(path));
}

// ---------------------------------------------------------------------------
// generation

namespace {

struct FirstOriginal {
    std::string id;
    std::string author;
    std::string text;
    std::vector<std::string> hashtags;
    std::vector<std::string> urls;
};

struct Acct {
    std::string id;
    std::int64_t friends = 0, followers = 0, statuses = 0;
    Timestamp created = 0;
    FirstOriginal first;  // id empty until the account posts an original
};

class Generator {
  public:
    Generator(const ScenarioConfig& cfg, std::ostream& os) : cfg_(cfg), os_(os), rng_(cfg.seed) {
        end_ = cfg.start_time + static_cast<Timestamp>(cfg.days) * 86400;
        span_ = end_ - cfg.start_time;
        diurnal_max_ = 0.0;
        for (int i = 0; i < 240; ++i)
            diurnal_max_ = std::max(diurnal_max_, diurnal(i / 10.0));
        truth_.seed = cfg.seed;
    }

    GroundTruth run();

  private:
    double unif() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
    std::int64_t unii(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        return std::poisson_distribution<int>(mean)(rng_);
    }

    static double diurnal(double hour) {
        auto bump = [](double h, double mu, double sd) {
            double d = (h - mu) / sd;
            return std::exp(-0.5 * d * d);
        };
        return 0.65 * bump(hour, 13.0, 3.0) + 0.35 * bump(hour, 21.0, 2.0);
    }

    int phase_of(Timestamp t) const {
        int p = 1;
        for (Timestamp b : cfg_.phase_boundaries)
            if (t >= b)
                ++p;
            else
                break;
        return p;
    }

    Timestamp sample_time(const std::vector<double>& mult) {
        double mmax = 1.0;
        for (double m : mult) mmax = std::max(mmax, m);
        for (int tries = 0; tries < 200; ++tries) {
            Timestamp t = cfg_.start_time + unii(0, span_ - 1);
            double hour = static_cast<double>(t % 86400) / 3600.0;
            double accept = diurnal(hour) / diurnal_max_;
            if (!mult.empty()) {
                std::size_t p = static_cast<std::size_t>(phase_of(t) - 1);
                accept *= (p < mult.size() ? mult[p] : 1.0) / mmax;
            }
            if (unif() < accept) return t;
        }
        return cfg_.start_time + unii(0, span_ - 1);
    }

    std::string next_id() {
        char buf[24];
        std::snprintf(buf, sizeof buf, "t%010llu",
                      static_cast<unsigned long long>(++id_counter_));
        return buf;
    }

    // one canonical JSONL line; key order fixed so output is byte-stable
    std::string emit(const Acct& a, Timestamp t, const std::string& text,
                     const std::vector<std::string>& hashtags,
                     const std::vector<std::string>& mentions,
                     const std::vector<std::string>& urls, const FirstOriginal* retweet_of,
                     const FirstOriginal* reply_to, const FirstOriginal* quote_of) {
        std::string id = next_id();
        os_ << "{\"id\":\"" << id << "\",\"created_at\":\"" << format_iso8601(t)
            << "\",\"user\":{\"id\":\"" << json_escape(a.id) << "\",\"screen_name\":\""
            << json_escape(a.id) << "\",\"friends_count\":" << a.friends
            << ",\"followers_count\":" << a.followers << ",\"statuses_count\":" << a.statuses
            << ",\"created_at\":\"" << format_iso8601(a.created) << "\"},\"text\":\""
            << json_escape(text) << "\",\"lang\":\"en\",\"entities\":{\"hashtags\":[";
        for (std::size_t i = 0; i < hashtags.size(); ++i)
            os_ << (i ? ",\"" : "\"") << json_escape(hashtags[i]) << '"';
        os_ << "],\"mentions\":[";
        for (std::size_t i = 0; i < mentions.size(); ++i)
            os_ << (i ? ",\"" : "\"") << json_escape(mentions[i]) << '"';
        os_ << "],\"urls\":[";
        for (std::size_t i = 0; i < urls.size(); ++i)
            os_ << (i ? ",\"" : "\"") << json_escape(urls[i]) << '"';
        os_ << "]}";
        auto ref = [&](const char* key, const FirstOriginal* r) {
            if (r != nullptr)
                os_ << ",\"" << key << "\":{\"id\":\"" << json_escape(r->id)
                    << "\",\"user_id\":\"" << json_escape(r->author) << "\"}";
        };
        ref("retweet_of", retweet_of);
        ref("reply_to", reply_to);
        ref("quote_of", quote_of);
        os_ << "}\n";
        ++truth_.tweets;
        return id;
    }

    void emit_retweet(const Acct& a, Timestamp t, const FirstOriginal& orig) {
        emit(a, t, orig.text, orig.hashtags, {}, orig.urls, &orig, nullptr, nullptr);
    }

    Acct make_account(std::string id, const GroupSpec& g) {
        Acct a;
        a.id = std::move(id);
        a.friends = unii(g.friends_lo, std::max(g.friends_lo, g.friends_hi));
        a.followers = unii(g.followers_lo, std::max(g.followers_lo, g.followers_hi));
        a.statuses = unii(g.statuses_lo, std::max(g.statuses_lo, g.statuses_hi));
        a.created = cfg_.start_time - unii(g.age_lo, std::max(g.age_lo, g.age_hi)) * 86400;
        return a;
    }

    std::vector<std::string> draw_hashtags(const GroupSpec& g, int k) {
        std::vector<std::string> tags;
        for (int i = 0; i < k; ++i) {
            const std::vector<std::string>* pool = &g.hashtags;
            if (!g.exclusive_hashtags.empty() && (g.hashtags.empty() || unif() < 0.35))
                pool = &g.exclusive_hashtags;
            if (pool->empty()) {
                tags.push_back("update");
                continue;
            }
            tags.push_back((*pool)[static_cast<std::size_t>(
                unii(0, static_cast<std::int64_t>(pool->size()) - 1))]);
        }
        std::sort(tags.begin(), tags.end());
        tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
        return tags;
    }

    std::string draw_url(const GroupSpec& g) {
        if (g.urls.empty())
            return "https://news.example.org/story" + std::to_string(unii(1, 50));
        return g.urls[static_cast<std::size_t>(
            unii(0, static_cast<std::int64_t>(g.urls.size()) - 1))];
    }

    // original post following the group's pattern mix; returns the record so
    // retweets can mirror it
    FirstOriginal post_original(Acct& a, const GroupSpec& g, const std::vector<Acct>& peers) {
        double roll = unif();
        int shape = 4;
        for (int i = 0; i < 5; ++i) {
            if (roll < g.pattern_mix[static_cast<std::size_t>(i)]) {
                shape = i;
                break;
            }
            roll -= g.pattern_mix[static_cast<std::size_t>(i)];
        }
        FirstOriginal rec;
        rec.author = a.id;
        bool want_mentions = shape == 2 || shape == 3;
        bool want_url = shape == 1 || shape == 3 || (shape == 4 && unif() < g.url_prob);
        int ntags = std::max(shape == 4 ? 0 : 1, poisson(g.hashtags_per_tweet));
        rec.hashtags = draw_hashtags(g, ntags);
        std::vector<std::string> mentions;
        if (want_mentions || (shape == 4 && unif() < std::min(1.0, g.mentions_per_tweet))) {
            const Acct& m = peers[static_cast<std::size_t>(
                unii(0, static_cast<std::int64_t>(peers.size()) - 1))];
            mentions.push_back(m.id);
        }
        if (want_url) rec.urls.push_back(draw_url(g));
        std::string text;
        if (shape == 4) text = "situation update number " + std::to_string(unii(1, 99999));
        for (const auto& m : mentions) text += (text.empty() ? "@" : " @") + m;
        for (const auto& h : rec.hashtags) text += (text.empty() ? "#" : " #") + h;
        for (const auto& u : rec.urls) text += (text.empty() ? "" : " ") + u;
        if (text.empty()) text = "situation update number " + std::to_string(unii(1, 99999));
        Timestamp t = sample_time(g.phase_multipliers);
        rec.text = text;
        rec.id = emit(a, t, text, rec.hashtags, mentions, rec.urls, nullptr, nullptr, nullptr);
        if (a.first.id.empty()) a.first = rec;
        return rec;
    }

    void group_originals(std::vector<Acct>& accounts, const GroupSpec& g);
    void group_interactions(std::vector<Acct>& accounts, const GroupSpec& g,
                            std::vector<Acct>& in_group, std::vector<Acct>& out_group);
    void partition_edges(std::vector<Acct>& sup, std::vector<Acct>& opp);
    void plant_clique(const CliqueSpec& spec, std::vector<Acct>& pool, int clique_idx);
    void plant_burst(const BurstSpec& spec, int idx);
    void bot_activity();
    void background_activity();

    const ScenarioConfig& cfg_;
    std::ostream& os_;
    std::mt19937_64 rng_;
    Timestamp end_ = 0;
    std::int64_t span_ = 0;
    double diurnal_max_ = 1.0;
    std::uint64_t id_counter_ = 0;
    GroundTruth truth_;
    std::vector<Acct> sup_, opp_, una_;
};

void Generator::group_originals(std::vector<Acct>& accounts, const GroupSpec& g) {
    if (accounts.empty()) return;
    bool force_original = cfg_.partition.enabled();
    for (Acct& a : accounts) {
        int k = poisson(g.originals_per_account);
        if (force_original) k = std::max(k, 1);
        for (int i = 0; i < k; ++i) post_original(a, g, accounts);
    }
}

// runs after every group's originals exist, so out-group targets are real
void Generator::group_interactions(std::vector<Acct>& accounts, const GroupSpec& g,
                                   std::vector<Acct>& in_group, std::vector<Acct>& out_group) {
    if (accounts.empty()) return;
    auto pick_target = [&](std::vector<Acct>& same) -> Acct* {
        std::vector<Acct>* pool = &same;
        if (!out_group.empty() && unif() >= g.intra_fraction) pool = &out_group;
        if (pool->empty()) return nullptr;
        Acct& t = (*pool)[static_cast<std::size_t>(
            unii(0, static_cast<std::int64_t>(pool->size()) - 1))];
        return t.first.id.empty() ? nullptr : &t;
    };
    for (Acct& a : accounts) {
        int rts = poisson(g.retweets_per_account);
        for (int i = 0; i < rts; ++i)
            if (Acct* t = pick_target(in_group); t != nullptr && t->id != a.id)
                emit_retweet(a, sample_time(g.phase_multipliers), t->first);
        int reps = poisson(g.replies_per_account);
        for (int i = 0; i < reps; ++i)
            if (Acct* t = pick_target(in_group); t != nullptr && t->id != a.id) {
                std::string text = "@" + t->id + " situation reply " + std::to_string(unii(1, 9999));
                emit(a, sample_time(g.phase_multipliers), text, {}, {t->id}, {}, nullptr,
                     &t->first, nullptr);
            }
        int quotes = poisson(g.quotes_per_account);
        for (int i = 0; i < quotes; ++i)
            if (Acct* t = pick_target(in_group); t != nullptr && t->id != a.id) {
                std::string text = "quoting this " + std::to_string(unii(1, 9999));
                emit(a, sample_time(g.phase_multipliers), text, {}, {}, {}, nullptr, nullptr,
                     &t->first);
            }
    }
}

void Generator::partition_edges(std::vector<Acct>& sup, std::vector<Acct>& opp) {
    if (!cfg_.partition.enabled()) return;
    auto flip = [&](Acct& u, Acct& v, double p, const std::vector<double>& mult) {
        if (unif() >= p) return;
        bool forward = unif() < 0.5;
        Acct& src = forward ? u : v;
        Acct& dst = forward ? v : u;
        if (dst.first.id.empty()) return;  // cannot happen: originals are forced
        emit_retweet(src, sample_time(mult), dst.first);
    };
    for (std::size_t i = 0; i < sup.size(); ++i)
        for (std::size_t j = i + 1; j < sup.size(); ++j)
            flip(sup[i], sup[j], cfg_.partition.p_in, cfg_.supporters.phase_multipliers);
    for (std::size_t i = 0; i < opp.size(); ++i)
        for (std::size_t j = i + 1; j < opp.size(); ++j)
            flip(opp[i], opp[j], cfg_.partition.p_in, cfg_.opposers.phase_multipliers);
    for (Acct& s : sup)
        for (Acct& o : opp) flip(s, o, cfg_.partition.p_out, cfg_.supporters.phase_multipliers);
}

void Generator::plant_clique(const CliqueSpec& spec, std::vector<Acct>& pool, int clique_idx) {
    PlantedClique truth;
    truth.kind = spec.kind;
    truth.gamma_true = spec.gamma_true;
    for (int i = 0; i < spec.size; ++i) truth.members.push_back(pool[static_cast<std::size_t>(i)].id);

    Acct seed = make_account("SEED" + std::to_string(clique_idx), cfg_.unaffiliated);
    std::string tag_base = "planted" + std::to_string(clique_idx) + "r";
    for (int r = 0; r < spec.reasons; ++r) {
        Timestamp base = cfg_.start_time + span_ * (r + 1) / (spec.reasons + 1);
        base = std::max(cfg_.start_time, std::min(base, end_ - spec.gamma_true - 1));
        std::string reason_key;
        FirstOriginal seed_orig;
        if (spec.kind == "co_retweet") {
            seed_orig.author = seed.id;
            seed_orig.text = "original worth spreading " + std::to_string(r);
            Timestamp t0 = std::max(cfg_.start_time, base - 7200);
            seed_orig.id = emit(seed, t0, seed_orig.text, {}, {}, {}, nullptr, nullptr, nullptr);
            reason_key = seed_orig.id;
        } else if (spec.kind == "co_hashtag") {
            reason_key = tag_base + std::to_string(r);
        } else if (spec.kind == "co_url") {
            reason_key = "https://planted" + std::to_string(clique_idx) + ".example.org/r" +
                         std::to_string(r);
        } else if (spec.kind == "co_domain") {
            reason_key = "planted" + std::to_string(clique_idx) + "r" + std::to_string(r) + ".com";
        } else {  // co_mention
            reason_key = "M" + std::to_string(clique_idx) + "x" + std::to_string(r);
        }

        Timestamp lo = end_, hi = cfg_.start_time;
        for (int m = 0; m < spec.size; ++m) {
            Acct& a = pool[static_cast<std::size_t>(m)];
            Timestamp t = base + unii(0, spec.gamma_true);
            lo = std::min(lo, t);
            hi = std::max(hi, t);
            if (spec.kind == "co_retweet") {
                emit_retweet(a, t, seed_orig);
            } else if (spec.kind == "co_hashtag") {
                emit(a, t, "#" + reason_key, {reason_key}, {}, {}, nullptr, nullptr, nullptr);
            } else if (spec.kind == "co_url") {
                emit(a, t, "look at this " + reason_key, {}, {}, {reason_key}, nullptr, nullptr,
                     nullptr);
            } else if (spec.kind == "co_domain") {
                std::string url = "https://" + reason_key + "/item" + std::to_string(m);
                emit(a, t, "look at this " + url, {}, {}, {url}, nullptr, nullptr, nullptr);
            } else {
                emit(a, t, "@" + reason_key + " seen this?", {}, {reason_key}, {}, nullptr,
                     nullptr, nullptr);
            }
        }
        if (hi - lo > spec.gamma_true)
            throw std::logic_error("generator self-check: clique events exceed gamma_true");
        if (spec.kind == "co_url") reason_key = canonicalize_url(reason_key);
        truth.reason_keys.push_back(reason_key);
    }
    truth_.cliques.push_back(std::move(truth));
}

void Generator::plant_burst(const BurstSpec& spec, int idx) {
    Acct source = make_account("TROLL" + std::to_string(idx),
                               spec.group == Affiliation::Supporter  ? cfg_.supporters
                               : spec.group == Affiliation::Opposer ? cfg_.opposers
                                                                    : cfg_.unaffiliated);
    Acct target = make_account("VICTIM" + std::to_string(idx), cfg_.unaffiliated);
    FirstOriginal orig;
    orig.author = target.id;
    orig.text = "controversial claim " + std::to_string(idx);
    Timestamp t0 = cfg_.start_time + span_ / 4;
    orig.id = emit(target, t0, orig.text, {}, {}, {}, nullptr, nullptr, nullptr);

    Timestamp burst_start =
        cfg_.start_time + span_ / 3 + static_cast<Timestamp>(idx) * 7200;
    burst_start = std::max(cfg_.start_time, std::min(burst_start, end_ - spec.window - 1));
    Timestamp first = 0, last = 0;
    for (int i = 0; i < spec.count; ++i) {
        Timestamp t = burst_start + static_cast<Timestamp>(i) * spec.window / spec.count;
        if (i == 0) first = t;
        last = t;
        emit(source, t, spec.text, {}, {}, {}, nullptr, &orig, nullptr);
    }
    if (last - first > spec.window)
        throw std::logic_error("generator self-check: burst span exceeds its window");
    if (spec.group == Affiliation::Supporter) truth_.supporters.push_back(source.id);
    if (spec.group == Affiliation::Opposer) truth_.opposers.push_back(source.id);
    truth_.bursts.push_back({source.id, target.id, spec.count, spec.window, burst_start});
}

void Generator::bot_activity() {
    int idx = 0;
    for (const BotProfile& profile : cfg_.bots)
        for (int k = 0; k < profile.count; ++k, ++idx) {
            Acct bot;
            bot.id = "BOT" + std::to_string(idx);
            bot.friends = profile.friends;
            bot.followers = profile.followers;
            bot.statuses = profile.statuses;
            bot.created = cfg_.start_time - profile.age_days * 86400;
            auto n = static_cast<std::int64_t>(profile.tweets_per_day * cfg_.days);
            for (std::int64_t i = 0; i < n; ++i) {
                std::string text = "amplified message " + std::to_string(unii(1, 999));
                emit(bot, sample_time({}), text, {}, {}, {}, nullptr, nullptr, nullptr);
            }
            truth_.bots.push_back(bot.id);
        }
}

void Generator::background_activity() {
    const BackgroundSpec& bg = cfg_.background;
    if (bg.events <= 0) return;
    std::vector<Acct> accounts;
    accounts.reserve(static_cast<std::size_t>(bg.accounts));
    for (int i = 0; i < bg.accounts; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "G%06d", i);
        accounts.push_back(make_account(buf, cfg_.unaffiliated));
    }
    std::vector<FirstOriginal> pool(static_cast<std::size_t>(bg.reasons));
    for (int r = 0; r < bg.reasons; ++r) {
        Acct& author = accounts[static_cast<std::size_t>(r % bg.accounts)];
        FirstOriginal& o = pool[static_cast<std::size_t>(r)];
        o.author = author.id;
        o.text = "breaking story " + std::to_string(r);
        o.id = emit(author, cfg_.start_time + unii(0, span_ / 8), o.text, {}, {}, {}, nullptr,
                    nullptr, nullptr);
    }
    for (std::int64_t e = 0; e < bg.events; ++e) {
        Acct& a = accounts[static_cast<std::size_t>(unii(0, bg.accounts - 1))];
        const FirstOriginal& o = pool[static_cast<std::size_t>(unii(0, bg.reasons - 1))];
        emit_retweet(a, cfg_.start_time + unii(0, span_ - 1), o);
    }
}

GroundTruth Generator::run() {
    auto make_group = [&](const char* prefix, const GroupSpec& g) {
        std::vector<Acct> v;
        v.reserve(static_cast<std::size_t>(g.n));
        for (int i = 0; i < g.n; ++i) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "%s%06d", prefix, i);
            v.push_back(make_account(buf, g));
        }
        return v;
    };
    sup_ = make_group("S", cfg_.supporters);
    opp_ = make_group("O", cfg_.opposers);
    una_ = make_group("U", cfg_.unaffiliated);
    for (const Acct& a : sup_) truth_.supporters.push_back(a.id);
    for (const Acct& a : opp_) truth_.opposers.push_back(a.id);
    truth_.supporter_hashtags = cfg_.supporters.exclusive_hashtags;
    truth_.opposer_hashtags = cfg_.opposers.exclusive_hashtags;

    group_originals(sup_, cfg_.supporters);
    group_originals(opp_, cfg_.opposers);
    group_originals(una_, cfg_.unaffiliated);
    group_interactions(sup_, cfg_.supporters, sup_, opp_);
    group_interactions(opp_, cfg_.opposers, opp_, sup_);
    group_interactions(una_, cfg_.unaffiliated, una_, una_);
    partition_edges(sup_, opp_);

    int clique_idx = 0;
    for (const CliqueSpec& spec : cfg_.cliques) {
        std::vector<Acct>& pool = spec.group == Affiliation::Supporter  ? sup_
                                  : spec.group == Affiliation::Opposer ? opp_
                                                                       : una_;
        plant_clique(spec, pool, clique_idx++);
    }
    int burst_idx = 0;
    for (const BurstSpec& spec : cfg_.bursts) plant_burst(spec, burst_idx++);
    bot_activity();
    background_activity();

    std::sort(truth_.supporters.begin(), truth_.supporters.end());
    std::sort(truth_.opposers.begin(), truth_.opposers.end());
    return truth_;
}

}  // namespace

GroundTruth generate(const ScenarioConfig& config, std::ostream& corpus_out) {
    config.validate();
    Generator gen(config, corpus_out);
    GroundTruth truth = gen.run();
    if (!corpus_out) throw std::runtime_error("generator: corpus stream write failed");
    return truth;
}

GroundTruth generate_files(const ScenarioConfig& config, const std::string& corpus_path,
                           const std::string& truth_path) {
    config.validate();
    std::string tmp = corpus_path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("generator: cannot open " + tmp);
        GroundTruth truth = generate(config, out);
        out.flush();
        if (!out) throw std::runtime_error("generator: write failed for " + tmp);
        out.close();
        std::error_code ec;
        std::filesystem::rename(tmp, corpus_path, ec);
        if (ec) throw std::runtime_error("generator: cannot finalize " + corpus_path);
        write_file_atomic(truth_path, truth.to_json());
        return truth;
    }
}

}  // namespace polarscope
