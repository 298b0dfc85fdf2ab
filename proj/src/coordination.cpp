#include "polarscope/coordination.hpp"

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "polarscope/graph_io.hpp"
#include "polarscope/url_utils.hpp"

namespace polarscope {

const char* to_string(CoActivityKind k) {
    switch (k) {
        case CoActivityKind::CoRetweet: return "co_retweet";
        case CoActivityKind::CoHashtag: return "co_hashtag";
        case CoActivityKind::CoUrl: return "co_url";
        case CoActivityKind::CoDomain: return "co_domain";
        case CoActivityKind::CoMention: return "co_mention";
    }
    return "?";
}

std::optional<CoActivityKind> co_activity_kind_from(std::string_view name) {
    if (name == "co_retweet") return CoActivityKind::CoRetweet;
    if (name == "co_hashtag") return CoActivityKind::CoHashtag;
    if (name == "co_url") return CoActivityKind::CoUrl;
    if (name == "co_domain") return CoActivityKind::CoDomain;
    if (name == "co_mention") return CoActivityKind::CoMention;
    return std::nullopt;
}

void CoActivityParams::validate() const {
    if (gamma_seconds <= 0) throw std::invalid_argument("co-activity: gamma must be positive");
    if (min_edge_weight < 1) throw std::invalid_argument("co-activity: min_edge_weight must be >= 1");
}

std::string CoActivityParams::describe() const {
    std::ostringstream os;
    os << "kind=" << to_string(kind) << " gamma=" << gamma_seconds << "s windowing="
       << (windowing == Windowing::Sliding ? "sliding" : "fixed_bins")
       << " min_edge_weight=" << min_edge_weight << " exclusions=" << exclusions.size();
    return os.str();
}

namespace {

struct Event {
    Timestamp t;
    std::uint32_t account;
};

struct EventTable {
    std::vector<std::string> accounts;                    // index -> id
    std::map<std::string, std::vector<Event>> by_reason;  // time-ordered (corpus order)
};

// Reasons a single tweet contributes, deduplicated within the tweet.
std::vector<std::string> tweet_reasons(const Corpus& corpus, TweetIndex i,
                                       const CoActivityParams& params) {
    const TweetRecord& t = corpus[i];
    std::vector<std::string> keys;
    switch (params.kind) {
        case CoActivityKind::CoRetweet:
            if (t.is_retweet()) keys.push_back(corpus.root_original(i));
            break;
        case CoActivityKind::CoHashtag:
            keys = t.hashtags;  // already lowercase
            break;
        case CoActivityKind::CoUrl:
            for (const auto& u : t.urls) keys.push_back(canonicalize_url(u));
            break;
        case CoActivityKind::CoDomain:
            for (const auto& u : t.urls) {
                std::string dom = registered_domain(host_of(u));
                if (!dom.empty()) keys.push_back(dom);
            }
            break;
        case CoActivityKind::CoMention:
            for (const auto& m : t.mentions) keys.push_back(m);
            break;
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::erase_if(keys, [&](const std::string& k) {
        return k.empty() || params.exclusions.count(k) > 0;
    });
    return keys;
}

EventTable collect_events(const Corpus& corpus, const CoActivityParams& params) {
    EventTable table;
    std::unordered_map<std::string, std::uint32_t> index;
    for (TweetIndex i = 0; i < corpus.size(); ++i) {
        const TweetRecord& t = corpus[i];
        std::vector<std::string> keys = tweet_reasons(corpus, i, params);
        if (keys.empty()) continue;
        auto [it, added] = index.try_emplace(t.author.account_id,
                                             static_cast<std::uint32_t>(table.accounts.size()));
        if (added) table.accounts.push_back(t.author.account_id);
        for (std::string& k : keys)
            table.by_reason[std::move(k)].push_back({t.created_at, it->second});
    }
    return table;
}

using PairCounts = std::unordered_map<std::uint64_t, std::int64_t>;

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

// +1 per unordered cross-account event pair within gamma.
void pair_sliding(const std::vector<Event>& ev, std::int64_t gamma, PairCounts& counts) {
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < ev.size(); ++hi) {
        while (ev[hi].t - ev[lo].t > gamma) ++lo;
        for (std::size_t k = lo; k < hi; ++k)
            if (ev[k].account != ev[hi].account) ++counts[pair_key(ev[k].account, ev[hi].account)];
    }
}

// +1 per (reason, bin) in which both accounts acted; bins anchored at t0.
void pair_fixed_bins(const std::vector<Event>& ev, std::int64_t gamma, Timestamp t0,
                     PairCounts& counts) {
    std::size_t i = 0;
    std::vector<std::uint32_t> bin_accounts;
    while (i < ev.size()) {
        std::int64_t bin = (ev[i].t - t0) / gamma;
        bin_accounts.clear();
        for (; i < ev.size() && (ev[i].t - t0) / gamma == bin; ++i)
            bin_accounts.push_back(ev[i].account);
        std::sort(bin_accounts.begin(), bin_accounts.end());
        bin_accounts.erase(std::unique(bin_accounts.begin(), bin_accounts.end()),
                           bin_accounts.end());
        for (std::size_t a = 0; a < bin_accounts.size(); ++a)
            for (std::size_t b = a + 1; b < bin_accounts.size(); ++b)
                ++counts[pair_key(bin_accounts[a], bin_accounts[b])];
    }
}

CoActivityGraph build(const Corpus& corpus, const CoActivityParams& params, bool with_reasons) {
    params.validate();
    CoActivityGraph out;
    out.kind = params.kind;
    EventTable table = collect_events(corpus, params);

    PairCounts counts;
    Timestamp t0 = corpus.tweets().empty() ? 0 : corpus.tweets().front().created_at;
    for (const auto& [reason, events] : table.by_reason) {
        if (params.windowing == Windowing::Sliding)
            pair_sliding(events, params.gamma_seconds, counts);
        else
            pair_fixed_bins(events, params.gamma_seconds, t0, counts);
    }

    struct Edge {
        std::string a, b;
        std::int64_t w;
    };
    std::vector<Edge> edges;
    edges.reserve(counts.size());
    for (const auto& [key, w] : counts) {
        if (w < params.min_edge_weight) continue;
        const std::string& a = table.accounts[key >> 32];
        const std::string& b = table.accounts[key & 0xffffffffu];
        edges.push_back(a < b ? Edge{a, b, w} : Edge{b, a, w});
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });

    if (with_reasons) {
        // every account with at least one qualifying event is a node
        std::vector<std::string> ids = table.accounts;
        std::sort(ids.begin(), ids.end());
        for (const std::string& id : ids) out.accounts.add_node(id);
        for (const auto& [reason, events] : table.by_reason) {
            auto& uses = out.reason_edges[reason];
            for (const Event& e : events) ++uses[table.accounts[e.account]];
        }
    } else {
        std::vector<std::string> ids;
        for (const Edge& e : edges) {
            ids.push_back(e.a);
            ids.push_back(e.b);
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (const std::string& id : ids) out.accounts.add_node(id);
    }
    for (const Edge& e : edges) out.accounts.add_edge(e.a, e.b, e.w);
    out.accounts.finalize();
    return out;
}

}  // namespace

CoActivityGraph co_activity(const Corpus& corpus, const CoActivityParams& params) {
    return build(corpus, params, false);
}

CoActivityGraph bigraph(const Corpus& corpus, const CoActivityParams& params) {
    return build(corpus, params, true);
}

namespace {

// Bron–Kerbosch with pivoting over one component's adjacency; census of
// maximal cliques by size. Search stops when the step budget runs out.
struct CliqueCensus {
    const std::vector<std::vector<int>>& adj;
    std::map<int, std::int64_t>& census;
    int& max_size;
    std::size_t budget;
    bool capped = false;

    bool connected(int u, int v) const {
        const auto& n = adj[u];
        return std::binary_search(n.begin(), n.end(), v);
    }

    void run(std::vector<int>& r, std::vector<int> p, std::vector<int> x) {
        if (budget == 0) {
            capped = true;
            return;
        }
        --budget;
        if (p.empty() && x.empty()) {
            int size = static_cast<int>(r.size());
            if (size >= 3) {
                max_size = std::max(max_size, size);
                ++census[std::min(size, 7)];
            }
            return;
        }
        // pivot: vertex of P ∪ X with most neighbors in P
        int pivot = -1;
        std::size_t best = 0;
        for (const auto* s : {&p, &x})
            for (int u : *s) {
                std::size_t c = 0;
                for (int v : p) c += connected(u, v);
                if (pivot < 0 || c > best) {
                    pivot = u;
                    best = c;
                }
            }
        std::vector<int> cand;
        for (int v : p)
            if (!connected(pivot, v)) cand.push_back(v);
        for (int v : cand) {
            std::vector<int> p2, x2;
            for (int u : p)
                if (connected(v, u)) p2.push_back(u);
            for (int u : x)
                if (connected(v, u)) x2.push_back(u);
            r.push_back(v);
            run(r, std::move(p2), std::move(x2));
            r.pop_back();
            if (capped) return;
            p.erase(std::find(p.begin(), p.end(), v));
            x.insert(std::lower_bound(x.begin(), x.end(), v), v);
        }
    }
};

}  // namespace

CoordinationReport coordination_report(const CoActivityGraph& graph, const AffiliationMap& aff,
                                       std::size_t top_components, std::size_t clique_step_budget) {
    CoordinationReport report;
    std::vector<std::vector<NodeId>> comps = graph.accounts.weak_components();
    report.total_components = comps.size();
    for (std::size_t c = 0; c < comps.size() && c < top_components; ++c) {
        ComponentSummary s;
        for (NodeId n : comps[c]) {
            s.members.push_back(graph.accounts.id(n));
            ++s.affiliation_counts[aff.of(s.members.back())];
        }
        std::sort(s.members.begin(), s.members.end());

        // local adjacency for the clique search
        std::vector<NodeId> nodes = comps[c];
        std::sort(nodes.begin(), nodes.end());
        std::vector<std::vector<int>> adj(nodes.size());
        auto local = [&](NodeId n) {
            return static_cast<int>(std::lower_bound(nodes.begin(), nodes.end(), n) -
                                    nodes.begin());
        };
        for (NodeId n : nodes)
            for (const Arc& a : graph.accounts.neighbors(n))
                if (a.to != n && std::binary_search(nodes.begin(), nodes.end(), a.to))
                    adj[local(n)].push_back(local(a.to));
        for (auto& v : adj) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }

        CliqueCensus search{adj, s.clique_census, s.max_clique_size, clique_step_budget};
        std::vector<int> r, p(nodes.size()), x;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<int>(i);
        search.run(r, std::move(p), std::move(x));
        s.clique_search_capped = search.capped;
        report.components.push_back(std::move(s));
    }
    return report;
}

std::string coordination_graphml(const CoActivityGraph& graph, const AffiliationMap& aff) {
    const char* subtype = nullptr;
    switch (graph.kind) {
        case CoActivityKind::CoRetweet: subtype = "tweet"; break;
        case CoActivityKind::CoHashtag: subtype = "hashtag"; break;
        case CoActivityKind::CoUrl: subtype = "url"; break;
        case CoActivityKind::CoDomain: subtype = "domain"; break;
        case CoActivityKind::CoMention: subtype = "mentioned_account"; break;
    }
    Graph g(false);
    std::vector<std::string> accounts;
    for (NodeId n = 0; n < graph.accounts.node_count(); ++n)
        accounts.push_back(graph.accounts.id(n));
    std::sort(accounts.begin(), accounts.end());
    for (const auto& id : accounts) g.add_node(id);
    for (const auto& [reason, uses] : graph.reason_edges) g.add_node("reason:" + reason);
    for (const auto& [src, dst, w] : graph.accounts.edges())
        g.add_edge(graph.accounts.id(src), graph.accounts.id(dst), w);
    for (const auto& [reason, uses] : graph.reason_edges)
        for (const auto& [account, count] : uses) g.add_edge(account, "reason:" + reason, count);
    g.finalize();

    GraphmlSpec spec;
    spec.graph_id = std::string("coactivity_") + to_string(graph.kind);
    spec.node_attrs.push_back({"kind", "string", [](const std::string& id) {
                                   return std::optional<std::string>(
                                       id.rfind("reason:", 0) == 0 ? "reason" : "account");
                               }});
    spec.node_attrs.push_back({"subtype", "string", [subtype](const std::string& id) {
                                   if (id.rfind("reason:", 0) != 0) return std::optional<std::string>();
                                   return std::optional<std::string>(subtype);
                               }});
    spec.node_attrs.push_back({"affiliation", "string", [&aff](const std::string& id) {
                                   if (id.rfind("reason:", 0) == 0) return std::optional<std::string>();
                                   return std::optional<std::string>(to_string(aff.of(id)));
                               }});
    return graphml_string(g, spec);
}

}  // namespace polarscope
