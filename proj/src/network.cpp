#include "polarscope/network.hpp"

#include <algorithm>
#include <unordered_set>

namespace polarscope {

const char* to_string(InteractionKind k) {
    switch (k) {
        case InteractionKind::Retweet: return "retweet";
        case InteractionKind::Reply: return "reply";
        case InteractionKind::Mention: return "mention";
        case InteractionKind::Quote: return "quote";
    }
    return "?";
}

std::optional<InteractionKind> interaction_kind_from(std::string_view name) {
    if (name == "retweet") return InteractionKind::Retweet;
    if (name == "reply") return InteractionKind::Reply;
    if (name == "mention") return InteractionKind::Mention;
    if (name == "quote") return InteractionKind::Quote;
    return std::nullopt;
}

bool InteractionNetwork::is_observed_only(std::string_view account_id) const {
    return std::binary_search(observed_only.begin(), observed_only.end(), account_id);
}

InteractionNetwork build_network(const PhasedCorpus& phased, InteractionKind kind,
                                 std::optional<int> phase) {
    const Corpus& corpus = phased.corpus();
    InteractionNetwork net;
    net.kind = kind;
    net.phase = phase;
    std::unordered_set<std::string_view> authors;

    for (TweetIndex i = 0; i < corpus.size(); ++i) {
        if (phase && phased.phase_of(i) != *phase) continue;
        const TweetRecord& t = corpus[i];
        authors.insert(t.author.account_id);
        auto add = [&](const std::string& target) {
            if (!target.empty()) net.graph.add_edge(t.author.account_id, target, 1);
        };
        switch (kind) {
            case InteractionKind::Retweet:
                if (t.retweet_of) add(t.retweet_of->account_id);
                break;
            case InteractionKind::Reply:
                if (t.reply_to) add(t.reply_to->account_id);
                break;
            case InteractionKind::Quote:
                if (t.quote_of) add(t.quote_of->account_id);
                break;
            case InteractionKind::Mention:
                for (const auto& m : t.mentions) add(m);
                break;
        }
    }
    net.graph.finalize();
    for (const auto& id : net.graph.node_ids())
        if (!authors.count(id)) net.observed_only.push_back(id);
    std::sort(net.observed_only.begin(), net.observed_only.end());
    return net;
}

ComponentSelection largest_component(const Graph& g, bool strong) {
    ComponentSelection sel;
    sel.total_nodes = g.node_count();
    if (g.node_count() == 0) return sel;
    auto comps = strong ? g.strong_components() : g.weak_components();
    const auto& best = comps.front();  // components come back size-desc
    sel.graph = g.induced(best);
    sel.component_nodes = best.size();
    sel.coverage = static_cast<double>(best.size()) / static_cast<double>(g.node_count());
    return sel;
}

NetworkStats network_stats(const InteractionNetwork& net) {
    NetworkStats s;
    s.nodes = net.graph.node_count();
    s.edges = net.graph.edge_count();
    s.total_weight = net.graph.total_weight();
    s.observed_only = net.observed_only.size();
    if (s.nodes) {
        auto comps = net.graph.weak_components();
        s.weak_components = comps.size();
        s.lcc_nodes = comps.front().size();
        s.lcc_coverage = static_cast<double>(s.lcc_nodes) / static_cast<double>(s.nodes);
    }
    return s;
}

}  // namespace polarscope
