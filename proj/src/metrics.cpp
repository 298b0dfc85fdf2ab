#include "polarscope/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>
#include <thread>

namespace polarscope {

std::optional<double> CentralityReport::value(const std::vector<double>& metric,
                                              const std::string& id) const {
    auto it = std::lower_bound(node_ids.begin(), node_ids.end(), id);
    if (it == node_ids.end() || *it != id) return std::nullopt;
    std::size_t idx = static_cast<std::size_t>(it - node_ids.begin());
    if (idx >= metric.size()) return std::nullopt;
    return metric[idx];
}

namespace {

// simple undirected adjacency (distinct neighbors, no self-loops), in the
// sorted-id node order used by CentralityReport
struct SimpleView {
    std::vector<std::vector<std::uint32_t>> adj;
    std::vector<NodeId> original;  // report index -> graph node
};

SimpleView simple_view(const Graph& g, const std::vector<NodeId>& order) {
    SimpleView v;
    const std::size_t n = order.size();
    std::vector<std::uint32_t> pos(g.node_count());
    for (std::size_t i = 0; i < n; ++i) pos[order[i]] = static_cast<std::uint32_t>(i);
    v.adj.resize(n);
    v.original = order;
    for (std::size_t i = 0; i < n; ++i) {
        for (const Arc& a : g.neighbors(order[i]))
            if (a.to != order[i]) v.adj[i].push_back(pos[a.to]);
        std::sort(v.adj[i].begin(), v.adj[i].end());
        v.adj[i].erase(std::unique(v.adj[i].begin(), v.adj[i].end()), v.adj[i].end());
    }
    return v;
}

// Brandes betweenness over directed unweighted shortest paths; sources are
// fanned out across threads, each with private accumulators merged in thread
// order afterwards.
std::vector<double> brandes_betweenness(const Graph& g, const std::vector<NodeId>& order,
                                        int threads) {
    const std::size_t n = order.size();
    std::vector<std::uint32_t> pos(g.node_count());
    for (std::size_t i = 0; i < n; ++i) pos[order[i]] = static_cast<std::uint32_t>(i);
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const Arc& a : g.out(order[i]))
            if (a.to != order[i]) adj[i].push_back(pos[a.to]);
        // out() is sorted by neighbor; parallel edges were merged in finalize
    }
    if (n < 3) return std::vector<double>(n, 0.0);

    int nthreads = std::max(1, threads);
    if (static_cast<std::size_t>(nthreads) > n) nthreads = static_cast<int>(n);
    std::vector<std::vector<double>> partial(nthreads, std::vector<double>(n, 0.0));

    auto worker = [&](int tid) {
        std::vector<double>& score = partial[tid];
        std::vector<std::int64_t> sigma(n);
        std::vector<std::int32_t> dist(n);
        std::vector<double> delta(n);
        std::vector<std::vector<std::uint32_t>> preds(n);
        std::vector<std::uint32_t> bfs_order;
        bfs_order.reserve(n);
        std::deque<std::uint32_t> queue;
        for (std::size_t s = tid; s < n; s += nthreads) {
            std::fill(sigma.begin(), sigma.end(), 0);
            std::fill(dist.begin(), dist.end(), -1);
            std::fill(delta.begin(), delta.end(), 0.0);
            for (auto& p : preds) p.clear();
            bfs_order.clear();
            sigma[s] = 1;
            dist[s] = 0;
            queue.push_back(static_cast<std::uint32_t>(s));
            while (!queue.empty()) {
                std::uint32_t v = queue.front();
                queue.pop_front();
                bfs_order.push_back(v);
                for (std::uint32_t w : adj[v]) {
                    if (dist[w] < 0) {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                    if (dist[w] == dist[v] + 1) {
                        sigma[w] += sigma[v];
                        preds[w].push_back(v);
                    }
                }
            }
            for (auto it = bfs_order.rbegin(); it != bfs_order.rend(); ++it) {
                std::uint32_t w = *it;
                for (std::uint32_t v : preds[w])
                    delta[v] += (static_cast<double>(sigma[v]) / static_cast<double>(sigma[w])) *
                                (1.0 + delta[w]);
                if (w != s) score[w] += delta[w];
            }
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    std::vector<double> out(n, 0.0);
    for (int t = 0; t < nthreads; ++t)
        for (std::size_t i = 0; i < n; ++i) out[i] += partial[t][i];
    const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2);
    for (double& v : out) v /= norm;
    return out;
}

void closeness_scores(const SimpleView& view, std::vector<double>& harmonic,
                      std::vector<double>& wf) {
    const std::size_t n = view.adj.size();
    harmonic.assign(n, 0.0);
    wf.assign(n, 0.0);
    if (n < 2) return;
    std::vector<std::int32_t> dist(n);
    std::vector<std::uint32_t> queue(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::size_t head = 0, tail = 0;
        dist[s] = 0;
        queue[tail++] = static_cast<std::uint32_t>(s);
        double inv_sum = 0.0;
        std::int64_t dist_sum = 0, reached = 1;
        while (head < tail) {
            std::uint32_t v = queue[head++];
            for (std::uint32_t w : view.adj[v]) {
                if (dist[w] >= 0) continue;
                dist[w] = dist[v] + 1;
                queue[tail++] = w;
                inv_sum += 1.0 / dist[w];
                dist_sum += dist[w];
                ++reached;
            }
        }
        harmonic[s] = inv_sum / static_cast<double>(n - 1);
        if (dist_sum > 0) {
            double r1 = static_cast<double>(reached - 1);
            wf[s] = (r1 / static_cast<double>(n - 1)) * (r1 / static_cast<double>(dist_sum));
        }
    }
}

std::vector<double> eigenvector_scores(const Graph& g, const std::vector<NodeId>& order,
                                       int max_iter, double tol, const std::string& name) {
    const std::size_t n = order.size();
    std::vector<double> x(n, 0.0);
    if (n == 0) return x;
    if (n == 1) return x;  // single node: score 0 by convention
    std::vector<std::uint32_t> pos(g.node_count());
    for (std::size_t i = 0; i < n; ++i) pos[order[i]] = static_cast<std::uint32_t>(i);

    std::fill(x.begin(), x.end(), 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> y(n);
    for (int it = 0; it < max_iter; ++it) {
        // y = (A_sym + I) x
        for (std::size_t i = 0; i < n; ++i) {
            double acc = x[i];
            for (const Arc& a : g.neighbors(order[i]))
                acc += static_cast<double>(a.weight) * x[pos[a.to]];
            y[i] = acc;
        }
        double norm = 0.0;
        for (double v : y) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) return x;
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] /= norm;
            double d = y[i] - x[i];
            diff += d * d;
        }
        x.swap(y);
        if (std::sqrt(diff) < tol) return x;
    }
    throw std::runtime_error("eigenvector centrality did not converge" +
                             (name.empty() ? std::string() : " on network " + name));
}

}  // namespace

CentralityReport centralities(const Graph& g, const CentralityOptions& opt) {
    CentralityReport rep;
    const std::size_t n = g.node_count();
    std::vector<NodeId> order(n);
    for (NodeId v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(),
              [&](NodeId a, NodeId b) { return g.id(a) < g.id(b); });
    rep.node_ids.reserve(n);
    for (NodeId v : order) rep.node_ids.push_back(g.id(v));

    SimpleView view = simple_view(g, order);
    if (opt.degree) {
        rep.degree.assign(n, 0.0);
        if (n > 1)
            for (std::size_t i = 0; i < n; ++i)
                rep.degree[i] =
                    static_cast<double>(view.adj[i].size()) / static_cast<double>(n - 1);
    }
    if (opt.betweenness) rep.betweenness = brandes_betweenness(g, order, opt.threads);
    if (opt.closeness) closeness_scores(view, rep.closeness, rep.closeness_wf);
    if (opt.eigenvector)
        rep.eigenvector = eigenvector_scores(g, order, opt.eigenvector_max_iter,
                                             opt.eigenvector_tolerance, opt.network_name);
    return rep;
}

std::map<Affiliation, double> group_mean(const CentralityReport& rep,
                                         const std::vector<double>& metric,
                                         const AffiliationMap& aff) {
    std::map<Affiliation, double> sum;
    std::map<Affiliation, std::int64_t> cnt;
    for (std::size_t i = 0; i < rep.node_ids.size() && i < metric.size(); ++i) {
        Affiliation a = aff.of(rep.node_ids[i]);
        sum[a] += metric[i];
        cnt[a]++;
    }
    std::map<Affiliation, double> out;
    for (auto& [a, s] : sum) out[a] = s / static_cast<double>(cnt[a]);
    return out;
}

KCoreResult kcore(const Graph& g) {
    KCoreResult res;
    const std::size_t n = g.node_count();
    std::vector<NodeId> order(n);
    for (NodeId v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(),
              [&](NodeId a, NodeId b) { return g.id(a) < g.id(b); });
    for (NodeId v : order) res.node_ids.push_back(g.id(v));
    SimpleView view = simple_view(g, order);

    // bucket-queue peeling
    std::vector<std::uint32_t> degree(n);
    std::uint32_t maxd = 0;
    for (std::size_t i = 0; i < n; ++i) {
        degree[i] = static_cast<std::uint32_t>(view.adj[i].size());
        maxd = std::max(maxd, degree[i]);
    }
    std::vector<std::uint32_t> bin(maxd + 2, 0);
    for (std::size_t i = 0; i < n; ++i) bin[degree[i]]++;
    std::uint32_t start = 0;
    for (std::uint32_t d = 0; d <= maxd; ++d) {
        std::uint32_t c = bin[d];
        bin[d] = start;
        start += c;
    }
    std::vector<std::uint32_t> vert(n), posn(n);
    {
        std::vector<std::uint32_t> next(bin.begin(), bin.end());
        for (std::uint32_t v = 0; v < n; ++v) {
            posn[v] = next[degree[v]]++;
            vert[posn[v]] = v;
        }
    }
    std::vector<std::uint32_t> deg = degree;
    std::vector<int> core(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t v = vert[i];
        core[v] = static_cast<int>(deg[v]);
        for (std::uint32_t u : view.adj[v]) {
            if (deg[u] <= deg[v]) continue;
            // swap u to the front of its bucket, then shrink its degree
            std::uint32_t du = deg[u], pu = posn[u];
            std::uint32_t pw = bin[du], w = vert[pw];
            if (u != w) {
                posn[u] = pw;
                vert[pw] = u;
                posn[w] = pu;
                vert[pu] = w;
            }
            bin[du]++;
            deg[u]--;
        }
    }
    res.core.assign(core.begin(), core.end());
    res.max_core = n ? *std::max_element(res.core.begin(), res.core.end()) : 0;
    return res;
}

std::map<Affiliation, std::map<int, std::int64_t>> KCoreResult::histogram(
    const AffiliationMap& aff) const {
    std::map<Affiliation, std::map<int, std::int64_t>> out;
    for (std::size_t i = 0; i < node_ids.size(); ++i) out[aff.of(node_ids[i])][core[i]]++;
    return out;
}

EiResult ei_index(const Graph& g, const AffiliationMap& aff, const EiOptions& opt) {
    Graph sym = g.directed() ? g.symmetrized() : g;
    if (!sym.finalized()) sym.finalize();
    EiResult res;
    // per-group weight sums for the modified variant
    std::map<Affiliation, std::int64_t> w_int, w_ext;
    for (const auto& e : sym.edges()) {
        if (e.from == e.to) continue;
        const std::string& u = sym.id(e.from);
        const std::string& v = sym.id(e.to);
        Affiliation au = aff.of(u), av = aff.of(v);
        bool lu = au != Affiliation::Unaffiliated, lv = av != Affiliation::Unaffiliated;
        if (!lu && !lv) continue;
        if (opt.scope == EiScope::LabeledOnly && (!lu || !lv)) continue;
        std::int64_t w = opt.weighted || opt.variant == EiVariant::Modified ? e.weight : 1;
        if (lu && lv && au == av) {
            res.internal_edges++;
            res.internal_weight += e.weight;
            w_int[au] += w;
        } else {
            res.external_edges++;
            res.external_weight += e.weight;
            if (lu) w_ext[au] += w;
            if (lv && av != au) w_ext[av] += w;
        }
    }
    if (res.internal_edges + res.external_edges == 0)
        throw std::domain_error("E-I index undefined: no qualifying edges in scope");

    if (opt.variant == EiVariant::Classic) {
        double E, I;
        if (opt.weighted) {
            E = static_cast<double>(res.external_weight);
            I = static_cast<double>(res.internal_weight);
        } else {
            E = static_cast<double>(res.external_edges);
            I = static_cast<double>(res.internal_edges);
        }
        res.value = (E - I) / (E + I);
        return res;
    }
    // modified: per-group normalized weight proportions
    std::int64_t pooled_int = 0, pooled_ext = 0;
    double mean = 0.0;
    int groups = 0;
    for (Affiliation a : {Affiliation::Supporter, Affiliation::Opposer}) {
        std::int64_t wi = w_int.count(a) ? w_int[a] : 0;
        std::int64_t we = w_ext.count(a) ? w_ext[a] : 0;
        if (wi + we == 0) continue;
        double e = static_cast<double>(we) / static_cast<double>(wi + we);
        res.per_group[a] = e - (1.0 - e);
        mean += res.per_group[a];
        ++groups;
        pooled_int += wi;
        pooled_ext += we;
    }
    if (groups == 0) throw std::domain_error("modified E-I undefined: no labeled-group edges");
    if (opt.combine == EiCombine::GroupMean) {
        res.value = mean / groups;
    } else {
        double e = static_cast<double>(pooled_ext) / static_cast<double>(pooled_int + pooled_ext);
        res.value = e - (1.0 - e);
    }
    return res;
}

double categorical_assortativity(const Graph& g, const AffiliationMap& aff) {
    Graph sym = g.directed() ? g.symmetrized() : g;
    if (!sym.finalized()) sym.finalize();
    // symmetric weighted mixing matrix over labeled endpoints
    double e[2][2] = {{0, 0}, {0, 0}};
    double total = 0.0;
    for (const auto& edge : sym.edges()) {
        if (edge.from == edge.to) continue;
        Affiliation au = aff.of(sym.id(edge.from));
        Affiliation av = aff.of(sym.id(edge.to));
        if (au == Affiliation::Unaffiliated || av == Affiliation::Unaffiliated) continue;
        int i = au == Affiliation::Supporter ? 0 : 1;
        int j = av == Affiliation::Supporter ? 0 : 1;
        double w = static_cast<double>(edge.weight);
        e[i][j] += w / 2.0;
        e[j][i] += w / 2.0;
        total += w;
    }
    if (total == 0.0) throw std::domain_error("assortativity undefined: no labeled edges");
    double trace = 0.0, agreement = 0.0;
    for (int i = 0; i < 2; ++i) {
        double ai = 0.0, bi = 0.0;
        for (int j = 0; j < 2; ++j) {
            ai += e[i][j] / total;
            bi += e[j][i] / total;
        }
        trace += e[i][i] / total;
        agreement += ai * bi;
    }
    if (std::abs(1.0 - agreement) < 1e-15)
        throw std::domain_error("assortativity undefined: degenerate mixing matrix");
    return (trace - agreement) / (1.0 - agreement);
}

namespace {

int group_index(Affiliation a) {
    switch (a) {
        case Affiliation::Supporter: return 0;
        case Affiliation::Opposer: return 1;
        case Affiliation::Unaffiliated: return 2;
    }
    return 2;
}

}  // namespace

GroupMatrix group_matrix(const PhasedCorpus& phased, const AffiliationMap& aff,
                         InteractionKind kind, std::optional<int> phase) {
    GroupMatrix m;
    const Corpus& corpus = phased.corpus();
    for (TweetIndex i = 0; i < corpus.size(); ++i) {
        if (phase && phased.phase_of(i) != *phase) continue;
        const TweetRecord& t = corpus[i];
        int src = group_index(aff.of(t.author.account_id));
        auto add = [&](const std::string& target) {
            if (!target.empty()) m.raw[src][group_index(aff.of(target))]++;
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
                for (const auto& men : t.mentions) add(men);
                break;
        }
    }
    for (int i = 0; i < 3; ++i) {
        std::int64_t row = m.raw[i][0] + m.raw[i][1] + m.raw[i][2];
        if (row == 0) continue;
        for (int j = 0; j < 3; ++j)
            m.proportion[i][j] = static_cast<double>(m.raw[i][j]) / static_cast<double>(row);
    }
    return m;
}

ConcentrationTable retweet_concentration(const PhasedCorpus& phased, const AffiliationMap& aff) {
    ConcentrationTable table;
    table.phase_count = phased.phase_count();
    const int P = table.phase_count;
    for (auto& v : table.cells) v.assign(P + 1, ConcentrationCell{});
    // distinct retweeted accounts per cell
    std::array<std::vector<std::set<std::string_view>>, 3> targets;
    for (auto& v : targets) v.resize(P + 1);

    const Corpus& corpus = phased.corpus();
    for (TweetIndex i = 0; i < corpus.size(); ++i) {
        const TweetRecord& t = corpus[i];
        if (!t.retweet_of || t.retweet_of->account_id.empty()) continue;
        int gi = group_index(aff.of(t.author.account_id));
        int p = phased.phase_of(i) - 1;
        for (int cell : {p, P}) {
            table.cells[gi][cell].retweets++;
            targets[gi][cell].insert(t.retweet_of->account_id);
        }
    }
    for (int gi = 0; gi < 3; ++gi)
        for (int c = 0; c <= P; ++c) {
            auto& cell = table.cells[gi][c];
            cell.retweeted_accounts = static_cast<std::int64_t>(targets[gi][c].size());
            if (cell.retweeted_accounts > 0)
                cell.retweets_per_account = static_cast<double>(cell.retweets) /
                                            static_cast<double>(cell.retweeted_accounts);
        }
    return table;
}

std::int64_t ActivityTable::metric_of(const ActivityCell& c, std::size_t metric_index) {
    switch (metric_index) {
        case 0: return c.tweets;
        case 1: return c.hashtags;
        case 2: return c.mentions;
        case 3: return c.quotes;
        case 4: return c.replies;
        case 5: return c.retweets;
        case 6: return c.urls;
    }
    return 0;
}

ActivityTable activity_table(const PhasedCorpus& phased, const AffiliationMap& aff) {
    ActivityTable table;
    table.phase_count = phased.phase_count();
    const int P = table.phase_count;
    for (auto& v : table.cells) v.assign(P + 1, ActivityCell{});
    std::array<std::vector<std::set<std::string_view>>, 3> actives;
    for (auto& v : actives) v.resize(P + 1);

    const Corpus& corpus = phased.corpus();
    for (TweetIndex i = 0; i < corpus.size(); ++i) {
        const TweetRecord& t = corpus[i];
        int gi = group_index(aff.of(t.author.account_id));
        int p = phased.phase_of(i) - 1;
        for (int c : {p, P}) {
            ActivityCell& cell = table.cells[gi][c];
            cell.tweets++;
            cell.hashtags += static_cast<std::int64_t>(t.hashtags.size());
            cell.mentions += static_cast<std::int64_t>(t.mentions.size());
            cell.urls += static_cast<std::int64_t>(t.urls.size());
            if (t.is_quote()) cell.quotes++;
            if (t.is_reply()) cell.replies++;
            if (t.is_retweet()) cell.retweets++;
            actives[gi][c].insert(t.author.account_id);
        }
    }
    for (int gi = 0; gi < 3; ++gi)
        for (int c = 0; c <= P; ++c)
            table.cells[gi][c].accounts = static_cast<std::int64_t>(actives[gi][c].size());
    return table;
}

}  // namespace polarscope
