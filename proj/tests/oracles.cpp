#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace oracle {

using polarscope::Arc;
using polarscope::Graph;
using polarscope::NodeId;

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// dense all-pairs unweighted distances + path counts over the given adjacency
void paths(const std::vector<std::vector<std::size_t>>& adj,
           std::vector<std::vector<std::int64_t>>& dist,
           std::vector<std::vector<double>>& sigma) {
    const std::size_t n = adj.size();
    dist.assign(n, std::vector<std::int64_t>(n, kInf));
    sigma.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t s = 0; s < n; ++s) {
        dist[s][s] = 0;
        sigma[s][s] = 1.0;
        std::vector<std::size_t> frontier{s};
        while (!frontier.empty()) {
            std::vector<std::size_t> next;
            for (std::size_t v : frontier)
                for (std::size_t w : adj[v]) {
                    if (dist[s][w] == kInf) {
                        dist[s][w] = dist[s][v] + 1;
                        next.push_back(w);
                    }
                    if (dist[s][w] == dist[s][v] + 1) sigma[s][w] += sigma[s][v];
                }
            // dedupe: a node may be appended once per discovering neighbor
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            frontier = std::move(next);
        }
    }
}

std::vector<std::vector<std::size_t>> out_adj(const Graph& g) {
    std::vector<std::vector<std::size_t>> adj(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v)
        for (const Arc& a : g.out(static_cast<NodeId>(v)))
            if (a.to != v) adj[v].push_back(a.to);
    return adj;
}

std::vector<std::vector<std::size_t>> sym_adj(const Graph& g) {
    std::vector<std::set<std::size_t>> nbr(g.node_count());
    for (const auto& e : g.edges()) {
        if (e.from == e.to) continue;
        nbr[e.from].insert(e.to);
        nbr[e.to].insert(e.from);
    }
    std::vector<std::vector<std::size_t>> adj(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v) adj[v].assign(nbr[v].begin(), nbr[v].end());
    return adj;
}

}  // namespace

std::vector<double> betweenness(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> score(n, 0.0);
    if (n < 3) return score;
    std::vector<std::vector<std::int64_t>> dist;
    std::vector<std::vector<double>> sigma;
    paths(out_adj(g), dist, sigma);
    for (std::size_t v = 0; v < n; ++v) {
        double total = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            if (s == v) continue;
            for (std::size_t t = 0; t < n; ++t) {
                if (t == v || t == s || sigma[s][t] == 0.0) continue;
                if (dist[s][v] + dist[v][t] == dist[s][t])
                    total += sigma[s][v] * sigma[v][t] / sigma[s][t];
            }
        }
        score[v] = total / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
    }
    return score;
}

Closeness closeness(const Graph& g) {
    const std::size_t n = g.node_count();
    Closeness c;
    c.harmonic.assign(n, 0.0);
    c.wf.assign(n, 0.0);
    if (n < 2) return c;
    std::vector<std::vector<std::int64_t>> dist;
    std::vector<std::vector<double>> sigma;
    paths(sym_adj(g), dist, sigma);
    for (std::size_t v = 0; v < n; ++v) {
        double inv = 0.0, dsum = 0.0, reach = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            if (u == v || dist[v][u] >= kInf) continue;
            inv += 1.0 / static_cast<double>(dist[v][u]);
            dsum += static_cast<double>(dist[v][u]);
            reach += 1.0;
        }
        c.harmonic[v] = inv / static_cast<double>(n - 1);
        if (dsum > 0.0) c.wf[v] = (reach / static_cast<double>(n - 1)) * (reach / dsum);
    }
    return c;
}

std::vector<double> degree(const Graph& g) {
    auto adj = sym_adj(g);
    const std::size_t n = g.node_count();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    for (std::size_t v = 0; v < n; ++v)
        d[v] = static_cast<double>(adj[v].size()) / static_cast<double>(n - 1);
    return d;
}

std::vector<double> eigenvector(const Graph& g) {
    const std::size_t n = g.node_count();
    // dense symmetrized weighted adjacency + identity shift
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (const auto& e : g.edges()) {
        double w = static_cast<double>(e.weight);
        if (g.directed()) {
            a[e.from][e.to] += w;
            a[e.to][e.from] += w;
        } else {
            a[e.from][e.to] += w;
            if (e.from != e.to) a[e.to][e.from] += w;
        }
    }
    for (std::size_t i = 0; i < n; ++i) a[i][i] += 1.0;

    // cyclic Jacobi; V accumulates the rotations (columns = eigenvectors)
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-18) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double cs = 1.0 / std::sqrt(t * t + 1.0);
                double sn = t * cs;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = cs * vkp - sn * vkq;
                    v[k][q] = sn * vkp + cs * vkq;
                }
            }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (a[i][i] > a[best][best]) best = i;
    std::vector<double> x(n);
    double norm = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = v[i][best];
        norm += x[i] * x[i];
        sum += x[i];
    }
    norm = std::sqrt(norm);
    double sign = sum < 0.0 ? -1.0 : 1.0;
    for (double& xi : x) xi = sign * xi / norm;
    return x;
}

std::vector<int> kcore(const Graph& g) {
    auto adj = sym_adj(g);
    const std::size_t n = adj.size();
    std::vector<int> core(n, 0);
    std::vector<bool> removed(n, false);
    for (int k = 1;; ++k) {
        // peel everything with degree < k in the survivor graph
        bool any_left = false;
        bool changed = true;
        std::vector<bool> gone = removed;
        while (changed) {
            changed = false;
            for (std::size_t v = 0; v < n; ++v) {
                if (gone[v]) continue;
                std::size_t deg = 0;
                for (std::size_t u : adj[v])
                    if (!gone[u]) ++deg;
                if (deg < static_cast<std::size_t>(k)) {
                    gone[v] = true;
                    changed = true;
                }
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (!removed[v] && gone[v]) core[v] = k - 1;  // fell out at level k
            if (!gone[v]) any_left = true;
        }
        removed = gone;
        if (!any_left) break;
    }
    return core;
}

EiCount ei_classic(const Graph& g,
                   const std::map<std::string, polarscope::Affiliation>& labels) {
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& e : g.edges()) {
        if (e.from == e.to) continue;
        pairs.insert({std::min<std::size_t>(e.from, e.to), std::max<std::size_t>(e.from, e.to)});
    }
    EiCount out;
    for (const auto& [a, b] : pairs) {
        auto la = labels.find(g.id(static_cast<NodeId>(a)));
        auto lb = labels.find(g.id(static_cast<NodeId>(b)));
        if (la == labels.end() || lb == labels.end()) continue;
        if (la->second == polarscope::Affiliation::Unaffiliated ||
            lb->second == polarscope::Affiliation::Unaffiliated)
            continue;
        if (la->second == lb->second) ++out.internal;
        else ++out.external;
    }
    if (out.internal + out.external > 0)
        out.value = static_cast<double>(out.external - out.internal) /
                    static_cast<double>(out.external + out.internal);
    return out;
}

std::vector<std::pair<std::pair<std::string, std::string>, std::int64_t>> co_activity(
    const std::vector<Event>& events, std::int64_t gamma) {
    std::map<std::pair<std::string, std::string>, std::int64_t> weights;
    for (std::size_t i = 0; i < events.size(); ++i)
        for (std::size_t j = i + 1; j < events.size(); ++j) {
            const Event& a = events[i];
            const Event& b = events[j];
            if (a.reason != b.reason || a.account == b.account) continue;
            std::int64_t dt = a.at >= b.at ? a.at - b.at : b.at - a.at;
            if (dt > gamma) continue;
            auto key = a.account < b.account ? std::make_pair(a.account, b.account)
                                             : std::make_pair(b.account, a.account);
            ++weights[key];
        }
    return {weights.begin(), weights.end()};
}

double conductance(const Graph& undirected, const std::vector<NodeId>& side) {
    std::set<NodeId> in(side.begin(), side.end());
    double cut = 0.0, vol_in = 0.0, vol_all = 0.0;
    for (const auto& e : undirected.edges()) {
        double w = static_cast<double>(e.weight);
        double contrib = 2.0 * w;  // each edge end contributes; self-loops count twice
        vol_all += contrib;
        bool fa = in.count(e.from) > 0, fb = in.count(e.to) > 0;
        if (fa && fb) vol_in += contrib;
        else if (fa || fb) {
            vol_in += w;
            cut += w;
        }
    }
    double vol_out = vol_all - vol_in;
    double denom = std::min(vol_in, vol_out);
    return denom > 0.0 ? cut / denom : 0.0;
}

}  // namespace oracle
