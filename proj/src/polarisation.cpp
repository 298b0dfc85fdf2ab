#include "polarscope/polarisation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace polarscope {

std::string ClusterParams::describe() const {
    return "target=" + std::to_string(target_clusters) +
           " threshold=" + std::to_string(conductance_threshold) +
           " min_size=" + std::to_string(min_cluster_size) + " seed=" + std::to_string(seed) +
           (use_weights ? " weighted" : " unweighted");
}

std::size_t Partition::cluster_of(const std::string& account_id) const {
    for (std::size_t i = 0; i < clusters.size(); ++i)
        if (std::binary_search(clusters[i].begin(), clusters[i].end(), account_id)) return i;
    return npos;
}

double conductance(const Graph& g, const std::vector<NodeId>& side) {
    std::vector<bool> in_side(g.node_count(), false);
    for (NodeId v : side) in_side[v] = true;
    std::int64_t cut = 0, vol_s = 0, vol_total = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        std::int64_t d = 0;
        for (const Arc& a : g.neighbors(v)) {
            d += a.weight;
            if (a.to == v) d += a.weight;  // self-loop: both endpoints here
            else if (in_side[v] != in_side[a.to] && in_side[v]) cut += a.weight;
        }
        vol_total += d;
        if (in_side[v]) vol_s += d;
    }
    std::int64_t denom = std::min(vol_s, vol_total - vol_s);
    if (denom == 0) return cut == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    return static_cast<double>(cut) / static_cast<double>(denom);
}

namespace {

// one bisection attempt on a connected induced piece
struct CutResult {
    bool found = false;
    double phi = 0.0;
    std::vector<NodeId> left, right;  // indexes into the piece's graph
};

struct PieceGraph {
    // local CSR over the piece, weights symmetrized, self-loops dropped
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> degree;  // weighted
    double volume = 0.0;
};

PieceGraph local_graph(const Graph& g, const std::vector<NodeId>& nodes, bool use_weights) {
    PieceGraph pg;
    const std::uint32_t n = static_cast<std::uint32_t>(nodes.size());
    std::unordered_map<NodeId, std::uint32_t> local;
    local.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) local.emplace(nodes[i], i);
    pg.adj.resize(n);
    pg.degree.assign(n, 0.0);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (const Arc& a : g.neighbors(nodes[i])) {
            if (a.to == nodes[i]) continue;
            auto it = local.find(a.to);
            if (it == local.end()) continue;
            double w = use_weights ? static_cast<double>(a.weight) : 1.0;
            pg.adj[i].push_back({it->second, w});
            pg.degree[i] += w;
        }
        pg.volume += pg.degree[i];
    }
    return pg;
}

// local connected components (piece may be disconnected)
std::vector<std::vector<std::uint32_t>> local_components(const PieceGraph& pg) {
    const std::uint32_t n = static_cast<std::uint32_t>(pg.adj.size());
    std::vector<std::uint32_t> comp(n, n);
    std::vector<std::uint32_t> stack;
    std::uint32_t nc = 0;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (comp[s] != n) continue;
        comp[s] = nc;
        stack.push_back(s);
        while (!stack.empty()) {
            std::uint32_t v = stack.back();
            stack.pop_back();
            for (auto [u, w] : pg.adj[v]) {
                (void)w;
                if (comp[u] == n) {
                    comp[u] = nc;
                    stack.push_back(u);
                }
            }
        }
        ++nc;
    }
    std::vector<std::vector<std::uint32_t>> comps(nc);
    for (std::uint32_t v = 0; v < n; ++v) comps[comp[v]].push_back(v);
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    return comps;
}

// power iteration for the second eigenvector of the lazy walk matrix
// (I + D^{-1/2} W D^{-1/2})/2, deflating the known dominant sqrt(d) direction
std::vector<double> fiedler_direction(const PieceGraph& pg, std::mt19937_64& rng,
                                      int max_iterations, double tolerance) {
    const std::size_t n = pg.adj.size();
    std::vector<double> sqrt_d(n), u1(n);
    double norm1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sqrt_d[i] = std::sqrt(pg.degree[i]);
        norm1 += pg.degree[i];
    }
    norm1 = std::sqrt(norm1);
    for (std::size_t i = 0; i < n; ++i) u1[i] = sqrt_d[i] / norm1;

    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = unit(rng);

    auto deflate_normalize = [&](std::vector<double>& v) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += v[i] * u1[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= dot * u1[i];
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += v[i] * v[i];
        norm = std::sqrt(norm);
        if (norm < 1e-300) return false;
        for (std::size_t i = 0; i < n; ++i) v[i] /= norm;
        return true;
    };
    if (!deflate_normalize(x)) return x;

    for (int it = 0; it < max_iterations; ++it) {
        // y = (x + D^{-1/2} W D^{-1/2} x) / 2
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (auto [j, w] : pg.adj[i]) acc += w * x[j] / sqrt_d[j];
            y[i] = 0.5 * (x[i] + acc / sqrt_d[i]);
        }
        double lambda = 0.0;
        for (std::size_t i = 0; i < n; ++i) lambda += x[i] * y[i];
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = y[i] - lambda * x[i];
            residual += r * r;
        }
        if (!deflate_normalize(y)) break;
        x.swap(y);
        if (std::sqrt(residual) < tolerance) break;
    }
    return x;
}

CutResult best_sweep_cut(const PieceGraph& pg, const std::vector<double>& x,
                         std::size_t min_size) {
    const std::size_t n = pg.adj.size();
    CutResult res;
    if (n < 2) return res;
    std::vector<std::uint32_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
    std::vector<double> score(n);
    for (std::size_t i = 0; i < n; ++i)
        score[i] = pg.degree[i] > 0 ? x[i] / std::sqrt(pg.degree[i]) : x[i];
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (score[a] != score[b]) return score[a] < score[b];
        return a < b;
    });

    std::vector<bool> in_left(n, false);
    double cut = 0.0, vol_left = 0.0;
    double best_phi = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::uint32_t v = order[k];
        double to_left = 0.0;
        for (auto [u, w] : pg.adj[v])
            if (in_left[u]) to_left += w;
        cut += pg.degree[v] - 2.0 * to_left;
        vol_left += pg.degree[v];
        in_left[v] = true;
        double denom = std::min(vol_left, pg.volume - vol_left);
        if (denom <= 0.0) continue;
        double phi = cut / denom;
        std::size_t left_n = k + 1, right_n = n - left_n;
        if (left_n < min_size || right_n < min_size) continue;
        if (phi < best_phi) {
            best_phi = phi;
            best_k = k + 1;
        }
    }
    if (best_k == 0) return res;
    res.found = true;
    res.phi = best_phi;
    res.left.assign(order.begin(), order.begin() + best_k);
    res.right.assign(order.begin() + best_k, order.end());
    return res;
}

}  // namespace

Partition cluster_graph(const Graph& g, const ClusterParams& params) {
    if (params.target_clusters < 1) throw std::invalid_argument("target_clusters must be >= 1");
    Partition out;
    out.params = params.describe();
    const std::size_t n = g.node_count();
    std::vector<NodeId> all(n);
    for (NodeId v = 0; v < n; ++v) all[v] = v;

    std::mt19937_64 rng(params.seed);
    std::vector<std::vector<NodeId>> final_pieces;
    std::vector<std::vector<NodeId>> pending{all};

    auto total = [&] { return final_pieces.size() + pending.size(); };
    while (!pending.empty()) {
        if (static_cast<int>(total()) >= params.target_clusters) {
            for (auto& p : pending) final_pieces.push_back(std::move(p));
            pending.clear();
            break;
        }
        // biggest pending piece first
        std::size_t pick = 0;
        for (std::size_t i = 1; i < pending.size(); ++i)
            if (pending[i].size() > pending[pick].size()) pick = i;
        std::vector<NodeId> piece = std::move(pending[pick]);
        pending.erase(pending.begin() + pick);

        if (piece.size() < 2 * params.min_cluster_size) {
            final_pieces.push_back(std::move(piece));
            continue;
        }
        PieceGraph pg = local_graph(g, piece, params.use_weights);
        auto comps = local_components(pg);
        if (comps.size() > 1) {
            // disconnected: free cut along component lines
            std::vector<NodeId> lcc, rest;
            for (std::uint32_t v : comps.front()) lcc.push_back(piece[v]);
            for (std::size_t c = 1; c < comps.size(); ++c)
                for (std::uint32_t v : comps[c]) rest.push_back(piece[v]);
            if (lcc.size() >= params.min_cluster_size && rest.size() >= params.min_cluster_size) {
                out.cut_conductances.push_back(0.0);
                pending.push_back(std::move(lcc));
                pending.push_back(std::move(rest));
            } else {
                final_pieces.push_back(std::move(piece));
            }
            continue;
        }
        std::vector<double> x =
            fiedler_direction(pg, rng, params.max_iterations, params.tolerance);
        CutResult cut = best_sweep_cut(pg, x, params.min_cluster_size);
        if (!cut.found || cut.phi > params.conductance_threshold) {
            final_pieces.push_back(std::move(piece));
            continue;
        }
        out.cut_conductances.push_back(cut.phi);
        std::vector<NodeId> left, right;
        for (std::uint32_t v : cut.left) left.push_back(piece[v]);
        for (std::uint32_t v : cut.right) right.push_back(piece[v]);
        pending.push_back(std::move(left));
        pending.push_back(std::move(right));
    }

    out.single_cluster = final_pieces.size() <= 1;
    for (const auto& piece : final_pieces) {
        std::vector<std::string> ids;
        ids.reserve(piece.size());
        for (NodeId v : piece) ids.push_back(g.id(v));
        std::sort(ids.begin(), ids.end());
        out.clusters.push_back(std::move(ids));
    }
    std::sort(out.clusters.begin(), out.clusters.end(),
              [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
                  if (a.size() != b.size()) return a.size() > b.size();
                  return a.front() < b.front();
              });
    return out;
}

RetweetClustering cluster_retweet_network(const InteractionNetwork& net,
                                          const ClusterParams& params) {
    RetweetClustering out;
    ComponentSelection lcc = largest_component(net.graph, /*strong=*/false);
    out.lcc_coverage = lcc.coverage;
    out.lcc_nodes = lcc.component_nodes;
    out.partition = cluster_graph(lcc.graph, params);
    return out;
}

std::vector<std::pair<std::string, std::int64_t>> top_retweeted(const InteractionNetwork& net,
                                                                std::size_t k) {
    std::vector<std::pair<std::string, std::int64_t>> rows;
    rows.reserve(net.graph.node_count());
    for (NodeId v = 0; v < net.graph.node_count(); ++v) {
        std::int64_t w = net.graph.weighted_in_degree(v);
        if (w > 0) rows.emplace_back(net.graph.id(v), w);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (rows.size() > k) rows.resize(k);
    return rows;
}

std::vector<ClusterProfile> profile_clusters(const Partition& p, const InteractionNetwork& net,
                                             std::size_t k) {
    std::vector<ClusterProfile> out;
    for (const auto& cluster : p.clusters) {
        ClusterProfile prof;
        prof.size = cluster.size();
        std::vector<std::pair<std::string, std::int64_t>> rows;
        for (const auto& id : cluster) {
            if (auto v = net.graph.find(id)) {
                std::int64_t w = net.graph.weighted_in_degree(*v);
                if (w > 0) rows.emplace_back(id, w);
            }
        }
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (rows.size() > k) rows.resize(k);
        prof.top_retweeted = std::move(rows);
        out.push_back(std::move(prof));
    }
    return out;
}

AffiliationMap assign_affiliations(const Partition& p, const std::vector<SeedLabel>& seeds) {
    AffiliationMap out;
    std::vector<std::optional<Affiliation>> cluster_label(p.clusters.size());
    std::string conflicts;
    for (const auto& seed : seeds) {
        std::size_t c = p.cluster_of(seed.account_id);
        if (c == Partition::npos) continue;
        if (cluster_label[c] && *cluster_label[c] != seed.label) {
            conflicts += (conflicts.empty() ? "" : "; ");
            conflicts += "cluster " + std::to_string(c) + " seeded as both " +
                         to_string(*cluster_label[c]) + " and " + to_string(seed.label) + " (" +
                         seed.account_id + ")";
            continue;
        }
        cluster_label[c] = seed.label;
    }
    if (!conflicts.empty())
        throw std::runtime_error("conflicting cluster seeds: " + conflicts);
    for (std::size_t c = 0; c < p.clusters.size(); ++c) {
        if (!cluster_label[c]) continue;
        for (const auto& id : p.clusters[c]) out.set(id, *cluster_label[c]);
    }
    return out;
}

}  // namespace polarscope
