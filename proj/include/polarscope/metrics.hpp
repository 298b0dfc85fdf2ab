#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polarscope/affiliation.hpp"
#include "polarscope/corpus.hpp"
#include "polarscope/graph.hpp"
#include "polarscope/network.hpp"

namespace polarscope {

struct CentralityOptions {
    bool degree = true;
    bool betweenness = true;
    bool closeness = true;
    bool eigenvector = true;
    int eigenvector_max_iter = 100000;
    double eigenvector_tolerance = 1e-10;
    int threads = 1;            // betweenness source fan-out
    std::string network_name;   // for error messages
};

struct CentralityReport {
    std::vector<std::string> node_ids;  // sorted
    // parallel to node_ids; empty when the metric was not requested
    std::vector<double> degree;
    std::vector<double> betweenness;
    std::vector<double> closeness;      // harmonic, normalized by (n-1)
    std::vector<double> closeness_wf;   // Wasserman–Faust reachable-set variant
    std::vector<double> eigenvector;

    std::optional<double> value(const std::vector<double>& metric, const std::string& id) const;
};

// Degree = distinct undirected neighbors / (n-1). Betweenness = exact Brandes
// over directed unweighted shortest paths, normalized by (n-1)(n-2).
// Closeness = harmonic mean distance on the symmetrized graph (the
// Wasserman–Faust reachable-set score is also filled in). Eigenvector = power
// iteration on the symmetrized weighted adjacency (+I shift), L2-normalized;
// throws std::runtime_error when it fails to converge.
CentralityReport centralities(const Graph& g, const CentralityOptions& opt = {});

// mean per affiliation over nodes present in the report
std::map<Affiliation, double> group_mean(const CentralityReport& rep,
                                         const std::vector<double>& metric,
                                         const AffiliationMap& aff);

struct KCoreResult {
    std::vector<std::string> node_ids;  // sorted
    std::vector<int> core;              // parallel
    int max_core = 0;

    // group -> core number -> node count
    std::map<Affiliation, std::map<int, std::int64_t>> histogram(const AffiliationMap& aff) const;
};

// Core numbers on the undirected simple projection (self-loops ignored).
KCoreResult kcore(const Graph& g);

enum class EiVariant { Classic, Modified };
enum class EiScope { LabeledOnly, Broader };
enum class EiCombine { GroupMean, Pooled };

struct EiOptions {
    EiVariant variant = EiVariant::Classic;
    EiScope scope = EiScope::LabeledOnly;
    EiCombine combine = EiCombine::GroupMean;  // modified variant only
    bool weighted = false;                     // classic: weights instead of edge counts
};

struct EiResult {
    double value = 0.0;
    std::int64_t internal_edges = 0, external_edges = 0;    // distinct undirected pairs
    std::int64_t internal_weight = 0, external_weight = 0;  // symmetrized weights
    // modified variant: per-group (e_g - i_g)
    std::map<Affiliation, double> per_group;
};

// Edges are undirected distinct pairs on the symmetrized view; self-loops
// dropped. LabeledOnly keeps edges with both endpoints labeled; Broader also
// keeps labeled<->Unaffiliated edges as external. Throws std::domain_error
// when no qualifying edge exists.
EiResult ei_index(const Graph& g, const AffiliationMap& aff, const EiOptions& opt = {});

// Newman categorical assortativity over edges with both endpoints labeled,
// undirected with weight multiplicity. Throws std::domain_error when the
// mixing matrix is degenerate (edges within a single group only).
double categorical_assortativity(const Graph& g, const AffiliationMap& aff);

inline constexpr std::array<Affiliation, 3> kGroups = {
    Affiliation::Supporter, Affiliation::Opposer, Affiliation::Unaffiliated};

struct GroupMatrix {
    // [source group][target group], indexed per kGroups order
    std::array<std::array<std::int64_t, 3>, 3> raw{};
    // row-normalized; nullopt when the row total is 0
    std::array<std::array<std::optional<double>, 3>, 3> proportion{};
};

GroupMatrix group_matrix(const PhasedCorpus& corpus, const AffiliationMap& aff,
                         InteractionKind kind, std::optional<int> phase = std::nullopt);

struct ConcentrationCell {
    std::int64_t retweets = 0;
    std::int64_t retweeted_accounts = 0;           // distinct originals' authors
    std::optional<double> retweets_per_account;    // nullopt when accounts == 0
};

struct ConcentrationTable {
    int phase_count = 0;
    // [group][phase-1]; index phase_count = overall
    std::array<std::vector<ConcentrationCell>, 3> cells;
};

ConcentrationTable retweet_concentration(const PhasedCorpus& corpus, const AffiliationMap& aff);

struct ActivityCell {
    std::int64_t accounts = 0;  // distinct active authors in the cell
    std::int64_t tweets = 0;
    std::int64_t hashtags = 0;
    std::int64_t mentions = 0;
    std::int64_t quotes = 0;
    std::int64_t replies = 0;
    std::int64_t retweets = 0;
    std::int64_t urls = 0;
};

struct ActivityTable {
    int phase_count = 0;
    // [group][phase-1]; index phase_count = overall
    std::array<std::vector<ActivityCell>, 3> cells;

    static constexpr std::array<const char*, 7> kMetrics = {
        "tweets", "hashtags", "mentions", "quotes", "replies", "retweets", "urls"};
    static std::int64_t metric_of(const ActivityCell& c, std::size_t metric_index);
};

ActivityTable activity_table(const PhasedCorpus& corpus, const AffiliationMap& aff);

}  // namespace polarscope
