#include "polarscope/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "polarscope/content.hpp"
#include "polarscope/csv.hpp"
#include "polarscope/digest.hpp"
#include "polarscope/graph_io.hpp"
#include "polarscope/io.hpp"
#include "polarscope/metrics.hpp"
#include "polarscope/network.hpp"
#include "polarscope/text.hpp"

#include <json.hpp>

namespace polarscope {

namespace fs = std::filesystem;
using json = nlohmann::json;

// ---------------------------------------------------------------------------
// config

namespace {

std::string resolve(const std::string& base, const std::string& path) {
    if (path.empty()) return path;
    fs::path p(path);
    if (p.is_absolute() || base.empty()) return path;
    return (fs::path(base) / p).lexically_normal().string();
}

std::int64_t duration_field(const json& j, const char* key, std::int64_t fallback) {
    if (!j.contains(key)) return fallback;
    if (j[key].is_number_integer()) return j[key].get<std::int64_t>();
    auto d = parse_duration_seconds(j[key].get<std::string>());
    if (!d) throw ConfigError(std::string("config: bad duration in ") + key);
    return *d;
}

}  // namespace

RunConfig RunConfig::from_json(const std::string& text, const std::string& base_dir) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError("config: invalid JSON");
    RunConfig c;
    try {
        if (!j.contains("corpus")) throw ConfigError("config: missing 'corpus'");
        c.corpus_path = resolve(base_dir, j["corpus"].get<std::string>());
        c.workdir = resolve(base_dir, j.value("workdir", c.workdir));
        if (j.contains("phases")) {
            for (const auto& b : j["phases"]) {
                if (b.is_number_integer()) {
                    c.phases.boundaries.push_back(b.get<Timestamp>());
                } else if (auto t = parse_iso8601(b.get<std::string>())) {
                    c.phases.boundaries.push_back(*t);
                } else {
                    throw ConfigError("config: bad phase boundary " + b.get<std::string>());
                }
            }
        }
        if (j.contains("phase_names"))
            for (const auto& n : j["phase_names"]) c.phases.names.push_back(n.get<std::string>());
        c.phases.validate();
        c.seeds_path = resolve(base_dir, j.value("seeds", std::string{}));
        c.affiliations_path = resolve(base_dir, j.value("affiliations", std::string{}));
        c.url_categories_path = resolve(base_dir, j.value("url_categories", std::string{}));
        c.location_coding_path = resolve(base_dir, j.value("location_coding", std::string{}));
        c.bot_scores_path = j.value("bot_scores", std::string{});
        if (!c.bot_scores_path.starts_with("http://") &&
            !c.bot_scores_path.starts_with("https://"))
            c.bot_scores_path = resolve(base_dir, c.bot_scores_path);
        if (j.contains("clustering")) {
            const json& q = j["clustering"];
            c.clustering.target_clusters = q.value("target_clusters", c.clustering.target_clusters);
            c.clustering.conductance_threshold =
                q.value("conductance_threshold", c.clustering.conductance_threshold);
            c.clustering.min_cluster_size = q.value("min_cluster_size", c.clustering.min_cluster_size);
            c.clustering.seed = q.value("seed", c.clustering.seed);
            c.clustering.max_iterations = q.value("max_iterations", c.clustering.max_iterations);
            c.clustering.tolerance = q.value("tolerance", c.clustering.tolerance);
            c.clustering.use_weights = q.value("use_weights", c.clustering.use_weights);
        }
        if (j.contains("coordination")) {
            c.coordination.clear();
            for (const auto& q : j["coordination"]) {
                CoordinationJob job;
                std::string kind = q.value("kind", std::string{"co_retweet"});
                auto k = co_activity_kind_from(kind);
                if (!k) throw ConfigError("config: unknown co-activity kind " + kind);
                job.params.kind = *k;
                job.params.gamma_seconds = duration_field(q, "gamma", 60);
                job.params.windowing = q.value("windowing", std::string{"sliding"}) == "fixed_bins"
                                           ? Windowing::FixedBins
                                           : Windowing::Sliding;
                job.params.min_edge_weight = q.value("min_edge_weight", std::int64_t{1});
                if (q.contains("exclude"))
                    for (const auto& e : q["exclude"])
                        job.params.exclusions.insert(to_lower(e.get<std::string>()));
                job.with_bigraph = q.value("bigraph", false);
                job.top_components = q.value("top_components", std::size_t{5});
                job.params.validate();
                c.coordination.push_back(std::move(job));
            }
        }
        if (j.contains("burst")) {
            const json& q = j["burst"];
            c.burst.window_seconds = duration_field(q, "window", c.burst.window_seconds);
            c.burst.min_count = q.value("min_count", c.burst.min_count);
            c.burst.similarity = q.value("similarity", c.burst.similarity);
            c.burst.validate();
        }
        if (j.contains("score_selection")) {
            const json& q = j["score_selection"];
            c.score_selection.min_unaffiliated_tweets =
                q.value("min_tweets", c.score_selection.min_unaffiliated_tweets);
            c.score_selection.scope = q.value("scope", std::string{"total"}) == "each_side"
                                          ? MinTweetsScope::EachSide
                                          : MinTweetsScope::Total;
            c.score_selection.boundary_phase =
                q.value("boundary_phase", c.score_selection.boundary_phase);
        }
        c.focal_hashtag = to_lower(j.value("focal_hashtag", std::string{}));
        if (j.contains("stages")) {
            for (const auto& s : j["stages"]) {
                std::string name = s.get<std::string>();
                if (std::find(kStageNames.begin(), kStageNames.end(), name) == kStageNames.end())
                    throw ConfigError("config: unknown stage " + name);
                c.stages.push_back(std::move(name));
            }
        }
        c.threads = j.value("threads", c.threads);
        c.centralities = j.value("centralities", c.centralities);
        c.bucket_seconds = duration_field(j, "bucket", c.bucket_seconds);
        if (c.threads < 1 || c.bucket_seconds <= 0)
            throw ConfigError("config: threads and bucket must be positive");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::string text;
    try {
        text = read_file_to_string(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return from_json(text, fs::path(path).parent_path().string());
}

void RunConfig::check_inputs() const {
    auto need = [](const std::string& path, const char* what) {
        if (!path.empty() && !fs::exists(path))
            throw ConfigError(std::string("config: ") + what + " file not found: " + path);
    };
    if (corpus_path.empty()) throw ConfigError("config: missing 'corpus'");
    need(corpus_path, "corpus");
    need(seeds_path, "seeds");
    need(affiliations_path, "affiliations");
    need(url_categories_path, "url_categories");
    need(location_coding_path, "location_coding");
    if (!bot_scores_path.starts_with("http://") && !bot_scores_path.starts_with("https://"))
        need(bot_scores_path, "bot_scores");
}

// ---------------------------------------------------------------------------
// manifest

void RunManifest::finalize() {
    std::ostringstream os;
    os << tool_version << '\n' << config_digest << '\n' << seed << '\n';
    for (const auto& [path, sha] : inputs) os << "in " << path << ' ' << sha << '\n';
    for (const StageRecord& s : stages) os << "stage " << s.name << ' ' << s.status << '\n';
    for (const auto& [path, sha] : output_digests) os << "out " << path << ' ' << sha << '\n';
    digest = sha256_hex(os.str());
}

std::string RunManifest::to_json() const {
    json j;
    j["tool_version"] = tool_version;
    j["config_digest"] = config_digest;
    j["seed"] = seed;
    j["threads"] = threads;
    j["inputs"] = json::array();
    for (const auto& [path, sha] : inputs)
        j["inputs"].push_back({{"path", path}, {"sha256", sha}});
    j["stages"] = json::array();
    for (const StageRecord& s : stages) {
        json q = {{"name", s.name}, {"status", s.status}, {"seconds", s.seconds}};
        if (!s.error.empty()) q["error"] = s.error;
        q["outputs"] = s.outputs;
        j["stages"].push_back(std::move(q));
    }
    j["outputs"] = json::object();
    for (const auto& [path, sha] : output_digests) j["outputs"][path] = sha;
    j["digest"] = digest;
    return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
    json j = json::parse(text);
    RunManifest m;
    m.tool_version = j.value("tool_version", m.tool_version);
    m.config_digest = j.value("config_digest", std::string{});
    m.seed = j.value("seed", std::uint64_t{0});
    m.threads = j.value("threads", 1);
    if (j.contains("inputs"))
        for (const auto& q : j["inputs"])
            m.inputs.emplace_back(q.value("path", std::string{}), q.value("sha256", std::string{}));
    if (j.contains("stages"))
        for (const auto& q : j["stages"]) {
            StageRecord s;
            s.name = q.value("name", std::string{});
            s.status = q.value("status", std::string{});
            s.error = q.value("error", std::string{});
            s.seconds = q.value("seconds", 0.0);
            if (q.contains("outputs"))
                for (const auto& o : q["outputs"]) s.outputs.push_back(o.get<std::string>());
            m.stages.push_back(std::move(s));
        }
    if (j.contains("outputs"))
        for (auto it = j["outputs"].begin(); it != j["outputs"].end(); ++it)
            m.output_digests[it.key()] = it.value().get<std::string>();
    m.digest = j.value("digest", std::string{});
    return m;
}

// ---------------------------------------------------------------------------
// stage context

namespace {

const char* group_name(Affiliation a) { return to_string(a); }

std::string fmt(double v) { return csv::format_double(v); }

std::string fmt_opt(const std::optional<double>& v) {
    return v ? csv::format_double(*v) : std::string{};  // empty field = undefined
}

struct Context {
    const RunConfig& cfg;
    Corpus corpus;
    std::optional<PhasedCorpus> phased;
    AffiliationMap aff;
    bool aff_ready = false;
    std::map<InteractionKind, InteractionNetwork> networks;
    ParseReport parse_report;

    explicit Context(const RunConfig& c) : cfg(c) {}

    void load_corpus() {
        if (phased) return;
        corpus = Corpus::from_jsonl_file(cfg.corpus_path, &parse_report);
        phased.emplace(corpus, cfg.phases);
    }

    const InteractionNetwork& network(InteractionKind kind) {
        auto it = networks.find(kind);
        if (it != networks.end()) return it->second;
        // prefer a cached export from an earlier run
        std::string cached = (fs::path(cfg.workdir) / "networks" /
                              (std::string(to_string(kind)) + ".graphml"))
                                 .string();
        if (fs::exists(cached)) {
            ImportedGraph imp = read_graphml(cached);
            InteractionNetwork net;
            net.kind = kind;
            net.graph = std::move(imp.graph);
            for (const auto& [id, attrs] : imp.node_attrs)
                if (auto a = attrs.find("observed_only"); a != attrs.end() && a->second == "true")
                    net.observed_only.push_back(id);
            std::sort(net.observed_only.begin(), net.observed_only.end());
            return networks.emplace(kind, std::move(net)).first->second;
        }
        load_corpus();
        return networks.emplace(kind, build_network(*phased, kind)).first->second;
    }

    // affiliation resolution: explicit file > this run's labeling > cached file
    const AffiliationMap& affiliations() {
        if (aff_ready) return aff;
        if (!cfg.affiliations_path.empty()) {
            aff = AffiliationMap::from_csv(read_file_to_string(cfg.affiliations_path));
        } else {
            std::string cached = (fs::path(cfg.workdir) / "affiliations.csv").string();
            if (fs::exists(cached)) aff = AffiliationMap::from_csv(read_file_to_string(cached));
        }
        aff_ready = true;
        return aff;
    }

    void set_affiliations(AffiliationMap m) {
        aff = std::move(m);
        aff_ready = true;
    }
};

class StageWriter {
  public:
    StageWriter(const std::string& workdir, StageRecord& record)
        : workdir_(workdir), record_(record) {}

    void write(const std::string& rel, const std::string& content) {
        fs::path full = fs::path(workdir_) / rel;
        fs::create_directories(full.parent_path());
        write_file_atomic(full.string(), content);
        record_.outputs.push_back(rel);
    }

    void write_csv(const std::string& rel, const csv::File& file) { write(rel, csv::emit(file)); }

  private:
    std::string workdir_;
    StageRecord& record_;
};

// ---------------------------------------------------------------------------
// stages

void stage_ingest(Context& ctx, StageWriter& out) {
    ctx.load_corpus();
    const ParseReport& rep = ctx.parse_report;
    json j;
    j["lines"] = rep.lines;
    j["parsed"] = rep.parsed;
    j["skipped_malformed"] = rep.skipped_malformed;
    j["skipped_duplicate"] = rep.skipped_duplicate;
    j["samples"] = rep.samples;
    j["tweets"] = ctx.corpus.size();
    j["accounts"] = ctx.corpus.account_count();
    if (!ctx.corpus.empty()) {
        j["first_tweet"] = format_iso8601(ctx.corpus.first_time());
        j["last_tweet"] = format_iso8601(ctx.corpus.last_time());
    }
    out.write("ingest_report.json", j.dump(2) + "\n");

    csv::File stats;
    stats.comment("columns: phase, name, tweets, accounts");
    stats.row({"phase", "name", "tweets", "accounts"});
    const auto& per_phase = ctx.phased->per_phase();
    for (std::size_t p = 0; p < per_phase.size(); ++p)
        stats.row({std::to_string(p + 1), ctx.cfg.phases.phase_name(static_cast<int>(p + 1)),
                   std::to_string(per_phase[p].tweets), std::to_string(per_phase[p].accounts)});
    out.write_csv("phase_stats.csv", stats);

    csv::File growth;
    growth.comment("columns: bucket_start, new_accounts, cumulative_accounts");
    growth.row({"bucket_start", "new_accounts", "cumulative_accounts"});
    for (const GrowthPoint& g : growth_curve(ctx.corpus, ctx.cfg.bucket_seconds))
        growth.row({format_iso8601(g.bucket_start), std::to_string(g.new_accounts),
                    std::to_string(g.cumulative_accounts)});
    out.write_csv("growth_curve.csv", growth);

    if (!ctx.cfg.focal_hashtag.empty()) {
        MetaDiscussionReport meta = meta_discussion_report(ctx.corpus, ctx.cfg.focal_hashtag);
        csv::File f;
        f.comment("term: " + meta.term);
        f.comment("matching " + std::to_string(meta.matching_tweets) + " of " +
                  std::to_string(meta.total_tweets) + " tweets, ratio " + fmt(meta.ratio));
        f.comment("columns: day, tweets");
        f.row({"day", "tweets"});
        for (const auto& [day, count] : meta.per_day) f.row({day, std::to_string(count)});
        out.write_csv("meta_discussion.csv", f);
    }
}

void stage_networks(Context& ctx, StageWriter& out) {
    ctx.load_corpus();
    csv::File stats;
    stats.comment("columns: network, nodes, edges, total_weight, observed_only,"
                  " weak_components, lcc_nodes, lcc_coverage");
    stats.row({"network", "nodes", "edges", "total_weight", "observed_only",
                  "weak_components", "lcc_nodes", "lcc_coverage"});
    for (InteractionKind kind : {InteractionKind::Retweet, InteractionKind::Reply,
                                 InteractionKind::Mention, InteractionKind::Quote}) {
        ctx.networks.erase(kind);
        const InteractionNetwork& net =
            ctx.networks.emplace(kind, build_network(*ctx.phased, kind)).first->second;
        GraphmlSpec spec;
        spec.graph_id = to_string(kind);
        spec.node_attrs.push_back(
            {"observed_only", "boolean", [&net](const std::string& id) {
                 return std::optional<std::string>(net.is_observed_only(id) ? "true" : "false");
             }});
        out.write(std::string("networks/") + to_string(kind) + ".graphml",
                  graphml_string(net.graph, spec));
        NetworkStats ns = network_stats(net);
        stats.row({to_string(kind), std::to_string(ns.nodes), std::to_string(ns.edges),
                   std::to_string(ns.total_weight), std::to_string(ns.observed_only),
                   std::to_string(ns.weak_components), std::to_string(ns.lcc_nodes),
                   fmt(ns.lcc_coverage)});
    }
    out.write_csv("network_stats.csv", stats);
}

void stage_polarisation(Context& ctx, StageWriter& out) {
    if (!ctx.cfg.affiliations_path.empty()) {
        // labels were supplied; republish them for downstream stages
        AffiliationMap given =
            AffiliationMap::from_csv(read_file_to_string(ctx.cfg.affiliations_path));
        out.write("affiliations.csv", given.to_csv());
        ctx.set_affiliations(std::move(given));
        return;
    }
    ctx.load_corpus();
    const InteractionNetwork& net = ctx.network(InteractionKind::Retweet);
    RetweetClustering rc = cluster_retweet_network(net, ctx.cfg.clustering);

    AffiliationMap labels;
    if (!ctx.cfg.seeds_path.empty()) {
        std::vector<SeedLabel> seeds = parse_seed_csv(read_file_to_string(ctx.cfg.seeds_path));
        labels = assign_affiliations(rc.partition, seeds);
    } else {
        // unseeded default: the two largest clusters become the two groups
        for (std::size_t c = 0; c < rc.partition.clusters.size() && c < 2; ++c)
            for (const std::string& id : rc.partition.clusters[c])
                labels.set(id, c == 0 ? Affiliation::Supporter : Affiliation::Opposer);
        labels.provenance = "clusters: " + rc.partition.params;
    }
    out.write("affiliations.csv", labels.to_csv());

    json j;
    j["params"] = rc.partition.params;
    j["lcc_nodes"] = rc.lcc_nodes;
    j["lcc_coverage"] = rc.lcc_coverage;
    j["single_cluster"] = rc.partition.single_cluster;
    j["cut_conductances"] = rc.partition.cut_conductances;
    j["clusters"] = json::array();
    for (const auto& profile : profile_clusters(rc.partition, net, 10)) {
        json q;
        q["size"] = profile.size;
        q["top_retweeted"] = json::array();
        for (const auto& [id, w] : profile.top_retweeted)
            q["top_retweeted"].push_back({{"account", id}, {"retweets", w}});
        j["clusters"].push_back(std::move(q));
    }
    out.write("clusters.json", j.dump(2) + "\n");
    ctx.set_affiliations(std::move(labels));
}

void stage_metrics(Context& ctx, StageWriter& out) {
    ctx.load_corpus();
    const AffiliationMap& aff = ctx.affiliations();

    // homophily on every interaction network
    csv::File ei;
    ei.comment("classic: (external-internal)/(external+internal) over distinct pairs;");
    ei.comment("modified: weight-based per-group means; empty value = undefined");
    ei.comment("columns: network, variant, value, internal, external");
    ei.row({"network", "variant", "value", "internal", "external"});
    csv::File assort;
    assort.comment("Newman categorical assortativity; empty value = undefined");
    assort.comment("columns: network, value");
    assort.row({"network", "value"});
    for (InteractionKind kind : {InteractionKind::Retweet, InteractionKind::Reply,
                                 InteractionKind::Mention, InteractionKind::Quote}) {
        const Graph& g = ctx.network(kind).graph;
        for (EiVariant variant : {EiVariant::Classic, EiVariant::Modified}) {
            EiOptions opt;
            opt.variant = variant;
            std::string value, internal, external;
            try {
                EiResult r = ei_index(g, aff, opt);
                value = fmt(r.value);
                internal = std::to_string(variant == EiVariant::Classic ? r.internal_edges
                                                                        : r.internal_weight);
                external = std::to_string(variant == EiVariant::Classic ? r.external_edges
                                                                        : r.external_weight);
            } catch (const std::domain_error&) {
            }
            ei.row({to_string(kind), variant == EiVariant::Classic ? "classic" : "modified",
                    value, internal, external});
        }
        std::string a;
        try {
            a = fmt(categorical_assortativity(g, aff));
        } catch (const std::domain_error&) {
        }
        assort.row({to_string(kind), a});
    }
    out.write_csv("ei_index.csv", ei);
    out.write_csv("assortativity.csv", assort);

    // per-node centralities + cores on the retweet LCC
    ComponentSelection lcc = largest_component(ctx.network(InteractionKind::Retweet).graph);
    KCoreResult cores = kcore(lcc.graph);
    std::map<std::string, int> core_of;
    for (std::size_t i = 0; i < cores.node_ids.size(); ++i)
        core_of[cores.node_ids[i]] = cores.core[i];

    if (ctx.cfg.centralities) {
        CentralityOptions opt;
        opt.threads = ctx.cfg.threads;
        opt.network_name = "retweet_lcc";
        CentralityReport rep = centralities(lcc.graph, opt);
        csv::File f;
        f.comment("retweet-network largest weak component");
        f.comment("columns: account, affiliation, degree, betweenness, closeness,"
                  " closeness_wf, eigenvector, core");
        f.row({"account", "affiliation", "degree", "betweenness", "closeness", "closeness_wf",
                  "eigenvector", "core"});
        for (std::size_t i = 0; i < rep.node_ids.size(); ++i) {
            const std::string& id = rep.node_ids[i];
            f.row({id, group_name(aff.of(id)), fmt(rep.degree[i]), fmt(rep.betweenness[i]),
                   fmt(rep.closeness[i]), fmt(rep.closeness_wf[i]), fmt(rep.eigenvector[i]),
                   std::to_string(core_of[id])});
        }
        out.write_csv("metrics_retweet.csv", f);

        csv::File means;
        means.comment("per-group mean centralities on the retweet LCC");
        means.comment("columns: metric, group, mean");
        means.row({"metric", "group", "mean"});
        const std::pair<const char*, const std::vector<double>*> metrics[] = {
            {"degree", &rep.degree},
            {"betweenness", &rep.betweenness},
            {"closeness", &rep.closeness},
            {"eigenvector", &rep.eigenvector}};
        for (const auto& [name, values] : metrics)
            for (const auto& [group, mean] : group_mean(rep, *values, aff))
                means.row({name, group_name(group), fmt(mean)});
        out.write_csv("group_centrality_means.csv", means);
    }

    csv::File hist;
    hist.comment("retweet-LCC core-number histogram per group");
    hist.comment("columns: k, group, accounts");
    hist.row({"k", "group", "accounts"});
    auto bygroup = cores.histogram(aff);
    for (const auto& [group, counts] : bygroup)
        for (const auto& [k, n] : counts)
            hist.row({std::to_string(k), group_name(group), std::to_string(n)});
    out.write_csv("kcore_histogram.csv", hist);

    // interaction mix between groups
    csv::File gm;
    gm.comment("retweet interactions between groups; raw counts and row proportions");
    gm.comment("columns: phase, source_group, target_group, raw, proportion"
               " (phase 0 = overall; empty proportion = no outgoing interactions)");
    gm.row({"phase", "source_group", "target_group", "raw", "proportion"});
    int phase_count = ctx.phased->phase_count();
    for (int phase = 0; phase <= phase_count; ++phase) {
        GroupMatrix m = group_matrix(*ctx.phased, aff, InteractionKind::Retweet,
                                     phase == 0 ? std::nullopt : std::optional<int>(phase));
        for (std::size_t s = 0; s < kGroups.size(); ++s)
            for (std::size_t t = 0; t < kGroups.size(); ++t)
                gm.row({std::to_string(phase), group_name(kGroups[s]), group_name(kGroups[t]),
                        std::to_string(m.raw[s][t]), fmt_opt(m.proportion[s][t])});
    }
    out.write_csv("group_matrix.csv", gm);

    ActivityTable at = activity_table(*ctx.phased, aff);
    csv::File act;
    act.comment("per-group per-phase activity; phase 0 = overall;");
    act.comment("empty ratio = undefined (zero accounts or tweets)");
    act.comment("columns: group, phase, metric, raw, per_account, per_tweet");
    act.row({"group", "phase", "metric", "raw", "per_account", "per_tweet"});
    for (std::size_t g = 0; g < kGroups.size(); ++g) {
        for (int phase = 0; phase <= phase_count; ++phase) {
            const ActivityCell& cell =
                at.cells[g][static_cast<std::size_t>(phase == 0 ? phase_count : phase - 1)];
            act.row({group_name(kGroups[g]), std::to_string(phase), "accounts",
                     std::to_string(cell.accounts), "", ""});
            for (std::size_t m = 0; m < ActivityTable::kMetrics.size(); ++m) {
                std::int64_t raw = ActivityTable::metric_of(cell, m);
                std::string per_account =
                    cell.accounts ? fmt(static_cast<double>(raw) /
                                        static_cast<double>(cell.accounts))
                                  : std::string{};
                std::string per_tweet;
                if (std::string(ActivityTable::kMetrics[m]) != "tweets")
                    per_tweet = cell.tweets ? fmt(static_cast<double>(raw) /
                                                  static_cast<double>(cell.tweets))
                                            : std::string{};
                act.row({group_name(kGroups[g]), std::to_string(phase),
                         ActivityTable::kMetrics[m], std::to_string(raw), per_account,
                         per_tweet});
            }
        }
    }
    out.write_csv("activity_table.csv", act);

    ConcentrationTable ct = retweet_concentration(*ctx.phased, aff);
    csv::File conc;
    conc.comment("retweet concentration; phase 0 = overall; empty ratio = undefined");
    conc.comment("columns: group, phase, retweets, retweeted_accounts, retweets_per_account");
    conc.row({"group", "phase", "retweets", "retweeted_accounts", "retweets_per_account"});
    for (std::size_t g = 0; g < kGroups.size(); ++g)
        for (int phase = 0; phase <= phase_count; ++phase) {
            const ConcentrationCell& cell =
                ct.cells[g][static_cast<std::size_t>(phase == 0 ? phase_count : phase - 1)];
            conc.row({group_name(kGroups[g]), std::to_string(phase),
                      std::to_string(cell.retweets), std::to_string(cell.retweeted_accounts),
                      fmt_opt(cell.retweets_per_account)});
        }
    out.write_csv("retweet_concentration.csv", conc);
}

void stage_content(Context& ctx, StageWriter& out) {
    ctx.load_corpus();
    const AffiliationMap& aff = ctx.affiliations();
    std::set<std::string> exclude;
    if (!ctx.cfg.focal_hashtag.empty()) exclude.insert(ctx.cfg.focal_hashtag);

    for (Affiliation group : {Affiliation::Supporter, Affiliation::Opposer}) {
        HashtagComentionNetwork net = hashtag_comention(ctx.corpus, aff, group, 5, exclude);
        std::string name = std::string("hashtag_comention_") + to_lower(group_name(group));
        GraphmlSpec spec;
        spec.graph_id = name;
        out.write(name + ".graphml", graphml_string(net.graph, spec));
    }

    PartisanHashtags ph = partisan_hashtags(ctx.corpus, aff);
    csv::File pf;
    pf.comment("group-exclusive seed hashtags (uses within the group)");
    if (ph.short_of_k) pf.comment("warning: fewer exclusive hashtags than requested");
    if (!ph.removed_global.empty()) {
        std::string removed = "# removed corpus-global top tags:";
        for (const auto& t : ph.removed_global) removed += " " + t;
        pf.comment(removed);
    }
    pf.comment("columns: group, rank, hashtag, uses");
    pf.row({"group", "rank", "hashtag", "uses"});
    for (std::size_t i = 0; i < ph.supporter_seed.size(); ++i)
        pf.row({"Supporter", std::to_string(i + 1), ph.supporter_seed[i].first,
                std::to_string(ph.supporter_seed[i].second)});
    for (std::size_t i = 0; i < ph.opposer_seed.size(); ++i)
        pf.row({"Opposer", std::to_string(i + 1), ph.opposer_seed[i].first,
                std::to_string(ph.opposer_seed[i].second)});
    out.write_csv("partisan_hashtags.csv", pf);

    if (!ph.universe.empty()) {
        Graph cohash = account_cohashtag_network(ctx.corpus, ph.universe);
        GraphmlSpec cospec;
        cospec.graph_id = "account_cohashtag";
        cospec.node_attrs.push_back({"affiliation", "string", [&aff](const std::string& id) {
                                         return std::optional<std::string>(group_name(aff.of(id)));
                                     }});
        out.write("account_cohashtag.graphml", graphml_string(cohash, cospec));
    }

    TopHashtagTable tt = top_hashtag_table(*ctx.phased, aff);
    csv::File top;
    top.comment("hashtags by tweets containing them; phase 0 = overall;");
    top.comment("ties at the cutoff are all kept");
    top.comment("columns: group, phase, rank, hashtag, tweets");
    top.row({"group", "phase", "rank", "hashtag", "tweets"});
    int phase_count = ctx.phased->phase_count();
    for (std::size_t g = 0; g < kGroups.size(); ++g)
        for (int phase = 0; phase <= phase_count; ++phase) {
            const TopHashtagCell& cell =
                tt.cells[g][static_cast<std::size_t>(phase == 0 ? phase_count : phase - 1)];
            for (std::size_t i = 0; i < cell.tags.size(); ++i)
                top.row({group_name(kGroups[g]), std::to_string(phase), std::to_string(i + 1),
                         cell.tags[i].first, std::to_string(cell.tags[i].second)});
        }
    out.write_csv("top_hashtags.csv", top);

    UsageDistributions ud = usage_distributions(ctx.corpus, aff);
    csv::File gu;
    gu.comment("per-group usage summary; empty = undefined");
    gu.comment("columns: group, tweets, hashtag_uses, hashtags_per_tweet, url_uses,"
               " unique_urls, mean_url_reuse");
    gu.row({"group", "tweets", "hashtag_uses", "hashtags_per_tweet", "url_uses", "unique_urls",
               "mean_url_reuse"});
    for (std::size_t g = 0; g < kGroups.size(); ++g) {
        const GroupUsage& u = ud.groups[g];
        gu.row({group_name(kGroups[g]), std::to_string(u.tweets), std::to_string(u.hashtag_uses),
                fmt_opt(u.hashtags_per_tweet), std::to_string(u.url_uses),
                std::to_string(u.unique_urls), fmt_opt(u.mean_url_reuse)});
    }
    out.write_csv("group_usage.csv", gu);

    csv::File rank;
    rank.comment("canonical external URLs by use count per group");
    rank.comment("columns: group, rank, url, uses");
    rank.row({"group", "rank", "url", "uses"});
    for (std::size_t g = 0; g < kGroups.size(); ++g)
        for (std::size_t i = 0; i < ud.groups[g].url_rank_frequency.size(); ++i)
            rank.row({group_name(kGroups[g]), std::to_string(i + 1),
                      ud.groups[g].url_rank_frequency[i].first,
                      std::to_string(ud.groups[g].url_rank_frequency[i].second)});
    out.write_csv("url_rank_frequency.csv", rank);

    if (!ctx.cfg.url_categories_path.empty()) {
        UrlCategoryMap cats =
            UrlCategoryMap::from_csv(read_file_to_string(ctx.cfg.url_categories_path));
        UrlCategoryTable table = categorize_urls(*ctx.phased, aff, cats);
        csv::File f;
        f.comment("external URL uses per category; phase 0 = overall");
        f.comment("coding file sha256: " + cats.provenance_sha256);
        f.comment("columns: group, phase, category, uses");
        f.row({"group", "phase", "category", "uses"});
        for (std::size_t g = 0; g < kGroups.size(); ++g)
            for (int phase = 0; phase <= phase_count; ++phase) {
                const auto& cell = table.cells[g][static_cast<std::size_t>(
                    phase == 0 ? phase_count : phase - 1)];
                for (std::size_t c = 0; c < kUrlCategoryNames.size(); ++c)
                    f.row({group_name(kGroups[g]), std::to_string(phase), kUrlCategoryNames[c],
                           std::to_string(cell[c])});
            }
        out.write_csv("url_categories.csv", f);
    }

    if (!ctx.cfg.location_coding_path.empty()) {
        LocationCoding coding =
            LocationCoding::from_csv(read_file_to_string(ctx.cfg.location_coding_path));
        LocationSummary ls = location_summary(ctx.corpus, aff, coding);
        csv::File f;
        f.comment("accounts by coded country of their profile location");
        f.comment("columns: group, country, accounts, proportion");
        f.row({"group", "country", "accounts", "proportion"});
        for (std::size_t g = 0; g < kGroups.size(); ++g)
            for (const LocationRow& row : ls.groups[g])
                f.row({group_name(kGroups[g]), row.country, std::to_string(row.accounts),
                       fmt(row.proportion)});
        out.write_csv("location_summary.csv", f);
    }
}

void stage_coordination(Context& ctx, StageWriter& out) {
    ctx.load_corpus();
    const AffiliationMap& aff = ctx.affiliations();
    for (const CoordinationJob& job : ctx.cfg.coordination) {
        std::string tag = std::string(to_string(job.params.kind)) + "_g" +
                          std::to_string(job.params.gamma_seconds);
        CoActivityGraph g = job.with_bigraph ? bigraph(ctx.corpus, job.params)
                                             : co_activity(ctx.corpus, job.params);
        out.write("coactivity_" + tag + ".graphml", coordination_graphml(g, aff));

        CoordinationReport report = coordination_report(g, aff, job.top_components);
        json j;
        j["params"] = job.params.describe();
        j["total_components"] = report.total_components;
        j["components"] = json::array();
        for (const ComponentSummary& c : report.components) {
            json q;
            q["size"] = c.members.size();
            q["members"] = c.members;
            q["affiliations"] = json::object();
            for (const auto& [group, n] : c.affiliation_counts)
                q["affiliations"][group_name(group)] = n;
            q["max_clique_size"] = c.max_clique_size;
            q["clique_search_capped"] = c.clique_search_capped;
            q["clique_census"] = json::object();
            for (const auto& [size, n] : c.clique_census)
                q["clique_census"][size <= 6 ? std::to_string(size) : "7+"] = n;
            j["components"].push_back(std::move(q));
        }
        out.write("coordination_" + tag + ".json", j.dump(2) + "\n");
    }
}

void stage_inauthenticity(Context& ctx, StageWriter& out) {
    ctx.load_corpus();
    const AffiliationMap& aff = ctx.affiliations();
    int phase_count = ctx.phased->phase_count();

    PatternReport pr = classify_patterns(*ctx.phased, aff);
    csv::File pat;
    pat.comment("text-pattern frequencies; phase 0 = overall; empty pct = no tweets");
    pat.comment("columns: group, phase, pattern, count, pct_of_group_tweets");
    pat.row({"group", "phase", "pattern", "count", "pct_of_group_tweets"});
    for (std::size_t g = 0; g < kGroups.size(); ++g)
        for (int phase = 0; phase <= phase_count; ++phase) {
            const PatternCell& cell = pr.cell(kGroups[g], phase);
            for (TextPattern p : kPatterns)
                pat.row({group_name(kGroups[g]), std::to_string(phase), to_string(p),
                         std::to_string(cell.counts[static_cast<std::size_t>(p)]),
                         fmt_opt(cell.pct(p))});
        }
    out.write_csv("patterns.csv", pat);

    std::vector<ReplyBurst> bursts = detect_reply_bursts(ctx.corpus, ctx.cfg.burst);
    csv::File bf;
    bf.comment("near-duplicate reply bursts (window " +
               std::to_string(ctx.cfg.burst.window_seconds) + "s, min " +
               std::to_string(ctx.cfg.burst.min_count) + ")");
    bf.comment("columns: source, target, count, start, end, sample_text");
    bf.row({"source", "target", "count", "start", "end", "sample_text"});
    for (const ReplyBurst& b : bursts)
        bf.row({b.source, b.target, std::to_string(b.count), format_iso8601(b.start),
                format_iso8601(b.end), b.sample_texts.empty() ? "" : b.sample_texts.front()});
    out.write_csv("bursts.csv", bf);

    if (!ctx.cfg.bot_scores_path.empty()) {
        std::unique_ptr<BotScoreClient> client;
        if (ctx.cfg.bot_scores_path.starts_with("http://") ||
            ctx.cfg.bot_scores_path.starts_with("https://")) {
            const char* token = std::getenv("BOTSCORE_TOKEN");
            client = std::make_unique<HttpBotScores>(ctx.cfg.bot_scores_path,
                                                     token ? token : "");
        } else {
            client = std::make_unique<CsvBotScores>(
                CsvBotScores::from_csv_file(ctx.cfg.bot_scores_path));
        }
        BotScoreReport report = score_accounts(*client, *ctx.phased, aff, ctx.cfg.score_selection);
        csv::File sf;
        sf.comment("bot-likeness scores for the " + std::to_string(report.selected) +
                   " selected accounts; " + std::to_string(report.unscored.size()) +
                   " had no score");
        sf.comment("columns: account, cap, english_score, bucket");
        sf.row({"account", "cap", "english_score", "bucket"});
        for (const BotScore& s : report.scores)
            sf.row({s.account_id, fmt(s.cap), fmt_opt(s.english_score), to_string(s.bucket)});
        out.write_csv("bot_scores.csv", sf);

        csv::File bkt;
        bkt.comment("accounts and tweet contributions per bucket; phase 0 = overall");
        bkt.comment("columns: bucket, accounts, phase, tweets");
        bkt.row({"bucket", "accounts", "phase", "tweets"});
        for (const auto& [bucket, cell] : report.buckets) {
            bkt.row({to_string(bucket), std::to_string(cell.accounts), "0",
                     std::to_string(cell.tweets_total)});
            for (std::size_t p = 0; p < cell.tweets_per_phase.size(); ++p)
                bkt.row({to_string(bucket), std::to_string(cell.accounts),
                         std::to_string(p + 1), std::to_string(cell.tweets_per_phase[p])});
        }
        out.write_csv("bot_buckets.csv", bkt);
    }

    // daily activity of the most active accounts
    std::vector<std::pair<std::int64_t, std::string>> by_volume;
    for (const auto& [id, idxs] : ctx.corpus.by_account())
        by_volume.emplace_back(static_cast<std::int64_t>(idxs.size()), id);
    std::sort(by_volume.begin(), by_volume.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < by_volume.size() && i < 20; ++i) ids.push_back(by_volume[i].second);
    std::sort(ids.begin(), ids.end());
    csv::File prof;
    prof.comment("daily tweet counts of the 20 busiest accounts;");
    prof.comment("lifetime_rate = snapshot statuses/day, empty when age unknown");
    prof.comment("columns: account, bucket_start, tweets, lifetime_rate");
    prof.row({"account", "bucket_start", "tweets", "lifetime_rate"});
    for (const ActivityProfile& p : account_activity_profile(ctx.corpus, ids)) {
        for (std::size_t b = 0; b < p.counts.size(); ++b)
            prof.row({p.account_id,
                      format_iso8601(p.bucket0 + static_cast<Timestamp>(b) * p.bucket_seconds),
                      std::to_string(p.counts[b]), b == 0 ? fmt_opt(p.lifetime_rate) : ""});
    }
    out.write_csv("activity_profiles.csv", prof);
}

}  // namespace

// ---------------------------------------------------------------------------

int run_pipeline(const RunConfig& config_in, RunManifest* manifest_out) {
    RunConfig config = config_in;
    if (const char* env = std::getenv("POLARSCOPE_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) config.threads = n;
    }
    config.check_inputs();
    fs::create_directories(config.workdir);

    RunManifest manifest;
    manifest.seed = config.clustering.seed;
    manifest.threads = config.threads;
    {
        std::ostringstream cfg;
        cfg << config.corpus_path << '\n'
            << config.phases.boundaries.size() << ' ';
        for (Timestamp b : config.phases.boundaries) cfg << b << ' ';
        cfg << '\n'
            << config.clustering.describe() << '\n'
            << config.burst.window_seconds << ' ' << config.burst.min_count << ' '
            << config.burst.similarity << '\n'
            << config.focal_hashtag << '\n';
        for (const CoordinationJob& job : config.coordination)
            cfg << job.params.describe() << " bigraph=" << job.with_bigraph << '\n';
        for (const auto& s : config.stages) cfg << s << ' ';
        manifest.config_digest = sha256_hex(cfg.str());
    }
    for (const std::string& path :
         {config.corpus_path, config.seeds_path, config.affiliations_path,
          config.url_categories_path, config.location_coding_path, config.bot_scores_path})
        if (!path.empty())
            manifest.inputs.emplace_back(
                path, path.starts_with("http") ? sha256_hex(path) : sha256_file(path));

    std::vector<std::string> wanted(config.stages);
    if (wanted.empty()) wanted.assign(kStageNames.begin(), kStageNames.end());

    Context ctx(config);
    bool failed = false;
    for (const char* name : kStageNames) {
        if (std::find(wanted.begin(), wanted.end(), name) == wanted.end()) continue;
        StageRecord record;
        record.name = name;
        if (failed) {
            record.status = "not_run";
            manifest.stages.push_back(std::move(record));
            continue;
        }
        StageWriter writer(config.workdir, record);
        auto t0 = std::chrono::steady_clock::now();
        try {
            std::string stage = name;
            if (stage == "ingest") stage_ingest(ctx, writer);
            else if (stage == "networks") stage_networks(ctx, writer);
            else if (stage == "polarisation") stage_polarisation(ctx, writer);
            else if (stage == "metrics") stage_metrics(ctx, writer);
            else if (stage == "content") stage_content(ctx, writer);
            else if (stage == "coordination") stage_coordination(ctx, writer);
            else if (stage == "inauthenticity") stage_inauthenticity(ctx, writer);
            record.status = "ok";
        } catch (const std::exception& e) {
            record.status = "failed";
            record.error = e.what();
            failed = true;
        }
        record.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        manifest.stages.push_back(std::move(record));
    }

    for (const StageRecord& s : manifest.stages)
        for (const std::string& rel : s.outputs)
            manifest.output_digests[rel] = sha256_file((fs::path(config.workdir) / rel).string());
    manifest.finalize();
    write_file_atomic((fs::path(config.workdir) / "manifest.json").string(), manifest.to_json());
    if (manifest_out != nullptr) *manifest_out = manifest;
    return failed ? 3 : 0;
}

// ---------------------------------------------------------------------------

std::vector<std::string> emit_plot_data(const RunConfig& config) {
    config.check_inputs();
    fs::path workdir(config.workdir);
    std::string aff_path = config.affiliations_path.empty()
                               ? (workdir / "affiliations.csv").string()
                               : config.affiliations_path;
    if (!fs::exists(aff_path))
        throw std::runtime_error("missing artifact: " + aff_path +
                                 " (run the polarisation stage first)");
    AffiliationMap aff = AffiliationMap::from_csv(read_file_to_string(aff_path));
    Corpus corpus = Corpus::from_jsonl_file(config.corpus_path);
    PhasedCorpus phased(corpus, config.phases);
    std::vector<std::string> written;
    auto save = [&](const std::string& rel, const csv::File& f) {
        fs::create_directories(workdir);
        csv::write_file((workdir / rel).string(), f);
        written.push_back(rel);
    };

    csv::File timeline;
    timeline.comment("tweets per group per time bucket");
    timeline.comment("columns: bucket_start, group, tweets");
    timeline.row({"bucket_start", "group", "tweets"});
    if (!corpus.empty()) {
        Timestamp t0 = corpus.first_time();
        std::size_t nbuckets = static_cast<std::size_t>((corpus.last_time() - t0) /
                                                        config.bucket_seconds) +
                               1;
        std::vector<std::array<std::int64_t, 3>> counts(nbuckets, {0, 0, 0});
        for (TweetIndex i = 0; i < corpus.size(); ++i)
            ++counts[static_cast<std::size_t>((corpus[i].created_at - t0) /
                                              config.bucket_seconds)]
                    [static_cast<std::size_t>(aff.of(corpus[i].author.account_id))];
        for (std::size_t b = 0; b < nbuckets; ++b)
            for (std::size_t g = 0; g < kGroups.size(); ++g)
                timeline.row({format_iso8601(t0 + static_cast<Timestamp>(b) *
                                                      config.bucket_seconds),
                              group_name(kGroups[g]), std::to_string(counts[b][g])});
    }
    save("plot_timeline.csv", timeline);

    csv::File growth;
    growth.comment("cumulative distinct posting accounts");
    growth.comment("columns: bucket_start, new_accounts, cumulative_accounts");
    growth.row({"bucket_start", "new_accounts", "cumulative_accounts"});
    for (const GrowthPoint& g : growth_curve(corpus, config.bucket_seconds))
        growth.row({format_iso8601(g.bucket_start), std::to_string(g.new_accounts),
                    std::to_string(g.cumulative_accounts)});
    save("plot_growth.csv", growth);

    csv::File heat;
    heat.comment("group-to-group retweet heatmap; raw counts and row proportions");
    heat.comment("columns: phase, source_group, target_group, raw, proportion"
                 " (phase 0 = overall)");
    heat.row({"phase", "source_group", "target_group", "raw", "proportion"});
    if (!corpus.empty())
        for (int phase = 0; phase <= phased.phase_count(); ++phase) {
            GroupMatrix m = group_matrix(phased, aff, InteractionKind::Retweet,
                                         phase == 0 ? std::nullopt : std::optional<int>(phase));
            for (std::size_t s = 0; s < kGroups.size(); ++s)
                for (std::size_t t = 0; t < kGroups.size(); ++t)
                    heat.row({std::to_string(phase), group_name(kGroups[s]),
                              group_name(kGroups[t]), std::to_string(m.raw[s][t]),
                              fmt_opt(m.proportion[s][t])});
        }
    save("plot_group_matrix.csv", heat);

    csv::File cores_csv;
    cores_csv.comment("retweet-LCC core-number histogram per group");
    cores_csv.comment("columns: k, group, accounts");
    cores_csv.row({"k", "group", "accounts"});
    if (!corpus.empty()) {
        InteractionNetwork net = build_network(phased, InteractionKind::Retweet);
        if (net.graph.node_count() > 0) {
            KCoreResult cores = kcore(largest_component(net.graph).graph);
            for (const auto& [group, counts] : cores.histogram(aff))
                for (const auto& [k, n] : counts)
                    cores_csv.row({std::to_string(k), group_name(group), std::to_string(n)});
        }
    }
    save("plot_kcore.csv", cores_csv);

    csv::File rank;
    rank.comment("hashtag rank-frequency per group");
    rank.comment("columns: group, rank, hashtag, uses");
    rank.row({"group", "rank", "hashtag", "uses"});
    if (!corpus.empty()) {
        UsageDistributions ud = usage_distributions(corpus, aff, 50);
        for (std::size_t g = 0; g < kGroups.size(); ++g)
            for (std::size_t i = 0; i < ud.groups[g].top_hashtags.size(); ++i)
                rank.row({group_name(kGroups[g]), std::to_string(i + 1),
                          ud.groups[g].top_hashtags[i].first,
                          std::to_string(ud.groups[g].top_hashtags[i].second)});
    }
    save("plot_hashtag_rank.csv", rank);
    return written;
}

}  // namespace polarscope
