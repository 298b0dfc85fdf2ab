// polarscope — batch analytics over a tweet corpus: interaction networks,
// polarisation, group metrics, content/coordination analysis, inauthenticity
// signals, and a synthetic-corpus generator for validation.
//
// Exit codes: 0 success, 2 configuration error, 3 analysis/stage failure.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polarscope/coordination.hpp"
#include "polarscope/graph_io.hpp"
#include "polarscope/network.hpp"
#include "polarscope/pipeline.hpp"
#include "polarscope/synth.hpp"
#include "polarscope/time_utils.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFailure = 3;

struct CommonOpts {
    std::string config_path;
    std::string input_path;   // overrides config corpus
    std::string workdir;      // overrides config workdir
    int threads = 0;          // 0 = keep config value
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required) {
    auto* c = cmd->add_option("-c,--config", o.config_path, "run config (JSON)");
    if (config_required) c->required()->check(CLI::ExistingFile);
    else c->check(CLI::ExistingFile);
    cmd->add_option("-i,--input", o.input_path, "corpus JSONL (overrides config)")
        ->check(CLI::ExistingFile);
    cmd->add_option("-o,--out,--workdir", o.workdir, "output directory (overrides config)");
    cmd->add_option("--threads", o.threads, "worker threads (overrides config)")
        ->check(CLI::PositiveNumber);
}

polarscope::RunConfig load_config(const CommonOpts& o) {
    polarscope::RunConfig cfg;
    if (!o.config_path.empty()) {
        cfg = polarscope::RunConfig::from_json_file(o.config_path);
    } else if (o.input_path.empty()) {
        throw polarscope::ConfigError("either --config or --input is required");
    }
    if (!o.input_path.empty()) cfg.corpus_path = o.input_path;
    if (!o.workdir.empty()) cfg.workdir = o.workdir;
    if (o.threads > 0) cfg.threads = o.threads;
    return cfg;
}

int execute(const polarscope::RunConfig& cfg, const std::vector<std::string>& stages) {
    polarscope::RunConfig run = cfg;
    run.stages = stages;
    polarscope::RunManifest manifest;
    int rc = polarscope::run_pipeline(run, &manifest);
    for (const polarscope::StageRecord& s : manifest.stages) {
        std::cerr << "[" << s.status << "] " << s.name;
        if (s.status == "ok")
            std::cerr << " (" << s.outputs.size() << " artifacts, " << s.seconds << "s)";
        if (!s.error.empty()) std::cerr << ": " << s.error;
        std::cerr << "\n";
    }
    std::cerr << "manifest " << manifest.digest << " -> " << run.workdir << "/manifest.json\n";
    return rc == 0 ? kExitOk : kExitFailure;
}

std::int64_t parse_duration_arg(const std::string& text, const char* what) {
    auto v = polarscope::parse_duration_seconds(text);
    if (!v || *v <= 0)
        throw polarscope::ConfigError(std::string("bad ") + what + " duration: " + text);
    return *v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polarised-community and coordination analytics over tweet corpora"};
    app.require_subcommand(1);
    app.set_version_flag("--version", polarscope::kToolVersion);

    // ---- run: the whole pipeline (or a stage subset) from one config ------
    CommonOpts run_opts;
    std::vector<std::string> run_stages;
    auto* cmd_run = app.add_subcommand("run", "execute the staged pipeline from a config");
    add_common(cmd_run, run_opts, /*config_required=*/true);
    cmd_run->add_option("--stages", run_stages, "subset of stages to execute")
        ->delimiter(',');

    // ---- single-stage conveniences ----------------------------------------
    CommonOpts ingest_opts;
    auto* cmd_ingest = app.add_subcommand("ingest", "parse + index the corpus, report phases");
    add_common(cmd_ingest, ingest_opts, false);

    CommonOpts net_opts;
    std::string net_kind = "retweet";
    int net_phase = 0;
    std::string net_graphml, net_edgelist;
    auto* cmd_net = app.add_subcommand("net", "interaction networks");
    auto* cmd_net_build =
        cmd_net->add_subcommand("build", "build one network (optionally phase-restricted)");
    add_common(cmd_net_build, net_opts, false);
    cmd_net_build->add_option("--kind", net_kind, "retweet|reply|mention|quote");
    cmd_net_build->add_option("--phase", net_phase, "restrict to one phase (1-based)")
        ->check(CLI::PositiveNumber);
    cmd_net_build->add_option("--graphml", net_graphml, "write this network as GraphML");
    cmd_net_build->add_option("--edgelist", net_edgelist, "write this network as edgelist CSV");

    CommonOpts pol_opts;
    std::string pol_seeds;
    int pol_targets = 0;
    std::optional<bool> pol_weighted;
    auto* cmd_pol = app.add_subcommand("polarise", "cluster the retweet network into groups");
    add_common(cmd_pol, pol_opts, false);
    cmd_pol->add_option("--seeds", pol_seeds, "seed labels CSV (account_id,label)")
        ->check(CLI::ExistingFile);
    cmd_pol->add_option("--target-clusters", pol_targets, "stop after this many clusters")
        ->check(CLI::PositiveNumber);
    cmd_pol->add_flag("--weighted,!--unweighted", pol_weighted,
                      "use edge weights when cutting (default: weighted)");

    CommonOpts met_opts;
    bool met_no_centralities = false;
    auto* cmd_met = app.add_subcommand(
        "metrics", "centralities, k-cores, homophily, and group activity tables");
    add_common(cmd_met, met_opts, false);
    cmd_met->add_flag("--no-centralities", met_no_centralities,
                      "skip the per-node centrality block (cheap tables only)");

    CommonOpts con_opts;
    std::string con_urls, con_locations, con_focal;
    auto* cmd_con = app.add_subcommand(
        "content", "hashtag networks, partisan tags, URL and location breakdowns");
    add_common(cmd_con, con_opts, false);
    cmd_con->add_option("--url-categories", con_urls, "url,category coding CSV")
        ->check(CLI::ExistingFile);
    cmd_con->add_option("--locations", con_locations, "location_text,country coding CSV")
        ->check(CLI::ExistingFile);
    cmd_con->add_option("--focal-hashtag", con_focal,
                        "tag excluded from co-mention networks and tracked as meta-discussion");

    CommonOpts coord_opts;
    std::string coord_kind = "co_retweet";
    std::string coord_gamma = "60s";
    std::string coord_window = "sliding";
    std::vector<std::string> coord_exclude;
    std::int64_t coord_min_weight = 1;
    bool coord_bigraph = false;
    auto* cmd_coord = app.add_subcommand("coord", "co-activity (coordination) networks");
    add_common(cmd_coord, coord_opts, false);
    cmd_coord->add_option("--kind", coord_kind,
                          "co_retweet|co_hashtag|co_url|co_domain|co_mention");
    cmd_coord->add_option("--gamma", coord_gamma, "pairing window, e.g. 60s, 10m");
    cmd_coord->add_option("--windowing", coord_window, "sliding|fixed_bins");
    cmd_coord->add_option("--exclude", coord_exclude, "reason keys to ignore")->delimiter(',');
    cmd_coord->add_option("--min-edge-weight", coord_min_weight, "drop lighter edges");
    cmd_coord->add_flag("--bigraph", coord_bigraph, "emit the account-reason bipartite view");

    CommonOpts inauth_opts;
    std::string inauth_scores;
    auto* cmd_inauth = app.add_subcommand(
        "inauth", "text patterns, reply bursts, bot-score buckets, activity profiles");
    add_common(cmd_inauth, inauth_opts, false);
    cmd_inauth->add_option("--botscores", inauth_scores,
                           "score source: CSV path or service base URL "
                           "(token from BOTSCORE_TOKEN)");

    // ---- synth -------------------------------------------------------------
    std::string synth_config, synth_out, synth_truth;
    auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic corpus + ground truth");
    cmd_synth->add_option("-c,--config", synth_config, "scenario config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_synth->add_option("-o,--out", synth_out, "corpus JSONL to write")->required();
    cmd_synth->add_option("--truth", synth_truth, "ground-truth JSON to write")->required();

    // ---- plot data ----------------------------------------------------------
    CommonOpts plot_opts;
    auto* cmd_plot = app.add_subcommand("plot", "emit long-format CSVs for the figure families");
    add_common(cmd_plot, plot_opts, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) return execute(load_config(run_opts), run_stages);
        if (cmd_ingest->parsed()) return execute(load_config(ingest_opts), {"ingest"});

        if (cmd_net_build->parsed()) {
            polarscope::RunConfig cfg = load_config(net_opts);
            auto kind = polarscope::interaction_kind_from(net_kind);
            if (!kind) throw polarscope::ConfigError("unknown network kind: " + net_kind);
            if (net_graphml.empty() && net_edgelist.empty())
                return execute(cfg, {"networks"});  // the standard four-network stage
            cfg.check_inputs();
            polarscope::Corpus corpus = polarscope::Corpus::from_jsonl_file(cfg.corpus_path);
            polarscope::PhasedCorpus phased(corpus, cfg.phases);
            if (net_phase > phased.phase_count())
                throw polarscope::ConfigError("phase " + std::to_string(net_phase) +
                                              " out of range");
            polarscope::InteractionNetwork net = polarscope::build_network(
                phased, *kind,
                net_phase > 0 ? std::optional<int>(net_phase) : std::nullopt);
            if (!net_graphml.empty()) {
                polarscope::GraphmlSpec spec;
                spec.graph_id = net_kind;
                spec.node_attrs.push_back(
                    {"observed_only", "boolean", [&net](const std::string& id) {
                         return std::optional<std::string>(net.is_observed_only(id) ? "true"
                                                                                    : "false");
                     }});
                polarscope::write_graphml(net_graphml, net.graph, spec);
                std::cerr << "wrote " << net_graphml << "\n";
            }
            if (!net_edgelist.empty()) {
                polarscope::write_edgelist_csv(net_edgelist, net.graph);
                std::cerr << "wrote " << net_edgelist << "\n";
            }
            return kExitOk;
        }

        if (cmd_pol->parsed()) {
            polarscope::RunConfig cfg = load_config(pol_opts);
            if (!pol_seeds.empty()) cfg.seeds_path = pol_seeds;
            if (pol_targets > 0) cfg.clustering.target_clusters = pol_targets;
            if (pol_weighted) cfg.clustering.use_weights = *pol_weighted;
            return execute(cfg, {"polarisation"});
        }

        if (cmd_met->parsed()) {
            polarscope::RunConfig cfg = load_config(met_opts);
            if (met_no_centralities) cfg.centralities = false;
            return execute(cfg, {"metrics"});
        }

        if (cmd_con->parsed()) {
            polarscope::RunConfig cfg = load_config(con_opts);
            if (!con_urls.empty()) cfg.url_categories_path = con_urls;
            if (!con_locations.empty()) cfg.location_coding_path = con_locations;
            if (!con_focal.empty()) cfg.focal_hashtag = con_focal;
            return execute(cfg, {"content"});
        }

        if (cmd_coord->parsed()) {
            polarscope::RunConfig cfg = load_config(coord_opts);
            polarscope::CoordinationJob job;
            auto kind = polarscope::co_activity_kind_from(coord_kind);
            if (!kind) throw polarscope::ConfigError("unknown co-activity kind: " + coord_kind);
            job.params.kind = *kind;
            job.params.gamma_seconds = parse_duration_arg(coord_gamma, "--gamma");
            if (coord_window == "fixed_bins")
                job.params.windowing = polarscope::Windowing::FixedBins;
            else if (coord_window != "sliding")
                throw polarscope::ConfigError("unknown windowing: " + coord_window);
            for (const std::string& e : coord_exclude) job.params.exclusions.insert(e);
            job.params.min_edge_weight = coord_min_weight;
            job.params.validate();
            job.with_bigraph = coord_bigraph;
            cfg.coordination = {job};
            return execute(cfg, {"coordination"});
        }

        if (cmd_inauth->parsed()) {
            polarscope::RunConfig cfg = load_config(inauth_opts);
            if (!inauth_scores.empty()) cfg.bot_scores_path = inauth_scores;
            return execute(cfg, {"inauthenticity"});
        }

        if (cmd_synth->parsed()) {
            polarscope::ScenarioConfig scenario;
            try {
                scenario = polarscope::ScenarioConfig::from_json_file(synth_config);
                scenario.validate();
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitConfig;
            }
            polarscope::GroundTruth truth =
                polarscope::generate_files(scenario, synth_out, synth_truth);
            std::cerr << "wrote " << truth.tweets << " tweets (" << synth_out << "), truth "
                      << synth_truth << "\n";
            return kExitOk;
        }

        if (cmd_plot->parsed()) {
            polarscope::RunConfig cfg = load_config(plot_opts);
            for (const std::string& rel : polarscope::emit_plot_data(cfg))
                std::cerr << "wrote " << cfg.workdir << "/" << rel << "\n";
            return kExitOk;
        }
    } catch (const polarscope::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}
