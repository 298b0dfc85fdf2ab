#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polarscope/coordination.hpp"
#include "polarscope/corpus.hpp"
#include "polarscope/inauthenticity.hpp"
#include "polarscope/polarisation.hpp"

namespace polarscope {

inline constexpr const char* kToolVersion = "polarscope 0.1.0";

inline constexpr std::array<const char*, 7> kStageNames = {
    "ingest",  "networks",     "polarisation", "metrics",
    "content", "coordination", "inauthenticity"};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CoordinationJob {
    CoActivityParams params;
    bool with_bigraph = false;
    std::size_t top_components = 5;
};

struct RunConfig {
    std::string corpus_path;
    std::string workdir = "polarscope_out";
    PhaseConfig phases;            // no boundaries = one phase
    std::string seeds_path;        // optional seed labels for cluster naming
    std::string affiliations_path; // optional precomputed map; skips labeling
    std::string url_categories_path;
    std::string location_coding_path;
    std::string bot_scores_path;
    ClusterParams clustering;
    std::vector<CoordinationJob> coordination{CoordinationJob{}};  // co_retweet, 60s sliding
    BurstParams burst;
    ScoreSelection score_selection;
    std::string focal_hashtag;     // meta-discussion + co-mention exclusion
    std::vector<std::string> stages;  // subset of kStageNames; empty = all
    int threads = 1;
    bool centralities = true;      // per-node centrality block of the metrics stage
    std::int64_t bucket_seconds = 86400;

    // paths resolve relative to base_dir; throws ConfigError
    static RunConfig from_json(const std::string& text, const std::string& base_dir);
    static RunConfig from_json_file(const std::string& path);
    void check_inputs() const;  // referenced files must exist
};

struct StageRecord {
    std::string name;
    std::string status;  // ok | failed | not_run
    std::string error;
    double seconds = 0.0;
    std::vector<std::string> outputs;  // workdir-relative
};

struct RunManifest {
    std::string tool_version = kToolVersion;
    std::string config_digest;
    std::uint64_t seed = 0;
    int threads = 1;
    std::vector<std::pair<std::string, std::string>> inputs;  // (path, sha256)
    std::vector<StageRecord> stages;
    std::map<std::string, std::string> output_digests;  // rel path -> sha256
    std::string digest;  // covers everything above except timings

    void finalize();  // fills digest
    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
};

// Executes the staged pipeline into config.workdir and writes manifest.json
// last. Returns 0 on success, 3 when any stage failed (manifest still
// records the partial run). Honors POLARSCOPE_THREADS.
int run_pipeline(const RunConfig& config, RunManifest* manifest_out = nullptr);

// Long-format CSVs for the figure families, from pipeline artifacts in the
// workdir. Missing prerequisites raise std::runtime_error naming the file.
std::vector<std::string> emit_plot_data(const RunConfig& config);

}  // namespace polarscope
