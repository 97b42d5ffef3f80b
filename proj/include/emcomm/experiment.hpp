#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emcomm/society.hpp"
#include "emcomm/theory.hpp"

namespace emcomm {

// A full experiment: one society configuration run for `replicates`
// independent seeds, or a parameter sweep when `grid` is non-empty.
struct ExperimentConfig {
    SocietyConfig society;
    double duration = 1000.0;
    double cadence = 0.0;  // 0 means the documented default duration/100
    int replicates = 10;
    int jobs = 0;  // 0 means hardware concurrency
    std::string output_dir = "out";
    bool snapshot = false;
    bool log_interactions = false;
    int p_s_sample_pairs = 0;  // 0 = exact blind-success evaluation
    long long max_total_steps = 5'000'000'000LL;
    std::optional<std::string> preset;
    // sweep lists keyed by parameter name: alpha, C, A, M, S, N
    std::map<std::string, std::vector<double>> grid;

    double effective_cadence() const { return cadence > 0.0 ? cadence : duration / 100.0; }
    void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
ExperimentConfig load_config(const std::string& path);

// Fixed-order key=value rendering of a resolved config; loading the result
// reproduces the run bit for bit.
std::string render_manifest(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);  // FNV-1a of the manifest text

struct ReplicateOutcome {
    bool ok = false;
    std::string error;
    double g_window = 0.0, g_final = 0.0;
    double v_window = 0.0, v_final = 0.0;
    double d_window = 0.0;
    int d_final = 0;
    std::vector<MetricsRecord> series;
};

struct Aggregate {
    double mean = 0.0;
    double standard_error = 0.0;
};
Aggregate aggregate_of(const std::vector<double>& values);

struct ExperimentResult {
    std::vector<ReplicateOutcome> replicates;
    Aggregate g_window, g_final, v_window, v_final, d_window, d_final;
    int ok_count = 0;
};

// Runs the replicates (no file output); used by tests and the sweep engine.
ExperimentResult run_replicates(const ExperimentConfig& config);

// Runs the replicates and writes manifest.txt, metrics_repNNN.csv,
// aggregate.csv and optional snapshots / interaction logs under output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct SweepRow {
    SocietyConfig point;
    double lambda_alpha = 0.0;
    double gamma = 0.0;
    double ratio = 0.0;  // lambda*alpha / gamma
    RegimeReport regime;
    Aggregate g_window;
    double g_final_mean = 0.0;
    double v_window_mean = 0.0;
    bool g_above_half = false;
};

// Cross-product sweep over the grid lists; writes sweep.csv and manifest.txt
// under output_dir. A single-point grid reproduces run_experiment exactly.
std::vector<SweepRow> sweep(const ExperimentConfig& config);

// In-memory variant over an explicit point list (no cross product).
std::vector<SweepRow> sweep_points(const ExperimentConfig& base,
                                   const std::vector<SocietyConfig>& points);

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

// -- snapshots ---------------------------------------------------------------
struct Snapshot {
    std::uint64_t config_hash = 0;
    double clock = 0.0;
    int agent_count = 0, meaning_count = 0, signal_count = 0;
    double alpha = 0.0, lambda = 0.0;
    std::vector<std::vector<double>> counts;  // per agent, row-major M x S
};
void write_snapshot(const std::string& path, const SocietyState& state,
                    const SocietyConfig& society, std::uint64_t hash);
Snapshot read_snapshot(const std::string& path);

// -- presets ------------------------------------------------------------------
struct PresetPoint {
    std::string label;
    ExperimentConfig config;  // fully resolved, single point
};
bool is_known_preset(const std::string& name);
std::vector<std::string> preset_names();
// Expands a preset into its point list. Base supplies seed, output_dir, jobs
// and (when explicitly set) a replicate override.
std::vector<PresetPoint> expand_preset(const std::string& name, const ExperimentConfig& base,
                                       std::optional<int> replicate_override = std::nullopt);
// Runs every point of the preset into output_dir/<label>/, writes a
// summary.csv of sweep rows and preset-specific extras (dominance histogram
// for fig6, society-mean production tables for fig5), optionally SVG plots.
std::vector<SweepRow> reproduce_preset(const std::string& name, const ExperimentConfig& base,
                                       bool emit_svg = false,
                                       std::optional<int> replicate_override = std::nullopt);

}  // namespace emcomm
