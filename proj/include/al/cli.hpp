#pragma once

#include "al/data.hpp"
#include "al/harness.hpp"
#include "al/strategies.hpp"

#include <json.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace al::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

struct RunConfig {
    std::filesystem::path manifest = "data/manifest.json";
    std::vector<std::string> datasets;  // manifest names or CSV paths; empty = whole manifest
    std::vector<StrategyConfig> strategies;
    std::size_t repetitions = 100;
    std::size_t budget = 200;
    std::vector<double> alpha_sweep;  // replaces every xpal entry by one per value
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::filesystem::path out = "results";
    bool stratified = false;
    std::string label_column = "class";
    std::string reference = "xpal";

    void validate() const;
    /// Strategy list after applying the alpha sweep.
    std::vector<StrategyConfig> expanded_strategies() const;
};

nlohmann::json to_json(const RunConfig& config);
/// Fields present in `j` override `base`.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

StrategyConfig parse_strategy(const nlohmann::json& j);

/// Resolves names against the manifest, or loads a CSV path directly.
/// Throws ConfigError naming the path when a file is missing.
std::vector<Dataset> resolve_datasets(const RunConfig& config);

struct RunJob {
    std::size_t dataset = 0;
    std::size_t strategy = 0;
    std::uint64_t repetition = 0;
};

/// Canonical job order: dataset, then strategy, then repetition.
std::vector<RunJob> plan_jobs(std::size_t n_datasets, std::size_t n_strategies, std::size_t repetitions);

/// Runs every job on `workers` threads; `sink` receives records in job order
/// regardless of completion order. Jobs before `skip` are not run.
void run_jobs(const std::vector<Dataset>& datasets, const std::vector<StrategyConfig>& strategies,
              const RunConfig& config, const std::function<void(const LearningCurveRecord&)>& sink,
              std::size_t skip = 0);

/// Full `run` subcommand: writes run_config.json, results.jsonl, summary.csv
/// and ranks.csv under config.out. Resumes from a partial results file when
/// the resume marker is present and the config matches.
void cmd_run(const RunConfig& config);

std::vector<LearningCurveRecord> read_records(const std::filesystem::path& jsonl);
void write_rank_csv(const RankSummary& summary, std::ostream& out);

/// Re-summarizes an existing JSONL file into `out_dir`.
void cmd_report(const std::filesystem::path& results, const std::string& reference,
                const std::filesystem::path& out_dir);

enum class LabelMode { Strategy, Random };

struct LandscapePoint {
    double x = 0.0, y = 0.0, score = 0.0;
};

struct LabeledPoint {
    double x = 0.0, y = 0.0;
    int label = 0;
    std::size_t row = 0;
};

struct Landscape {
    std::vector<LandscapePoint> grid;  // row-major, resolution x resolution, original units
    std::vector<LabeledPoint> labeled;  // acquisition order
};

/// Acquires n_labels on the whole (standardized) dataset, then scores every
/// grid point as an out-of-pool candidate. The pool state is not modified by
/// grid scoring.
Landscape compute_landscape(const Dataset& data, const StrategyConfig& strategy, LabelMode mode,
                            std::size_t n_labels, std::size_t resolution, std::uint64_t seed,
                            double margin = 0.1);

struct ScalingRow {
    std::string strategy;
    std::size_t n = 0;
    std::size_t c = 0;
    double seconds_per_acquisition = 0.0;
    LossCounter counter;  // xpal only
    std::uint64_t candidates_scored = 0;
};

/// Mean wall time per acquisition over `budget` acquisitions on synthetic
/// blobs (whole set as pool); the minimum over `repeats` runs is reported.
std::vector<ScalingRow> measure_scaling(const std::vector<std::size_t>& sizes,
                                        const std::vector<std::size_t>& class_counts,
                                        const std::vector<StrategyConfig>& strategies, std::size_t budget,
                                        std::uint64_t seed, std::size_t repeats = 1,
                                        RiskMode mode = RiskMode::DecisionChange);

/// Entry point of the al_lab tool; returns the process exit code.
int main(int argc, char** argv);

}  // namespace al::cli
