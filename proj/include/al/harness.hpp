#pragma once

#include "al/data.hpp"
#include "al/model.hpp"
#include "al/strategies.hpp"

#include <json.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace al {

struct LearningCurveRecord {
    std::string dataset;
    std::string strategy;
    std::uint64_t repetition = 0;
    std::uint64_t seed = 0;
    std::vector<double> errors;  // test error after acquisitions 1..B

    friend bool operator==(const LearningCurveRecord&, const LearningCurveRecord&) = default;
};

nlohmann::json to_json(const LearningCurveRecord& record);
LearningCurveRecord record_from_json(const nlohmann::json& j);

/// Optional per-run diagnostics.
struct ExperimentTrace {
    std::vector<double> acquisition_seconds;  // select + commit, per acquisition
    std::vector<std::size_t> selected;        // pool indices in acquisition order
    std::vector<std::size_t> train_rows;      // dataset rows forming the pool
    std::vector<std::size_t> test_rows;       // dataset rows used for evaluation
    LossCounter loss_counter;
    KernelSpec kernel;
};

struct ExperimentOptions {
    bool parallel_scoring = true;
    RiskMode mode = RiskMode::DecisionChange;
    ExperimentTrace* trace = nullptr;
};

/// Seed of the (repetition, strategy) stream; also used as the committee seed.
std::uint64_t job_seed(std::uint64_t seed, std::uint64_t repetition, const StrategyConfig& strategy);

/// One active-learning run: split, standardize (numeric), bandwidth from the
/// training pool, kernel, then select / reveal / commit / evaluate until the
/// budget is spent or U is empty.
LearningCurveRecord run_experiment(const Dataset& dataset, const StrategyConfig& strategy, const SplitSpec& spec,
                                   std::size_t budget, const ExperimentOptions& options = {});

/// Mean of the per-acquisition errors.
double aulc(std::span<const double> errors);
double aulc(const LearningCurveRecord& record);

/// table[repetition][strategy] -> mean rank per strategy (1 = lowest value,
/// ties share the average rank).
std::vector<double> mean_ranks(const std::vector<std::vector<double>>& table);

struct WilcoxonResult {
    double statistic = 0.0;  // min(W+, W-)
    double p_value = 1.0;    // two-sided
    std::size_t n = 0;       // non-zero differences
    bool exact = false;
    bool degenerate = false;  // all differences zero
};

inline constexpr std::size_t kWilcoxonExactMaxN = 20;
inline constexpr std::size_t kWilcoxonMinN = 5;

/// Zero differences are dropped; exact null for n <= 20, normal approximation
/// with tie and continuity correction above.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);
WilcoxonResult wilcoxon_exact(std::span<const double> a, std::span<const double> b);
WilcoxonResult wilcoxon_normal(std::span<const double> a, std::span<const double> b);

/// "***" / "**" / "*" when the reference wins at .001 / .01 / .05, daggers when
/// the competitor wins, empty otherwise. direction > 0 means reference better.
std::string significance_stars(double p, int direction);

struct SummaryRow {
    std::string dataset;
    std::string strategy;
    double mean_aulc = 0.0;
    double std_aulc = 0.0;
    double mean_rank = 0.0;
    std::optional<double> p_vs_reference;
    std::string annotation;
};

struct WinTieLoss {
    std::size_t wins = 0, ties = 0, losses = 0;
};

/// Per-dataset table over strategies plus reference comparisons.
struct RankSummary {
    std::vector<SummaryRow> rows;
    /// overall mean rank per strategy (averaged over datasets)
    std::vector<std::pair<std::string, double>> overall_mean_rank;
    /// per competitor, win/tie/loss of the reference at p-levels .001, .01, .05
    std::vector<std::pair<std::string, std::array<WinTieLoss, 3>>> reference_record;
};

/// Groups records by dataset; strategies are ranked within each repetition.
/// Repetitions missing any strategy are ignored for ranks and tests.
RankSummary summarize(const std::vector<LearningCurveRecord>& records, const std::string& reference_strategy);

void write_summary_csv(const RankSummary& summary, std::ostream& out);

}  // namespace al
