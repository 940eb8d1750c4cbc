#pragma once

#include "al/data.hpp"
#include "al/kernel.hpp"
#include "al/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace al {

enum class StrategyKind { Xpal, Pal, Eer, Us, Qbc, Rand, GreedyAll };

/// CLI names: xpal, pal, eer, us, qbc, rand, greedy-all.
std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy_kind(std::string_view name);

inline constexpr double kDefaultAlpha = 1e-3;
inline constexpr std::size_t kDefaultCommitteeSize = 25;

struct StrategyConfig {
    StrategyKind kind = StrategyKind::Xpal;
    double alpha = kDefaultAlpha;    // symmetric Dirichlet prior (xPAL)
    double epsilon = kDefaultAlpha;  // symmetric prior for EER
    std::size_t committee_size = kDefaultCommitteeSize;
    std::uint64_t seed = 0;          // stream seed for committees

    /// Display name; parameters appear only when they differ from the defaults,
    /// e.g. "xpal" or "xpal(alpha=0.01)".
    std::string label() const;
    void validate() const;
};

enum class RiskMode { DecisionChange, FullSum };

/// Read-only snapshot of one split that scorers evaluate against.
struct PoolView {
    const KernelMatrix* kernel = nullptr;
    const PoolState* state = nullptr;
    const FrequencyTable* frequencies = nullptr;
    const Dataset* pool = nullptr;        // pool features, needed by QBC and out-of-pool candidates
    std::span<const int> true_labels;     // GREEDY-ALL only
    std::span<const double> densities;    // mean kernel row per pool index (PAL)

    std::size_t pool_size() const noexcept { return kernel->size(); }
    std::size_t n_classes() const noexcept { return state->n_classes(); }
};

/// A point to be scored: either a pool index (already part of E and U) or an
/// out-of-pool point that joins E (and U) only for its own hypothetical update.
class Candidate {
public:
    static Candidate in_pool(const PoolView& view, std::size_t index);
    static Candidate external(const PoolView& view, std::span<const double> features);

    std::span<const double> similarity() const noexcept {
        return owned_similarity_.empty() ? pool_row_ : std::span<const double>(owned_similarity_);
    }
    double self_similarity() const noexcept { return self_similarity_; }
    std::optional<std::size_t> pool_index() const noexcept { return pool_index_; }
    std::span<const double> features() const noexcept { return features_; }
    const FrequencyVector& frequency() const noexcept { return frequency_; }

private:
    std::span<const double> pool_row_;
    std::vector<double> owned_similarity_;
    double self_similarity_ = 1.0;
    std::optional<std::size_t> pool_index_;
    std::span<const double> features_;
    FrequencyVector frequency_;
};

/// Expected reduction of the smoothed empirical risk over E from acquiring the
/// candidate's label, marginalised over the label with the same prior.
double xgain(const PoolView& view, const Candidate& candidate, const PriorVector& alpha,
             RiskMode mode = RiskMode::DecisionChange, LossCounter* counter = nullptr);

/// Negated expected error over U after acquisition (argmax selects the minimum).
double eer_score(const PoolView& view, const Candidate& candidate, const PriorVector& epsilon);

/// Density-weighted local gain at the candidate, prior 1 (myopic, one label).
double pal_score(const PoolView& view, const Candidate& candidate, double density);

/// Mean kernel value between the candidate and E.
double pal_density(const KernelMatrix& kernel, std::size_t candidate, std::span<const std::size_t> evaluation);

/// Least confidence: 1 - max of the unsmoothed posterior (uniform when k = 0).
double us_score(const PoolView& view, const Candidate& candidate);

/// Negated true empirical risk over E after adding the candidate with its true label.
double greedy_all_score(const PoolView& view, const Candidate& candidate);

/// Mean KL divergence of each member posterior to the committee consensus.
double committee_disagreement(std::span<const std::vector<double>> member_posteriors);

/// Bootstrap committee of Parzen window classifiers, each on a random feature
/// subset of size ceil(sqrt(D)) with its own mean-criterion bandwidth.
class Committee {
public:
    /// Member m draws from the stream keyed on (seed, round, m).
    static Committee build(const PoolView& view, std::size_t members, std::uint64_t seed, std::uint64_t round);

    std::size_t size() const noexcept { return members_.size(); }
    bool empty_training() const noexcept { return empty_training_; }
    /// Add-one smoothed posterior of every member at the candidate.
    std::vector<std::vector<double>> member_posteriors(const Candidate& candidate) const;
    const std::vector<std::size_t>& feature_subset(std::size_t member) const { return members_.at(member).features; }

private:
    struct Member {
        std::vector<std::size_t> features;
        KernelSpec spec;
        std::vector<LabeledPair> sample;  // bootstrap draw of L
        DenseMatrix pool_frequencies;     // pool_size x C
    };
    std::vector<Member> members_;
    const Dataset* pool_ = nullptr;
    std::size_t n_classes_ = 0;
    bool empty_training_ = true;
};

double qbc_score(const Committee& committee, const Candidate& candidate);

/// Owns everything the strategies need for one split: kernel, pool state,
/// incrementally updated frequencies and cached PAL densities.
class ActivePool {
public:
    ActivePool(KernelMatrix kernel, std::size_t n_classes, std::vector<int> true_labels = {},
               std::optional<Dataset> pool_features = std::nullopt);

    void acquire(std::size_t index, int label);

    PoolView view() const;
    const PoolState& state() const noexcept { return state_; }
    const KernelMatrix& kernel() const noexcept { return kernel_; }
    const FrequencyTable& frequencies() const noexcept { return frequencies_; }
    std::span<const double> densities() const noexcept { return densities_; }

private:
    KernelMatrix kernel_;
    PoolState state_;
    FrequencyTable frequencies_;
    std::vector<int> true_labels_;
    std::optional<Dataset> pool_features_;
    std::vector<double> densities_;
};

// Index-based forms over an explicit (state, kernel); frequencies are recomputed.
double xgain(std::size_t candidate, const PoolState& state, const KernelMatrix& kernel, const PriorVector& alpha);
double eer_score(std::size_t candidate, const PoolState& state, const KernelMatrix& kernel, const PriorVector& epsilon);
double pal_score(std::size_t candidate, const PoolState& state, const KernelMatrix& kernel, double density);
double us_score(std::size_t candidate, const PoolState& state, const KernelMatrix& kernel);
double greedy_all_score(std::size_t candidate, const PoolState& state, const KernelMatrix& kernel,
                        std::span<const int> true_labels);

}  // namespace al
