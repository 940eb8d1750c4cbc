#pragma once

#include "al/kernel.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace al {

/// Per-class similarity-weighted label counts around one instance.
using FrequencyVector = std::vector<double>;

/// Dirichlet parameter, one positive entry per class. Zero entries are only
/// produced internally for uncertainty sampling's unsmoothed posterior.
class PriorVector {
public:
    PriorVector() = default;
    explicit PriorVector(std::vector<double> alpha);
    static PriorVector symmetric(std::size_t n_classes, double value);

    std::span<const double> values() const noexcept { return alpha_; }
    std::size_t size() const noexcept { return alpha_.size(); }
    double operator[](std::size_t y) const noexcept { return alpha_[y]; }
    double total() const noexcept { return total_; }
    bool strictly_positive() const noexcept;

private:
    std::vector<double> alpha_;
    double total_ = 0.0;
};

struct LabeledPair {
    std::size_t index = 0;
    int label = 0;

    friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

/// Partition of the training pool into labeled pairs L and candidates U.
/// The evaluation set E is always the whole pool (L and U together).
class PoolState {
public:
    PoolState() = default;
    PoolState(std::size_t pool_size, std::size_t n_classes);
    PoolState(std::size_t pool_size, std::size_t n_classes, std::vector<LabeledPair> labeled);

    std::size_t pool_size() const noexcept { return is_labeled_.size(); }
    std::size_t n_classes() const noexcept { return n_classes_; }
    const std::vector<LabeledPair>& labeled() const noexcept { return labeled_; }
    /// Sorted ascending.
    const std::vector<std::size_t>& candidates() const noexcept { return candidates_; }
    bool is_labeled(std::size_t i) const { return is_labeled_.at(i); }

    void acquire(std::size_t index, int label);
    /// Hypothetical L+ = L with one extra pair; this state is untouched.
    PoolState with(std::size_t index, int label) const;
    /// True when `other` equals this state plus exactly one acquired pair.
    bool extends(const PoolState& base) const;

    std::vector<std::size_t> evaluation_set() const;

    friend bool operator==(const PoolState&, const PoolState&) = default;

private:
    std::size_t n_classes_ = 0;
    std::vector<LabeledPair> labeled_;
    std::vector<std::size_t> candidates_;
    std::vector<bool> is_labeled_;
};

FrequencyVector kernel_frequency(const PoolState& state, const KernelMatrix& kernel, std::size_t x_index);

/// Most frequent class; ties go to the lowest class index.
int predict(std::span<const double> freq);

/// Decision after adding `weight` to class `label`, given that `current` is
/// predict(freq). O(1) for non-negative weights.
int predict_after_increment(std::span<const double> freq, int current, int label, double weight);

/// (freq + alpha) / |freq + alpha|_1, uniform when the norm is zero.
std::vector<double> posterior_predictive(std::span<const double> freq, const PriorVector& prior);

/// Mean over E of the expected zero-one loss of the classifier trained on
/// `classifier_state`, with class probabilities smoothed from `probability_state`.
double smoothed_empirical_risk(const PoolState& probability_state, const PoolState& classifier_state,
                               const KernelMatrix& kernel, const PriorVector& prior,
                               std::span<const std::size_t> evaluation);

/// Counts zero-one loss evaluations, for the decision-change instrumentation.
struct LossCounter {
    std::uint64_t evaluations = 0;
    std::uint64_t instances = 0;
};

/// R(f^{L+}, L+) - R(f^L, L+) summed only where the decision changes.
double risk_difference(const PoolState& state_plus, const PoolState& state, const KernelMatrix& kernel,
                       const PriorVector& prior, std::span<const std::size_t> evaluation,
                       LossCounter* counter = nullptr);

/// Incrementally maintained kernel frequencies (and current decisions) for a
/// fixed set of instances against the growing labeled set.
class FrequencyTable {
public:
    FrequencyTable() = default;
    FrequencyTable(std::size_t rows, std::size_t n_classes);
    /// Fresh table for `state` over the whole pool.
    static FrequencyTable from_state(const PoolState& state, const KernelMatrix& kernel);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t n_classes() const noexcept { return n_classes_; }
    std::span<const double> row(std::size_t x) const noexcept { return {counts_.data() + x * n_classes_, n_classes_}; }
    double row_sum(std::size_t x) const noexcept { return sums_[x]; }
    int prediction(std::size_t x) const noexcept { return predictions_[x]; }

    /// Adds one labeled instance whose similarity to row x is similarity(x).
    template <class Similarity>
    void add(Similarity&& similarity, int label) {
        const auto y = static_cast<std::size_t>(label);
        for (std::size_t x = 0; x < rows_; ++x) {
            const double w = similarity(x);
            double* r = counts_.data() + x * n_classes_;
            r[y] += w;
            sums_[x] += w;
            predictions_[x] = predict({r, n_classes_});
        }
    }

private:
    std::size_t rows_ = 0;
    std::size_t n_classes_ = 0;
    std::vector<double> counts_;
    std::vector<double> sums_;
    std::vector<int> predictions_;
};

}  // namespace al
