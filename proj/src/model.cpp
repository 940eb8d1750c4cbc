#include "al/model.hpp"

#include "al/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace al {

PriorVector::PriorVector(std::vector<double> alpha) : alpha_(std::move(alpha)) {
    for (double a : alpha_) {
        if (!(a >= 0.0) || !std::isfinite(a)) throw InputError("prior entries must be finite and non-negative");
        total_ += a;
    }
}

PriorVector PriorVector::symmetric(std::size_t n_classes, double value) {
    return PriorVector(std::vector<double>(n_classes, value));
}

bool PriorVector::strictly_positive() const noexcept {
    return std::all_of(alpha_.begin(), alpha_.end(), [](double a) { return a > 0.0; });
}

PoolState::PoolState(std::size_t pool_size, std::size_t n_classes)
    : n_classes_(n_classes), is_labeled_(pool_size, false) {
    candidates_.resize(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) candidates_[i] = i;
}

PoolState::PoolState(std::size_t pool_size, std::size_t n_classes, std::vector<LabeledPair> labeled)
    : PoolState(pool_size, n_classes) {
    for (const auto& p : labeled) acquire(p.index, p.label);
}

void PoolState::acquire(std::size_t index, int label) {
    if (index >= pool_size()) throw InputError("acquire: index " + std::to_string(index) + " outside the pool");
    if (label < 0 || static_cast<std::size_t>(label) >= n_classes_) throw InputError("acquire: label out of range");
    if (is_labeled_[index]) throw InputError("acquire: index " + std::to_string(index) + " already labeled");
    is_labeled_[index] = true;
    labeled_.push_back({index, label});
    candidates_.erase(std::lower_bound(candidates_.begin(), candidates_.end(), index));
}

PoolState PoolState::with(std::size_t index, int label) const {
    PoolState copy = *this;
    copy.acquire(index, label);
    return copy;
}

bool PoolState::extends(const PoolState& base) const {
    if (pool_size() != base.pool_size() || n_classes_ != base.n_classes_) return false;
    if (labeled_.size() != base.labeled_.size() + 1) return false;
    return std::equal(base.labeled_.begin(), base.labeled_.end(), labeled_.begin());
}

std::vector<std::size_t> PoolState::evaluation_set() const {
    std::vector<std::size_t> e(pool_size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = i;
    return e;
}

FrequencyVector kernel_frequency(const PoolState& state, const KernelMatrix& kernel, std::size_t x_index) {
    if (x_index >= kernel.size()) throw InputError("kernel_frequency: index out of range");
    FrequencyVector k(state.n_classes(), 0.0);
    for (const auto& [i, y] : state.labeled()) k[static_cast<std::size_t>(y)] += kernel(x_index, i);
    return k;
}

int predict(std::span<const double> freq) {
    int best = 0;
    for (std::size_t y = 1; y < freq.size(); ++y)
        if (freq[y] > freq[static_cast<std::size_t>(best)]) best = static_cast<int>(y);
    return best;
}

int predict_after_increment(std::span<const double> freq, int current, int label, double weight) {
    if (weight < 0.0) {
        // A negative (cosine) similarity can demote the current winner; recompute.
        double best_value = 0.0;
        int best = -1;
        for (std::size_t y = 0; y < freq.size(); ++y) {
            const double v = freq[y] + (static_cast<int>(y) == label ? weight : 0.0);
            if (best < 0 || v > best_value) {
                best = static_cast<int>(y);
                best_value = v;
            }
        }
        return best;
    }
    if (label == current) return current;
    const double raised = freq[static_cast<std::size_t>(label)] + weight;
    const double top = freq[static_cast<std::size_t>(current)];
    if (raised > top) return label;
    if (raised == top) return std::min(label, current);
    return current;
}

std::vector<double> posterior_predictive(std::span<const double> freq, const PriorVector& prior) {
    if (freq.size() != prior.size()) throw InputError("posterior_predictive: prior has wrong class count");
    std::vector<double> p(freq.size());
    double norm = 0.0;
    for (std::size_t y = 0; y < freq.size(); ++y) {
        if (freq[y] < 0.0) throw InputError("posterior_predictive: negative frequency");
        p[y] = freq[y] + prior[y];
        norm += p[y];
    }
    if (norm == 0.0) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
        return p;
    }
    for (auto& v : p) v /= norm;
    return p;
}

double smoothed_empirical_risk(const PoolState& probability_state, const PoolState& classifier_state,
                               const KernelMatrix& kernel, const PriorVector& prior,
                               std::span<const std::size_t> evaluation) {
    if (evaluation.empty()) throw InputError("smoothed_empirical_risk: empty evaluation set");
    double total = 0.0;
    for (auto x : evaluation) {
        const auto p = posterior_predictive(kernel_frequency(probability_state, kernel, x), prior);
        const auto f = static_cast<std::size_t>(predict(kernel_frequency(classifier_state, kernel, x)));
        // zero-one loss: all mass except the predicted class
        for (std::size_t y = 0; y < p.size(); ++y)
            if (y != f) total += p[y];
    }
    return total / static_cast<double>(evaluation.size());
}

double risk_difference(const PoolState& state_plus, const PoolState& state, const KernelMatrix& kernel,
                       const PriorVector& prior, std::span<const std::size_t> evaluation, LossCounter* counter) {
    if (!state_plus.extends(state)) throw InputError("risk_difference: state_plus must extend state by one pair");
    if (evaluation.empty()) throw InputError("risk_difference: empty evaluation set");
    const auto [c, yc] = state_plus.labeled().back();
    double total = 0.0;
    std::uint64_t evaluations = 0;
    for (auto x : evaluation) {
        const auto k = kernel_frequency(state, kernel, x);
        const int f = predict(k);
        const double w = kernel(x, c);
        const int f_plus = predict_after_increment(k, f, yc, w);
        if (f_plus == f) continue;
        auto k_plus = k;
        k_plus[static_cast<std::size_t>(yc)] += w;
        const auto p = posterior_predictive(k_plus, prior);
        // sum_y p(y) (L(y, f+) - L(y, f)) reduces to p(f) - p(f+)
        total += p[static_cast<std::size_t>(f)] - p[static_cast<std::size_t>(f_plus)];
        ++evaluations;
    }
    if (counter) {
        counter->evaluations += evaluations;
        counter->instances += evaluation.size();
    }
    return total / static_cast<double>(evaluation.size());
}

FrequencyTable::FrequencyTable(std::size_t rows, std::size_t n_classes)
    : rows_(rows), n_classes_(n_classes), counts_(rows * n_classes, 0.0), sums_(rows, 0.0), predictions_(rows, 0) {}

FrequencyTable FrequencyTable::from_state(const PoolState& state, const KernelMatrix& kernel) {
    FrequencyTable t(state.pool_size(), state.n_classes());
    for (const auto& [i, y] : state.labeled()) t.add([&](std::size_t x) { return kernel(x, i); }, y);
    return t;
}

}  // namespace al
