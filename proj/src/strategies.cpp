#include "al/strategies.hpp"

#include "al/error.hpp"
#include "al/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace al {

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::Xpal: return "xpal";
        case StrategyKind::Pal: return "pal";
        case StrategyKind::Eer: return "eer";
        case StrategyKind::Us: return "us";
        case StrategyKind::Qbc: return "qbc";
        case StrategyKind::Rand: return "rand";
        case StrategyKind::GreedyAll: return "greedy-all";
    }
    return "xpal";
}

StrategyKind parse_strategy_kind(std::string_view name) {
    for (auto k : {StrategyKind::Xpal, StrategyKind::Pal, StrategyKind::Eer, StrategyKind::Us, StrategyKind::Qbc,
                   StrategyKind::Rand, StrategyKind::GreedyAll})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown strategy '" + std::string(name) +
                      "' (expected xpal, pal, eer, us, qbc, rand or greedy-all)");
}

std::string StrategyConfig::label() const {
    std::ostringstream os;
    os << to_string(kind);
    if (kind == StrategyKind::Xpal && alpha != kDefaultAlpha) os << "(alpha=" << alpha << ")";
    if (kind == StrategyKind::Eer && epsilon != kDefaultAlpha) os << "(epsilon=" << epsilon << ")";
    if (kind == StrategyKind::Qbc && committee_size != kDefaultCommitteeSize)
        os << "(committee_size=" << committee_size << ")";
    return os.str();
}

void StrategyConfig::validate() const {
    if (kind == StrategyKind::Xpal && !(alpha > 0.0 && std::isfinite(alpha)))
        throw ConfigError("xpal requires alpha > 0");
    if (kind == StrategyKind::Eer && !(epsilon > 0.0 && std::isfinite(epsilon)))
        throw ConfigError("eer requires epsilon > 0");
    if (kind == StrategyKind::Qbc && committee_size < 2) throw ConfigError("qbc requires committee_size >= 2");
}

Candidate Candidate::in_pool(const PoolView& view, std::size_t index) {
    if (index >= view.pool_size()) throw InputError("candidate index outside the pool");
    Candidate c;
    c.pool_row_ = view.kernel->row(index);
    c.self_similarity_ = (*view.kernel)(index, index);
    c.pool_index_ = index;
    if (view.pool) c.features_ = view.pool->row(index);
    auto r = view.frequencies->row(index);
    c.frequency_.assign(r.begin(), r.end());
    return c;
}

Candidate Candidate::external(const PoolView& view, std::span<const double> features) {
    if (!view.pool) throw ConfigError("out-of-pool candidates need pool features");
    const auto& spec = view.kernel->spec();
    Candidate c;
    c.owned_similarity_ = kernel_row(features, *view.pool, spec);
    c.self_similarity_ = evaluate(spec, features, features);
    c.features_ = features;
    c.frequency_.assign(view.n_classes(), 0.0);
    for (const auto& [i, y] : view.state->labeled())
        c.frequency_[static_cast<std::size_t>(y)] += c.owned_similarity_[i];
    return c;
}

namespace {

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Loss-difference contribution of one evaluation instance after class `yc`
// gains weight `w`: sum_y p+(y) (L(y, f+) - L(y, f)).
double point_risk_delta(std::span<const double> row, double row_sum, int f, int yc, double w,
                        const PriorVector& prior, RiskMode mode, std::uint64_t& evaluations) {
    const int f_plus = predict_after_increment(row, f, yc, w);
    const double norm = row_sum + w + prior.total();
    if (mode == RiskMode::DecisionChange) {
        if (f_plus == f) return 0.0;
        ++evaluations;
        const auto fu = static_cast<std::size_t>(f);
        const auto fp = static_cast<std::size_t>(f_plus);
        const double mass_f = row[fu] + (f == yc ? w : 0.0) + prior[fu];
        const double mass_fp = row[fp] + (f_plus == yc ? w : 0.0) + prior[fp];
        return (mass_f - mass_fp) / norm;
    }
    ++evaluations;
    double delta = 0.0;
    for (std::size_t y = 0; y < row.size(); ++y) {
        const double p = (row[y] + (static_cast<int>(y) == yc ? w : 0.0) + prior[y]) / norm;
        const double loss_plus = static_cast<int>(y) != f_plus ? 1.0 : 0.0;
        const double loss = static_cast<int>(y) != f ? 1.0 : 0.0;
        delta += p * (loss_plus - loss);
    }
    return delta;
}

// 1 - p+(f+) at one instance after class `yc` gains weight `w`.
double point_error_after(std::span<const double> row, double row_sum, int f, int yc, double w,
                         const PriorVector& prior) {
    const int f_plus = predict_after_increment(row, f, yc, w);
    const auto fp = static_cast<std::size_t>(f_plus);
    const double norm = row_sum + w + prior.total();
    const double top = row[fp] + (f_plus == yc ? w : 0.0) + prior[fp];
    return (norm - top) / norm;
}

}  // namespace

double xgain(const PoolView& view, const Candidate& candidate, const PriorVector& alpha, RiskMode mode,
             LossCounter* counter) {
    const auto& table = *view.frequencies;
    const std::size_t n = table.rows();
    const std::size_t n_classes = table.n_classes();
    if (alpha.size() != n_classes) throw InputError("xgain: prior has wrong class count");

    const auto& kc = candidate.frequency();
    const auto pc = posterior_predictive(kc, alpha);
    const auto sim = candidate.similarity();
    const bool external = !candidate.pool_index().has_value();
    const double kc_sum = sum_of(kc);
    const int fc = predict(kc);
    const double e_size = static_cast<double>(n + (external ? 1 : 0));

    std::uint64_t evaluations = 0;
    double gain = 0.0;
    for (std::size_t yc = 0; yc < n_classes; ++yc) {
        if (pc[yc] == 0.0) continue;
        const int label = static_cast<int>(yc);
        double delta = 0.0;
        for (std::size_t x = 0; x < n; ++x)
            delta += point_risk_delta(table.row(x), table.row_sum(x), table.prediction(x), label, sim[x], alpha, mode,
                                      evaluations);
        if (external)
            delta += point_risk_delta(kc, kc_sum, fc, label, candidate.self_similarity(), alpha, mode, evaluations);
        gain -= pc[yc] * (delta / e_size);
    }
    if (counter) {
        counter->evaluations += evaluations;
        counter->instances += static_cast<std::uint64_t>(e_size) * n_classes;
    }
    return gain;
}

double eer_score(const PoolView& view, const Candidate& candidate, const PriorVector& epsilon) {
    const auto& table = *view.frequencies;
    const std::size_t n_classes = table.n_classes();
    if (epsilon.size() != n_classes) throw InputError("eer_score: prior has wrong class count");
    const auto& unlabeled = view.state->candidates();
    const bool external = !candidate.pool_index().has_value();
    const std::size_t u_size = unlabeled.size() + (external ? 1 : 0);
    if (u_size == 0) throw InputError("eer_score: empty candidate set");

    const auto& kc = candidate.frequency();
    const auto pc = posterior_predictive(kc, epsilon);
    const auto sim = candidate.similarity();
    const double kc_sum = sum_of(kc);
    const int fc = predict(kc);

    double expected_error = 0.0;
    for (std::size_t yc = 0; yc < n_classes; ++yc) {
        if (pc[yc] == 0.0) continue;
        const int label = static_cast<int>(yc);
        double err = 0.0;
        for (auto x : unlabeled)
            err += point_error_after(table.row(x), table.row_sum(x), table.prediction(x), label, sim[x], epsilon);
        if (external) err += point_error_after(kc, kc_sum, fc, label, candidate.self_similarity(), epsilon);
        expected_error += pc[yc] * (err / static_cast<double>(u_size));
    }
    return -expected_error;
}

double pal_score(const PoolView& view, const Candidate& candidate, double density) {
    if (density < 0.0) throw InputError("pal_score: negative density");
    const std::size_t n_classes = view.n_classes();
    const auto ones = PriorVector::symmetric(n_classes, 1.0);
    const auto& k = candidate.frequency();
    const auto p = posterior_predictive(k, ones);
    const double k_sum = sum_of(k);
    const int f = predict(k);
    const double w = candidate.self_similarity();
    std::uint64_t evaluations = 0;
    double local = 0.0;
    for (std::size_t yc = 0; yc < n_classes; ++yc)
        local += p[yc] * point_risk_delta(k, k_sum, f, static_cast<int>(yc), w, ones, RiskMode::DecisionChange,
                                          evaluations);
    return -density * local;
}

double pal_density(const KernelMatrix& kernel, std::size_t candidate, std::span<const std::size_t> evaluation) {
    if (evaluation.empty()) throw InputError("pal_density: empty evaluation set");
    if (candidate >= kernel.size()) throw InputError("pal_density: index out of range");
    double s = 0.0;
    for (auto x : evaluation) s += kernel(candidate, x);
    return s / static_cast<double>(evaluation.size());
}

double us_score(const PoolView& view, const Candidate& candidate) {
    const auto zero = PriorVector::symmetric(view.n_classes(), 0.0);
    const auto p = posterior_predictive(candidate.frequency(), zero);
    return 1.0 - *std::max_element(p.begin(), p.end());
}

double greedy_all_score(const PoolView& view, const Candidate& candidate) {
    if (view.true_labels.size() != view.pool_size())
        throw ConfigError("greedy-all needs the true labels of the whole pool");
    if (!candidate.pool_index()) throw ConfigError("greedy-all cannot score out-of-pool points (no true label)");
    const auto& table = *view.frequencies;
    const int yc = view.true_labels[*candidate.pool_index()];
    const auto sim = candidate.similarity();
    long errors = 0;
    for (std::size_t x = 0; x < table.rows(); ++x) {
        const int f = table.prediction(x);
        const int f_plus = predict_after_increment(table.row(x), f, yc, sim[x]);
        errors += (f_plus != view.true_labels[x]) ? 1 : 0;
    }
    return -static_cast<double>(errors) / static_cast<double>(table.rows());
}

double committee_disagreement(std::span<const std::vector<double>> member_posteriors) {
    if (member_posteriors.empty()) return 0.0;
    const std::size_t n_classes = member_posteriors.front().size();
    std::vector<double> consensus(n_classes, 0.0);
    for (const auto& p : member_posteriors)
        for (std::size_t y = 0; y < n_classes; ++y) consensus[y] += p[y];
    for (auto& c : consensus) c /= static_cast<double>(member_posteriors.size());
    double total = 0.0;
    for (const auto& p : member_posteriors) {
        double kl = 0.0;
        for (std::size_t y = 0; y < n_classes; ++y)
            if (p[y] > 0.0) kl += p[y] * std::log(p[y] / consensus[y]);
        total += kl;
    }
    return std::max(0.0, total / static_cast<double>(member_posteriors.size()));
}

Committee Committee::build(const PoolView& view, std::size_t members, std::uint64_t seed, std::uint64_t round) {
    if (!view.pool) throw ConfigError("qbc needs the pool features");
    if (members < 2) throw ConfigError("qbc requires committee_size >= 2");
    const Dataset& pool = *view.pool;
    const auto& labeled = view.state->labeled();
    const std::size_t d = pool.n_features;
    const auto subset_size = std::min<std::size_t>(d, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d)))));

    Committee c;
    c.pool_ = view.pool;
    c.n_classes_ = view.n_classes();
    c.empty_training_ = labeled.empty();
    c.members_.resize(members);
    for (std::size_t m = 0; m < members; ++m) {
        auto rng = make_rng({seed, round, static_cast<std::uint64_t>(m), salt::committee});
        Member& member = c.members_[m];
        std::vector<std::size_t> all(d);
        std::iota(all.begin(), all.end(), std::size_t{0});
        std::shuffle(all.begin(), all.end(), rng);
        member.features.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(subset_size));
        std::sort(member.features.begin(), member.features.end());

        member.spec = view.kernel->spec();
        if (member.spec.kind != KernelKind::Cosine)
            member.spec.gamma = mean_bandwidth(std::max<std::size_t>(2, pool.n_rows), subset_size);

        if (!labeled.empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, labeled.size() - 1);
            member.sample.reserve(labeled.size());
            for (std::size_t b = 0; b < labeled.size(); ++b) member.sample.push_back(labeled[pick(rng)]);
        }

        // Frequencies of every pool row under this member; repeated bootstrap
        // draws of the same instance are folded into one weighted term.
        member.pool_frequencies = DenseMatrix(pool.n_rows, c.n_classes_);
        std::vector<std::pair<LabeledPair, double>> weighted;
        for (const auto& s : member.sample) {
            auto it = std::find_if(weighted.begin(), weighted.end(), [&](const auto& e) { return e.first == s; });
            if (it == weighted.end()) weighted.emplace_back(s, 1.0);
            else it->second += 1.0;
        }
        std::vector<double> a(subset_size), b(subset_size);
        for (const auto& [pair, count] : weighted) {
            auto src = pool.row(pair.index);
            for (std::size_t k = 0; k < subset_size; ++k) b[k] = src[member.features[k]];
            for (std::size_t x = 0; x < pool.n_rows; ++x) {
                auto rx = pool.row(x);
                for (std::size_t k = 0; k < subset_size; ++k) a[k] = rx[member.features[k]];
                member.pool_frequencies(x, static_cast<std::size_t>(pair.label)) += count * evaluate(member.spec, a, b);
            }
        }
    }
    return c;
}

std::vector<std::vector<double>> Committee::member_posteriors(const Candidate& candidate) const {
    const auto ones = PriorVector::symmetric(n_classes_, 1.0);
    std::vector<std::vector<double>> out;
    out.reserve(members_.size());
    for (const auto& member : members_) {
        FrequencyVector k(n_classes_, 0.0);
        if (candidate.pool_index()) {
            auto r = member.pool_frequencies.row(*candidate.pool_index());
            k.assign(r.begin(), r.end());
        } else {
            const auto feats = candidate.features();
            std::vector<double> a(member.features.size()), b(member.features.size());
            for (std::size_t j = 0; j < member.features.size(); ++j) a[j] = feats[member.features[j]];
            for (const auto& s : member.sample) {
                auto src = pool_->row(s.index);
                for (std::size_t j = 0; j < member.features.size(); ++j) b[j] = src[member.features[j]];
                k[static_cast<std::size_t>(s.label)] += evaluate(member.spec, a, b);
            }
        }
        out.push_back(posterior_predictive(k, ones));
    }
    return out;
}

double qbc_score(const Committee& committee, const Candidate& candidate) {
    if (committee.empty_training()) return 0.0;
    const auto posteriors = committee.member_posteriors(candidate);
    return committee_disagreement(posteriors);
}

ActivePool::ActivePool(KernelMatrix kernel, std::size_t n_classes, std::vector<int> true_labels,
                       std::optional<Dataset> pool_features)
    : kernel_(std::move(kernel)),
      state_(kernel_.size(), n_classes),
      frequencies_(kernel_.size(), n_classes),
      true_labels_(std::move(true_labels)),
      pool_features_(std::move(pool_features)) {
    if (!true_labels_.empty() && true_labels_.size() != kernel_.size())
        throw InputError("ActivePool: true labels do not match the pool size");
    if (pool_features_ && pool_features_->n_rows != kernel_.size())
        throw InputError("ActivePool: pool features do not match the kernel size");
    const auto e = state_.evaluation_set();
    densities_.resize(kernel_.size());
    for (std::size_t i = 0; i < kernel_.size(); ++i) densities_[i] = pal_density(kernel_, i, e);
}

void ActivePool::acquire(std::size_t index, int label) {
    state_.acquire(index, label);
    frequencies_.add([&](std::size_t x) { return kernel_(x, index); }, label);
}

PoolView ActivePool::view() const {
    PoolView v;
    v.kernel = &kernel_;
    v.state = &state_;
    v.frequencies = &frequencies_;
    v.pool = pool_features_ ? &*pool_features_ : nullptr;
    v.true_labels = true_labels_;
    v.densities = densities_;
    return v;
}

namespace {

struct Snapshot {
    FrequencyTable table;
    PoolView view;
};

Snapshot snapshot(const PoolState& state, const KernelMatrix& kernel) {
    if (state.pool_size() != kernel.size()) throw InputError("pool state does not match the kernel size");
    Snapshot s{FrequencyTable::from_state(state, kernel), {}};
    s.view.kernel = &kernel;
    s.view.state = &state;
    return s;
}

void require_candidate(const PoolState& state, std::size_t candidate) {
    if (candidate >= state.pool_size() || state.is_labeled(candidate))
        throw InputError("index " + std::to_string(candidate) + " is not a candidate");
}

}  // namespace

double xgain(std::size_t candidate, const PoolState& state, const KernelMatrix& kernel, const PriorVector& alpha) {
    require_candidate(state, candidate);
    auto s = snapshot(state, kernel);
    s.view.frequencies = &s.table;
    return xgain(s.view, Candidate::in_pool(s.view, candidate), alpha);
}

double eer_score(std::size_t candidate, const PoolState& state, const KernelMatrix& kernel,
                 const PriorVector& epsilon) {
    require_candidate(state, candidate);
    auto s = snapshot(state, kernel);
    s.view.frequencies = &s.table;
    return eer_score(s.view, Candidate::in_pool(s.view, candidate), epsilon);
}

double pal_score(std::size_t candidate, const PoolState& state, const KernelMatrix& kernel, double density) {
    require_candidate(state, candidate);
    auto s = snapshot(state, kernel);
    s.view.frequencies = &s.table;
    return pal_score(s.view, Candidate::in_pool(s.view, candidate), density);
}

double us_score(std::size_t candidate, const PoolState& state, const KernelMatrix& kernel) {
    require_candidate(state, candidate);
    auto s = snapshot(state, kernel);
    s.view.frequencies = &s.table;
    return us_score(s.view, Candidate::in_pool(s.view, candidate));
}

double greedy_all_score(std::size_t candidate, const PoolState& state, const KernelMatrix& kernel,
                        std::span<const int> true_labels) {
    require_candidate(state, candidate);
    auto s = snapshot(state, kernel);
    s.view.frequencies = &s.table;
    s.view.true_labels = true_labels;
    return greedy_all_score(s.view, Candidate::in_pool(s.view, candidate));
}

}  // namespace al
