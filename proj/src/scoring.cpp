#include "al/scoring.hpp"

#include "al/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace al {

double score_candidate(const StrategyConfig& config, const PoolView& view, const Candidate& candidate,
                       const Committee* committee, RiskMode mode, LossCounter* counter) {
    const std::size_t n_classes = view.n_classes();
    switch (config.kind) {
        case StrategyKind::Xpal:
            return xgain(view, candidate, PriorVector::symmetric(n_classes, config.alpha), mode, counter);
        case StrategyKind::Eer:
            return eer_score(view, candidate, PriorVector::symmetric(n_classes, config.epsilon));
        case StrategyKind::Pal: {
            double density = 0.0;
            if (auto i = candidate.pool_index(); i && !view.densities.empty()) {
                density = view.densities[*i];
            } else {
                const auto sim = candidate.similarity();
                const double s = std::accumulate(sim.begin(), sim.end(), 0.0);
                density = candidate.pool_index() ? s / static_cast<double>(sim.size())
                                                 : (s + candidate.self_similarity()) / static_cast<double>(sim.size() + 1);
            }
            return pal_score(view, candidate, density);
        }
        case StrategyKind::Us: return us_score(view, candidate);
        case StrategyKind::Qbc:
            if (!committee) throw ConfigError("qbc scoring needs a committee");
            return qbc_score(*committee, candidate);
        case StrategyKind::GreedyAll: return greedy_all_score(view, candidate);
        case StrategyKind::Rand: throw ConfigError("rand has no deterministic score; use select");
    }
    return 0.0;
}

std::vector<double> score_candidates(const StrategyConfig& config, const PoolView& view,
                                     std::span<const std::size_t> candidates, const Committee* committee,
                                     RiskMode mode, LossCounter* counter) {
    std::vector<double> scores(candidates.size(), 0.0);
    const auto n = static_cast<std::ptrdiff_t>(candidates.size());
    std::uint64_t evaluations = 0;
    std::uint64_t instances = 0;
    // Exceptions may not escape an OpenMP region; validate the inputs that can throw up front.
    config.validate();
    if (config.kind == StrategyKind::Rand) throw ConfigError("rand has no deterministic score; use select");
    if (config.kind == StrategyKind::Qbc && !committee) throw ConfigError("qbc scoring needs a committee");
    if (config.kind == StrategyKind::GreedyAll && view.true_labels.size() != view.pool_size())
        throw ConfigError("greedy-all needs the true labels of the whole pool");
    for (auto c : candidates)
        if (c >= view.pool_size()) throw InputError("candidate index outside the pool");

#pragma omp parallel for schedule(dynamic, 4) reduction(+ : evaluations, instances)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        LossCounter local;
        const auto cand = Candidate::in_pool(view, candidates[static_cast<std::size_t>(i)]);
        scores[static_cast<std::size_t>(i)] = score_candidate(config, view, cand, committee, mode, &local);
        evaluations += local.evaluations;
        instances += local.instances;
    }
    if (counter) {
        counter->evaluations += evaluations;
        counter->instances += instances;
    }
    return scores;
}

std::size_t argmax_random_tie(std::span<const double> scores, Rng& rng) {
    if (scores.empty()) throw InputError("argmax over an empty score list");
    const double best = *std::max_element(scores.begin(), scores.end());
    const double tol = 1e-12 * std::abs(best);
    std::vector<std::size_t> ties;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] >= best - tol) ties.push_back(i);
    if (ties.size() == 1) return ties.front();
    std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
    return ties[pick(rng)];
}

std::size_t select(const StrategyConfig& config, const PoolView& view, Rng& rng, std::uint64_t round,
                   const SelectOptions& options) {
    const auto& candidates = view.state->candidates();
    if (candidates.empty()) throw InputError("select: no candidates left");
    config.validate();

    std::vector<double> scores;
    if (config.kind == StrategyKind::Rand) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        scores.resize(candidates.size());
        for (auto& s : scores) s = u(rng);
    } else {
        std::optional<Committee> committee;
        if (config.kind == StrategyKind::Qbc)
            committee = Committee::build(view, config.committee_size, config.seed, round);
        const Committee* cp = committee ? &*committee : nullptr;
        scores = options.parallel
                     ? score_candidates(config, view, candidates, cp, options.mode, options.counter)
                     : reference::score_candidates_serial(config, view, candidates, cp, options.mode, options.counter);
    }
    return candidates[argmax_random_tie(scores, rng)];
}

namespace reference {

std::vector<double> score_candidates_serial(const StrategyConfig& config, const PoolView& view,
                                            std::span<const std::size_t> candidates, const Committee* committee,
                                            RiskMode mode, LossCounter* counter) {
    config.validate();
    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (auto c : candidates)
        scores.push_back(score_candidate(config, view, Candidate::in_pool(view, c), committee, mode, counter));
    return scores;
}

}  // namespace reference

}  // namespace al
