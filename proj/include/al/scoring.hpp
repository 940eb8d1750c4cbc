#pragma once

#include "al/rng.hpp"
#include "al/strategies.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace al {

/// Scores per candidate index for every non-random strategy. Candidates are
/// scored independently over the read-only view, one OpenMP iteration each;
/// results do not depend on the thread count.
std::vector<double> score_candidates(const StrategyConfig& config, const PoolView& view,
                                     std::span<const std::size_t> candidates, const Committee* committee = nullptr,
                                     RiskMode mode = RiskMode::DecisionChange, LossCounter* counter = nullptr);

/// Score of a single candidate (pool index or out-of-pool point).
double score_candidate(const StrategyConfig& config, const PoolView& view, const Candidate& candidate,
                       const Committee* committee = nullptr, RiskMode mode = RiskMode::DecisionChange,
                       LossCounter* counter = nullptr);

/// Index of the maximum; ties (within 1e-12 relative) broken uniformly at random.
std::size_t argmax_random_tie(std::span<const double> scores, Rng& rng);

struct SelectOptions {
    bool parallel = true;
    RiskMode mode = RiskMode::DecisionChange;
    LossCounter* counter = nullptr;
};

/// Scores every candidate with the configured criterion and returns the chosen
/// pool index. QBC builds its committee for `round` from config.seed.
std::size_t select(const StrategyConfig& config, const PoolView& view, Rng& rng, std::uint64_t round,
                   const SelectOptions& options = {});

namespace reference {
/// Plain serial loop over the same per-candidate scorers.
std::vector<double> score_candidates_serial(const StrategyConfig& config, const PoolView& view,
                                            std::span<const std::size_t> candidates,
                                            const Committee* committee = nullptr,
                                            RiskMode mode = RiskMode::DecisionChange, LossCounter* counter = nullptr);
}  // namespace reference

}  // namespace al
