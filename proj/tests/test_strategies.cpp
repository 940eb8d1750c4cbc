#include "al/error.hpp"
#include "al/scoring.hpp"
#include "al/strategies.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace al;
using testing_support::identity;
using testing_support::to_kernel;
using testing_support::to_state;

namespace {

struct RandomPool {
    oracle::Matrix m;
    std::vector<oracle::Pair> labeled;
    std::size_t n = 0, c = 0, candidate = 0;
};

RandomPool random_pool(std::mt19937_64& rng, std::size_t max_n, std::size_t c) {
    RandomPool p;
    p.c = c;
    p.n = 2 + rng() % (max_n - 1);
    p.m = oracle::random_kernel(p.n, rng, 0.3 + 0.1 * static_cast<double>(rng() % 10));
    p.labeled = testing_support::random_labeled(p.n, c, rng, p.n - 1);
    std::vector<bool> used(p.n, false);
    for (auto& l : p.labeled) used[l.i] = true;
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < p.n; ++i)
        if (!used[i]) free.push_back(i);
    p.candidate = free[rng() % free.size()];
    return p;
}

Dataset points_dataset(const std::vector<std::array<double, 2>>& pts, std::size_t classes) {
    Dataset d;
    d.n_rows = pts.size();
    d.n_features = 2;
    d.n_classes = classes;
    for (const auto& p : pts) d.features.insert(d.features.end(), p.begin(), p.end());
    d.labels.assign(pts.size(), 0);
    for (std::size_t c = 0; c < classes; ++c) d.class_names.push_back(std::to_string(c));
    return d;
}

}  // namespace

TEST(Fixtures, TwoPointXgainEerPal) {
    const auto k = to_kernel(identity(2));
    const PoolState empty(2, 2);
    const auto prior = PriorVector::symmetric(2, 1e-3);
    EXPECT_NEAR(xgain(0, empty, k, prior), 0.25 / 1.002, 1e-15);
    EXPECT_NEAR(xgain(0, empty, k, prior), 0.2495, 1e-6);
    EXPECT_NEAR(xgain(1, empty, k, prior), xgain(0, empty, k, prior), 1e-15);
    EXPECT_NEAR(eer_score(0, empty, k, prior), -0.250499, 1e-6);
    EXPECT_NEAR(pal_score(0, empty, k, 1.0), 1.0 / 6.0, 1e-15);
}

TEST(Us, Cases) {
    oracle::Matrix m = identity(3);
    const auto k = to_kernel(m);
    EXPECT_DOUBLE_EQ(us_score(0, PoolState(3, 2), k), 0.5);
    // k = (1, 1) at x0 through two labeled neighbours at similarity 1
    m[0][1] = m[1][0] = 1.0;
    m[0][2] = m[2][0] = 1.0;
    m[1][2] = m[2][1] = 1.0;
    EXPECT_DOUBLE_EQ(us_score(0, PoolState(3, 2, {{1, 0}, {2, 1}}), to_kernel(m)), 0.5);
    oracle::Matrix w = identity(3);
    w[0][1] = w[1][0] = 3.0 / 4.0;
    w[0][2] = w[2][0] = 1.0 / 4.0;
    EXPECT_DOUBLE_EQ(us_score(0, PoolState(3, 2, {{1, 0}, {2, 1}}), to_kernel(w)), 0.25);
}

TEST(OracleEquivalence, XgainEerUsGreedyOnRandomPools) {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 150; ++t) {
        const std::size_t c = 2 + static_cast<std::size_t>(t % 3);
        const auto p = random_pool(rng, 10, c);
        const auto state = to_state(p.n, c, p.labeled);
        const auto k = to_kernel(p.m);
        EXPECT_NEAR(xgain(p.candidate, state, k, PriorVector::symmetric(c, 1e-3)),
                    oracle::xgain(p.m, p.labeled, p.candidate, 1e-3, c), 1e-12);
        EXPECT_NEAR(eer_score(p.candidate, state, k, PriorVector::symmetric(c, 1e-3)),
                    oracle::eer_score(p.m, p.labeled, p.candidate, 1e-3, c), 1e-12);
        EXPECT_NEAR(us_score(p.candidate, state, k), oracle::us_score(oracle::freq(p.m, p.labeled, p.candidate, c)),
                    1e-12);
        std::vector<int> truth(p.n);
        for (auto& y : truth) y = static_cast<int>(rng() % c);
        EXPECT_NEAR(greedy_all_score(p.candidate, state, k, truth),
                    oracle::greedy_all(p.m, p.labeled, p.candidate, truth, c), 1e-15);
    }
}

TEST(OracleEquivalence, PalMatchesGammaProduct) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    std::uniform_int_distribution<int> whole(0, 3);
    for (int t = 0; t < 300; ++t) {
        const std::size_t c = 2 + static_cast<std::size_t>(t % 3);
        std::vector<double> kvec(c);
        for (auto& v : kvec) v = t % 3 == 0 ? whole(rng) : u(rng);
        const double density = u(rng);
        // Realise kvec as the frequency of x0 in a pool where x(1+y) carries class y.
        oracle::Matrix m = identity(c + 1);
        for (std::size_t y = 0; y < c; ++y) m[0][y + 1] = m[y + 1][0] = kvec[y];
        std::vector<LabeledPair> l;
        for (std::size_t y = 0; y < c; ++y) l.push_back({y + 1, static_cast<int>(y)});
        const PoolState state(c + 1, c, l);
        EXPECT_NEAR(pal_score(0, state, to_kernel(m), density), oracle::pal_gamma_product(kvec, density), 1e-9);
    }
}

TEST(Xgain, ZeroWhenNoDecisionCanChange) {
    // All three points coincide; two class-0 labels outvote any single label.
    const oracle::Matrix m(3, std::vector<double>(3, 1.0));
    const PoolState state(3, 2, {{0, 0}, {1, 0}});
    EXPECT_NEAR(xgain(2, state, to_kernel(m), PriorVector::symmetric(2, 1e-3)), 0.0, 1e-15);
}

TEST(Xgain, InvariantToDuplicatingThePool) {
    std::mt19937_64 rng(41);
    const auto m = oracle::random_kernel(5, rng);
    oracle::Matrix big(10, std::vector<double>(10));
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j) big[i][j] = m[i % 5][j % 5];
    for (std::size_t c = 0; c < 5; ++c)
        EXPECT_NEAR(xgain(c, PoolState(5, 2), to_kernel(m), PriorVector::symmetric(2, 1e-3)),
                    xgain(c, PoolState(10, 2), to_kernel(big), PriorVector::symmetric(2, 1e-3)), 1e-14);
}

TEST(Xgain, FullSumModeAgreesAndCountsMore) {
    std::mt19937_64 rng(13);
    const auto m = oracle::random_kernel(12, rng);
    ActivePool pool(to_kernel(m), 3);
    pool.acquire(2, 1);
    pool.acquire(7, 0);
    const auto view = pool.view();
    const auto prior = PriorVector::symmetric(3, 1e-3);
    for (std::size_t c : pool.state().candidates()) {
        LossCounter fast, full;
        const auto cand = Candidate::in_pool(view, c);
        EXPECT_NEAR(xgain(view, cand, prior, RiskMode::DecisionChange, &fast),
                    xgain(view, cand, prior, RiskMode::FullSum, &full), 1e-12);
        EXPECT_EQ(full.evaluations, 12u * 3u);
        EXPECT_LE(fast.evaluations, full.evaluations);
        EXPECT_EQ(fast.instances, full.instances);
    }
}

TEST(Eer, EmptyCandidateSet) {
    const auto k = to_kernel(identity(2));
    const PoolState full(2, 2, {{0, 0}, {1, 1}});
    EXPECT_THROW(eer_score(0, full, k, PriorVector::symmetric(2, 1e-3)), InputError);
}

TEST(PalDensity, Cases) {
    const auto k = to_kernel(identity(4));
    EXPECT_DOUBLE_EQ(pal_density(k, 2, std::vector<std::size_t>{2}), 1.0);
    EXPECT_DOUBLE_EQ(pal_density(k, 2, std::vector<std::size_t>{0, 1, 2, 3}), 0.25);
}

TEST(GreedyAll, NeedsTrueLabels) {
    ActivePool pool(to_kernel(identity(3)), 2);
    EXPECT_THROW(greedy_all_score(pool.view(), Candidate::in_pool(pool.view(), 0)), ConfigError);
    const std::vector<int> truth{0, 1, 0};
    EXPECT_NEAR(greedy_all_score(1, PoolState(3, 2, {{0, 0}, {2, 0}}), to_kernel(identity(3)), truth), 0.0, 0.0);
}

TEST(Committee, DisagreementHandValues) {
    const std::vector<std::vector<double>> same{{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}};
    EXPECT_NEAR(committee_disagreement(same), 0.0, 1e-15);
    const double d = 1.0 / 3.0;  // add-one smoothing of (1, 0) over two classes
    const std::vector<std::vector<double>> split{{1 - d, d}, {d, 1 - d}};
    const double kl = (1 - d) * std::log(2 * (1 - d)) + d * std::log(2 * d);
    EXPECT_NEAR(committee_disagreement(split), kl, 1e-15);
}

TEST(Committee, DeterministicAndNonNegative) {
    const auto data = synthetic_blobs(40, 3, 1);
    const KernelSpec spec = default_kernel(FeatureKind::Numeric, 40, 2);
    ActivePool pool(build_kernel_matrix(data, spec), 3, data.labels, data);
    for (std::size_t i : {0u, 1u, 2u, 5u, 9u}) pool.acquire(i, data.labels[i]);
    const auto view = pool.view();
    const auto a = Committee::build(view, 25, 77, 3);
    const auto b = Committee::build(view, 25, 77, 3);
    for (std::size_t m = 0; m < 25; ++m) {
        EXPECT_EQ(a.feature_subset(m), b.feature_subset(m));
        EXPECT_EQ(a.feature_subset(m).size(), 2u);  // ceil(sqrt(2))
    }
    for (std::size_t c : pool.state().candidates()) {
        const auto cand = Candidate::in_pool(view, c);
        const double s = qbc_score(a, cand);
        EXPECT_EQ(s, qbc_score(b, cand));
        EXPECT_GE(s, 0.0);
        // pool rows and the same point scored from outside agree
        EXPECT_NEAR(s, qbc_score(a, Candidate::external(view, data.row(c))), 1e-12);
    }
}

TEST(Committee, EmptyLabeledSetScoresZero) {
    const auto data = synthetic_blobs(10, 2, 1);
    ActivePool pool(build_kernel_matrix(data, default_kernel(FeatureKind::Numeric, 10, 2)), 2, data.labels, data);
    const auto c = Committee::build(pool.view(), 5, 1, 0);
    EXPECT_EQ(qbc_score(c, Candidate::in_pool(pool.view(), 3)), 0.0);
}

TEST(External, XgainAndEerMatchAugmentedPoolOracle) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 6, c = 2 + static_cast<std::size_t>(t % 2);
        std::vector<std::array<double, 2>> pts(n + 1);
        for (auto& p : pts) p = {g(rng), g(rng)};
        const KernelSpec spec{KernelKind::Rbf, 0.8};
        std::vector<std::array<double, 2>> pool_pts(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(n));
        const Dataset pool_data = points_dataset(pool_pts, c);
        ActivePool pool(build_kernel_matrix(pool_data, spec), c, {}, pool_data);
        const auto labeled = testing_support::random_labeled(n, c, rng, n - 1);
        for (const auto& l : labeled) pool.acquire(l.i, l.y);

        const Dataset all = points_dataset(pts, c);
        const auto big = build_kernel_matrix(all, spec);
        oracle::Matrix m(n + 1, std::vector<double>(n + 1));
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 0; j <= n; ++j) m[i][j] = big(i, j);

        const std::vector<double> point{pts[n][0], pts[n][1]};
        const auto cand = Candidate::external(pool.view(), point);
        EXPECT_NEAR(xgain(pool.view(), cand, PriorVector::symmetric(c, 1e-3)),
                    oracle::xgain(m, labeled, n, 1e-3, c), 1e-12);
        EXPECT_NEAR(eer_score(pool.view(), cand, PriorVector::symmetric(c, 1e-3)),
                    oracle::eer_score(m, labeled, n, 1e-3, c), 1e-12);
        EXPECT_NEAR(us_score(pool.view(), cand), oracle::us_score(oracle::freq(m, labeled, n, c)), 1e-12);
    }
}

TEST(Select, SingleCandidateAndRandDeterminism) {
    ActivePool pool(to_kernel(identity(3)), 2);
    pool.acquire(0, 0);
    pool.acquire(2, 1);
    Rng rng(1);
    for (auto kind : {StrategyKind::Xpal, StrategyKind::Eer, StrategyKind::Pal, StrategyKind::Us, StrategyKind::Rand})
        EXPECT_EQ(select(StrategyConfig{kind}, pool.view(), rng, 0), 1u);

    ActivePool wide(to_kernel(identity(20)), 2);
    auto picks = [&](std::uint64_t seed) {
        Rng r(seed);
        std::vector<std::size_t> out;
        for (int i = 0; i < 10; ++i) out.push_back(select(StrategyConfig{StrategyKind::Rand}, wide.view(), r, 0));
        return out;
    };
    EXPECT_EQ(picks(3), picks(3));
    EXPECT_NE(picks(3), picks(4));
}

TEST(Select, TwoPointXpalTieBrokenRandomly) {
    ActivePool pool(to_kernel(identity(2)), 2);
    std::set<std::size_t> seen;
    for (std::uint64_t s = 0; s < 64; ++s) {
        Rng rng(s);
        seen.insert(select(StrategyConfig{StrategyKind::Xpal}, pool.view(), rng, 0));
    }
    EXPECT_EQ(seen, (std::set<std::size_t>{0, 1}));
}

TEST(Select, PositiveScalingKeepsChoice) {
    std::mt19937_64 gen(2);
    std::uniform_int_distribution<int> small(0, 4);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> s(12), scaled(12);
        for (std::size_t i = 0; i < 12; ++i) {
            s[i] = 0.1 * small(gen);
            scaled[i] = 3.7 * s[i];
        }
        Rng a(static_cast<std::uint64_t>(t)), b(static_cast<std::uint64_t>(t));
        EXPECT_EQ(argmax_random_tie(s, a), argmax_random_tie(scaled, b));
    }
}

TEST(Select, ScorersDoNotMutateState) {
    const auto data = synthetic_blobs(30, 3, 4);
    ActivePool pool(build_kernel_matrix(data, default_kernel(FeatureKind::Numeric, 30, 2)), 3, data.labels, data);
    pool.acquire(0, data.labels[0]);
    pool.acquire(4, data.labels[4]);
    const PoolState before = pool.state();
    const auto freq_before = pool.frequencies().row(7)[0];
    Rng rng(9);
    for (auto kind : {StrategyKind::Xpal, StrategyKind::Pal, StrategyKind::Eer, StrategyKind::Us, StrategyKind::Qbc,
                      StrategyKind::GreedyAll, StrategyKind::Rand})
        select(StrategyConfig{kind}, pool.view(), rng, 0);
    EXPECT_EQ(pool.state(), before);
    EXPECT_EQ(pool.frequencies().row(7)[0], freq_before);
}

TEST(Select, EmptyCandidates) {
    ActivePool pool(to_kernel(identity(1)), 2);
    pool.acquire(0, 1);
    Rng rng(0);
    EXPECT_THROW(select(StrategyConfig{}, pool.view(), rng, 0), InputError);
}

TEST(StrategyConfigTest, ParseLabelValidate) {
    EXPECT_EQ(parse_strategy_kind("greedy-all"), StrategyKind::GreedyAll);
    EXPECT_THROW(parse_strategy_kind("foo"), ConfigError);
    StrategyConfig x;
    EXPECT_EQ(x.label(), "xpal");
    x.alpha = 0.01;
    EXPECT_EQ(x.label(), "xpal(alpha=0.01)");
    x.alpha = 0.0;
    EXPECT_THROW(x.validate(), ConfigError);
    StrategyConfig q{StrategyKind::Qbc};
    q.committee_size = 1;
    EXPECT_THROW(q.validate(), ConfigError);
}
