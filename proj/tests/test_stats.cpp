#include "al/error.hpp"
#include "al/harness.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace al;

TEST(Aulc, Basics) {
    EXPECT_DOUBLE_EQ(aulc(std::vector<double>{0.5, 0.5, 0.5}), 0.5);
    EXPECT_DOUBLE_EQ(aulc(std::vector<double>{1.0, 0.0}), 0.5);
    EXPECT_THROW(aulc(std::vector<double>{}), InputError);
    // pointwise domination
    EXPECT_GT(aulc(std::vector<double>{0.3, 0.2, 0.11}), aulc(std::vector<double>{0.3, 0.2, 0.1}));
}

TEST(MeanRanks, Cases) {
    EXPECT_EQ(mean_ranks({{0.1, 0.2}, {0.3, 0.4}}), (std::vector<double>{1.0, 2.0}));
    EXPECT_EQ(mean_ranks({{0.2, 0.2, 0.2}, {0.1, 0.1, 0.1}}), (std::vector<double>{2.0, 2.0, 2.0}));
    // hand ranking: rows (1,2,3) (2.5,2.5,1) (1,3,2) (3,1,2)
    const std::vector<std::vector<double>> table{{0.1, 0.2, 0.3}, {0.5, 0.5, 0.4}, {0.0, 0.9, 0.5}, {0.7, 0.1, 0.2}};
    const auto r = mean_ranks(table);
    EXPECT_DOUBLE_EQ(r[0], (1 + 2.5 + 1 + 3) / 4.0);
    EXPECT_DOUBLE_EQ(r[1], (2 + 2.5 + 3 + 1) / 4.0);
    EXPECT_DOUBLE_EQ(r[2], (3 + 1 + 2 + 2) / 4.0);
    EXPECT_THROW(mean_ranks({{0.1, 0.2}, {0.3}}), InputError);
    EXPECT_THROW(mean_ranks({}), InputError);
}

TEST(Wilcoxon, FiveAllPositive) {
    const std::vector<double> a{1, 2, 3, 4, 5}, b{0, 0, 0, 0, 0};
    const auto w = wilcoxon_signed_rank(a, b);
    EXPECT_TRUE(w.exact);
    EXPECT_EQ(w.statistic, 0.0);
    EXPECT_DOUBLE_EQ(w.p_value, 0.0625);
    EXPECT_DOUBLE_EQ(oracle::wilcoxon_enumerated(a, b), 0.0625);
}

TEST(Wilcoxon, DegenerateAndTooSmall) {
    const std::vector<double> a{1, 2, 3, 4, 5, 6};
    const auto w = wilcoxon_signed_rank(a, a);
    EXPECT_TRUE(w.degenerate);
    EXPECT_EQ(w.p_value, 1.0);
    const std::vector<double> b{1, 2, 3, 4.5, 5, 6};
    EXPECT_THROW(wilcoxon_signed_rank(a, b), InputError);
    EXPECT_THROW(wilcoxon_signed_rank(a, std::vector<double>{1.0}), InputError);
}

TEST(Wilcoxon, ExactMatchesEnumerationWithTies) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> v(-4, 4);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 5 + static_cast<std::size_t>(t % 12);
        std::vector<double> a(n), b(n, 0.0);
        for (auto& x : a) x = v(rng);  // integer values force ties and zeros
        std::size_t nonzero = 0;
        for (double x : a) nonzero += x != 0.0;
        if (nonzero < kWilcoxonMinN) continue;
        EXPECT_NEAR(wilcoxon_exact(a, b).p_value, oracle::wilcoxon_enumerated(a, b), 1e-12);
    }
}

TEST(Wilcoxon, ExactAndNormalAgreeAtTwenty) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        std::vector<double> a(20), b(20);
        const double shift = 0.1 * (t % 8);
        for (std::size_t i = 0; i < 20; ++i) {
            a[i] = g(rng) + shift;
            b[i] = g(rng);
        }
        worst = std::max(worst, std::abs(wilcoxon_exact(a, b).p_value - wilcoxon_normal(a, b).p_value));
    }
    EXPECT_LE(worst, 0.01);
}

TEST(Wilcoxon, BranchSelection) {
    std::vector<double> a(30), b(30, 0.0);
    for (std::size_t i = 0; i < 30; ++i) a[i] = static_cast<double>(i + 1) * (i % 3 ? 1.0 : -1.0);
    EXPECT_FALSE(wilcoxon_signed_rank(a, b).exact);
    a.resize(20);
    b.resize(20);
    EXPECT_TRUE(wilcoxon_signed_rank(a, b).exact);
}

TEST(Stars, Thresholds) {
    EXPECT_EQ(significance_stars(0.0005, 1), "***");
    EXPECT_EQ(significance_stars(0.005, 1), "**");
    EXPECT_EQ(significance_stars(0.03, 1), "*");
    EXPECT_EQ(significance_stars(0.2, 1), "");
    EXPECT_EQ(significance_stars(0.03, -1), "†");
    EXPECT_EQ(significance_stars(0.0001, -1), "†††");
    EXPECT_EQ(significance_stars(0.0001, 0), "");
}

namespace {
std::vector<LearningCurveRecord> synthetic_records() {
    std::vector<LearningCurveRecord> out;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 0.05);
    for (const std::string ds : {"a", "b"})
        for (const auto& [s, base] : std::vector<std::pair<std::string, double>>{{"xpal", 0.1}, {"rand", 0.2}, {"us", 0.1}})
            for (std::uint64_t r = 0; r < 12; ++r) out.push_back({ds, s, r, 0, {base + u(rng), base + u(rng)}});
    return out;
}
}  // namespace

TEST(Summary, RanksTestsAndCsv) {
    const auto records = synthetic_records();
    const auto s = summarize(records, "xpal");
    ASSERT_EQ(s.rows.size(), 6u);
    for (const std::string ds : {"a", "b"}) {
        double total = 0.0;
        for (const auto& r : s.rows)
            if (r.dataset == ds) total += r.mean_rank;
        EXPECT_NEAR(total / 3.0, 2.0, 1e-12);
    }
    const auto& rand_row = s.rows[1];
    EXPECT_EQ(rand_row.strategy, "rand");
    ASSERT_TRUE(rand_row.p_vs_reference.has_value());
    EXPECT_LT(*rand_row.p_vs_reference, 0.001);
    EXPECT_EQ(rand_row.annotation, "***");
    EXPECT_FALSE(s.rows[0].p_vs_reference.has_value());

    ASSERT_EQ(s.reference_record.size(), 2u);
    EXPECT_EQ(s.reference_record[0].first, "rand");
    EXPECT_EQ(s.reference_record[0].second[0].wins, 2u);

    std::ostringstream csv;
    write_summary_csv(s, csv);
    const auto text = csv.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "dataset,strategy,mean_aulc,std_aulc,mean_rank,p_vs_reference,annotation");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
}

TEST(Summary, DuplicateRecordRejected) {
    auto records = synthetic_records();
    records.push_back(records.front());
    EXPECT_THROW(summarize(records, "xpal"), InputError);
}
