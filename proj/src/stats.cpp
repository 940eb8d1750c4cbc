#include "al/error.hpp"
#include "al/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>

namespace al {

double aulc(std::span<const double> errors) {
    if (errors.empty()) throw InputError("aulc of an empty learning curve");
    return std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
}

double aulc(const LearningCurveRecord& record) { return aulc(std::span<const double>(record.errors)); }

namespace {

// Average ranks (1-based) of the values; equal values share the mean rank.
std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

struct SignedRanks {
    std::vector<double> abs_ranks;
    std::vector<bool> positive;
    std::vector<std::size_t> tie_sizes;
    double w_plus = 0.0;
    double w_minus = 0.0;
};

SignedRanks signed_ranks(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InputError("wilcoxon: samples must be paired (equal length)");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (!std::isfinite(d)) throw InputError("wilcoxon: non-finite difference");
        if (d != 0.0) diffs.push_back(d);
    }
    SignedRanks s;
    std::vector<double> mags(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) mags[i] = std::abs(diffs[i]);
    s.abs_ranks = average_ranks(mags);
    s.positive.resize(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        s.positive[i] = diffs[i] > 0.0;
        (s.positive[i] ? s.w_plus : s.w_minus) += s.abs_ranks[i];
    }
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        if (j - i > 1) s.tie_sizes.push_back(j - i);
        i = j;
    }
    return s;
}

// Returns true (with a filled result) when there is nothing to test.
bool degenerate_or_too_small(const SignedRanks& s, WilcoxonResult& out) {
    out.n = s.abs_ranks.size();
    if (out.n == 0) {
        out.degenerate = true;
        out.p_value = 1.0;
        return true;
    }
    if (out.n < kWilcoxonMinN)
        throw InputError("wilcoxon: need at least " + std::to_string(kWilcoxonMinN) + " non-zero differences, got " +
                         std::to_string(out.n));
    out.statistic = std::min(s.w_plus, s.w_minus);
    return false;
}

}  // namespace

std::vector<double> mean_ranks(const std::vector<std::vector<double>>& table) {
    if (table.empty()) throw InputError("mean_ranks: empty table");
    const std::size_t m = table.front().size();
    if (m == 0) throw InputError("mean_ranks: no strategies");
    std::vector<double> total(m, 0.0);
    for (const auto& row : table) {
        if (row.size() != m) throw InputError("mean_ranks: ragged table");
        const auto r = average_ranks(row);
        for (std::size_t j = 0; j < m; ++j) total[j] += r[j];
    }
    for (auto& t : total) t /= static_cast<double>(table.size());
    return total;
}

WilcoxonResult wilcoxon_exact(std::span<const double> a, std::span<const double> b) {
    const SignedRanks s = signed_ranks(a, b);
    WilcoxonResult out;
    out.exact = true;
    if (degenerate_or_too_small(s, out)) return out;
    if (out.n > 62) throw InputError("wilcoxon_exact: too many differences for the exact null");

    // Average ranks are multiples of 1/2, so doubled ranks are integers and the
    // null distribution of 2 W+ is a subset-sum count.
    std::vector<std::size_t> doubled(out.n);
    std::size_t total = 0;
    for (std::size_t i = 0; i < out.n; ++i) {
        doubled[i] = static_cast<std::size_t>(std::llround(2.0 * s.abs_ranks[i]));
        total += doubled[i];
    }
    std::vector<double> counts(total + 1, 0.0);
    counts[0] = 1.0;
    std::size_t reach = 0;
    for (auto r : doubled) {
        for (std::size_t v = reach + 1; v-- > 0;)
            if (counts[v] != 0.0) counts[v + r] += counts[v];
        reach += r;
    }
    const auto observed = static_cast<long long>(std::llround(2.0 * s.w_plus));
    const long long twice_centre = static_cast<long long>(total);  // 2 * (2 * mean)
    const long long dev = std::llabs(2 * observed - twice_centre);
    double extreme = 0.0;
    for (std::size_t v = 0; v <= total; ++v)
        if (std::llabs(2 * static_cast<long long>(v) - twice_centre) >= dev) extreme += counts[v];
    out.p_value = std::min(1.0, extreme / std::ldexp(1.0, static_cast<int>(out.n)));
    return out;
}

WilcoxonResult wilcoxon_normal(std::span<const double> a, std::span<const double> b) {
    const SignedRanks s = signed_ranks(a, b);
    WilcoxonResult out;
    if (degenerate_or_too_small(s, out)) return out;
    const double n = static_cast<double>(out.n);
    const double mean = n * (n + 1.0) / 4.0;
    double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    for (auto t : s.tie_sizes) {
        const double td = static_cast<double>(t);
        var -= (td * td * td - td) / 48.0;
    }
    if (var <= 0.0) {
        out.p_value = 1.0;
        return out;
    }
    const double z = std::max(0.0, std::abs(s.w_plus - mean) - 0.5) / std::sqrt(var);
    out.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    return out;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InputError("wilcoxon: samples must be paired (equal length)");
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < a.size(); ++i) nonzero += (a[i] != b[i]) ? 1 : 0;
    return nonzero <= kWilcoxonExactMaxN ? wilcoxon_exact(a, b) : wilcoxon_normal(a, b);
}

std::string significance_stars(double p, int direction) {
    if (direction == 0 || !(p < 0.05)) return "";
    const int level = p < 0.001 ? 3 : (p < 0.01 ? 2 : 1);
    std::string out;
    for (int i = 0; i < level; ++i) out += direction > 0 ? "*" : "†";
    return out;
}

RankSummary summarize(const std::vector<LearningCurveRecord>& records, const std::string& reference_strategy) {
    // Preserve first-appearance order for datasets and strategies.
    std::vector<std::string> datasets;
    std::vector<std::string> strategies;
    auto remember = [](std::vector<std::string>& seen, const std::string& s) {
        if (std::find(seen.begin(), seen.end(), s) == seen.end()) seen.push_back(s);
    };
    std::map<std::string, std::map<std::string, std::map<std::uint64_t, double>>> by;
    for (const auto& r : records) {
        remember(datasets, r.dataset);
        remember(strategies, r.strategy);
        auto& slot = by[r.dataset][r.strategy];
        if (!slot.emplace(r.repetition, aulc(r)).second)
            throw InputError("duplicate record for " + r.dataset + " / " + r.strategy + " / repetition " +
                             std::to_string(r.repetition));
    }

    RankSummary summary;
    std::map<std::string, std::pair<double, std::size_t>> rank_acc;
    std::map<std::string, std::array<WinTieLoss, 3>> wtl;
    constexpr std::array<double, 3> levels{0.001, 0.01, 0.05};

    for (const auto& ds : datasets) {
        const auto& per = by[ds];
        std::vector<std::string> present;
        for (const auto& s : strategies)
            if (per.count(s)) present.push_back(s);

        std::vector<std::uint64_t> complete;
        for (const auto& [rep, v] : per.at(present.front())) {
            (void)v;
            bool all = true;
            for (const auto& s : present) all = all && per.at(s).count(rep);
            if (all) complete.push_back(rep);
        }
        std::vector<double> ranks(present.size(), 0.0);
        if (!complete.empty()) {
            std::vector<std::vector<double>> table;
            for (auto rep : complete) {
                std::vector<double> row;
                for (const auto& s : present) row.push_back(per.at(s).at(rep));
                table.push_back(std::move(row));
            }
            ranks = mean_ranks(table);
        }

        const bool has_ref = per.count(reference_strategy) > 0;
        for (std::size_t j = 0; j < present.size(); ++j) {
            const auto& s = present[j];
            SummaryRow row;
            row.dataset = ds;
            row.strategy = s;
            std::vector<double> vals;
            for (const auto& [rep, v] : per.at(s)) vals.push_back(v);
            row.mean_aulc = aulc(vals);
            double ss = 0.0;
            for (auto v : vals) ss += (v - row.mean_aulc) * (v - row.mean_aulc);
            row.std_aulc = vals.size() > 1 ? std::sqrt(ss / static_cast<double>(vals.size() - 1)) : 0.0;
            row.mean_rank = ranks[j];
            if (!complete.empty()) {
                rank_acc[s].first += ranks[j];
                rank_acc[s].second += 1;
            }

            if (has_ref && s != reference_strategy && !complete.empty()) {
                std::vector<double> ref, comp;
                for (auto rep : complete) {
                    ref.push_back(per.at(reference_strategy).at(rep));
                    comp.push_back(per.at(s).at(rep));
                }
                try {
                    const auto w = wilcoxon_signed_rank(ref, comp);
                    row.p_vs_reference = w.p_value;
                    // Lower AULC is better: the reference wins when its errors are smaller.
                    const auto sr = signed_ranks(ref, comp);
                    const int direction = sr.w_minus > sr.w_plus ? 1 : (sr.w_minus < sr.w_plus ? -1 : 0);
                    row.annotation = significance_stars(w.p_value, direction);
                    auto& rec = wtl[s];
                    for (std::size_t l = 0; l < levels.size(); ++l) {
                        if (w.p_value < levels[l] && direction > 0) ++rec[l].wins;
                        else if (w.p_value < levels[l] && direction < 0) ++rec[l].losses;
                        else ++rec[l].ties;
                    }
                } catch (const InputError&) {
                    // fewer than five non-zero differences: no test
                }
            }
            summary.rows.push_back(std::move(row));
        }
    }

    for (const auto& s : strategies) {
        if (auto it = rank_acc.find(s); it != rank_acc.end() && it->second.second > 0)
            summary.overall_mean_rank.emplace_back(s, it->second.first / static_cast<double>(it->second.second));
        if (auto it = wtl.find(s); it != wtl.end()) summary.reference_record.emplace_back(s, it->second);
    }
    return summary;
}

void write_summary_csv(const RankSummary& summary, std::ostream& out) {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << "dataset,strategy,mean_aulc,std_aulc,mean_rank,p_vs_reference,annotation\n";
    out << std::setprecision(10);
    auto quoted = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    };
    for (const auto& r : summary.rows) {
        out << quoted(r.dataset) << ',' << quoted(r.strategy) << ',' << r.mean_aulc << ',' << r.std_aulc << ','
            << r.mean_rank << ',';
        if (r.p_vs_reference) out << *r.p_vs_reference;
        out << ',' << r.annotation << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

}  // namespace al
