#pragma once

// Brute-force reference implementations written directly from the textbook
// definitions. They share no code with the library on purpose.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

struct Pair {
    std::size_t i;
    int y;
};

inline std::vector<double> freq(const Matrix& K, const std::vector<Pair>& L, std::size_t x, std::size_t C) {
    std::vector<double> k(C, 0.0);
    for (const auto& p : L) k[static_cast<std::size_t>(p.y)] += K[x][p.i];
    return k;
}

inline int argmax_low(const std::vector<double>& k) {
    int best = 0;
    for (std::size_t y = 1; y < k.size(); ++y)
        if (k[y] > k[static_cast<std::size_t>(best)]) best = static_cast<int>(y);
    return best;
}

inline std::vector<double> posterior(const std::vector<double>& k, double alpha) {
    std::vector<double> p(k.size());
    double s = 0.0;
    for (std::size_t y = 0; y < k.size(); ++y) s += k[y] + alpha;
    for (std::size_t y = 0; y < k.size(); ++y) p[y] = s > 0.0 ? (k[y] + alpha) / s : 1.0 / static_cast<double>(k.size());
    return p;
}

// (1/|E|) sum_x sum_y p(y | k_x^{Lp} + alpha) * 1{y != f^{Lc}(x)}
inline double risk(const Matrix& K, const std::vector<Pair>& Lp, const std::vector<Pair>& Lc, double alpha,
                   const std::vector<std::size_t>& E, std::size_t C) {
    double total = 0.0;
    for (auto x : E) {
        const auto p = posterior(freq(K, Lp, x, C), alpha);
        const int f = argmax_low(freq(K, Lc, x, C));
        for (std::size_t y = 0; y < C; ++y)
            if (static_cast<int>(y) != f) total += p[y];
    }
    return total / static_cast<double>(E.size());
}

// R(f^{L+}, L+) - R(f^L, L+), every instance and every class summed.
inline double risk_difference(const Matrix& K, const std::vector<Pair>& Lplus, const std::vector<Pair>& L,
                              double alpha, const std::vector<std::size_t>& E, std::size_t C) {
    return risk(K, Lplus, Lplus, alpha, E, C) - risk(K, Lplus, L, alpha, E, C);
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> e(n);
    std::iota(e.begin(), e.end(), std::size_t{0});
    return e;
}

inline double xgain(const Matrix& K, const std::vector<Pair>& L, std::size_t c, double alpha, std::size_t C) {
    const auto E = all_indices(K.size());
    const auto pc = posterior(freq(K, L, c, C), alpha);
    double g = 0.0;
    for (std::size_t yc = 0; yc < C; ++yc) {
        auto Lp = L;
        Lp.push_back({c, static_cast<int>(yc)});
        g -= pc[yc] * risk_difference(K, Lp, L, alpha, E, C);
    }
    return g;
}

// -sum_yc p(yc) (1/|U|) sum_{x in U} (1 - max_y p(y | k_x^{L+} + eps))
inline double eer_score(const Matrix& K, const std::vector<Pair>& L, std::size_t c, double eps, std::size_t C) {
    std::vector<bool> labeled(K.size(), false);
    for (const auto& p : L) labeled[p.i] = true;
    std::vector<std::size_t> U;
    for (std::size_t i = 0; i < K.size(); ++i)
        if (!labeled[i]) U.push_back(i);
    const auto pc = posterior(freq(K, L, c, C), eps);
    double expected = 0.0;
    for (std::size_t yc = 0; yc < C; ++yc) {
        auto Lp = L;
        Lp.push_back({c, static_cast<int>(yc)});
        double err = 0.0;
        for (auto x : U) {
            const auto p = posterior(freq(K, Lp, x, C), eps);
            err += 1.0 - *std::max_element(p.begin(), p.end());
        }
        expected += pc[yc] * err / static_cast<double>(U.size());
    }
    return -expected;
}

// Original labeling-vector PAL with m = 1, the candidate's self-similarity
// taken as 1:
//   p_hat * (sum_l I * II * III - p(yhat | k + 1))
//   I   = Gamma(S) / Gamma(S + sum(l + d)),  S = sum(k + 1)
//   II  = prod_i Gamma(k_i + 1 + l_i + d_i) / Gamma(k_i + 1)
//   III = Gamma(sum l + 1) / prod Gamma(l_i + 1)
inline double pal_gamma_product(const std::vector<double>& k, double density) {
    const std::size_t C = k.size();
    double S = 0.0;
    for (double v : k) S += v + 1.0;
    const int yhat = argmax_low(k);
    double sum = 0.0;
    for (std::size_t yc = 0; yc < C; ++yc) {
        std::vector<double> l(C, 0.0);
        l[yc] = 1.0;
        std::vector<double> kp = k;
        kp[yc] += 1.0;
        std::vector<double> d(C, 0.0);
        d[static_cast<std::size_t>(argmax_low(kp))] = 1.0;
        double ld = 0.0, lsum = 0.0;
        for (std::size_t i = 0; i < C; ++i) {
            ld += l[i] + d[i];
            lsum += l[i];
        }
        double log_term = std::lgamma(S) - std::lgamma(S + ld);
        for (std::size_t i = 0; i < C; ++i) log_term += std::lgamma(k[i] + 1.0 + l[i] + d[i]) - std::lgamma(k[i] + 1.0);
        log_term += std::lgamma(lsum + 1.0);
        for (std::size_t i = 0; i < C; ++i) log_term -= std::lgamma(l[i] + 1.0);
        sum += std::exp(log_term);
    }
    const double p_yhat = (k[static_cast<std::size_t>(yhat)] + 1.0) / S;
    return density * (sum - p_yhat);
}

// sum_y p(y | k + 0) * 1{y != f(x)}, uniform when k = 0
inline double us_score(const std::vector<double>& k) {
    const auto p = posterior(k, 0.0);
    const int f = argmax_low(k);
    double s = 0.0;
    for (std::size_t y = 0; y < k.size(); ++y)
        if (static_cast<int>(y) != f) s += p[y];
    return s;
}

// Negated zero-one error over E of the classifier trained on L + (c, t(c)).
inline double greedy_all(const Matrix& K, const std::vector<Pair>& L, std::size_t c, const std::vector<int>& truth,
                         std::size_t C) {
    auto Lp = L;
    Lp.push_back({c, truth[c]});
    double errors = 0.0;
    for (std::size_t x = 0; x < K.size(); ++x) errors += argmax_low(freq(K, Lp, x, C)) != truth[x] ? 1.0 : 0.0;
    return -errors / static_cast<double>(K.size());
}

// Two-sided signed-rank p-value by enumerating all 2^n sign patterns.
inline double wilcoxon_enumerated(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) d.push_back(a[i] - b[i]);
    const std::size_t n = d.size();
    if (n == 0) return 1.0;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return std::abs(d[x]) < std::abs(d[y]); });
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
        for (std::size_t t = i; t <= j; ++t) rank[order[t]] = (static_cast<double>(i + j) + 2.0) / 2.0;
        i = j + 1;
    }
    double total = 0.0, observed = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += rank[i];
        if (d[i] > 0) observed += rank[i];
    }
    const double mean = total / 2.0;
    const double dev = std::abs(observed - mean);
    std::uint64_t extreme = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) w += rank[i];
        if (std::abs(w - mean) >= dev - 1e-9) ++extreme;
    }
    return std::min(1.0, static_cast<double>(extreme) / std::ldexp(1.0, static_cast<int>(n)));
}

// Random symmetric RBF kernel matrix on n points in 2-D.
template <class Rng>
Matrix random_kernel(std::size_t n, Rng& rng, double gamma = 0.7) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::array<double, 2>> pts(n);
    for (auto& p : pts) p = {g(rng), g(rng)};
    Matrix K(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = pts[i][0] - pts[j][0], dy = pts[i][1] - pts[j][1];
            K[i][j] = std::exp(-gamma * (dx * dx + dy * dy));
        }
    return K;
}

}  // namespace oracle
