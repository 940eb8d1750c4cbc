#pragma once

#include "al/kernel.hpp"
#include "al/model.hpp"
#include "oracles.hpp"

#include <random>
#include <vector>

namespace testing_support {

inline al::KernelMatrix to_kernel(const oracle::Matrix& m) {
    al::DenseMatrix d(m.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) d(i, j) = m[i][j];
    return al::KernelMatrix(std::move(d), al::KernelSpec{al::KernelKind::Rbf, 0.7});
}

inline al::PoolState to_state(std::size_t n, std::size_t c, const std::vector<oracle::Pair>& labeled) {
    std::vector<al::LabeledPair> l;
    for (const auto& p : labeled) l.push_back({p.i, p.y});
    return al::PoolState(n, c, l);
}

// Random labeled subset of size in [0, n-1]; labels uniform over C classes.
template <class Rng>
std::vector<oracle::Pair> random_labeled(std::size_t n, std::size_t c, Rng& rng, std::size_t max_labeled) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::uniform_int_distribution<std::size_t> count(0, std::min(max_labeled, n - 1));
    std::uniform_int_distribution<int> label(0, static_cast<int>(c) - 1);
    std::vector<oracle::Pair> out;
    const std::size_t m = count(rng);
    for (std::size_t i = 0; i < m; ++i) out.push_back({idx[i], label(rng)});
    return out;
}

inline oracle::Matrix identity(std::size_t n) {
    oracle::Matrix m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

}  // namespace testing_support
