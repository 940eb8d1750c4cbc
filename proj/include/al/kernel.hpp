#pragma once

#include "al/data.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace al {

enum class KernelKind { Rbf, Hamming, Cosine };

std::string_view to_string(KernelKind kind);

struct KernelSpec {
    KernelKind kind = KernelKind::Rbf;
    double gamma = 1.0;  // unused for Cosine

    void validate() const;
};

/// exp(-gamma * ||a - b||^2)
double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// exp(-gamma * #mismatching positions). Categorical codes compare by equality.
double hamming_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// a.b / (|a| |b|); 0 when either vector has zero norm.
double cosine_kernel(std::span<const double> a, std::span<const double> b);

double evaluate(const KernelSpec& spec, std::span<const double> a, std::span<const double> b);

/// Mean-criterion bandwidth: s = sqrt(2 N D / ((N-1) ln((N-1)/delta^2))) with
/// N = min(n_pool, 200), delta = sqrt(2) 1e-6, unit feature variance. Returns
/// gamma = 1 / (2 s^2).
double mean_bandwidth(std::size_t n_pool, std::size_t dims);

inline constexpr std::size_t kBandwidthSampleCap = 200;

/// Natural kernel for a feature kind (Numeric -> RBF, Categorical -> Hamming,
/// Tfidf -> Cosine) with gamma from mean_bandwidth.
KernelSpec default_kernel(FeatureKind kind, std::size_t n_pool, std::size_t dims);

void check_compatible(const KernelSpec& spec, FeatureKind kind);

/// Dense rows x cols matrix, row-major.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * cols_, cols_}; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Symmetric pool kernel, immutable after construction.
class KernelMatrix {
public:
    KernelMatrix() = default;
    /// Takes a full n x n matrix; throws InputError unless it is exactly symmetric.
    KernelMatrix(DenseMatrix values, KernelSpec spec);

    std::size_t size() const noexcept { return values_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_(i, j); }
    std::span<const double> row(std::size_t i) const noexcept { return values_.row(i); }
    const KernelSpec& spec() const noexcept { return spec_; }
    const DenseMatrix& dense() const noexcept { return values_; }

private:
    DenseMatrix values_;
    KernelSpec spec_;
};

/// Upper triangle computed in parallel, mirrored, diagonal evaluated directly.
KernelMatrix build_kernel_matrix(const Dataset& dataset, const KernelSpec& spec);

/// K(query_i, pool_j) for every query row; used for held-out evaluation.
DenseMatrix build_cross_kernel(const Dataset& queries, const Dataset& pool, const KernelSpec& spec);

/// Similarities of one out-of-pool point against every pool row.
std::vector<double> kernel_row(std::span<const double> point, const Dataset& pool, const KernelSpec& spec);

namespace reference {
KernelMatrix build_kernel_matrix_serial(const Dataset& dataset, const KernelSpec& spec);
}

}  // namespace al
