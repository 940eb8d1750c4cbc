#include "al/kernel.hpp"

#include "al/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace al {

std::string_view to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::Rbf: return "rbf";
        case KernelKind::Hamming: return "hamming";
        case KernelKind::Cosine: return "cosine";
    }
    return "rbf";
}

void KernelSpec::validate() const {
    if (kind != KernelKind::Cosine && !(gamma > 0.0 && std::isfinite(gamma)))
        throw ConfigError(std::string(to_string(kind)) + " kernel requires gamma > 0");
}

namespace {

void check_dims(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw InputError("kernel: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
}

// Unchecked inner loops for the matrix builders.
double rbf_raw(const double* a, const double* b, std::size_t d, double gamma) {
    double sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double diff = a[k] - b[k];
        sq += diff * diff;
    }
    return std::exp(-gamma * sq);
}

double hamming_raw(const double* a, const double* b, std::size_t d, double gamma) {
    std::size_t mismatches = 0;
    for (std::size_t k = 0; k < d; ++k) mismatches += (a[k] != b[k]) ? 1 : 0;
    return std::exp(-gamma * static_cast<double>(mismatches));
}

double cosine_raw(const double* a, const double* b, std::size_t d) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double eval_raw(const KernelSpec& spec, const double* a, const double* b, std::size_t d) {
    switch (spec.kind) {
        case KernelKind::Rbf: return rbf_raw(a, b, d, spec.gamma);
        case KernelKind::Hamming: return hamming_raw(a, b, d, spec.gamma);
        case KernelKind::Cosine: return cosine_raw(a, b, d);
    }
    return 0.0;
}

}  // namespace

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    check_dims(a, b);
    return rbf_raw(a.data(), b.data(), a.size(), gamma);
}

double hamming_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    check_dims(a, b);
    return hamming_raw(a.data(), b.data(), a.size(), gamma);
}

double cosine_kernel(std::span<const double> a, std::span<const double> b) {
    check_dims(a, b);
    return cosine_raw(a.data(), b.data(), a.size());
}

double evaluate(const KernelSpec& spec, std::span<const double> a, std::span<const double> b) {
    check_dims(a, b);
    return eval_raw(spec, a.data(), b.data(), a.size());
}

double mean_bandwidth(std::size_t n_pool, std::size_t dims) {
    if (n_pool < 2) throw InputError("mean_bandwidth: need at least 2 pool instances");
    if (dims < 1) throw InputError("mean_bandwidth: need at least 1 feature");
    const double n = static_cast<double>(std::min(n_pool, kBandwidthSampleCap));
    const double delta = std::sqrt(2.0) * 1e-6;
    const double sigma_sum = static_cast<double>(dims);  // sum of unit variances
    const double s2 = 2.0 * n * sigma_sum / ((n - 1.0) * std::log((n - 1.0) / (delta * delta)));
    return 1.0 / (2.0 * s2);
}

KernelSpec default_kernel(FeatureKind kind, std::size_t n_pool, std::size_t dims) {
    switch (kind) {
        case FeatureKind::Numeric: return {KernelKind::Rbf, mean_bandwidth(n_pool, dims)};
        case FeatureKind::Categorical: return {KernelKind::Hamming, mean_bandwidth(n_pool, dims)};
        case FeatureKind::Tfidf: return {KernelKind::Cosine, 1.0};
    }
    return {};
}

void check_compatible(const KernelSpec& spec, FeatureKind kind) {
    const bool ok = (kind == FeatureKind::Categorical) ? spec.kind == KernelKind::Hamming
                                                       : spec.kind != KernelKind::Hamming;
    if (!ok)
        throw ConfigError(std::string(to_string(spec.kind)) + " kernel cannot be used with " +
                          std::string(to_string(kind)) + " features");
}

KernelMatrix::KernelMatrix(DenseMatrix values, KernelSpec spec) : values_(std::move(values)), spec_(spec) {
    if (values_.rows() != values_.cols()) throw InputError("kernel matrix must be square");
    for (std::size_t i = 0; i < values_.rows(); ++i)
        for (std::size_t j = i + 1; j < values_.cols(); ++j)
            if (values_(i, j) != values_(j, i)) throw InputError("kernel matrix must be symmetric");
}

KernelMatrix build_kernel_matrix(const Dataset& dataset, const KernelSpec& spec) {
    spec.validate();
    check_compatible(spec, dataset.kind);
    if (dataset.n_rows == 0) throw InputError("build_kernel_matrix: empty dataset");
    const std::size_t n = dataset.n_rows;
    const std::size_t d = dataset.n_features;
    const double* x = dataset.features.data();
    DenseMatrix m(n, n);

    const auto ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        for (std::size_t j = i; j < n; ++j) m(i, j) = eval_raw(spec, x + i * d, x + j * d, d);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) m(i, j) = m(j, i);
    return KernelMatrix(std::move(m), spec);
}

DenseMatrix build_cross_kernel(const Dataset& queries, const Dataset& pool, const KernelSpec& spec) {
    spec.validate();
    if (queries.n_features != pool.n_features) throw InputError("build_cross_kernel: dimension mismatch");
    const std::size_t d = pool.n_features;
    DenseMatrix m(queries.n_rows, pool.n_rows);
    const auto nq = static_cast<std::ptrdiff_t>(queries.n_rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t qi = 0; qi < nq; ++qi) {
        const auto q = static_cast<std::size_t>(qi);
        for (std::size_t j = 0; j < pool.n_rows; ++j)
            m(q, j) = eval_raw(spec, queries.features.data() + q * d, pool.features.data() + j * d, d);
    }
    return m;
}

std::vector<double> kernel_row(std::span<const double> point, const Dataset& pool, const KernelSpec& spec) {
    if (point.size() != pool.n_features) throw InputError("kernel_row: dimension mismatch");
    std::vector<double> out(pool.n_rows);
    for (std::size_t j = 0; j < pool.n_rows; ++j)
        out[j] = eval_raw(spec, point.data(), pool.features.data() + j * pool.n_features, pool.n_features);
    return out;
}

namespace reference {

KernelMatrix build_kernel_matrix_serial(const Dataset& dataset, const KernelSpec& spec) {
    spec.validate();
    check_compatible(spec, dataset.kind);
    if (dataset.n_rows == 0) throw InputError("build_kernel_matrix: empty dataset");
    const std::size_t n = dataset.n_rows;
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            m(i, j) = evaluate(spec, dataset.row(i), dataset.row(j));
            m(j, i) = m(i, j);
        }
    }
    return KernelMatrix(std::move(m), spec);
}

}  // namespace reference

}  // namespace al
