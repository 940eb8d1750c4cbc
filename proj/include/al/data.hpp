#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace al {

enum class FeatureKind { Numeric, Categorical, Tfidf };

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view text);

/// Row-major feature table with integer class labels in [0, n_classes).
///
/// Categorical features hold their integer codes as doubles. Views produced by
/// `subset` keep the parent's class count and names even when a class is absent.
struct Dataset {
    std::string name;
    FeatureKind kind = FeatureKind::Numeric;
    std::size_t n_rows = 0;
    std::size_t n_features = 0;
    std::size_t n_classes = 0;
    std::vector<double> features;
    std::vector<int> labels;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
    // Categorical only: per-column code -> original token.
    std::vector<std::vector<std::string>> category_names;

    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * n_features, n_features};
    }
    std::span<double> row(std::size_t i) { return {features.data() + i * n_features, n_features}; }

    /// Checks the load-time invariants: N >= 2, aligned labels, every class present.
    void validate() const;
};

Dataset subset(const Dataset& data, std::span<const std::size_t> rows);

using LabelColumn = std::variant<std::string, std::size_t>;

Dataset load_csv(const std::filesystem::path& path, FeatureKind kind,
                 const LabelColumn& label_column = std::string{"class"});
void write_csv(const Dataset& data, const std::filesystem::path& path);

struct Standardization {
    std::vector<double> mean;
    std::vector<double> stddev;  // population std; 0 marks a constant column

    void apply(Dataset& data) const;
};

/// Fits per-feature mean/std on `train` and returns the standardized copy.
std::pair<Dataset, Standardization> z_standardize(const Dataset& train);

struct SplitSpec {
    double train_fraction = 0.6;
    std::uint64_t seed = 0;
    std::uint64_t repetition = 0;
    bool stratified = false;
};

struct Split {
    Dataset train;
    Dataset test;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
};

inline constexpr int kMaxSplitRetries = 100;

Split split(const Dataset& data, const SplitSpec& spec);

Dataset synthetic_blobs(std::size_t n, std::size_t classes, std::uint64_t seed);

struct ManifestEntry {
    std::string name;
    std::filesystem::path path;
    FeatureKind kind = FeatureKind::Numeric;
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t c = 0;
};

/// Reads a JSON array of {name, path, kind, n, d, c}; relative paths resolve
/// against the manifest's directory.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

}  // namespace al
