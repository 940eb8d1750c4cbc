#include "al/data.hpp"

#include "al/error.hpp"
#include "al/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace al {

std::string_view to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::Numeric: return "numeric";
        case FeatureKind::Categorical: return "categorical";
        case FeatureKind::Tfidf: return "tfidf";
    }
    return "numeric";
}

FeatureKind parse_feature_kind(std::string_view text) {
    if (text == "numeric") return FeatureKind::Numeric;
    if (text == "categorical") return FeatureKind::Categorical;
    if (text == "tfidf") return FeatureKind::Tfidf;
    throw ConfigError("unknown feature kind '" + std::string(text) +
                      "' (expected numeric, categorical or tfidf)");
}

void Dataset::validate() const {
    if (n_rows < 2) throw InputError("dataset '" + name + "' needs at least 2 rows");
    if (labels.size() != n_rows || features.size() != n_rows * n_features)
        throw InputError("dataset '" + name + "': labels/features not aligned with rows");
    std::vector<bool> seen(n_classes, false);
    for (int y : labels) {
        if (y < 0 || static_cast<std::size_t>(y) >= n_classes)
            throw InputError("dataset '" + name + "': label out of range");
        seen[static_cast<std::size_t>(y)] = true;
    }
    for (std::size_t c = 0; c < n_classes; ++c)
        if (!seen[c]) throw InputError("dataset '" + name + "': class " + std::to_string(c) + " has no rows");
}

Dataset subset(const Dataset& data, std::span<const std::size_t> rows) {
    Dataset out;
    out.name = data.name;
    out.kind = data.kind;
    out.n_rows = rows.size();
    out.n_features = data.n_features;
    out.n_classes = data.n_classes;
    out.feature_names = data.feature_names;
    out.class_names = data.class_names;
    out.category_names = data.category_names;
    out.features.reserve(rows.size() * data.n_features);
    out.labels.reserve(rows.size());
    for (auto r : rows) {
        if (r >= data.n_rows) throw InputError("subset: row index out of range");
        auto src = data.row(r);
        out.features.insert(out.features.end(), src.begin(), src.end());
        out.labels.push_back(data.labels[r]);
    }
    return out;
}

namespace {

// Comma separated, double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    cells.push_back(std::move(cur));
    for (auto& c : cells) {
        auto b = c.find_first_not_of(" \t");
        auto e = c.find_last_not_of(" \t");
        c = (b == std::string::npos) ? std::string{} : c.substr(b, e - b + 1);
    }
    return cells;
}

std::string quote_csv(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    return out + "\"";
}

bool parse_double(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

class Coder {
public:
    int code(const std::string& token) {
        auto [it, inserted] = index_.try_emplace(token, static_cast<int>(tokens_.size()));
        if (inserted) tokens_.push_back(token);
        return it->second;
    }
    std::vector<std::string>& tokens() { return tokens_; }

private:
    std::unordered_map<std::string, int> index_;
    std::vector<std::string> tokens_;
};

}  // namespace

Dataset load_csv(const std::filesystem::path& path, FeatureKind kind, const LabelColumn& label_column) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open dataset file '" + path.string() + "'");

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        header = split_csv_line(line);
        break;
    }
    if (header.empty()) throw IngestionError("'" + path.string() + "': missing header row");

    std::size_t label_idx = header.size();
    if (const auto* name = std::get_if<std::string>(&label_column)) {
        auto it = std::find(header.begin(), header.end(), *name);
        if (it == header.end())
            throw IngestionError("'" + path.string() + "': label column '" + *name + "' not in header");
        label_idx = static_cast<std::size_t>(it - header.begin());
    } else {
        label_idx = std::get<std::size_t>(label_column);
        if (label_idx >= header.size())
            throw IngestionError("'" + path.string() + "': label column index " + std::to_string(label_idx) +
                                 " out of range (" + std::to_string(header.size()) + " columns)");
    }

    Dataset data;
    data.name = path.stem().string();
    data.kind = kind;
    data.n_features = header.size() - 1;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (j != label_idx) data.feature_names.push_back(header[j]);

    Coder label_coder;
    std::vector<Coder> feature_coders(kind == FeatureKind::Categorical ? data.n_features : 0);

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw IngestionError("'" + path.string() + "' line " + std::to_string(line_no) + ": ragged row (expected " +
                                 std::to_string(header.size()) + " cells, got " + std::to_string(cells.size()) + ")");
        if (cells[label_idx].empty())
            throw IngestionError("'" + path.string() + "' line " + std::to_string(line_no) + ": empty label in column '" +
                                 header[label_idx] + "'");
        std::size_t f = 0;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j == label_idx) continue;
            if (kind == FeatureKind::Categorical) {
                if (cells[j].empty())
                    throw IngestionError("'" + path.string() + "' line " + std::to_string(line_no) + ", column '" +
                                         header[j] + "': empty categorical cell");
                data.features.push_back(feature_coders[f].code(cells[j]));
            } else {
                double v = 0.0;
                if (!parse_double(cells[j], v))
                    throw IngestionError("'" + path.string() + "' line " + std::to_string(line_no) + ", column '" +
                                         header[j] + "': cannot parse '" + cells[j] + "' as a number");
                data.features.push_back(v);
            }
            ++f;
        }
        data.labels.push_back(label_coder.code(cells[label_idx]));
        ++data.n_rows;
    }

    data.class_names = std::move(label_coder.tokens());
    data.n_classes = data.class_names.size();
    for (auto& c : feature_coders) data.category_names.push_back(std::move(c.tokens()));

    if (data.n_rows < 2) throw IngestionError("'" + path.string() + "': need at least 2 data rows");
    if (data.n_classes < 2)
        throw IngestionError("'" + path.string() + "': single-class data (only '" + data.class_names.front() + "')");
    return data;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IngestionError("cannot write '" + path.string() + "'");
    for (std::size_t j = 0; j < data.n_features; ++j) {
        out << quote_csv(j < data.feature_names.size() ? data.feature_names[j] : "f" + std::to_string(j)) << ',';
    }
    out << "class\n";
    out.precision(17);
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        auto r = data.row(i);
        for (std::size_t j = 0; j < data.n_features; ++j) {
            if (data.kind == FeatureKind::Categorical && j < data.category_names.size())
                out << quote_csv(data.category_names[j].at(static_cast<std::size_t>(r[j])));
            else
                out << r[j];
            out << ',';
        }
        auto y = static_cast<std::size_t>(data.labels[i]);
        out << quote_csv(y < data.class_names.size() ? data.class_names[y] : std::to_string(y)) << '\n';
    }
}

void Standardization::apply(Dataset& data) const {
    if (mean.size() != data.n_features) throw InputError("standardization: feature count mismatch");
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        auto r = data.row(i);
        for (std::size_t j = 0; j < data.n_features; ++j)
            r[j] = stddev[j] > 0.0 ? (r[j] - mean[j]) / stddev[j] : 0.0;
    }
}

std::pair<Dataset, Standardization> z_standardize(const Dataset& train) {
    const std::size_t d = train.n_features;
    Standardization stats{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    if (train.n_rows > 0) {
        for (std::size_t i = 0; i < train.n_rows; ++i) {
            auto r = train.row(i);
            for (std::size_t j = 0; j < d; ++j) stats.mean[j] += r[j];
        }
        for (auto& m : stats.mean) m /= static_cast<double>(train.n_rows);
        for (std::size_t i = 0; i < train.n_rows; ++i) {
            auto r = train.row(i);
            for (std::size_t j = 0; j < d; ++j) stats.stddev[j] += (r[j] - stats.mean[j]) * (r[j] - stats.mean[j]);
        }
        for (auto& s : stats.stddev) {
            s = std::sqrt(s / static_cast<double>(train.n_rows));
            // constant up to rounding noise
            if (!(s > 1e-12)) s = 0.0;
        }
    }
    Dataset out = train;
    stats.apply(out);
    return {std::move(out), std::move(stats)};
}

namespace {

std::vector<std::size_t> stratified_train_rows(const Dataset& data, double fraction, Rng& rng) {
    std::vector<std::vector<std::size_t>> by_class(data.n_classes);
    for (std::size_t i = 0; i < data.n_rows; ++i) by_class[static_cast<std::size_t>(data.labels[i])].push_back(i);
    const auto total = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(data.n_rows)));

    // Largest-remainder allocation with at least one row per non-empty class.
    std::vector<std::size_t> take(data.n_classes, 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < data.n_classes; ++c) {
        double exact = fraction * static_cast<double>(by_class[c].size());
        take[c] = std::min(by_class[c].size(), std::max<std::size_t>(by_class[c].empty() ? 0 : 1,
                                                                      static_cast<std::size_t>(std::floor(exact))));
        assigned += take[c];
        remainders.emplace_back(exact - std::floor(exact), c);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < total && k < remainders.size(); ++k) {
        auto c = remainders[k].second;
        if (take[c] < by_class[c].size()) {
            ++take[c];
            ++assigned;
        }
    }

    std::vector<std::size_t> rows;
    for (std::size_t c = 0; c < data.n_classes; ++c) {
        std::shuffle(by_class[c].begin(), by_class[c].end(), rng);
        rows.insert(rows.end(), by_class[c].begin(), by_class[c].begin() + static_cast<std::ptrdiff_t>(take[c]));
    }
    return rows;
}

}  // namespace

Split split(const Dataset& data, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw InputError("train_fraction must lie in (0, 1)");
    if (data.n_rows < 5) throw InputError("split needs at least 5 rows");

    std::vector<std::size_t> train_rows;
    bool covered = false;
    for (int attempt = 0; attempt < kMaxSplitRetries && !covered; ++attempt) {
        auto rng = make_rng({spec.seed, spec.repetition, salt::split, static_cast<std::uint64_t>(attempt)});
        if (spec.stratified) {
            train_rows = stratified_train_rows(data, spec.train_fraction, rng);
        } else {
            std::vector<std::size_t> perm(data.n_rows);
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            std::shuffle(perm.begin(), perm.end(), rng);
            const auto n_train = static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(data.n_rows)));
            train_rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
        }
        std::vector<bool> seen(data.n_classes, false);
        for (auto r : train_rows) seen[static_cast<std::size_t>(data.labels[r])] = true;
        covered = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    }
    if (!covered)
        throw SplitError("could not draw a training split covering all " + std::to_string(data.n_classes) +
                         " classes of '" + data.name + "' after " + std::to_string(kMaxSplitRetries) + " attempts");

    std::sort(train_rows.begin(), train_rows.end());
    std::vector<bool> in_train(data.n_rows, false);
    for (auto r : train_rows) in_train[r] = true;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < data.n_rows; ++i)
        if (!in_train[i]) test_rows.push_back(i);

    Split out;
    out.train = subset(data, train_rows);
    out.test = subset(data, test_rows);
    out.train_rows = std::move(train_rows);
    out.test_rows = std::move(test_rows);
    return out;
}

Dataset synthetic_blobs(std::size_t n, std::size_t classes, std::uint64_t seed) {
    if (classes < 1 || n < classes) throw InputError("synthetic_blobs needs n >= classes >= 1");
    constexpr double radius = 5.0;
    auto rng = make_rng({seed, salt::blobs, n, classes});
    std::normal_distribution<double> noise(0.0, 1.0);

    Dataset data;
    data.name = "blobs_n" + std::to_string(n) + "_c" + std::to_string(classes);
    data.kind = FeatureKind::Numeric;
    data.n_rows = n;
    data.n_features = 2;
    data.n_classes = classes;
    data.feature_names = {"x", "y"};
    for (std::size_t c = 0; c < classes; ++c) data.class_names.push_back("blob_" + std::to_string(c));
    data.features.reserve(2 * n);
    data.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = i % classes;
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(classes);
        data.features.push_back(radius * std::cos(angle) + noise(rng));
        data.features.push_back(radius * std::sin(angle) + noise(rng));
        data.labels.push_back(static_cast<int>(c));
    }
    return data;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open manifest '" + path.string() + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IngestionError("manifest '" + path.string() + "': " + e.what());
    }
    if (!doc.is_array()) throw IngestionError("manifest '" + path.string() + "' must be a JSON array");

    std::vector<ManifestEntry> entries;
    for (const auto& item : doc) {
        try {
            ManifestEntry e;
            e.name = item.at("name").get<std::string>();
            std::filesystem::path p = item.at("path").get<std::string>();
            e.path = p.is_relative() ? path.parent_path() / p : p;
            e.kind = parse_feature_kind(item.value("kind", std::string{"numeric"}));
            e.n = item.value("n", std::size_t{0});
            e.d = item.value("d", std::size_t{0});
            e.c = item.value("c", std::size_t{0});
            entries.push_back(std::move(e));
        } catch (const nlohmann::json::exception& ex) {
            throw IngestionError("manifest '" + path.string() + "': bad entry " + item.dump() + ": " + ex.what());
        }
    }
    return entries;
}

}  // namespace al
