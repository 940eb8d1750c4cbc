#include "al/cli.hpp"

#include "al/error.hpp"
#include "al/kernel.hpp"
#include "al/rng.hpp"
#include "al/scoring.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace al::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kResultsFile = "results.jsonl";
constexpr const char* kSummaryFile = "summary.csv";
constexpr const char* kRanksFile = "ranks.csv";
constexpr const char* kConfigEcho = "run_config.json";
constexpr const char* kResumeMarker = ".resume";

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid " + what + " '" + s + "'");
    }
}

std::size_t parse_size(const std::string& s, const std::string& what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError("invalid " + what + " '" + s + "'");
    return static_cast<std::size_t>(std::stoull(s));
}

LabelColumn label_column_of(const std::string& text) {
    if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos)
        return static_cast<std::size_t>(std::stoull(text));
    return text;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// The part of the config that determines the records (not where or how fast).
json identity_of(const RunConfig& config) {
    json j = to_json(config);
    j.erase("workers");
    j.erase("out");
    return j;
}

std::size_t env_workers() {
    if (const char* v = std::getenv("AL_LAB_WORKERS")) {
        try {
            return parse_size(v, "AL_LAB_WORKERS");
        } catch (const ConfigError&) {
            std::cerr << "warning: ignoring AL_LAB_WORKERS='" << v << "'\n";
        }
    }
    return 1;
}

}  // namespace

void RunConfig::validate() const {
    if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
    if (budget < 1) throw ConfigError("budget must be at least 1");
    if (strategies.empty()) throw ConfigError("at least one strategy is required");
    if (workers < 1) throw ConfigError("workers must be at least 1");
    for (double a : alpha_sweep)
        if (!(a > 0.0)) throw ConfigError("alpha values must be positive");
    for (const auto& s : expanded_strategies()) s.validate();
}

std::vector<StrategyConfig> RunConfig::expanded_strategies() const {
    if (alpha_sweep.empty()) return strategies;
    std::vector<StrategyConfig> out;
    for (const auto& s : strategies) {
        if (s.kind != StrategyKind::Xpal) {
            out.push_back(s);
            continue;
        }
        for (double a : alpha_sweep) {
            StrategyConfig x = s;
            x.alpha = a;
            out.push_back(x);
        }
    }
    return out;
}

StrategyConfig parse_strategy(const json& j) {
    StrategyConfig s;
    if (j.is_string()) {
        s.kind = parse_strategy_kind(j.get<std::string>());
        return s;
    }
    if (!j.is_object()) throw ConfigError("strategy entries must be names or objects");
    try {
        s.kind = parse_strategy_kind(j.at("name").get<std::string>());
        s.alpha = j.value("alpha", s.alpha);
        s.epsilon = j.value("epsilon", s.epsilon);
        s.committee_size = j.value("committee_size", s.committee_size);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad strategy entry: ") + e.what());
    }
    return s;
}

json to_json(const RunConfig& c) {
    json strategies = json::array();
    for (const auto& s : c.strategies)
        strategies.push_back({{"name", std::string(to_string(s.kind))},
                              {"alpha", s.alpha},
                              {"epsilon", s.epsilon},
                              {"committee_size", s.committee_size}});
    return json{{"manifest", c.manifest.string()},
                {"datasets", c.datasets},
                {"strategies", strategies},
                {"repetitions", c.repetitions},
                {"budget", c.budget},
                {"alpha", c.alpha_sweep},
                {"seed", c.seed},
                {"workers", c.workers},
                {"out", c.out.string()},
                {"stratified", c.stratified},
                {"label_column", c.label_column},
                {"reference", c.reference}};
}

RunConfig config_from_json(const json& j, RunConfig c) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    try {
        if (j.contains("manifest")) c.manifest = j["manifest"].get<std::string>();
        if (j.contains("datasets")) c.datasets = j["datasets"].get<std::vector<std::string>>();
        if (j.contains("strategies")) {
            c.strategies.clear();
            for (const auto& s : j["strategies"]) c.strategies.push_back(parse_strategy(s));
        }
        if (j.contains("repetitions")) c.repetitions = j["repetitions"].get<std::size_t>();
        if (j.contains("budget")) c.budget = j["budget"].get<std::size_t>();
        if (j.contains("alpha")) {
            const auto& a = j["alpha"];
            c.alpha_sweep = a.is_array() ? a.get<std::vector<double>>() : std::vector<double>{a.get<double>()};
        }
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("workers")) c.workers = j["workers"].get<std::size_t>();
        if (j.contains("out")) c.out = j["out"].get<std::string>();
        if (j.contains("stratified")) c.stratified = j["stratified"].get<bool>();
        if (j.contains("label_column")) c.label_column = j["label_column"].get<std::string>();
        if (j.contains("reference")) c.reference = j["reference"].get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    return c;
}

std::vector<Dataset> resolve_datasets(const RunConfig& config) {
    std::vector<ManifestEntry> manifest;
    bool manifest_loaded = false;
    auto load_manifest_once = [&] {
        if (manifest_loaded) return;
        if (!fs::exists(config.manifest))
            throw ConfigError("manifest not found: " + config.manifest.string());
        manifest = load_manifest(config.manifest);
        manifest_loaded = true;
    };
    auto load_entry = [&](const ManifestEntry& e) {
        if (!fs::exists(e.path)) throw ConfigError("dataset '" + e.name + "': file not found: " + e.path.string());
        Dataset d = load_csv(e.path, e.kind, label_column_of(config.label_column));
        d.name = e.name;
        return d;
    };

    std::vector<Dataset> out;
    if (config.datasets.empty()) {
        load_manifest_once();
        for (const auto& e : manifest) out.push_back(load_entry(e));
        if (out.empty()) throw ConfigError("manifest " + config.manifest.string() + " lists no datasets");
        return out;
    }
    for (const auto& name : config.datasets) {
        const bool looks_like_path = name.find('/') != std::string::npos || fs::path(name).has_extension();
        if (looks_like_path) {
            if (!fs::exists(name)) throw ConfigError("dataset file not found: " + name);
            Dataset d = load_csv(name, FeatureKind::Numeric, label_column_of(config.label_column));
            d.name = fs::path(name).stem().string();
            out.push_back(std::move(d));
            continue;
        }
        load_manifest_once();
        auto it = std::find_if(manifest.begin(), manifest.end(), [&](const ManifestEntry& e) { return e.name == name; });
        if (it == manifest.end())
            throw ConfigError("dataset '" + name + "' is not in manifest " + config.manifest.string());
        out.push_back(load_entry(*it));
    }
    return out;
}

std::vector<RunJob> plan_jobs(std::size_t n_datasets, std::size_t n_strategies, std::size_t repetitions) {
    std::vector<RunJob> jobs;
    jobs.reserve(n_datasets * n_strategies * repetitions);
    for (std::size_t d = 0; d < n_datasets; ++d)
        for (std::size_t s = 0; s < n_strategies; ++s)
            for (std::size_t r = 0; r < repetitions; ++r) jobs.push_back({d, s, r});
    return jobs;
}

void run_jobs(const std::vector<Dataset>& datasets, const std::vector<StrategyConfig>& strategies,
              const RunConfig& config, const std::function<void(const LearningCurveRecord&)>& sink,
              std::size_t skip) {
    const auto jobs = plan_jobs(datasets.size(), strategies.size(), config.repetitions);
    if (skip >= jobs.size()) return;
    const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, jobs.size() - skip));

    ExperimentOptions options;
    // With several workers the jobs already fill the machine; keep each job serial.
    options.parallel_scoring = workers == 1;

    auto run_one = [&](const RunJob& job) {
        SplitSpec spec;
        spec.seed = config.seed;
        spec.repetition = job.repetition;
        spec.stratified = config.stratified;
        return run_experiment(datasets[job.dataset], strategies[job.strategy], spec, config.budget, options);
    };

    if (workers == 1) {
        for (std::size_t i = skip; i < jobs.size(); ++i) sink(run_one(jobs[i]));
        return;
    }

    std::atomic<std::size_t> next{skip};
    std::atomic<bool> stop{false};
    std::mutex mutex;
    std::map<std::size_t, LearningCurveRecord> pending;
    std::size_t emit = skip;
    std::exception_ptr failure;

    auto worker = [&] {
        while (!stop.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                auto record = run_one(jobs[i]);
                std::lock_guard lock(mutex);
                pending.emplace(i, std::move(record));
                for (auto it = pending.find(emit); it != pending.end(); it = pending.find(emit)) {
                    sink(it->second);
                    pending.erase(it);
                    ++emit;
                }
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) failure = std::current_exception();
                stop = true;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<LearningCurveRecord> read_records(const fs::path& jsonl) {
    std::ifstream in(jsonl);
    if (!in) throw ConfigError("results file not found: " + jsonl.string());
    std::vector<LearningCurveRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(record_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw IngestionError(jsonl.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void write_rank_csv(const RankSummary& summary, std::ostream& out) {
    out << "strategy,overall_mean_rank,wtl_001,wtl_01,wtl_05\n";
    for (const auto& [strategy, rank] : summary.overall_mean_rank) {
        out << strategy << ',' << std::setprecision(10) << rank;
        auto it = std::find_if(summary.reference_record.begin(), summary.reference_record.end(),
                               [&](const auto& p) { return p.first == strategy; });
        for (std::size_t l = 0; l < 3; ++l) {
            out << ',';
            if (it != summary.reference_record.end())
                out << it->second[l].wins << '/' << it->second[l].ties << '/' << it->second[l].losses;
        }
        out << '\n';
    }
}

namespace {

void write_summaries(const std::vector<LearningCurveRecord>& records, const std::string& reference,
                     const fs::path& out_dir) {
    const auto summary = summarize(records, reference);
    std::ofstream s(out_dir / kSummaryFile);
    write_summary_csv(summary, s);
    std::ofstream r(out_dir / kRanksFile);
    write_rank_csv(summary, r);
}

}  // namespace

void cmd_run(const RunConfig& config) {
    config.validate();
    const auto strategies = config.expanded_strategies();
    const auto datasets = resolve_datasets(config);
    const auto jobs = plan_jobs(datasets.size(), strategies.size(), config.repetitions);

    fs::create_directories(config.out);
    const fs::path results = config.out / kResultsFile;
    const fs::path marker = config.out / kResumeMarker;
    const std::string identity = identity_of(config).dump();

    // Resume: keep the longest prefix of existing records that matches the plan.
    std::vector<LearningCurveRecord> kept;
    if (fs::exists(marker) && fs::exists(results) && read_file(marker) == identity) {
        std::ifstream in(results);
        std::string line;
        while (kept.size() < jobs.size() && std::getline(in, line)) {
            LearningCurveRecord r;
            try {
                r = record_from_json(json::parse(line));
            } catch (const json::exception&) {
                break;  // torn last line
            }
            const auto& job = jobs[kept.size()];
            if (r.dataset != datasets[job.dataset].name || r.strategy != strategies[job.strategy].label() ||
                r.repetition != job.repetition || r.seed != config.seed)
                break;
            kept.push_back(std::move(r));
        }
        if (!kept.empty()) std::cerr << "resuming after " << kept.size() << " of " << jobs.size() << " records\n";
    }

    write_file(marker, identity);
    write_file(config.out / kConfigEcho, to_json(config).dump(2) + "\n");
    {
        std::ofstream out(results, std::ios::trunc);
        for (const auto& r : kept) out << to_json(r).dump() << '\n';
    }

    std::ofstream out(results, std::ios::app);
    if (!out) throw ConfigError("cannot write '" + results.string() + "'");
    std::size_t done = kept.size();
    run_jobs(datasets, strategies, config,
             [&](const LearningCurveRecord& r) {
                 out << to_json(r).dump() << '\n';
                 out.flush();
                 ++done;
             },
             kept.size());
    out.close();

    write_summaries(read_records(results), config.reference, config.out);
    fs::remove(marker);
    std::cerr << "wrote " << done << " records to " << results.string() << '\n';
}

void cmd_report(const fs::path& results, const std::string& reference, const fs::path& out_dir) {
    const auto records = read_records(results);
    if (records.empty()) throw ConfigError("no records in " + results.string());
    fs::create_directories(out_dir);
    write_summaries(records, reference, out_dir);
}

Landscape compute_landscape(const Dataset& data, const StrategyConfig& strategy, LabelMode mode,
                            std::size_t n_labels, std::size_t resolution, std::uint64_t seed, double margin) {
    if (data.n_features != 2 || data.kind != FeatureKind::Numeric)
        throw InputError("landscape needs a 2-D numeric dataset, got " + std::to_string(data.n_features) +
                         " feature(s) of kind " + std::string(to_string(data.kind)));
    if (resolution < 2) throw InputError("landscape grid resolution must be at least 2");
    if (strategy.kind == StrategyKind::Rand) throw ConfigError("rand has no usefulness field");
    if (strategy.kind == StrategyKind::GreedyAll) throw ConfigError("greedy-all cannot score grid points");
    strategy.validate();

    auto [standardized, stats] = z_standardize(data);
    const KernelSpec kspec = default_kernel(FeatureKind::Numeric, data.n_rows, 2);
    KernelMatrix kernel = build_kernel_matrix(standardized, kspec);
    ActivePool pool(std::move(kernel), data.n_classes, standardized.labels, standardized);

    StrategyConfig config = strategy;
    config.seed = seed;
    Rng rng = make_rng({seed, salt::landscape});
    const std::size_t n_acquire = std::min(n_labels, data.n_rows);

    Landscape out;
    auto note = [&](std::size_t row) {
        const auto r = data.row(row);
        out.labeled.push_back({r[0], r[1], data.labels[row], row});
    };
    if (mode == LabelMode::Random) {
        std::vector<std::size_t> perm(data.n_rows);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t i = 0; i < n_acquire; ++i) {
            pool.acquire(perm[i], data.labels[perm[i]]);
            note(perm[i]);
        }
    } else {
        for (std::size_t i = 0; i < n_acquire; ++i) {
            const std::size_t idx = select(config, pool.view(), rng, i);
            pool.acquire(idx, data.labels[idx]);
            note(idx);
        }
    }

    std::array<double, 2> lo{}, hi{};
    for (std::size_t d = 0; d < 2; ++d) {
        lo[d] = hi[d] = data.row(0)[d];
        for (std::size_t i = 1; i < data.n_rows; ++i) {
            lo[d] = std::min(lo[d], data.row(i)[d]);
            hi[d] = std::max(hi[d], data.row(i)[d]);
        }
        const double pad = margin * (hi[d] - lo[d]);
        lo[d] -= pad;
        hi[d] += pad;
    }

    Dataset grid;
    grid.kind = FeatureKind::Numeric;
    grid.n_features = 2;
    grid.n_rows = resolution * resolution;
    grid.n_classes = data.n_classes;
    grid.features.resize(grid.n_rows * 2);
    out.grid.resize(grid.n_rows);
    const double steps = static_cast<double>(resolution - 1);
    for (std::size_t iy = 0; iy < resolution; ++iy)
        for (std::size_t ix = 0; ix < resolution; ++ix) {
            const std::size_t g = iy * resolution + ix;
            const double x = lo[0] + (hi[0] - lo[0]) * static_cast<double>(ix) / steps;
            const double y = lo[1] + (hi[1] - lo[1]) * static_cast<double>(iy) / steps;
            out.grid[g].x = grid.features[2 * g] = x;
            out.grid[g].y = grid.features[2 * g + 1] = y;
        }
    stats.apply(grid);

    const PoolView view = pool.view();
    std::optional<Committee> committee;
    if (config.kind == StrategyKind::Qbc) committee = Committee::build(view, config.committee_size, seed, n_acquire);
    const Committee* cp = committee ? &*committee : nullptr;

    const auto n = static_cast<std::ptrdiff_t>(grid.n_rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t g = 0; g < n; ++g) {
        const auto gi = static_cast<std::size_t>(g);
        const auto cand = Candidate::external(view, grid.row(gi));
        out.grid[gi].score = score_candidate(config, view, cand, cp);
    }
    return out;
}

std::vector<ScalingRow> measure_scaling(const std::vector<std::size_t>& sizes,
                                        const std::vector<std::size_t>& class_counts,
                                        const std::vector<StrategyConfig>& strategies, std::size_t budget,
                                        std::uint64_t seed, std::size_t repeats, RiskMode mode) {
    if (budget < 1) throw ConfigError("scaling budget must be at least 1");
    if (repeats < 1) throw ConfigError("scaling repeats must be at least 1");
    for (const auto& s : strategies) s.validate();

    using clock = std::chrono::steady_clock;
    std::vector<ScalingRow> rows;
    for (auto n : sizes)
        for (auto c : class_counts) {
            const Dataset blobs = synthetic_blobs(n, c, derive_seed({seed, n, c}));
            auto [data, stats] = z_standardize(blobs);
            (void)stats;
            const KernelSpec kspec = default_kernel(FeatureKind::Numeric, data.n_rows, data.n_features);
            const KernelMatrix kernel = build_kernel_matrix(data, kspec);
            const std::size_t steps = std::min(budget, data.n_rows);

            for (const auto& strategy : strategies) {
                ScalingRow row;
                row.strategy = strategy.label();
                row.n = n;
                row.c = c;
                double best = 0.0;
                for (std::size_t rep = 0; rep < repeats; ++rep) {
                    ActivePool pool(kernel, c, data.labels, data);
                    StrategyConfig config = strategy;
                    config.seed = derive_seed({seed, n, c, rep});
                    Rng rng = make_rng({config.seed, salt::select});
                    SelectOptions sel;
                    sel.mode = mode;
                    LossCounter counter;
                    if (rep == 0) sel.counter = &counter;
                    double total = 0.0;
                    for (std::size_t step = 0; step < steps; ++step) {
                        if (rep == 0) row.candidates_scored += pool.state().candidates().size();
                        const auto t0 = clock::now();
                        const std::size_t idx = select(config, pool.view(), rng, step, sel);
                        pool.acquire(idx, data.labels[idx]);
                        total += std::chrono::duration<double>(clock::now() - t0).count();
                    }
                    const double mean = total / static_cast<double>(steps);
                    best = rep == 0 ? mean : std::min(best, mean);
                    if (rep == 0) row.counter = counter;
                }
                row.seconds_per_acquisition = best;
                rows.push_back(std::move(row));
            }
        }
    return rows;
}

namespace {

std::vector<StrategyConfig> strategies_from_list(const std::string& text) {
    std::vector<StrategyConfig> out;
    for (const auto& name : split_list(text)) out.push_back(parse_strategy(json(name)));
    if (out.empty()) throw ConfigError("empty strategy list");
    return out;
}

Dataset load_single_dataset(const std::string& name, const RunConfig& base, std::size_t blob_n,
                            std::size_t blob_c, std::uint64_t seed) {
    if (name == "blobs") return synthetic_blobs(blob_n, blob_c, derive_seed({seed, salt::blobs}));
    RunConfig c = base;
    c.datasets = {name};
    return resolve_datasets(c).front();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pool-based active learning benchmark"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run the benchmark grid and write records and summaries");
    std::string config_path, datasets_text, strategies_text, alpha_text, out_dir, label_column, manifest, reference;
    std::size_t reps = 0, budget = 0, workers = 0;
    std::uint64_t seed = 0;
    bool stratified = false;
    run->add_option("--config", config_path, "JSON config file; flags override its fields");
    run->add_option("--manifest", manifest, "dataset manifest (default data/manifest.json)");
    run->add_option("--datasets", datasets_text, "comma list of manifest names or CSV paths");
    run->add_option("--strategies", strategies_text, "comma list: xpal,pal,eer,us,qbc,rand,greedy-all");
    run->add_option("--reps", reps, "repetitions (default 100)");
    run->add_option("--budget", budget, "labels to acquire (default 200)");
    run->add_option("--alpha", alpha_text, "xpal prior; a comma list runs one xpal per value");
    run->add_option("--seed", seed, "master seed");
    run->add_option("--workers", workers, "parallel jobs (default $AL_LAB_WORKERS or 1)");
    run->add_option("--out", out_dir, "output directory (default results)");
    run->add_flag("--stratified", stratified, "stratify the train/test split");
    run->add_option("--label-column", label_column, "label column name or 0-based index (default class)");
    run->add_option("--reference", reference, "reference strategy for the tests (default xpal)");

    // report
    auto* report = app.add_subcommand("report", "re-summarize an existing results.jsonl");
    std::string report_in, report_out = ".", report_ref = "xpal";
    report->add_option("results", report_in, "results.jsonl")->required();
    report->add_option("--out", report_out, "output directory");
    report->add_option("--reference", report_ref, "reference strategy");

    // landscape
    auto* land = app.add_subcommand("landscape", "usefulness field of a strategy over a 2-D dataset");
    std::string land_dataset = "blobs", land_strategy = "xpal", land_mode = "random", land_out = "landscape";
    std::string land_manifest = "data/manifest.json", land_label = "class";
    std::size_t land_labels = 8, land_grid = 50, blob_n = 100, blob_c = 2;
    std::uint64_t land_seed = 0;
    double land_alpha = kDefaultAlpha;
    land->add_option("--dataset", land_dataset, "2-D CSV path, manifest name, or 'blobs'");
    land->add_option("--manifest", land_manifest, "dataset manifest");
    land->add_option("--label-column", land_label, "label column name or index");
    land->add_option("--strategy", land_strategy, "strategy to evaluate");
    land->add_option("--alpha", land_alpha, "xpal prior");
    land->add_option("--mode", land_mode, "how the labeled points are chosen: random or strategy")
        ->check(CLI::IsMember({"random", "strategy"}));
    land->add_option("--labels", land_labels, "number of labeled points (default 8)");
    land->add_option("--grid", land_grid, "grid resolution per axis (default 50)");
    land->add_option("--blob-size", blob_n, "instances for --dataset blobs");
    land->add_option("--blob-classes", blob_c, "classes for --dataset blobs");
    land->add_option("--seed", land_seed, "seed");
    land->add_option("--out", land_out, "output directory");

    // scaling
    auto* scale = app.add_subcommand("scaling", "time per acquisition on synthetic blobs");
    std::string sizes_text = "500,1000,1500", classes_text = "2,4,6", scale_strategies = "xpal,eer,us";
    std::string scale_out = "scaling";
    std::size_t scale_budget = 5, scale_repeats = 1;
    std::uint64_t scale_seed = 0;
    scale->add_option("--sizes", sizes_text, "comma list of instance counts");
    scale->add_option("--classes", classes_text, "comma list of class counts");
    scale->add_option("--strategies", scale_strategies, "comma list of strategies");
    scale->add_option("--budget", scale_budget, "acquisitions timed per configuration");
    scale->add_option("--repeats", scale_repeats, "repeats; the fastest mean is reported");
    scale->add_option("--seed", scale_seed, "seed");
    scale->add_option("--out", scale_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) {
            RunConfig config;
            config.workers = env_workers();
            config.strategies = {StrategyConfig{}};
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw ConfigError("config file not found: " + config_path);
                json j;
                try {
                    in >> j;
                } catch (const json::exception& e) {
                    throw ConfigError("config " + config_path + ": " + e.what());
                }
                config = config_from_json(j, config);
            }
            if (run->count("--manifest")) config.manifest = manifest;
            if (run->count("--datasets")) config.datasets = split_list(datasets_text);
            if (run->count("--strategies")) config.strategies = strategies_from_list(strategies_text);
            if (run->count("--reps")) config.repetitions = reps;
            if (run->count("--budget")) config.budget = budget;
            if (run->count("--alpha")) {
                config.alpha_sweep.clear();
                for (const auto& a : split_list(alpha_text)) config.alpha_sweep.push_back(parse_double(a, "alpha"));
                if (config.alpha_sweep.size() == 1) {
                    for (auto& s : config.strategies) s.alpha = config.alpha_sweep.front();
                    config.alpha_sweep.clear();
                }
            }
            if (run->count("--seed")) config.seed = seed;
            if (run->count("--workers")) config.workers = workers;
            if (run->count("--out")) config.out = out_dir;
            if (run->count("--stratified")) config.stratified = stratified;
            if (run->count("--label-column")) config.label_column = label_column;
            if (run->count("--reference")) config.reference = reference;
            cmd_run(config);
        } else if (*report) {
            cmd_report(report_in, report_ref, report_out);
        } else if (*land) {
            RunConfig base;
            base.manifest = land_manifest;
            base.label_column = land_label;
            const Dataset data = load_single_dataset(land_dataset, base, blob_n, blob_c, land_seed);
            StrategyConfig strategy = parse_strategy(json(land_strategy));
            strategy.alpha = land_alpha;
            const auto result = compute_landscape(data, strategy, land_mode == "random" ? LabelMode::Random
                                                                                        : LabelMode::Strategy,
                                                  land_labels, land_grid, land_seed);
            fs::create_directories(land_out);
            std::ofstream g(fs::path(land_out) / "grid.csv");
            g << "x,y,score\n" << std::setprecision(10);
            for (const auto& p : result.grid) g << p.x << ',' << p.y << ',' << p.score << '\n';
            std::ofstream l(fs::path(land_out) / "labeled.csv");
            l << "x,y,label,row\n" << std::setprecision(10);
            for (const auto& p : result.labeled)
                l << p.x << ',' << p.y << ',' << data.class_names.at(static_cast<std::size_t>(p.label)) << ','
                  << p.row << '\n';
        } else if (*scale) {
            std::vector<std::size_t> sizes, classes;
            for (const auto& s : split_list(sizes_text)) sizes.push_back(parse_size(s, "size"));
            for (const auto& s : split_list(classes_text)) classes.push_back(parse_size(s, "class count"));
            const auto rows = measure_scaling(sizes, classes, strategies_from_list(scale_strategies), scale_budget,
                                              scale_seed, scale_repeats);
            fs::create_directories(scale_out);
            std::ofstream o(fs::path(scale_out) / "scaling.csv");
            o << "strategy,n,c,seconds_per_acquisition\n" << std::setprecision(6);
            for (const auto& r : rows) o << r.strategy << ',' << r.n << ',' << r.c << ',' << r.seconds_per_acquisition << '\n';
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IngestionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace al::cli
