#include "al/harness.hpp"

#include "al/error.hpp"
#include "al/rng.hpp"
#include "al/scoring.hpp"

#include <algorithm>
#include <chrono>

namespace al {

nlohmann::json to_json(const LearningCurveRecord& record) {
    return nlohmann::json{{"dataset", record.dataset},
                          {"strategy", record.strategy},
                          {"repetition", record.repetition},
                          {"seed", record.seed},
                          {"errors", record.errors}};
}

LearningCurveRecord record_from_json(const nlohmann::json& j) {
    LearningCurveRecord r;
    r.dataset = j.at("dataset").get<std::string>();
    r.strategy = j.at("strategy").get<std::string>();
    r.repetition = j.at("repetition").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.errors = j.at("errors").get<std::vector<double>>();
    return r;
}

std::uint64_t job_seed(std::uint64_t seed, std::uint64_t repetition, const StrategyConfig& strategy) {
    return derive_seed({seed, repetition, hash_name(strategy.label())});
}

LearningCurveRecord run_experiment(const Dataset& dataset, const StrategyConfig& strategy, const SplitSpec& spec,
                                   std::size_t budget, const ExperimentOptions& options) {
    strategy.validate();
    if (budget < 1) throw InputError("budget must be at least 1");

    Split parts = split(dataset, spec);
    Dataset train = std::move(parts.train);
    Dataset test = std::move(parts.test);
    if (dataset.kind == FeatureKind::Numeric) {
        auto [standardized, stats] = z_standardize(train);
        train = std::move(standardized);
        stats.apply(test);
    }

    const KernelSpec kspec = default_kernel(dataset.kind, train.n_rows, train.n_features);
    KernelMatrix kernel = options.parallel_scoring ? build_kernel_matrix(train, kspec)
                                                   : reference::build_kernel_matrix_serial(train, kspec);
    const DenseMatrix cross = build_cross_kernel(test, train, kspec);

    const std::size_t n_classes = dataset.n_classes;
    const std::vector<int> train_labels = train.labels;
    ActivePool pool(std::move(kernel), n_classes, train_labels, std::move(train));
    FrequencyTable test_freq(test.n_rows, n_classes);

    StrategyConfig config = strategy;
    config.seed = job_seed(spec.seed, spec.repetition, strategy);
    Rng rng = make_rng({config.seed, salt::select});

    SelectOptions sel;
    sel.parallel = options.parallel_scoring;
    sel.mode = options.mode;
    if (options.trace) {
        sel.counter = &options.trace->loss_counter;
        options.trace->kernel = kspec;
        options.trace->train_rows = parts.train_rows;
        options.trace->test_rows = parts.test_rows;
    }

    LearningCurveRecord record;
    record.dataset = dataset.name;
    record.strategy = strategy.label();
    record.repetition = spec.repetition;
    record.seed = spec.seed;

    const std::size_t steps = std::min(budget, pool.state().pool_size());
    record.errors.reserve(steps);
    using clock = std::chrono::steady_clock;
    for (std::size_t round = 0; round < steps; ++round) {
        const auto t0 = clock::now();
        const std::size_t chosen = select(config, pool.view(), rng, round, sel);
        const int label = train_labels[chosen];  // simulated oracle
        pool.acquire(chosen, label);
        const auto t1 = clock::now();

        test_freq.add([&](std::size_t t) { return cross(t, chosen); }, label);
        std::size_t wrong = 0;
        for (std::size_t t = 0; t < test.n_rows; ++t) wrong += (test_freq.prediction(t) != test.labels[t]) ? 1 : 0;
        record.errors.push_back(test.n_rows ? static_cast<double>(wrong) / static_cast<double>(test.n_rows) : 0.0);

        if (options.trace) {
            options.trace->acquisition_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
            options.trace->selected.push_back(chosen);
        }
    }
    return record;
}

}  // namespace al
