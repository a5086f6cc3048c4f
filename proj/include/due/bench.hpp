#pragma once

// Benchmark harness behind the `due` command: config files, the run and
// simulate pipelines, and report writing.

#include "due/co_baseline.hpp"
#include "due/engine.hpp"
#include "due/ingest.hpp"
#include "due/metrics.hpp"
#include "due/simulator.hpp"

#include <filesystem>

namespace due {

/// Where the activity model comes from: a saved model, a diary CSV, or the
/// built-in synthetic diary generator (the default).
struct ModelSource {
    std::optional<std::filesystem::path> model_path;
    std::optional<std::filesystem::path> diary_path;
    int synthetic_persons = 10;
    int synthetic_days = 28;
    std::uint64_t synthetic_seed = 42;

    ActivityModel build() const;
};

/// Reads model.path, model.diary, model.synthetic_persons, model.synthetic_days,
/// model.synthetic_seed. Paths are resolved against `base`.
ModelSource read_model_source(const KeyValueFile& kv, const std::filesystem::path& base);

struct RunConfig {
    std::filesystem::path dataset_dir;
    std::filesystem::path channel_map;
    std::filesystem::path household;
    ModelSource model;
    EngineConfig engine;
    std::vector<std::string> algorithms{"due", "co"};
    std::optional<int> train_days;
    std::optional<int> test_days;
    int co_levels = 3;
    double co_continuity = 0.0;
    bool exclude_degraded = true;
    double on_threshold = kDefaultOnThreshold;
    std::filesystem::path out = "reports";

    void validate() const;
};

/// Flat `key = value` file; unknown keys are a ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);

struct Timing {
    std::string algorithm;
    double train_seconds = 0.0;
    double test_seconds = 0.0;
};

struct RunOutcome {
    std::vector<MetricReport> reports;
    std::vector<Timing> timings;
    std::map<std::string, std::map<Category, SampledSeries>> estimates;
    std::vector<std::string> warnings;
    Split split;
};

/// Trains CO on the train window, runs every algorithm on the test window,
/// scores them on the non-degraded test days and writes the reports to
/// `config.out`: metrics.tsv, metrics.json, estimates_<algo>.csv,
/// energy_share.tsv, timing.tsv.
RunOutcome cmd_run(const RunConfig& config);

struct SimulateConfig {
    std::filesystem::path household;
    ModelSource model;
    SimulationConfig simulation;
    std::filesystem::path out = "simulated";

    void validate() const;
};

SimulateConfig load_simulate_config(const std::filesystem::path& path);

/// Writes one 60 s channel per category, aggregate.csv (ignored by the map),
/// channel_map.csv, household.profile, activity_model.txt and run.conf, a
/// run config pointing at them.
SimulationResult cmd_simulate(const SimulateConfig& config);

/// Per-stratum summary of a model: observed rows, fallback use, durations.
void describe_model(std::ostream& out, const ActivityModel& model);

/// `epoch_seconds,<category>...` for every category in the map.
void write_estimates_csv(std::ostream& out, const std::map<Category, SampledSeries>& series);

}  // namespace due
