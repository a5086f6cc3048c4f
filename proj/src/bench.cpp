#include "due/bench.hpp"

#include "due/text_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>

namespace due {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base, const std::string& value) {
    fs::path p(value);
    return p.is_absolute() ? p : base / p;
}

void reject_unused(const KeyValueFile& kv) {
    if (const auto unused = kv.unused_keys(); !unused.empty()) {
        throw ConfigError(fmt::format("{}: unknown key '{}'", kv.source(), unused.front()));
    }
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError(fmt::format("cannot write {}", p.string()));
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Values of each category on the slots whose day is not excluded.
std::map<Category, std::vector<double>> scored_values(const std::map<Category, SampledSeries>& series,
                                                      const std::set<std::int64_t>& excluded_days) {
    std::map<Category, std::vector<double>> out;
    for (const auto& [c, s] : series) {
        auto& v = out[c];
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (excluded_days.count(days_since_epoch(date_of(s.time_at(i)))) == 0) v.push_back(s.values[i]);
        }
    }
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ActivityModel ModelSource::build() const {
    if (model_path) return ActivityModel::load_file(model_path->string());
    if (diary_path) return ActivityModel::estimate(load_diary(diary_path->string()));
    return ActivityModel::estimate(
        generate_synthetic_diary(full_synthetic_config(synthetic_persons, synthetic_days, synthetic_seed)));
}

ModelSource read_model_source(const KeyValueFile& kv, const fs::path& base) {
    ModelSource m;
    if (const auto v = kv.get("model.path")) m.model_path = resolve(base, *v);
    if (const auto v = kv.get("model.diary")) m.diary_path = resolve(base, *v);
    if (m.model_path && m.diary_path) throw ConfigError("give either model.path or model.diary, not both");
    m.synthetic_persons = static_cast<int>(kv.get_int("model.synthetic_persons", m.synthetic_persons));
    m.synthetic_days = static_cast<int>(kv.get_int("model.synthetic_days", m.synthetic_days));
    const auto seed = kv.get_int("model.synthetic_seed", static_cast<long long>(m.synthetic_seed));
    if (seed < 0) throw ConfigError("model.synthetic_seed must be non-negative");
    m.synthetic_seed = static_cast<std::uint64_t>(seed);
    if (m.synthetic_persons < 1 || m.synthetic_days < 1) throw ConfigError("synthetic model needs persons and days >= 1");
    return m;
}

void RunConfig::validate() const {
    engine.validate();
    if (algorithms.empty()) throw ConfigError("algorithms must name at least one of due, co");
    for (const auto& a : algorithms) {
        if (a != "due" && a != "co") throw ConfigError(fmt::format("unknown algorithm '{}'", a));
    }
    if (co_levels < 1) throw ConfigError("co.levels must be >= 1");
    if (co_continuity < 0.0) throw ConfigError("co.continuity must be >= 0");
    if (!(on_threshold > 0.0)) throw ConfigError("on_threshold must be positive");
    if (train_days.has_value() != test_days.has_value()) throw ConfigError("give both split.train_days and split.test_days");
}

RunConfig load_run_config(const fs::path& path) {
    const auto kv = KeyValueFile::load(path);
    const auto base = path.parent_path();
    RunConfig c;
    c.dataset_dir = resolve(base, kv.require("dataset.dir"));
    c.channel_map = kv.get("dataset.channel_map") ? resolve(base, *kv.get("dataset.channel_map"))
                                                   : c.dataset_dir / "channel_map.csv";
    c.household = resolve(base, kv.require("household"));
    c.model = read_model_source(kv, base);
    c.engine = read_engine_config(kv, "engine.");
    if (const auto s = kv.get("seed")) {
        const auto v = parse_int(*s, "seed");
        if (v < 0) throw ConfigError("seed must be non-negative");
        c.engine.seed = static_cast<std::uint64_t>(v);
    }
    if (const auto a = kv.get("algorithms")) {
        c.algorithms.clear();
        for (auto name : split(*a, ',')) {
            if (!trim(name).empty()) c.algorithms.emplace_back(trim(name));
        }
    }
    if (kv.has("split.train_days")) c.train_days = static_cast<int>(kv.get_int("split.train_days", 0));
    if (kv.has("split.test_days")) c.test_days = static_cast<int>(kv.get_int("split.test_days", 0));
    c.co_levels = static_cast<int>(kv.get_int("co.levels", c.co_levels));
    c.co_continuity = kv.get_double("co.continuity", c.co_continuity);
    c.exclude_degraded = kv.get_bool("exclude_degraded", c.exclude_degraded);
    c.on_threshold = kv.get_double("on_threshold", c.on_threshold);
    if (const auto o = kv.get("out")) c.out = resolve(base, *o);
    reject_unused(kv);
    c.validate();
    return c;
}

RunOutcome cmd_run(const RunConfig& config) {
    config.validate();
    const auto household = load_household(config.household);
    const auto map = load_channel_map(config.channel_map);
    const auto data = load_channels(config.dataset_dir, map);

    RunOutcome outcome;
    outcome.warnings = data.warnings;
    outcome.split = config.train_days ? Split{*config.train_days, *config.test_days} : default_split(data.days());
    const auto [train, test] = split_train_test(data, outcome.split.train_days, outcome.split.test_days);

    std::set<std::int64_t> excluded_test, excluded_train;
    if (config.exclude_degraded) {
        for (auto d : test.degraded_days) excluded_test.insert(days_since_epoch(d));
        for (auto d : train.degraded_days) excluded_train.insert(days_since_epoch(d));
    }
    const auto truths = scored_values(test.categories, excluded_test);
    if (!truths.empty() && truths.begin()->second.empty()) throw DataError("every test day is degraded");

    for (const auto& algo : config.algorithms) {
        Timing timing{algo};
        std::map<Category, SampledSeries> estimate;
        if (algo == "due") {
            const auto model = config.model.build();
            const auto t0 = std::chrono::steady_clock::now();
            const auto result = disaggregate(test.aggregate, household, model, config.engine);
            timing.test_seconds = seconds_since(t0);
            for (auto c : kAllCategories) estimate[c] = result.category(c);
            for (const auto& w : result.warnings) outcome.warnings.push_back("due: " + w);
        } else {
            auto t0 = std::chrono::steady_clock::now();
            const auto basis = train_co(
                [&] {
                    std::map<Category, SampledSeries> gt;
                    for (const auto& [c, v] : scored_values(train.categories, excluded_train)) {
                        gt[c] = SampledSeries(train.aggregate.start, kMeasurementStep, v);
                    }
                    return gt;
                }(),
                config.co_levels);
            timing.train_seconds = seconds_since(t0);
            t0 = std::chrono::steady_clock::now();
            CoOptions options;
            options.continuity_penalty = config.co_continuity;
            estimate = disaggregate_co(test.aggregate, basis, options);
            timing.test_seconds = seconds_since(t0);
        }
        outcome.reports.push_back(evaluate(algo, scored_values(estimate, excluded_test), truths, config.on_threshold));
        outcome.timings.push_back(timing);
        outcome.estimates[algo] = std::move(estimate);
    }

    fs::create_directories(config.out);
    {
        auto out = open_out(config.out / "metrics.tsv");
        write_metrics_tsv(out, outcome.reports);
    }
    {
        auto out = open_out(config.out / "metrics.json");
        write_metrics_json(out, outcome.reports);
    }
    {
        auto out = open_out(config.out / "energy_share.tsv");
        write_energy_share_tsv(out, outcome.reports);
    }
    for (const auto& [algo, series] : outcome.estimates) {
        auto out = open_out(config.out / fmt::format("estimates_{}.csv", algo));
        write_estimates_csv(out, series);
    }
    {
        auto out = open_out(config.out / "timing.tsv");
        out << "algorithm\ttrain_days\ttest_days\ttrain_seconds\ttest_seconds\n";
        for (const auto& t : outcome.timings) {
            out << t.algorithm << '\t' << outcome.split.train_days << '\t' << outcome.split.test_days << '\t'
                << fmt::format("{:.3f}", t.train_seconds) << '\t' << fmt::format("{:.3f}", t.test_seconds) << '\n';
        }
    }
    return outcome;
}

void SimulateConfig::validate() const { simulation.validate(); }

SimulateConfig load_simulate_config(const fs::path& path) {
    const auto kv = KeyValueFile::load(path);
    const auto base = path.parent_path();
    SimulateConfig c;
    c.household = resolve(base, kv.require("household"));
    c.model = read_model_source(kv, base);
    if (const auto s = kv.get("simulation.start")) c.simulation.start = parse_date(*s);
    c.simulation.days = static_cast<int>(kv.get_int("simulation.days", c.simulation.days));
    c.simulation.unoccupied_probability =
        kv.get_double("simulation.unoccupied_probability", c.simulation.unoccupied_probability);
    c.simulation.base_standby = kv.get_double("simulation.base_standby", c.simulation.base_standby);
    if (const auto s = kv.get("seed")) {
        const auto v = parse_int(*s, "seed");
        if (v < 0) throw ConfigError("seed must be non-negative");
        c.simulation.seed = static_cast<std::uint64_t>(v);
    }
    if (const auto o = kv.get("out")) c.out = resolve(base, *o);
    reject_unused(kv);
    c.validate();
    return c;
}

SimulationResult cmd_simulate(const SimulateConfig& config) {
    config.validate();
    const auto household = load_household(config.household);
    const auto model = config.model.build();
    auto result = simulate_household(household, model, config.simulation);

    fs::create_directories(config.out);
    ChannelMap map;
    for (auto c : kAllCategories) {
        const auto name = lower(to_string(c));
        map.entries.push_back({name, name, c});
        auto out = open_out(config.out / (name + ".csv"));
        write_channel(out, result.per_category[index_of(c)]);
    }
    map.entries.push_back({"aggregate", "mains", std::nullopt});
    std::sort(map.entries.begin(), map.entries.end(),
              [](const ChannelMapping& a, const ChannelMapping& b) { return a.channel < b.channel; });
    {
        auto out = open_out(config.out / "aggregate.csv");
        write_channel(out, result.aggregate);
    }
    {
        auto out = open_out(config.out / "channel_map.csv");
        write_channel_map(out, map);
    }
    {
        auto out = open_out(config.out / "household.profile");
        write_household(out, household);
    }
    model.save_file((config.out / "activity_model.txt").string());
    {
        auto out = open_out(config.out / "run.conf");
        out << "# Benchmark run over this simulated dataset.\n"
            << "dataset.dir = .\n"
            << "household = household.profile\n"
            << "model.path = activity_model.txt\n"
            << "algorithms = due, co\n"
            << "seed = " << config.simulation.seed << '\n'
            << "out = reports\n";
    }
    return result;
}

void describe_model(std::ostream& out, const ActivityModel& model) {
    out << "stratum\tinitial_n\tinitial_fallback\ttransition_rows\tduration_cells\n";
    std::vector<std::size_t> rows(kStratumCount, 0);
    for (const auto& [key, counts] : model.transitions().rows()) ++rows[key / (kSlotsPerDay * kActivityCount)];
    for (std::size_t i = 0; i < kStratumCount; ++i) {
        const auto s = Stratum::from_index(i);
        std::size_t cells = 0;
        for (std::size_t a = 0; a < kActivityCount; ++a) {
            cells += model.durations().stats(s, from_index<ActivityState>(a)).count > 0 ? 1 : 0;
        }
        out << to_string(s.employment) << '/' << to_string(s.age_group) << '/' << to_string(s.day_type) << '\t'
            << model.initial().total(s) << '\t' << to_string(model.initial().resolve(s).level) << '\t' << rows[i] << '\t'
            << cells << '\n';
    }
    out << "total_transition_rows\t" << model.transitions().observed_rows() << '\n';
}

void write_estimates_csv(std::ostream& out, const std::map<Category, SampledSeries>& series) {
    out << "epoch_seconds";
    for (const auto& [c, s] : series) out << ',' << to_string(c);
    out << '\n';
    if (series.empty()) return;
    const auto& first = series.begin()->second;
    for (std::size_t i = 0; i < first.size(); ++i) {
        out << first.time_at(i);
        for (const auto& [c, s] : series) out << ',' << format_number(s.values.at(i));
        out << '\n';
    }
}

}  // namespace due
