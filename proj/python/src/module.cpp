// Python bindings: the run and simulate pipelines, a one-shot disaggregation
// of an in-memory series, the appliance table and the scores.

#include "due/bench.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;

namespace {

std::map<due::Category, std::vector<double>> to_category_map(const std::map<std::string, std::vector<double>>& in) {
    std::map<due::Category, std::vector<double>> out;
    for (const auto& [name, values] : in) out[due::parse_category(name)] = values;
    return out;
}

py::object score(const due::Score& s) { return s ? py::object(py::float_(*s)) : py::object(py::none()); }

py::dict run(const std::filesystem::path& config, std::optional<std::uint64_t> seed,
             std::optional<std::filesystem::path> out) {
    auto c = due::load_run_config(config);
    if (seed) c.engine.seed = *seed;
    if (out) c.out = *out;
    const auto outcome = due::cmd_run(c);
    py::dict result;
    for (const auto& r : outcome.reports) result[py::str(r.algorithm)] = score(r.overall_est_acc);
    return result;
}

py::dict simulate(const std::filesystem::path& config, std::optional<std::uint64_t> seed,
                  std::optional<std::filesystem::path> out) {
    auto c = due::load_simulate_config(config);
    if (seed) c.simulation.seed = *seed;
    if (out) c.out = *out;
    const auto result = due::cmd_simulate(c);
    py::dict d;
    d["days"] = c.simulation.days;
    d["pulses"] = result.pulses.size();
    d["out"] = c.out;
    return d;
}

py::dict disaggregate(const std::vector<double>& values, std::int64_t start, const std::filesystem::path& household,
                      std::uint64_t seed, double tolerance, int max_iterations) {
    const auto profile = due::load_household(household);
    const auto model = due::ModelSource{}.build();
    due::EngineConfig config;
    config.seed = seed;
    config.tolerance = tolerance;
    config.max_iterations = max_iterations;
    config.validate();
    const auto result = due::disaggregate(due::SampledSeries(start, due::kMeasurementStep, values), profile, model, config);
    py::dict out;
    for (std::size_t i = 0; i < due::kCategoryCount; ++i) {
        const auto c = due::from_index<due::Category>(i);
        out[py::str(std::string(due::to_string(c)))] = result.per_category[i].values;
    }
    return out;
}

py::list appliance_table() {
    py::list rows;
    for (const auto& a : due::default_appliance_table()) {
        py::dict row;
        row["name"] = std::string(a.name());
        row["category"] = std::string(due::to_string(a.category));
        row["nominal_power"] = a.nominal_power;
        row["beta1"] = a.beta1;
        row["beta2"] = a.beta2;
        row["beta3"] = a.beta3;
        row["tau"] = a.tau;
        rows.append(row);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "DUE load disaggregation";

    // Later registrations are tried first, so the subclasses win over Error.
    const auto error = py::register_exception<due::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<due::ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<due::DataError>(m, "DataError", error.ptr());
    py::register_exception<due::InvariantError>(m, "InvariantError", error.ptr());

    m.def("categories", [] {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < due::kCategoryCount; ++i) {
            out.emplace_back(due::to_string(due::from_index<due::Category>(i)));
        }
        return out;
    });
    m.def("appliance_table", &appliance_table, "Reference appliance parameters, one dict per appliance");
    m.def(
        "est_acc",
        [](const std::vector<double>& estimate, const std::vector<double>& truth) {
            return score(due::est_acc(estimate, truth));
        },
        py::arg("estimate"), py::arg("truth"));
    m.def(
        "overall_est_acc",
        [](const std::map<std::string, std::vector<double>>& estimates,
           const std::map<std::string, std::vector<double>>& truths) {
            return score(due::overall_est_acc(to_category_map(estimates), to_category_map(truths)));
        },
        py::arg("estimates"), py::arg("truths"));
    m.def("disaggregate", &disaggregate, py::arg("values"), py::arg("start"), py::arg("household"),
          py::arg("seed") = 0, py::arg("tolerance") = 0.15, py::arg("max_iterations") = 20,
          "Disaggregate whole days of 15-min aggregate power; returns watts per category");
    m.def("run", &run, py::arg("config"), py::arg("seed") = py::none(), py::arg("out") = py::none(),
          "Run the benchmark described by a run config; returns overall EstAcc per algorithm");
    m.def("simulate", &simulate, py::arg("config"), py::arg("seed") = py::none(), py::arg("out") = py::none(),
          "Write a labelled synthetic dataset");
}
