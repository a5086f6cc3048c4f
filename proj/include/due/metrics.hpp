#pragma once

// Evaluation metrics. Undefined values (zero denominators) are reported as
// nullopt and written as "NA", never as NaN.

#include "due/types.hpp"

#include <iosfwd>
#include <map>

namespace due {

using Score = std::optional<double>;

Score est_acc(std::span<const double> estimate, std::span<const double> truth);
Score nde(std::span<const double> estimate, std::span<const double> truth);
Score neea(std::span<const double> estimate, std::span<const double> truth);
double rmse(std::span<const double> estimate, std::span<const double> truth);

/// Overall estimation accuracy: error and truth summed over time and categories.
Score overall_est_acc(const std::map<Category, std::vector<double>>& estimates,
                      const std::map<Category, std::vector<double>>& truths);

/// Energy share of each category. DataError when the total is not positive.
std::map<Category, double> energy_shares(const std::map<Category, std::vector<double>>& series);
/// Estimated minus true share, in percentage points.
std::map<Category, double> energy_share_error(const std::map<Category, std::vector<double>>& estimates,
                                              const std::map<Category, std::vector<double>>& truths);

inline constexpr double kDefaultOnThreshold = 5.0;

struct EventMetrics {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double acc = 0.0;
    Score precision;
    Score recall;
    Score f;
};

/// On/off per timestep via `value > threshold`. ConfigError when threshold <= 0.
EventMetrics event_metrics(std::span<const double> estimate, std::span<const double> truth,
                           double threshold = kDefaultOnThreshold);

struct CategoryMetrics {
    double rmse = 0.0;
    Score nde;
    Score neea;
    Score est_acc;
    double energy_share_est = 0.0;
    double energy_share_true = 0.0;
    double ese = 0.0;  // percentage points
    Score f;
    Score acc;
};

struct MetricReport {
    std::string algorithm;
    std::map<Category, CategoryMetrics> per_category;
    Score overall_est_acc;
};

/// Aligned per-category estimates and truths on the same grid. Categories
/// missing from `estimates` are scored as all-zero predictions.
MetricReport evaluate(std::string algorithm, const std::map<Category, std::vector<double>>& estimates,
                      const std::map<Category, std::vector<double>>& truths,
                      double on_threshold = kDefaultOnThreshold);

std::string format_score(const Score& s);

/// One row per (algorithm, category) plus an "overall" row per algorithm.
void write_metrics_tsv(std::ostream& out, std::span<const MetricReport> reports);
void write_metrics_json(std::ostream& out, std::span<const MetricReport> reports);
/// category, then estimated and true share per algorithm, in percent.
void write_energy_share_tsv(std::ostream& out, std::span<const MetricReport> reports);

}  // namespace due
