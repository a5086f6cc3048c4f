#include "due/metrics.hpp"

#include "due/text_io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <ostream>

namespace due {

namespace {

void check_aligned(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DataError(fmt::format("metric inputs differ in length ({} vs {})", a.size(), b.size()));
}

double sum_abs_error(std::span<const double> estimate, std::span<const double> truth) {
    double s = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) s += std::abs(estimate[i] - truth[i]);
    return s;
}

double sum(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

nlohmann::json to_json(const Score& s) { return s ? nlohmann::json(*s) : nlohmann::json(nullptr); }

}  // namespace

Score est_acc(std::span<const double> estimate, std::span<const double> truth) {
    check_aligned(estimate, truth);
    const double total = sum(truth);
    if (!(total > 0.0)) return std::nullopt;
    return 1.0 - sum_abs_error(estimate, truth) / (2.0 * total);
}

Score nde(std::span<const double> estimate, std::span<const double> truth) {
    check_aligned(estimate, truth);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        num += (estimate[i] - truth[i]) * (estimate[i] - truth[i]);
        den += truth[i] * truth[i];
    }
    if (!(den > 0.0)) return std::nullopt;
    return num / den;
}

Score neea(std::span<const double> estimate, std::span<const double> truth) {
    check_aligned(estimate, truth);
    const double total = sum(truth);
    if (!(total > 0.0)) return std::nullopt;
    return sum_abs_error(estimate, truth) / total;
}

double rmse(std::span<const double> estimate, std::span<const double> truth) {
    check_aligned(estimate, truth);
    if (truth.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) s += (estimate[i] - truth[i]) * (estimate[i] - truth[i]);
    return std::sqrt(s / static_cast<double>(truth.size()));
}

Score overall_est_acc(const std::map<Category, std::vector<double>>& estimates,
                      const std::map<Category, std::vector<double>>& truths) {
    double err = 0.0, total = 0.0;
    for (const auto& [c, truth] : truths) {
        const auto it = estimates.find(c);
        if (it == estimates.end()) {
            err += sum(truth);
        } else {
            check_aligned(it->second, truth);
            err += sum_abs_error(it->second, truth);
        }
        total += sum(truth);
    }
    if (!(total > 0.0)) return std::nullopt;
    return 1.0 - err / (2.0 * total);
}

std::map<Category, double> energy_shares(const std::map<Category, std::vector<double>>& series) {
    double total = 0.0;
    std::map<Category, double> out;
    for (const auto& [c, v] : series) {
        out[c] = sum(v);
        total += out[c];
    }
    if (!(total > 0.0)) throw DataError("energy shares need a positive total energy");
    for (auto& [c, e] : out) e /= total;
    return out;
}

std::map<Category, double> energy_share_error(const std::map<Category, std::vector<double>>& estimates,
                                              const std::map<Category, std::vector<double>>& truths) {
    const auto est = energy_shares(estimates);
    const auto tru = energy_shares(truths);
    std::map<Category, double> out;
    for (const auto& [c, s] : tru) out[c] = -100.0 * s;
    for (const auto& [c, s] : est) out[c] += 100.0 * s;
    return out;
}

EventMetrics event_metrics(std::span<const double> estimate, std::span<const double> truth, double threshold) {
    if (!(threshold > 0.0)) throw ConfigError("event on-threshold must be positive");
    check_aligned(estimate, truth);
    EventMetrics m;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool e = estimate[i] > threshold;
        const bool t = truth[i] > threshold;
        if (e && t) ++m.tp;
        else if (e) ++m.fp;
        else if (t) ++m.fn;
        else ++m.tn;
    }
    const auto n = truth.size();
    m.acc = n == 0 ? 1.0 : static_cast<double>(m.tp + m.tn) / static_cast<double>(n);
    if (m.tp + m.fp > 0) m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
    if (m.tp + m.fn > 0) m.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
    if (m.precision && m.recall && *m.precision + *m.recall > 0.0) {
        m.f = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    } else if (m.precision && m.recall) {
        m.f = 0.0;
    }
    return m;
}

MetricReport evaluate(std::string algorithm, const std::map<Category, std::vector<double>>& estimates,
                      const std::map<Category, std::vector<double>>& truths, double on_threshold) {
    MetricReport r;
    r.algorithm = std::move(algorithm);
    std::map<Category, std::vector<double>> est;
    for (const auto& [c, truth] : truths) {
        const auto it = estimates.find(c);
        est[c] = it == estimates.end() ? std::vector<double>(truth.size(), 0.0) : it->second;
        check_aligned(est[c], truth);
    }
    double est_total = 0.0, true_total = 0.0;
    for (const auto& [c, v] : est) est_total += sum(v);
    for (const auto& [c, v] : truths) true_total += sum(v);
    for (const auto& [c, truth] : truths) {
        const auto& e = est[c];
        CategoryMetrics m;
        m.rmse = rmse(e, truth);
        m.nde = nde(e, truth);
        m.neea = neea(e, truth);
        m.est_acc = est_acc(e, truth);
        m.energy_share_est = est_total > 0.0 ? sum(e) / est_total : 0.0;
        m.energy_share_true = true_total > 0.0 ? sum(truth) / true_total : 0.0;
        m.ese = 100.0 * (m.energy_share_est - m.energy_share_true);
        const auto ev = event_metrics(e, truth, on_threshold);
        m.f = ev.f;
        m.acc = ev.acc;
        r.per_category[c] = m;
    }
    r.overall_est_acc = overall_est_acc(est, truths);
    return r;
}

std::string format_score(const Score& s) { return s ? format_number(*s) : "NA"; }

void write_metrics_tsv(std::ostream& out, std::span<const MetricReport> reports) {
    out << "algorithm\tcategory\trmse\tnde\tneea\test_acc\tshare_est\tshare_true\tese\tf\tacc\n";
    for (const auto& r : reports) {
        for (const auto& [c, m] : r.per_category) {
            out << r.algorithm << '\t' << to_string(c) << '\t' << format_number(m.rmse) << '\t' << format_score(m.nde)
                << '\t' << format_score(m.neea) << '\t' << format_score(m.est_acc) << '\t'
                << format_number(m.energy_share_est) << '\t' << format_number(m.energy_share_true) << '\t'
                << format_number(m.ese) << '\t' << format_score(m.f) << '\t' << format_score(m.acc) << '\n';
        }
        out << r.algorithm << "\toverall\tNA\tNA\tNA\t" << format_score(r.overall_est_acc) << "\tNA\tNA\tNA\tNA\tNA\n";
    }
}

void write_metrics_json(std::ostream& out, std::span<const MetricReport> reports) {
    nlohmann::ordered_json root;
    for (const auto& r : reports) {
        nlohmann::ordered_json alg;
        nlohmann::ordered_json cats;
        for (const auto& [c, m] : r.per_category) {
            cats[std::string(to_string(c))] = {
                {"rmse", m.rmse},
                {"nde", to_json(m.nde)},
                {"neea", to_json(m.neea)},
                {"est_acc", to_json(m.est_acc)},
                {"energy_share_est", m.energy_share_est},
                {"energy_share_true", m.energy_share_true},
                {"ese", m.ese},
                {"f", to_json(m.f)},
                {"acc", to_json(m.acc)},
            };
        }
        alg["categories"] = std::move(cats);
        alg["overall"] = {{"est_acc", to_json(r.overall_est_acc)}};
        root[r.algorithm] = std::move(alg);
    }
    out << root.dump(2) << '\n';
}

void write_energy_share_tsv(std::ostream& out, std::span<const MetricReport> reports) {
    out << "category\ttruth";
    for (const auto& r : reports) out << '\t' << r.algorithm;
    out << '\n';
    if (reports.empty()) return;
    for (const auto& [c, m] : reports.front().per_category) {
        out << to_string(c) << '\t' << format_number(100.0 * m.energy_share_true);
        for (const auto& r : reports) {
            const auto it = r.per_category.find(c);
            out << '\t' << (it == r.per_category.end() ? "NA" : format_number(100.0 * it->second.energy_share_est));
        }
        out << '\n';
    }
}

}  // namespace due
