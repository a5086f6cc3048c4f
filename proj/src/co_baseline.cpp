#include "due/co_baseline.hpp"

#include "due/text_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace due {

namespace {

struct Candidate {
    double cost = 0.0;
    double sum = 0.0;
    std::size_t nonzero = 0;
    std::vector<std::size_t> index;
};

// Strict preference: cost, then fewer non-zero categories, then lexicographic indices.
bool better(const Candidate& a, const Candidate& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.nonzero != b.nonzero) return a.nonzero < b.nonzero;
    return a.index < b.index;
}

double level_sum(const std::vector<const std::vector<double>*>& levels, const std::vector<std::size_t>& index) {
    double s = 0.0;
    for (std::size_t c = 0; c < levels.size(); ++c) s += (*levels[c])[index[c]];
    return s;
}

double cost_of(double aggregate, double sum, const std::vector<std::size_t>& index,
               const std::vector<std::size_t>* previous, double penalty) {
    double cost = std::abs(aggregate - sum);
    if (previous != nullptr && penalty > 0.0) {
        std::size_t changes = 0;
        for (std::size_t c = 0; c < index.size(); ++c) changes += index[c] != (*previous)[c] ? 1 : 0;
        cost += penalty * static_cast<double>(changes);
    }
    return cost;
}

}  // namespace

std::size_t PowerBasis::combinations() const {
    std::size_t n = 1;
    for (const auto& [c, l] : levels) {
        if (n > std::numeric_limits<std::size_t>::max() / std::max<std::size_t>(l.size(), 1)) {
            return std::numeric_limits<std::size_t>::max();
        }
        n *= l.size();
    }
    return n;
}

std::vector<double> quantise_levels(std::span<const double> values, int levels) {
    if (levels < 1) throw ConfigError("CO needs at least one level per category");
    std::vector<double> positive;
    for (double v : values) {
        if (v > 0.0) positive.push_back(v);
    }
    std::vector<double> centroids{0.0};
    const int free = levels - 1;
    if (positive.empty() || free == 0) return centroids;
    std::sort(positive.begin(), positive.end());
    for (int j = 0; j < free; ++j) {
        const double q = (j + 0.5) / free;
        centroids.push_back(positive[static_cast<std::size_t>(q * static_cast<double>(positive.size() - 1))]);
    }
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<double> sums(centroids.size(), 0.0);
        std::vector<std::size_t> counts(centroids.size(), 0);
        for (double v : values) {
            std::size_t best = 0;
            for (std::size_t c = 1; c < centroids.size(); ++c) {
                if (std::abs(v - centroids[c]) < std::abs(v - centroids[best])) best = c;
            }
            sums[best] += v;
            ++counts[best];
        }
        bool changed = false;
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            if (counts[c] == 0) continue;
            const double next = sums[c] / static_cast<double>(counts[c]);
            if (next != centroids[c]) changed = true;
            centroids[c] = next;
        }
        if (!changed) break;
    }
    std::sort(centroids.begin(), centroids.end());
    centroids.erase(std::unique(centroids.begin(), centroids.end(),
                                [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                    centroids.end());
    return centroids;
}

PowerBasis train_co(const std::map<Category, SampledSeries>& ground_truth, int levels) {
    if (ground_truth.empty()) throw ConfigError("CO training needs at least one category");
    if (levels < 1) throw ConfigError("CO needs at least one level per category");
    PowerBasis basis;
    const auto& first = ground_truth.begin()->second;
    for (const auto& [category, series] : ground_truth) {
        if (series.empty()) throw DataError(fmt::format("CO training: empty series for {}", to_string(category)));
        if (series.start != first.start || series.step != first.step || series.size() != first.size()) {
            throw DataError("CO training: category series are not aligned");
        }
        basis.levels[category] = quantise_levels(series.values, levels);
    }
    return basis;
}

std::vector<std::size_t> co_assign(double aggregate, const PowerBasis& basis, const std::vector<std::size_t>* previous,
                                   const CoOptions& options) {
    std::vector<const std::vector<double>*> levels;
    for (const auto& [c, l] : basis.levels) {
        if (l.empty()) throw ConfigError(fmt::format("CO basis for {} has no levels", to_string(c)));
        levels.push_back(&l);
    }
    const std::size_t n = levels.size();
    if (n == 0) return {};

    if (basis.combinations() <= options.exhaustive_limit) {
        Candidate best;
        bool have = false;
        Candidate cur;
        cur.index.assign(n, 0);
        while (true) {
            cur.sum = level_sum(levels, cur.index);
            cur.nonzero = 0;
            for (std::size_t c = 0; c < n; ++c) cur.nonzero += (*levels[c])[cur.index[c]] != 0.0 ? 1 : 0;
            cur.cost = cost_of(aggregate, cur.sum, cur.index, previous, options.continuity_penalty);
            if (!have || better(cur, best)) {
                best = cur;
                have = true;
            }
            // Odometer increment, last category fastest: lexicographic order.
            std::size_t c = n;
            while (c > 0) {
                --c;
                if (++cur.index[c] < levels[c]->size()) break;
                cur.index[c] = 0;
                if (c == 0) return best.index;
            }
        }
    }

    // Beam search over categories taken in descending order of their top level.
    std::vector<std::size_t> order(n);
    for (std::size_t c = 0; c < n; ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return levels[a]->back() > levels[b]->back(); });
    std::vector<Candidate> beam(1);
    beam.front().index.assign(n, 0);
    for (std::size_t step = 0; step < n; ++step) {
        const auto c = order[step];
        std::vector<Candidate> next;
        for (const auto& b : beam) {
            for (std::size_t l = 0; l < levels[c]->size(); ++l) {
                Candidate x = b;
                x.index[c] = l;
                x.sum = b.sum + (*levels[c])[l];
                x.nonzero = b.nonzero + ((*levels[c])[l] != 0.0 ? 1 : 0);
                x.cost = std::abs(aggregate - x.sum);
                next.push_back(std::move(x));
            }
        }
        const auto keep = std::min(options.beam_width, next.size());
        std::partial_sort(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(keep), next.end(), better);
        next.resize(keep);
        beam = std::move(next);
    }
    Candidate best;
    bool have = false;
    for (auto& b : beam) {
        b.sum = level_sum(levels, b.index);
        b.cost = cost_of(aggregate, b.sum, b.index, previous, options.continuity_penalty);
        if (!have || better(b, best)) {
            best = b;
            have = true;
        }
    }
    return best.index;
}

std::map<Category, SampledSeries> disaggregate_co(const SampledSeries& aggregate, const PowerBasis& basis,
                                                  const CoOptions& options) {
    std::map<Category, SampledSeries> out;
    for (const auto& [c, l] : basis.levels) {
        out[c] = SampledSeries(aggregate.start, aggregate.step, std::vector<double>(aggregate.size(), 0.0));
    }
    std::vector<std::size_t> previous;
    for (std::size_t t = 0; t < aggregate.size(); ++t) {
        const bool sequential = options.continuity_penalty > 0.0 && t > 0;
        auto index = co_assign(aggregate.values[t], basis, sequential ? &previous : nullptr, options);
        std::size_t i = 0;
        for (const auto& [c, l] : basis.levels) out[c].values[t] = l[index[i++]];
        previous = std::move(index);
    }
    return out;
}

void write_basis(std::ostream& out, const PowerBasis& basis) {
    out << "due-co-basis 1\n";
    for (const auto& [c, levels] : basis.levels) {
        out << to_string(c);
        for (double l : levels) out << ' ' << format_number(l);
        out << '\n';
    }
}

PowerBasis read_basis(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "due-co-basis 1") throw DataError("CO basis: missing header");
    PowerBasis basis;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::istringstream ss(line);
        std::string name;
        ss >> name;
        const auto c = parse_category(name);
        std::vector<double> levels;
        std::string word;
        while (ss >> word) levels.push_back(parse_double(word, "CO basis level"));
        if (levels.empty() || levels.front() != 0.0) throw DataError("CO basis: every category starts at level 0");
        basis.levels[c] = std::move(levels);
    }
    return basis;
}

}  // namespace due
