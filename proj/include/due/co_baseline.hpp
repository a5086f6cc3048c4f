#pragma once

// Combinatorial-optimisation baseline: per-category power levels learned
// from ground truth, then per-timestep level assignment on the aggregate.

#include "due/types.hpp"

#include <iosfwd>
#include <map>

namespace due {

struct PowerBasis {
    /// Levels per category, ascending, always starting with 0.
    std::map<Category, std::vector<double>> levels;

    std::size_t combinations() const;
    friend bool operator==(const PowerBasis&, const PowerBasis&) = default;
};

/// 1-D K-level quantisation per category: Lloyd iterations with 0 pinned as
/// one level. ConfigError when K < 1 or no category is given; DataError on an
/// empty or misaligned series.
PowerBasis train_co(const std::map<Category, SampledSeries>& ground_truth, int levels = 3);

/// Levels for one set of samples (exposed for testing).
std::vector<double> quantise_levels(std::span<const double> values, int levels);

struct CoOptions {
    /// Penalty per category whose level changes from the previous step.
    double continuity_penalty = 0.0;
    /// Above this many combinations the search switches to a beam.
    std::size_t exhaustive_limit = 10'000'000;
    std::size_t beam_width = 1000;
};

/// One level index per category (in map order) for the aggregate value.
/// Minimises |aggregate - sum|, then the count of non-zero categories, then
/// the index vector lexicographically.
std::vector<std::size_t> co_assign(double aggregate, const PowerBasis& basis,
                                   const std::vector<std::size_t>* previous = nullptr,
                                   const CoOptions& options = {});

std::map<Category, SampledSeries> disaggregate_co(const SampledSeries& aggregate, const PowerBasis& basis,
                                                  const CoOptions& options = {});

void write_basis(std::ostream& out, const PowerBasis& basis);
PowerBasis read_basis(std::istream& in);

}  // namespace due
