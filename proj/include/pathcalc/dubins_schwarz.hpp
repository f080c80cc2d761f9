#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pathcalc/generate.hpp"
#include "pathcalc/partition.hpp"
#include "pathcalc/path.hpp"
#include "pathcalc/stats.hpp"

namespace pathcalc {

// s -> X at the first t with [X]^p_t >= s, where the level-p QV is replaced
// by its running maximum and inverted linearly between eval points. s_grid
// must be strictly increasing, start at or above 0 and end within the
// realized QV.
SampledPath qv_time_change(const SampledPath& x, const PartitionLevel& p, std::span<const double> s_grid);

// Increments of the time-changed path over `steps` equal QV steps spanning
// the realized QV, each divided by the square root of the step.
std::vector<double> unit_qv_increments(const SampledPath& x, const PartitionLevel& p, std::size_t steps = 64);

struct UpperExpectation {
  MeanEstimate estimate;
  // estimate.mean <= bound + 3 s.e., when a bound was supplied.
  std::optional<double> bound;
  bool consistent = true;
};

using PathFunctional = std::function<double(const MarketFrame&)>;

// Monte Carlo mean of F over the ensemble, weighted by I_end / I_0 when a
// numeraire column is named. This under-estimates the superhedging price in
// the models the generators produce; against a bound, only the direction
// estimate <= bound is checked.
UpperExpectation upper_expectation_estimate(const PathFunctional& f, const Ensemble& ensemble,
                                            const std::optional<std::string>& numeraire_column = std::nullopt,
                                            std::optional<double> bound = std::nullopt);

struct KsResult {
  std::size_t n = 0;
  double statistic = 0.0;
  double critical = 0.0;
  bool pass = false;
};

// Two-sided KS against N(0,1); pass iff D < 1.63 / sqrt(n).
KsResult brownian_law_test(std::span<const double> increments);

// X o f for a nondecreasing map f given on its own grid with range in X's
// domain.
SampledPath reparametrize(const SampledPath& x, const SampledPath& f);

double running_maximum(const SampledPath& x) noexcept;

struct DecompositionCheck {
  double qv = 0.0;
  double total_variation = 0.0;
  double bound = 0.0;  // 2 * threshold * total variation
  bool ok = true;
};

// For a finite-variation path every term of the level-p QV is at most
// threshold * |increment|, so the QV is bounded by the check's bound.
DecompositionCheck decomposition_diagnostic(const SampledPath& x, const PartitionLevel& p);

}  // namespace pathcalc
