#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pathcalc/path.hpp"

namespace pathcalc {

struct PartitionLevel {
  int n = 0;
  double threshold = 0.0;
  std::vector<double> stop_times;
  // No further crossing before domain_end; false only when the scan was cut
  // short by a stop-count cap.
  bool exhausted = true;
  double domain_begin = 0.0;
  double domain_end = 0.0;
};

// Level-n Lebesgue partition with threshold eps0 * 2^-n. Each stop is the
// first time after the previous one at which some monitored path has moved
// by the threshold, solved exactly on the linear interpolant. max_stops = 0
// means no cap.
PartitionLevel lebesgue_partition(std::span<const SampledPath> monitored, int n, double eps0,
                                  std::size_t max_stops = 0);

// Same scan with an explicit threshold; n is recorded as given.
PartitionLevel threshold_partition(std::span<const SampledPath> monitored, double threshold, int n = 0,
                                   std::size_t max_stops = 0);

std::vector<PartitionLevel> partition_sequence(std::span<const SampledPath> monitored, int n_min, int n_max,
                                               double eps0, std::size_t max_stops = 0);

// A partition given by its stop times, e.g. a strategy's rebalance dates.
PartitionLevel explicit_partition(std::vector<double> stop_times, double domain_begin, double domain_end);

struct FinenessResult {
  bool fine = true;
  double max_oscillation = 0.0;
  // Interval index (0 = first) where the maximum occurs.
  std::size_t worst_interval = 0;
};

// sup - inf of the interpolated path over each [T_{k-1}, T_k] and over the
// trailing [T_last, domain_end], against `bound`.
FinenessResult verify_fineness(const PartitionLevel& p, const SampledPath& path, double bound);

// Number of stops after T_0.
inline std::size_t crossing_count(const PartitionLevel& p) {
  return p.stop_times.empty() ? 0 : p.stop_times.size() - 1;
}

}  // namespace pathcalc
