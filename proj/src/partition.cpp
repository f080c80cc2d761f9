#include "pathcalc/partition.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

#include "pathcalc/error.hpp"

namespace pathcalc {

namespace {

// Values of every monitored path on one shared grid.
struct Aligned {
  Grid grid;
  std::vector<std::vector<double>> values;
};

Aligned align(std::span<const SampledPath> monitored) {
  if (monitored.empty()) fail(ErrorCode::EmptyMonitorSet, "partition needs at least one monitored path");
  for (std::size_t j = 1; j < monitored.size(); ++j) require_same_domain(monitored[0], monitored[j], "partition");
  Aligned a;
  bool shared = std::all_of(monitored.begin(), monitored.end(),
                            [&](const SampledPath& p) { return p.grid() == monitored[0].grid(); });
  if (shared) {
    a.grid = monitored[0].grid();
  } else {
    std::vector<std::span<const double>> parts;
    for (const auto& p : monitored) parts.push_back(p.times());
    a.grid = make_grid(merge_sorted(parts));
  }
  for (const auto& p : monitored) {
    auto r = resample(p, a.grid);
    a.values.emplace_back(r.values().begin(), r.values().end());
  }
  return a;
}

}  // namespace

PartitionLevel threshold_partition(std::span<const SampledPath> monitored, double h, int n,
                                   std::size_t max_stops) {
  if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorCode::BadParameter, "threshold must be positive");
  Aligned a = align(monitored);
  const auto& t = *a.grid;
  const std::size_t m = a.values.size();

  PartitionLevel p;
  p.n = n;
  p.threshold = h;
  p.domain_begin = t.front();
  p.domain_end = t.back();
  p.stop_times.push_back(t.front());

  std::vector<double> anchor(m);
  for (std::size_t j = 0; j < m; ++j) anchor[j] = a.values[j][0];

  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    // Position inside [t_i, t_{i+1}] as a fraction; crossings within one grid
    // interval are found against the original endpoint values.
    double pos = 0.0;
    for (;;) {
      double best = 2.0;
      std::size_t who = m;
      double level = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double x0 = a.values[j][i], x1 = a.values[j][i + 1];
        const double d1 = x1 - anchor[j];
        if (!(std::abs(d1) >= h)) continue;
        const double target = anchor[j] + (d1 > 0.0 ? h : -h);
        double w = (x1 == target) ? 1.0 : (target - x0) / (x1 - x0);
        w = std::clamp(w, pos, 1.0);
        if (w < best) {
          best = w;
          who = j;
          level = target;
        }
      }
      if (who == m) break;
      if (max_stops != 0 && p.stop_times.size() > max_stops) {
        p.exhausted = false;
        return p;
      }
      double tau = best == 1.0 ? t[i + 1] : t[i] + best * (t[i + 1] - t[i]);
      if (tau <= p.stop_times.back()) tau = std::nextafter(p.stop_times.back(), INFINITY);
      tau = std::min(tau, t[i + 1]);
      p.stop_times.push_back(tau);
      for (std::size_t j = 0; j < m; ++j) {
        const double x0 = a.values[j][i], x1 = a.values[j][i + 1];
        anchor[j] = best == 1.0 ? x1 : x0 + best * (x1 - x0);
      }
      anchor[who] = level;
      pos = best;
      if (best == 1.0) break;
    }
  }
  return p;
}

PartitionLevel lebesgue_partition(std::span<const SampledPath> monitored, int n, double eps0,
                                  std::size_t max_stops) {
  if (!(eps0 > 0.0) || !std::isfinite(eps0)) fail(ErrorCode::BadParameter, "eps0 must be positive");
  if (n < 0 || n > 60) fail(ErrorCode::BadParameter, "level must be in [0, 60]");
  return threshold_partition(monitored, std::ldexp(eps0, -n), n, max_stops);
}

std::vector<PartitionLevel> partition_sequence(std::span<const SampledPath> monitored, int n_min, int n_max,
                                               double eps0, std::size_t max_stops) {
  if (n_min > n_max) fail(ErrorCode::BadParameter, "n_min must not exceed n_max");
  std::vector<PartitionLevel> out;
  for (int n = n_min; n <= n_max; ++n) out.push_back(lebesgue_partition(monitored, n, eps0, max_stops));
  return out;
}

PartitionLevel explicit_partition(std::vector<double> stop_times, double domain_begin, double domain_end) {
  if (!(domain_end > domain_begin)) fail(ErrorCode::BadParameter, "empty partition domain");
  PartitionLevel p;
  p.domain_begin = domain_begin;
  p.domain_end = domain_end;
  for (double s : stop_times) {
    if (!std::isfinite(s)) fail(ErrorCode::NonFiniteValue, "non-finite stop time");
    if (s < domain_begin || s > domain_end) fail(ErrorCode::DomainMismatch, "stop time outside the domain");
  }
  if (!std::is_sorted(stop_times.begin(), stop_times.end()))
    fail(ErrorCode::NonMonotoneTimes, "stop times must be nondecreasing");
  stop_times.erase(std::unique(stop_times.begin(), stop_times.end()), stop_times.end());
  if (stop_times.empty() || stop_times.front() != domain_begin) stop_times.insert(stop_times.begin(), domain_begin);
  p.stop_times = std::move(stop_times);
  return p;
}

FinenessResult verify_fineness(const PartitionLevel& p, const SampledPath& path, double bound) {
  if (p.stop_times.empty()) fail(ErrorCode::DomainMismatch, "partition has no stop times");
  const double lo = path.front_time(), hi = path.back_time();
  const double slack_t = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  for (double s : p.stop_times)
    if (s < lo - slack_t || s > hi + slack_t) {
      std::ostringstream os;
      os << "stop time " << s << " outside path domain [" << lo << ", " << hi << "]";
      fail(ErrorCode::DomainMismatch, os.str());
    }

  auto ts = path.times();
  auto vs = path.values();
  std::vector<double> edges(p.stop_times.begin(), p.stop_times.end());
  for (double& e : edges) e = std::clamp(e, lo, hi);
  const double end = std::clamp(p.domain_end > p.domain_begin ? p.domain_end : hi, lo, hi);
  if (edges.back() < end) edges.push_back(end);

  FinenessResult r;
  std::size_t node = 0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double a = edges[k], b = edges[k + 1];
    double va = path.sample_at(a), vb = path.sample_at(b);
    double mx = std::max(va, vb), mn = std::min(va, vb);
    while (node < ts.size() && ts[node] <= a) ++node;
    for (std::size_t i = node; i < ts.size() && ts[i] < b; ++i) {
      mx = std::max(mx, vs[i]);
      mn = std::min(mn, vs[i]);
    }
    if (mx - mn > r.max_oscillation) {
      r.max_oscillation = mx - mn;
      r.worst_interval = k;
    }
  }
  const double slack = 8.0 * DBL_EPSILON * std::max(1.0, sup_abs(path));
  r.fine = r.max_oscillation <= bound + slack;
  return r;
}

}  // namespace pathcalc
