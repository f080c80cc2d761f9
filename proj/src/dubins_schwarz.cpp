#include "pathcalc/dubins_schwarz.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

#include "pathcalc/calculus.hpp"
#include "pathcalc/error.hpp"
#include "pathcalc/parallel.hpp"

namespace pathcalc {

SampledPath qv_time_change(const SampledPath& x, const PartitionLevel& p, std::span<const double> s_grid) {
  if (s_grid.size() < 2) fail(ErrorCode::LengthMismatch, "s grid needs at least two points");
  for (std::size_t k = 0; k < s_grid.size(); ++k) {
    if (!std::isfinite(s_grid[k]) || s_grid[k] < 0.0) fail(ErrorCode::BadParameter, "QV times must be finite and >= 0");
    if (k > 0 && !(s_grid[k] > s_grid[k - 1])) fail(ErrorCode::NonMonotoneTimes, "QV times must increase");
  }
  SampledPath only[] = {x};
  EvalGrid g = make_eval_grid(only, p);
  auto xs = resample(x, g.grid);
  auto q = covariation_sums(g, xs.values(), xs.values());
  for (std::size_t k = 1; k < q.size(); ++k) q[k] = std::max(q[k], q[k - 1]);
  if (s_grid.back() > q.back()) {
    std::ostringstream os;
    os << "QV time " << s_grid.back() << " exceeds the realized QV " << q.back();
    fail(ErrorCode::QVRangeExceeded, os.str());
  }
  const auto& t = *g.grid;
  std::vector<double> out(s_grid.size());
  std::size_t k = 0;
  for (std::size_t j = 0; j < s_grid.size(); ++j) {
    const double s = s_grid[j];
    while (q[k] < s) ++k;
    double time = t[k];
    if (k > 0 && q[k] > q[k - 1]) {
      double w = (s - q[k - 1]) / (q[k] - q[k - 1]);
      time = t[k - 1] + w * (t[k] - t[k - 1]);
    }
    out[j] = s == 0.0 ? xs.values()[0] : x.sample_at(std::clamp(time, x.front_time(), x.back_time()));
  }
  return SampledPath::build(std::vector<double>(s_grid.begin(), s_grid.end()), std::move(out));
}

std::vector<double> unit_qv_increments(const SampledPath& x, const PartitionLevel& p, std::size_t steps) {
  if (steps < 1) fail(ErrorCode::BadParameter, "need at least one QV step");
  SampledPath only[] = {x};
  EvalGrid g = make_eval_grid(only, p);
  auto xs = resample(x, g.grid);
  auto q = covariation_sums(g, xs.values(), xs.values());
  double total = *std::max_element(q.begin(), q.end());
  if (!(total > 0.0)) fail(ErrorCode::QVRangeExceeded, "path has zero realized QV");
  std::vector<double> s(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) s[k] = total * static_cast<double>(k) / static_cast<double>(steps);
  s.back() = total;
  auto b = qv_time_change(x, p, s);
  std::vector<double> inc(steps);
  const double scale = 1.0 / std::sqrt(total / static_cast<double>(steps));
  for (std::size_t k = 0; k < steps; ++k) inc[k] = (b.values()[k + 1] - b.values()[k]) * scale;
  return inc;
}

UpperExpectation upper_expectation_estimate(const PathFunctional& f, const Ensemble& ensemble,
                                            const std::optional<std::string>& numeraire_column,
                                            std::optional<double> bound) {
  if (ensemble.size() == 0) fail(ErrorCode::EmptyEnsemble, "ensemble is empty");
  struct Item {
    double value = 0.0, weight = 1.0;
  };
  auto items = parallel_map<Item>(ensemble.size(), [&](std::size_t k) {
    MarketFrame fr = ensemble.frame(k);
    Item it;
    it.value = f(fr);
    if (numeraire_column) {
      auto c = fr.column(*numeraire_column);
      require_positive(c, "numeraire column");
      it.weight = c.back() / c.front();
    }
    return it;
  });
  std::vector<double> v(items.size()), w;
  for (std::size_t k = 0; k < items.size(); ++k) v[k] = items[k].value;
  if (numeraire_column) {
    w.resize(items.size());
    for (std::size_t k = 0; k < items.size(); ++k) w[k] = items[k].weight;
  }
  UpperExpectation r;
  r.estimate = weighted_mean(v, w);
  r.bound = bound;
  if (bound) r.consistent = r.estimate.mean <= *bound + 3.0 * r.estimate.std_error;
  return r;
}

KsResult brownian_law_test(std::span<const double> increments) {
  if (increments.size() < 100) fail(ErrorCode::TooFewSamples, "normality test needs at least 100 increments");
  KsResult r;
  r.n = increments.size();
  r.statistic = ks_statistic_normal(increments);
  r.critical = 1.63 / std::sqrt(static_cast<double>(r.n));
  r.pass = r.statistic < r.critical;
  return r;
}

SampledPath reparametrize(const SampledPath& x, const SampledPath& f) {
  auto fv = f.values();
  for (std::size_t k = 0; k < fv.size(); ++k) {
    if (k > 0 && fv[k] < fv[k - 1]) fail(ErrorCode::NonMonotoneTimes, "time change must be nondecreasing");
    if (!x.covers(fv[k])) fail(ErrorCode::OutOfDomain, "time change leaves the path domain");
  }
  // X o f is affine only between points where f crosses a node of X, so the
  // composition is sampled at those crossings as well.
  std::vector<double> ts(f.times().begin(), f.times().end());
  auto xt = x.times();
  auto ft = f.times();
  for (std::size_t k = 0; k + 1 < fv.size(); ++k) {
    double a = fv[k], b = fv[k + 1];
    if (!(b > a)) continue;
    auto lo = std::upper_bound(xt.begin(), xt.end(), a);
    auto hi = std::lower_bound(xt.begin(), xt.end(), b);
    for (auto it = lo; it < hi; ++it) {
      double w = (*it - a) / (b - a);
      double s = ft[k] + w * (ft[k + 1] - ft[k]);
      if (s > ft[k] && s < ft[k + 1]) ts.push_back(s);
    }
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<double> fs = f.sample_sorted(ts);
  std::vector<double> out(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) out[k] = x.sample_at(std::clamp(fs[k], x.front_time(), x.back_time()));
  return SampledPath::build(std::move(ts), std::move(out));
}

double running_maximum(const SampledPath& x) noexcept {
  auto v = x.values();
  return *std::max_element(v.begin(), v.end());
}

DecompositionCheck decomposition_diagnostic(const SampledPath& x, const PartitionLevel& p) {
  DecompositionCheck d;
  auto q = quadratic_variation(x, p);
  d.qv = q.back();
  d.total_variation = total_variation(x);
  d.bound = 2.0 * p.threshold * d.total_variation;
  d.ok = d.qv <= d.bound + 8.0 * DBL_EPSILON * std::max(1.0, d.bound);
  return d;
}

}  // namespace pathcalc
