#include "pathcalc/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pathcalc/error.hpp"
#include "pathcalc/stats.hpp"

namespace pathcalc {

namespace {

void require_covers(const SampledPath& x, const PartitionLevel& p, const char* what) {
  if (p.stop_times.empty()) fail(ErrorCode::DomainMismatch, std::string(what) + ": partition has no stop times");
  const double lo = x.front_time(), hi = x.back_time();
  const double slack = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  if (std::abs(p.stop_times.front() - lo) > slack || p.stop_times.back() > hi + slack) {
    std::ostringstream os;
    os << what << ": partition [" << p.stop_times.front() << ", " << p.stop_times.back()
       << "] does not sit inside path domain [" << lo << ", " << hi << "]";
    fail(ErrorCode::DomainMismatch, os.str());
  }
}

std::vector<double> on_grid(const SampledPath& x, const EvalGrid& g) {
  if (x.grid() == g.grid) return {x.values().begin(), x.values().end()};
  auto r = resample(x, g.grid);
  return {r.values().begin(), r.values().end()};
}

// Sup of |a - b| over the time nodes both grids contain; the union-grid
// distance when they share fewer than two.
double shared_node_distance(const SampledPath& a, const SampledPath& b) {
  auto ta = a.times(), tb = b.times();
  auto va = a.values(), vb = b.values();
  double worst = 0.0;
  std::size_t shared = 0;
  for (std::size_t i = 0, j = 0; i < ta.size() && j < tb.size();) {
    if (ta[i] < tb[j]) {
      ++i;
    } else if (tb[j] < ta[i]) {
      ++j;
    } else {
      worst = std::max(worst, std::abs(va[i] - vb[j]));
      ++shared;
      ++i;
      ++j;
    }
  }
  return shared >= 2 ? worst : sup_distance(a, b);
}

}  // namespace

EvalGrid make_eval_grid(std::span<const SampledPath> paths, const PartitionLevel& p) {
  if (paths.empty()) fail(ErrorCode::DimensionMismatch, "no paths for the evaluation grid");
  for (std::size_t j = 1; j < paths.size(); ++j) require_same_domain(paths[0], paths[j], "evaluation grid");
  require_covers(paths[0], p, "evaluation grid");
  const double lo = paths[0].front_time(), hi = paths[0].back_time();

  std::vector<double> stops(p.stop_times.begin(), p.stop_times.end());
  for (double& s : stops) s = std::clamp(s, lo, hi);
  stops.front() = lo;

  EvalGrid g;
  bool shared = std::all_of(paths.begin(), paths.end(),
                            [&](const SampledPath& q) { return q.grid() == paths[0].grid(); });
  const auto& base = *paths[0].grid();
  bool stops_on_grid = shared && std::all_of(stops.begin(), stops.end(), [&](double s) {
    return std::binary_search(base.begin(), base.end(), s);
  });
  if (stops_on_grid) {
    g.grid = paths[0].grid();
  } else {
    std::vector<std::span<const double>> parts;
    if (shared) {
      parts.push_back(paths[0].times());
    } else {
      for (const auto& q : paths) parts.push_back(q.times());
    }
    parts.push_back(stops);
    g.grid = make_grid(merge_sorted(parts));
  }
  const auto& t = *g.grid;
  g.stop_index.reserve(stops.size());
  std::size_t i = 0;
  for (double s : stops) {
    while (t[i] < s) ++i;
    if (g.stop_index.empty() || g.stop_index.back() != i) g.stop_index.push_back(i);
  }
  return g;
}

// Summed by parts: H_a X_t - H_0 X_0 - sum_{k<=a} (H_k - H_{k-1}) X_{T_k} with T_a
// the last stop at or before t. Identical to the left-point sum in exact
// arithmetic; a constant integrand then gives c X_t - c X_0 bit for bit at
// every level.
std::vector<double> ito_sums(const EvalGrid& g, std::span<const double> h, std::span<const double> x) {
  const std::size_t n = g.grid->size();
  std::vector<double> out(n, 0.0);
  const std::size_t first = g.stop_index.front();
  const double base = h[first] * x[first];
  CompensatedSum shifts;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k + 1 < g.stop_index.size() && g.stop_index[k + 1] <= i) {
      std::size_t a = g.stop_index[k], b = g.stop_index[k + 1];
      if (h[b] != h[a]) shifts.add((h[b] - h[a]) * x[b]);
      ++k;
    }
    out[i] = (h[g.stop_index[k]] * x[i] - base) - shifts.value();
  }
  return out;
}

std::vector<double> covariation_sums(const EvalGrid& g, std::span<const double> x, std::span<const double> y) {
  const std::size_t n = g.grid->size();
  std::vector<double> out(n, 0.0);
  CompensatedSum done;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k + 1 < g.stop_index.size() && g.stop_index[k + 1] <= i) {
      std::size_t a = g.stop_index[k], b = g.stop_index[k + 1];
      done.add((x[b] - x[a]) * (y[b] - y[a]));
      ++k;
    }
    std::size_t a = g.stop_index[k];
    out[i] = done.value() + (x[i] - x[a]) * (y[i] - y[a]);
  }
  return out;
}

std::vector<double> stieltjes_sums(std::span<const double> h, std::span<const double> a) {
  std::vector<double> out(a.size(), 0.0);
  CompensatedSum s;
  for (std::size_t i = 1; i < a.size(); ++i) {
    s.add(h[i - 1] * (a[i] - a[i - 1]));
    out[i] = s.value();
  }
  return out;
}

SampledPath ito_approx(const SampledPath& h, const SampledPath& x, const PartitionLevel& p) {
  require_same_domain(h, x, "ito_approx");
  SampledPath only[] = {x};
  EvalGrid g = make_eval_grid(only, p);
  return SampledPath::build(g.grid, ito_sums(g, on_grid(h, g), on_grid(x, g)));
}

SampledPath covariation_approx(const SampledPath& x, const SampledPath& y, const PartitionLevel& p) {
  SampledPath both[] = {x, y};
  EvalGrid g = make_eval_grid(both, p);
  auto xs = on_grid(x, g);
  if (x.grid() == y.grid() && x.values().data() == y.values().data())
    return SampledPath::build(g.grid, covariation_sums(g, xs, xs));
  return SampledPath::build(g.grid, covariation_sums(g, xs, on_grid(y, g)));
}

std::vector<double> values_at_stops(const SampledPath& approx, const PartitionLevel& p) {
  std::vector<double> ts(p.stop_times.begin(), p.stop_times.end());
  for (double& s : ts) s = std::clamp(s, approx.front_time(), approx.back_time());
  return approx.sample_sorted(ts);
}

ConvergenceReport converge(const std::function<SampledPath(int)>& make_approx, int n_min, int n_max,
                           double tol) {
  if (!(n_max > n_min)) fail(ErrorCode::BadParameter, "converge needs n_max > n_min");
  if (!(tol >= 0.0)) fail(ErrorCode::BadParameter, "tolerance must be nonnegative");
  ConvergenceReport r{{}, {}, make_approx(n_min), false, tol};
  r.levels.push_back(n_min);
  for (int n = n_min + 1; n <= n_max; ++n) {
    SampledPath next = make_approx(n);
    r.sup_deltas.push_back(shared_node_distance(r.limit, next));
    r.levels.push_back(n);
    r.limit = std::move(next);
  }
  r.converged = r.sup_deltas.back() <= tol;
  return r;
}

double by_parts_residual(const SampledPath& x, const SampledPath& y, const PartitionLevel& p) {
  SampledPath both[] = {x, y};
  EvalGrid g = make_eval_grid(both, p);
  auto xs = on_grid(x, g), ys = on_grid(y, g);
  auto xy = ito_sums(g, xs, ys);
  auto yx = ito_sums(g, ys, xs);
  auto cv = covariation_sums(g, xs, ys);
  const double base = xs[0] * ys[0];
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    worst = std::max(worst, std::abs(xs[i] * ys[i] - base - xy[i] - yx[i] - cv[i]));
  return worst;
}

SampledPath polarization(const SampledPath& x, const SampledPath& y, const PartitionLevel& p) {
  SampledPath both[] = {x, y};
  EvalGrid g = make_eval_grid(both, p);
  auto xs = on_grid(x, g), ys = on_grid(y, g);
  std::vector<double> s(xs.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = xs[i] + ys[i];
  auto qs = covariation_sums(g, s, s), qx = covariation_sums(g, xs, xs), qy = covariation_sums(g, ys, ys);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 0.5 * (qs[i] - qx[i] - qy[i]);
  return SampledPath::build(g.grid, std::move(s));
}

double ito_formula_residual(const ScalarField& f, std::span<const SampledPath> x, const PartitionLevel& p) {
  const std::size_t d = f.dim;
  if (d < 1 || x.size() != d) fail(ErrorCode::DimensionMismatch, "ito formula: path count differs from field dimension");
  if (!f.value || !f.gradient || !f.hessian) fail(ErrorCode::BadParameter, "ito formula: field callbacks missing");
  EvalGrid g = make_eval_grid(x, p);
  const std::size_t n = g.grid->size();

  std::vector<std::vector<double>> xs;
  for (const auto& xi : x) xs.push_back(on_grid(xi, g));
  std::vector<double> val(n), point(d);
  std::vector<std::vector<double>> grad(d, std::vector<double>(n)), hess(d * d, std::vector<double>(n));
  std::vector<double> gb(d), hb(d * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) point[j] = xs[j][i];
    val[i] = f.value(point);
    f.gradient(point, gb);
    f.hessian(point, hb);
    for (std::size_t j = 0; j < d; ++j) grad[j][i] = gb[j];
    for (std::size_t j = 0; j < d * d; ++j) hess[j][i] = hb[j];
  }

  std::vector<double> rhs(n, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    auto term = ito_sums(g, grad[j], xs[j]);
    for (std::size_t i = 0; i < n; ++i) rhs[i] += term[i];
  }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      auto cv = covariation_sums(g, xs[a], xs[b]);
      auto term = stieltjes_sums(hess[a * d + b], cv);
      for (std::size_t i = 0; i < n; ++i) rhs[i] += 0.5 * term[i];
    }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(val[i] - val[0] - rhs[i]));
  return worst;
}

SampledPath stieltjes_integral(const SampledPath& h, const SampledPath& a) {
  require_same_domain(h, a, "stieltjes_integral");
  auto hr = resample(h, a.grid());
  std::vector<double> hv(hr.values().begin(), hr.values().end());
  return SampledPath::build(a.grid(), stieltjes_sums(hv, a.values()));
}

}  // namespace pathcalc
