#include "pathcalc/capm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pathcalc/calculus.hpp"
#include "pathcalc/doleans.hpp"
#include "pathcalc/error.hpp"
#include "pathcalc/parallel.hpp"
#include "pathcalc/stats.hpp"

namespace pathcalc {

SampledPath relative_growth(const SampledPath& x, const PartitionLevel& p) {
  require_positive(x, "relative_growth");
  SampledPath only[] = {x};
  EvalGrid g = make_eval_grid(only, p);
  auto xs = resample(x, g.grid);
  std::vector<double> inv(xs.size());
  for (std::size_t k = 0; k < inv.size(); ++k) inv[k] = 1.0 / xs.values()[k];
  return SampledPath::build(g.grid, ito_sums(g, inv, xs.values()));
}

SampledPath relative_covariation(const SampledPath& x, const SampledPath& y, const PartitionLevel& p,
                                 SigmaMethod method) {
  require_positive(x, "relative_covariation");
  require_positive(y, "relative_covariation");
  if (method == SigmaMethod::LogCovariation) return covariation_approx(doleans_log(x, p), doleans_log(y, p), p);
  SampledPath both[] = {x, y};
  EvalGrid g = make_eval_grid(both, p);
  auto xs = resample(x, g.grid), ys = resample(y, g.grid);
  auto cv = covariation_sums(g, xs.values(), ys.values());
  std::vector<double> w(cv.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = 1.0 / (xs.values()[k] * ys.values()[k]);
  return SampledPath::build(g.grid, stieltjes_sums(w, cv));
}

CapmPaths capm_paths(const SampledPath& s, const SampledPath& i, const PartitionLevel& p) {
  require_positive(s, "capm");
  require_positive(i, "capm");
  SampledPath both[] = {s, i};
  EvalGrid g = make_eval_grid(both, p);
  CapmPaths c;
  c.grid = g.grid;
  {
    auto ss = resample(s, g.grid), is = resample(i, g.grid);
    c.s.assign(ss.values().begin(), ss.values().end());
    c.i.assign(is.values().begin(), is.values().end());
  }
  const std::size_t n = c.s.size();
  std::vector<double> inv_s(n), inv_i(n), w(n);
  for (std::size_t k = 0; k < n; ++k) {
    inv_s[k] = 1.0 / c.s[k];
    inv_i[k] = 1.0 / c.i[k];
  }
  c.mu_s = ito_sums(g, inv_s, c.s);
  c.mu_i = ito_sums(g, inv_i, c.i);
  auto qs = covariation_sums(g, c.s, c.s);
  for (std::size_t k = 0; k < n; ++k) w[k] = inv_s[k] * inv_s[k];
  c.sigma_s = stieltjes_sums(w, qs);
  auto qi = covariation_sums(g, c.i, c.i);
  for (std::size_t k = 0; k < n; ++k) w[k] = inv_i[k] * inv_i[k];
  c.sigma_i = stieltjes_sums(w, qi);
  auto qsi = covariation_sums(g, c.s, c.i);
  for (std::size_t k = 0; k < n; ++k) w[k] = inv_s[k] * inv_i[k];
  c.sigma_si = stieltjes_sums(w, qsi);
  return c;
}

SampledPath capm_deviation(const SampledPath& s, const SampledPath& i, const PartitionLevel& p) {
  auto c = capm_paths(s, i, p);
  std::vector<double> d(c.mu_s.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = c.deviation(k);
  return SampledPath::build(c.grid, std::move(d));
}

SampledPath exp_test_process(const SampledPath& s, const SampledPath& i, const PartitionLevel& p, double eps) {
  if (!std::isfinite(eps)) fail(ErrorCode::BadParameter, "eps must be finite");
  auto c = capm_paths(s, i, p);
  std::vector<double> e(c.mu_s.size());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = std::exp(eps * c.deviation(k) - 0.5 * eps * eps * c.sigma_s[k]);
  return SampledPath::build(c.grid, std::move(e));
}

PartitionLevel log_partition(std::span<const SampledPath> positive, int n, double eps0, std::size_t max_stops) {
  std::vector<SampledPath> logs;
  for (const auto& x : positive) logs.push_back(log_path(x, "log_partition"));
  return lebesgue_partition(logs, n, eps0, max_stops);
}

double value_at(const Grid& grid, std::span<const double> v, double t) {
  const auto& g = *grid;
  if (t <= g.front()) return v.front();
  if (t >= g.back()) return v.back();
  std::size_t i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), t) - g.begin());
  double w = (t - g[i - 1]) / (g[i] - g[i - 1]);
  return v[i - 1] + w * (v[i] - v[i - 1]);
}

CltEvent clt_event(const CapmPaths& c, double budget, double z) {
  CltEvent e;
  const auto& t = *c.grid;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (c.sigma_s[k] >= budget) {
      e.reached = true;
      if (k == 0) {
        e.tau = t[0];
        e.deviation = c.deviation(0);
      } else {
        double a = c.sigma_s[k - 1], b = c.sigma_s[k];
        double w = b > a ? (budget - a) / (b - a) : 1.0;
        w = std::clamp(w, 0.0, 1.0);
        e.tau = t[k - 1] + w * (t[k] - t[k - 1]);
        e.deviation = c.deviation(k - 1) + w * (c.deviation(k) - c.deviation(k - 1));
      }
      e.exceed = std::abs(e.deviation) >= z * std::sqrt(budget);
      return e;
    }
  }
  return e;
}

CltReport clt_report(std::span<const CltEvent> events, std::span<const double> weights, double delta,
                     double budget) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::BadParameter, "delta must be in (0, 1)");
  if (!(budget > 0.0)) fail(ErrorCode::BadParameter, "QV budget must be positive");
  if (events.empty()) fail(ErrorCode::EmptyEnsemble, "no paths");
  if (!weights.empty() && weights.size() != events.size())
    fail(ErrorCode::LengthMismatch, "one weight per path required");
  std::vector<double> ind(events.size());
  CltReport r;
  for (std::size_t k = 0; k < events.size(); ++k) {
    ind[k] = events[k].exceed ? 1.0 : 0.0;
    r.reached += events[k].reached ? 1 : 0;
  }
  auto est = weighted_mean(ind, weights);
  r.delta = delta;
  r.budget = budget;
  r.z_quantile = normal_upper_quantile(delta / 2.0);
  r.n_paths = events.size();
  r.exceed_frequency = est.mean;
  r.std_error = est.std_error;
  r.within_bound = est.mean <= delta + 3.0 * est.std_error;
  r.matches_delta = std::abs(est.mean - delta) <= 3.0 * est.std_error;
  return r;
}

LilResult lil_ratio(const CapmPaths& c) {
  const auto& t = *c.grid;
  std::vector<double> ts, ratio, run;
  double best = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    double sg = c.sigma_s[k];
    if (!(sg > std::numbers::e)) continue;
    double r = std::abs(c.deviation(k)) / std::sqrt(2.0 * sg * std::log(std::log(sg)));
    if (sg >= std::exp(std::numbers::e)) best = std::max(best, r);
    ts.push_back(t[k]);
    ratio.push_back(r);
    run.push_back(best);
  }
  if (ts.size() < 2) {
    // A single admissible point cannot carry a path; report it as empty.
    auto placeholder = SampledPath::build(std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 0.0});
    return LilResult{true, placeholder, placeholder};
  }
  Grid g = make_grid(std::move(ts));
  return LilResult{false, SampledPath::build(g, std::move(ratio)), SampledPath::build(g, std::move(run))};
}

LilResult lil_ratio(const SampledPath& s, const SampledPath& i, const PartitionLevel& p) {
  return lil_ratio(capm_paths(s, i, p));
}

Beta capm_beta(const CapmPaths& c, double t) {
  const auto& g = *c.grid;
  if (t < g.front() || t > g.back()) fail(ErrorCode::OutOfDomain, "beta time outside the domain");
  double si = value_at(c.grid, c.sigma_i, t);
  if (!(std::abs(si) > 0.0)) fail(ErrorCode::DegenerateDenominator, "index relative QV is zero");
  Beta b;
  b.lhs = value_at(c.grid, c.mu_s, t);
  b.rhs = value_at(c.grid, c.sigma_si, t) / si * value_at(c.grid, c.mu_i, t);
  return b;
}

Beta capm_beta(const SampledPath& s, const SampledPath& i, const PartitionLevel& p, double t) {
  return capm_beta(capm_paths(s, i, p), t);
}

CapmEnsembleSummary capm_ensemble(const Ensemble& ensemble, const CapmEnsembleOptions& opt) {
  if (ensemble.size() == 0) fail(ErrorCode::EmptyEnsemble, "ensemble is empty");
  if (!(opt.delta > 0.0 && opt.delta < 1.0)) fail(ErrorCode::BadParameter, "delta must be in (0, 1)");
  if (!(opt.budget > 0.0)) fail(ErrorCode::BadParameter, "QV budget must be positive");
  const double z = normal_upper_quantile(opt.delta / 2.0);

  struct Row {
    double weight = 1.0, deviation = 0.0, growth = 0.0, premium = 0.0, exp_plus = 0.0, exp_minus = 0.0;
    double sig_s = 0.0, sig_i = 0.0, sig_si = 0.0, gir_st = 0.0, gir_log = 0.0, gap = 0.0;
    std::size_t stops = 0;
    CltEvent clt;
  };
  auto rows = parallel_map<Row>(ensemble.size(), [&](std::size_t k) {
    MarketFrame f = ensemble.frame(k);
    SampledPath s = f.column(opt.stock), i = f.column(opt.index);
    SampledPath mon[] = {s, i};
    PartitionLevel p = opt.log_partition ? log_partition(mon, opt.level, opt.eps0)
                                         : lebesgue_partition(mon, opt.level, opt.eps0);
    CapmPaths c = capm_paths(s, i, p);
    const std::size_t last = c.mu_s.size() - 1;
    Row r;
    r.stops = crossing_count(p);
    r.weight = c.i[last] / c.i[0];
    r.deviation = c.deviation(last);
    r.growth = c.mu_s[last];
    r.premium = c.mu_i[last] - c.sigma_i[last];
    r.exp_plus = std::exp(r.deviation - 0.5 * c.sigma_s[last]);
    r.exp_minus = std::exp(-r.deviation - 0.5 * c.sigma_s[last]);
    r.sig_s = value_at(c.grid, c.sigma_s, opt.sigma_time);
    r.sig_i = value_at(c.grid, c.sigma_i, opt.sigma_time);
    r.sig_si = value_at(c.grid, c.sigma_si, opt.sigma_time);
    r.clt = clt_event(c, opt.budget, z);
    if (opt.girsanov) {
      auto mu = SampledPath::build(c.grid, c.mu_s);
      auto a = girsanov_correct(mu, i, p, GirsanovMethod::Stieltjes);
      auto b = girsanov_correct(mu, i, p, GirsanovMethod::LogCovariation);
      r.gir_st = a.back();
      r.gir_log = b.back();
      r.gap = sup_distance(a, b);
    }
    return r;
  });

  const std::size_t n = rows.size();
  std::vector<double> w(n), col(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = rows[k].weight;
  auto test = [&](auto field, double initial, bool weighted) {
    for (std::size_t k = 0; k < n; ++k) col[k] = field(rows[k]);
    return martingale_test(col, initial, weighted ? std::span<const double>(w) : std::span<const double>());
  };
  auto mean = [&](auto field) {
    for (std::size_t k = 0; k < n; ++k) col[k] = field(rows[k]);
    return weighted_mean(col, {});
  };

  CapmEnsembleSummary out;
  out.n_paths = n;
  out.deviation_weighted = test([](const Row& r) { return r.deviation; }, 0.0, true);
  out.deviation_unweighted = test([](const Row& r) { return r.deviation; }, 0.0, false);
  out.growth_weighted = test([](const Row& r) { return r.growth; }, 0.0, true);
  out.growth_unweighted = test([](const Row& r) { return r.growth; }, 0.0, false);
  out.equity_premium_weighted = test([](const Row& r) { return r.premium; }, 0.0, true);
  out.exp_plus_weighted = test([](const Row& r) { return r.exp_plus; }, 1.0, true);
  out.exp_minus_weighted = test([](const Row& r) { return r.exp_minus; }, 1.0, true);
  out.numeraire_weight = test([](const Row&) { return 1.0; }, 1.0, true);
  if (opt.girsanov) {
    out.girsanov_stieltjes_weighted = test([](const Row& r) { return r.gir_st; }, 0.0, true);
    out.girsanov_log_weighted = test([](const Row& r) { return r.gir_log; }, 0.0, true);
    for (const auto& r : rows) out.girsanov_method_gap = std::max(out.girsanov_method_gap, r.gap);
  }
  out.sigma_s_at = mean([](const Row& r) { return r.sig_s; });
  out.sigma_i_at = mean([](const Row& r) { return r.sig_i; });
  out.sigma_si_at = mean([](const Row& r) { return r.sig_si; });
  std::vector<CltEvent> events(n);
  double stops = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    events[k] = rows[k].clt;
    stops += static_cast<double>(rows[k].stops);
  }
  out.clt = clt_report(events, w, opt.delta, opt.budget);
  out.mean_stops = stops / static_cast<double>(n);
  return out;
}

}  // namespace pathcalc
