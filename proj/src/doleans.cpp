#include "pathcalc/doleans.hpp"

#include <algorithm>
#include <cmath>

#include "pathcalc/calculus.hpp"

namespace pathcalc {

SampledPath log_path(const SampledPath& y, const char* what) {
  require_positive(y, what);
  return map_values(y, [](double v) { return std::log(v); });
}

SampledPath doleans_exp(const SampledPath& x, const PartitionLevel& p) {
  SampledPath only[] = {x};
  EvalGrid g = make_eval_grid(only, p);
  auto xs = resample(x, g.grid);
  auto q = covariation_sums(g, xs.values(), xs.values());
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(xs.values()[i] - 0.5 * q[i]);
  return SampledPath::build(g.grid, std::move(out));
}

SampledPath doleans_log(const SampledPath& y, const PartitionLevel& p) {
  auto ly = log_path(y, "doleans_log");
  SampledPath only[] = {ly};
  EvalGrid g = make_eval_grid(only, p);
  auto ls = resample(ly, g.grid);
  auto q = covariation_sums(g, ls.values(), ls.values());
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ls.values()[i] + 0.5 * q[i];
  return SampledPath::build(g.grid, std::move(out));
}

SampledPath doleans_log_integral(const SampledPath& y, const PartitionLevel& p) {
  require_positive(y, "doleans_log_integral");
  SampledPath only[] = {y};
  EvalGrid g = make_eval_grid(only, p);
  auto ys = resample(y, g.grid);
  std::vector<double> inv(ys.size());
  for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / ys.values()[i];
  auto s = ito_sums(g, inv, ys.values());
  const double l0 = std::log(y.front());
  for (double& v : s) v += l0;
  return SampledPath::build(g.grid, std::move(s));
}

double sde_residual(const SampledPath& y, const SampledPath& x, const PartitionLevel& p) {
  require_same_domain(y, x, "sde_residual");
  SampledPath both[] = {x, y};
  EvalGrid g = make_eval_grid(both, p);
  auto ys = resample(y, g.grid), xs = resample(x, g.grid);
  auto s = ito_sums(g, ys.values(), xs.values());
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(ys.values()[i] - ys.values()[0] - s[i]));
  return worst;
}

}  // namespace pathcalc
