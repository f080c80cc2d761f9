#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pathcalc/calculus.hpp"
#include "pathcalc/capm.hpp"
#include "pathcalc/csv.hpp"
#include "pathcalc/doleans.hpp"
#include "pathcalc/dubins_schwarz.hpp"
#include "pathcalc/error.hpp"
#include "pathcalc/generate.hpp"
#include "pathcalc/numeraire.hpp"
#include "pathcalc/parallel.hpp"
#include "pathcalc/random.hpp"
#include "pathcalc/report.hpp"

namespace pathcalc {

namespace {

// --- option access -----------------------------------------------------------

template <class T>
T get(const Json& o, const char* key, T fallback) {
  if (!o.contains(key) || o[key].is_null()) return fallback;
  try {
    return o[key].get<T>();
  } catch (const Json::exception&) {
    fail(ErrorCode::BadParameter, std::string("option '") + key + "' has the wrong type");
  }
}

std::pair<int, int> levels_of(const Json& o, int lo, int hi) {
  if (!o.contains("levels")) return {lo, hi};
  const Json& l = o["levels"];
  if (l.is_array() && l.size() == 2 && l[0].is_number_integer() && l[1].is_number_integer())
    return {l[0].get<int>(), l[1].get<int>()};
  if (l.is_string()) {
    std::string s = l.get<std::string>();
    auto c = s.find(':');
    try {
      if (c != std::string::npos) return {std::stoi(s.substr(0, c)), std::stoi(s.substr(c + 1))};
      int n = std::stoi(s);
      return {n, n};
    } catch (const std::exception&) {
    }
  }
  fail(ErrorCode::BadParameter, "levels must look like n_min:n_max");
}

// "file.csv" or "file.csv:COLUMN"; without a column the first value column.
SampledPath load_path(const Json& o, const char* key) {
  if (!o.contains(key) || !o[key].is_string()) fail(ErrorCode::BadParameter, std::string("missing input '") + key + "'");
  std::string spec = o[key].get<std::string>();
  std::string file = spec, column;
  auto c = spec.rfind(':');
  if (c != std::string::npos && c + 1 < spec.size() && spec.find('/', c) == std::string::npos) {
    file = spec.substr(0, c);
    column = spec.substr(c + 1);
  }
  ColumnMapping m;
  m.time_column = get<std::string>(o, "time_column", "time");
  MarketFrame f = ingest_csv_file(file, m);
  return column.empty() ? f.column(0) : f.column(column);
}

Json mt_json(const MartingaleTestReport& r) {
  return {{"n_paths", r.n_paths},           {"weighted_mean_terminal", r.weighted_mean_terminal},
          {"initial_value", r.initial_value}, {"std_error", r.std_error},
          {"z_score", r.z_score},           {"pass", r.pass}};
}

Json mean_json(const MeanEstimate& m) { return {{"n", m.n}, {"mean", m.mean}, {"std_error", m.std_error}}; }

Json level_json(const PartitionLevel& p) {
  return {{"n", p.n}, {"threshold", p.threshold}, {"crossings", crossing_count(p)}, {"exhausted", p.exhausted}};
}

double range_of(const SampledPath& x) {
  auto v = x.values();
  auto [a, b] = std::minmax_element(v.begin(), v.end());
  return *b - *a;
}

void write_path_csv(const Json& o, const std::vector<SampledPath>& paths, const std::vector<std::string>& names) {
  if (!o.contains("csv") || !o["csv"].is_string()) return;
  std::string file = o["csv"].get<std::string>();
  std::ofstream out(file, std::ios::binary);
  if (!out) fail(ErrorCode::IOError, "cannot write '" + file + "'");
  export_paths_csv(out, paths, names);
  if (!out) fail(ErrorCode::IOError, "write to '" + file + "' failed");
}

ModelSpec model_of(const Json& o, Model fallback) {
  ModelSpec s;
  s.model = o.contains("model") ? model_from_name(o["model"].get<std::string>()) : fallback;
  s.horizon = get(o, "horizon", s.horizon);
  s.steps = get<std::size_t>(o, "steps", s.steps);
  s.seed = get<std::uint64_t>(o, "seed", s.seed);
  s.sigma = get(o, "sigma", s.sigma);
  s.x0 = get(o, "x0", (s.model == Model::Gbm) ? 1.0 : s.x0);
  s.sigma_s = get(o, "sigma_s", s.sigma_s);
  s.sigma_i = get(o, "sigma_i", s.sigma_i);
  s.rho = get(o, "rho", s.rho);
  s.s0 = get(o, "s0", s.s0);
  s.i0 = get(o, "i0", s.i0);
  s.shape = get<std::string>(o, "shape", s.shape);
  s.slope = get(o, "slope", s.slope);
  s.amplitude = get(o, "amplitude", s.amplitude);
  s.skeleton_level = get(o, "skeleton_level", s.skeleton_level);
  s.skeleton_eps0 = get(o, "skeleton_eps0", s.skeleton_eps0);
  s.columns = get<std::size_t>(o, "columns", s.columns);
  return s;
}

// --- analyses ------------------------------------------------------------------

Json integrate(const Json& o) {
  SampledPath h = load_path(o, "integrand"), x = load_path(o, "integrator");
  auto [lo, hi] = levels_of(o, 4, 10);
  const double eps0 = get(o, "eps0", 0.5);
  const double tol = get(o, "tol", std::ldexp(range_of(x), -6));
  std::vector<SampledPath> mon{h, x};
  if (o.contains("extra")) mon.push_back(load_path(o, "extra"));
  Json stops = Json::array();
  auto report = converge(
      [&](int n) {
        auto p = lebesgue_partition(mon, n, eps0);
        stops.push_back(crossing_count(p));
        return ito_approx(h, x, p);
      },
      lo, hi, tol);
  write_path_csv(o, {report.limit}, {"integral"});
  return {{"command", "integrate"},
          {"levels", report.levels},
          {"sup_deltas", report.sup_deltas},
          {"converged", report.converged},
          {"tol", report.tol},
          {"eps0", eps0},
          {"crossings", stops},
          {"limit_terminal", report.limit.back()},
          {"ok", report.converged}};
}

Json qv(const Json& o) {
  SampledPath x = load_path(o, "x");
  std::optional<SampledPath> y;
  if (o.contains("y")) y = load_path(o, "y");
  auto [lo, hi] = levels_of(o, 4, 10);
  const double eps0 = get(o, "eps0", 0.5);
  std::vector<SampledPath> mon{x};
  if (y) mon.push_back(*y);
  Json rows = Json::array();
  bool ok = true;
  std::optional<SampledPath> last;
  for (int n = lo; n <= hi; ++n) {
    auto p = lebesgue_partition(mon, n, eps0);
    auto q = y ? covariation_approx(x, *y, p) : quadratic_variation(x, p);
    auto fine = verify_fineness(p, x, 2.0 * p.threshold);
    ok = ok && fine.fine;
    Json r = level_json(p);
    r["value_at_end"] = q.back();
    r["fine"] = fine.fine;
    r["max_oscillation"] = fine.max_oscillation;
    rows.push_back(r);
    last = q;
  }
  write_path_csv(o, {*last}, {y ? "covariation" : "qv"});
  return {{"command", "qv"}, {"eps0", eps0}, {"levels", rows}, {"ok", ok}};
}

Json byparts(const Json& o) {
  SampledPath x = load_path(o, "x"), y = load_path(o, "y");
  auto [lo, hi] = levels_of(o, 4, 9);
  const double eps0 = get(o, "eps0", 0.5);
  const double rel_tol = get(o, "rel_tol", 1e-8);
  double scale = 1.0 + sup_abs(multiply_paths(x, y));
  std::vector<SampledPath> mon{x, y};
  Json rows = Json::array();
  bool ok = true;
  for (int n = lo; n <= hi; ++n) {
    auto p = lebesgue_partition(mon, n, eps0);
    double res = by_parts_residual(x, y, p);
    auto pol = polarization(x, y, p);
    auto cv = covariation_approx(x, y, p);
    double pol_gap = sup_distance(pol, cv) / (1.0 + sup_abs(cv));
    bool pass = res / scale <= rel_tol && pol_gap <= 1e-9;
    ok = ok && pass;
    Json r = level_json(p);
    r["residual"] = res;
    r["relative_residual"] = res / scale;
    r["polarization_gap"] = pol_gap;
    r["pass"] = pass;
    rows.push_back(r);
  }
  return {{"command", "byparts"}, {"eps0", eps0}, {"levels", rows}, {"rel_tol", rel_tol}, {"ok", ok}};
}

ScalarField field_named(const std::string& name) {
  ScalarField f;
  if (name == "square") {
    f.dim = 1;
    f.value = [](std::span<const double> x) { return x[0] * x[0]; };
    f.gradient = [](std::span<const double> x, std::span<double> g) { g[0] = 2.0 * x[0]; };
    f.hessian = [](std::span<const double>, std::span<double> h) { h[0] = 2.0; };
  } else if (name == "cube") {
    f.dim = 1;
    f.value = [](std::span<const double> x) { return x[0] * x[0] * x[0]; };
    f.gradient = [](std::span<const double> x, std::span<double> g) { g[0] = 3.0 * x[0] * x[0]; };
    f.hessian = [](std::span<const double> x, std::span<double> h) { h[0] = 6.0 * x[0]; };
  } else if (name == "product") {
    f.dim = 2;
    f.value = [](std::span<const double> x) { return x[0] * x[1]; };
    f.gradient = [](std::span<const double> x, std::span<double> g) {
      g[0] = x[1];
      g[1] = x[0];
    };
    f.hessian = [](std::span<const double>, std::span<double> h) {
      h[0] = 0.0;
      h[1] = 1.0;
      h[2] = 1.0;
      h[3] = 0.0;
    };
  } else if (name == "exp_martingale") {
    f.dim = 2;
    f.value = [](std::span<const double> x) { return std::exp(x[0] - 0.5 * x[1]); };
    f.gradient = [](std::span<const double> x, std::span<double> g) {
      double e = std::exp(x[0] - 0.5 * x[1]);
      g[0] = e;
      g[1] = -0.5 * e;
    };
    f.hessian = [](std::span<const double> x, std::span<double> h) {
      double e = std::exp(x[0] - 0.5 * x[1]);
      h[0] = e;
      h[1] = -0.5 * e;
      h[2] = -0.5 * e;
      h[3] = 0.25 * e;
    };
  } else {
    fail(ErrorCode::BadParameter, "unknown function '" + name + "' (square, cube, product, exp_martingale)");
  }
  return f;
}

Json ito(const Json& o) {
  const std::string name = get<std::string>(o, "function", "square");
  ScalarField f = field_named(name);
  std::vector<SampledPath> xs{load_path(o, "x")};
  if (f.dim == 2) xs.push_back(load_path(o, "y"));
  auto [lo, hi] = levels_of(o, 4, 9);
  const double eps0 = get(o, "eps0", 0.5);
  double scale = 0.0;
  {
    std::vector<double> point(f.dim);
    std::vector<double> vals;
    auto g = xs[0].grid();
    std::vector<SampledPath> aligned;
    for (auto& x : xs) aligned.push_back(resample(x, xs.size() == 1 ? x.grid() : xs[0].grid()));
    for (std::size_t i = 0; i < aligned[0].size(); ++i) {
      for (std::size_t j = 0; j < f.dim; ++j) point[j] = aligned[j].values()[i];
      vals.push_back(f.value(point));
    }
    auto [a, b] = std::minmax_element(vals.begin(), vals.end());
    scale = std::max(*b - *a, 1e-300);
  }
  Json rows = Json::array();
  std::vector<double> res;
  for (int n = lo; n <= hi; ++n) {
    auto p = lebesgue_partition(xs, n, eps0);
    double r = ito_formula_residual(f, xs, p);
    res.push_back(r / scale);
    Json row = level_json(p);
    row["residual"] = r;
    row["scaled_residual"] = r / scale;
    rows.push_back(row);
  }
  const double final_tol = get(o, "final_tol", 1e-2);
  return {{"command", "ito"},          {"function", name},
          {"eps0", eps0},              {"range", scale},
          {"levels", rows},            {"final_scaled_residual", res.back()},
          {"ok", res.back() <= final_tol}};
}

Json doleans(const Json& o) {
  SampledPath x = load_path(o, "x");
  const int n = get(o, "level", 9);
  const double eps0 = get(o, "eps0", 0.5);
  SampledPath mon[] = {x};
  auto p = lebesgue_partition(mon, n, eps0);
  auto e = doleans_exp(x, p);
  double trip_a = sup_distance(doleans_log(e, p), x);
  double sde = sde_residual(e, x, p);
  Json r{{"command", "doleans"},
         {"level", level_json(p)},
         {"exp_log_round_trip", trip_a},
         {"sde_residual", sde},
         {"positive", false}};
  bool ok = trip_a <= 5e-2 && sde <= 5e-2;
  auto v = x.values();
  if (std::all_of(v.begin(), v.end(), [](double a) { return a > 0.0; })) {
    auto ly = log_path(x, "doleans");
    SampledPath lmon[] = {ly};
    auto pl = lebesgue_partition(lmon, n, eps0);
    auto l = doleans_log(x, pl);
    double trip_b = sup_distance(doleans_exp(l, pl), x);
    double defs = sup_distance(l, doleans_log_integral(x, pl));
    r["positive"] = true;
    r["log_exp_round_trip"] = trip_b;
    r["log_definitions_gap"] = defs;
    ok = ok && trip_b <= 5e-2 && defs <= 2e-2;
    write_path_csv(o, {e, l}, {"doleans_exp", "doleans_log"});
  } else {
    write_path_csv(o, {e}, {"doleans_exp"});
  }
  r["ok"] = ok;
  return r;
}

Json girsanov(const Json& o) {
  const int n = get(o, "level", 8);
  const double eps0 = get(o, "eps0", 0.5);
  Json r{{"command", "girsanov"}};
  bool ok = true;
  if (o.contains("m") && o.contains("i")) {
    SampledPath m = load_path(o, "m"), i = load_path(o, "i");
    SampledPath mon[] = {m, i};
    auto p = lebesgue_partition(mon, n, eps0);
    auto a = girsanov_correct(m, i, p, GirsanovMethod::Stieltjes);
    auto b = girsanov_correct(m, i, p, GirsanovMethod::LogCovariation);
    double gap = sup_distance(a, b);
    r["path"] = {{"level", level_json(p)},
                 {"method_gap", gap},
                 {"stieltjes_terminal", a.back()},
                 {"log_covariation_terminal", b.back()},
                 {"correction_terminal", m.back() - a.back()}};
    write_path_csv(o, {a, b}, {"stieltjes", "log_covariation"});
  }
  const std::size_t paths = get<std::size_t>(o, "paths", 0);
  if (paths > 0) {
    ModelSpec s = model_of(o, Model::CorrelatedGbm);
    if (!o.contains("rho")) s.rho = 0.5;
    if (!o.contains("steps")) s.steps = 30000;
    Ensemble ens(s, paths);
    CapmEnsembleOptions opt;
    opt.level = n;
    opt.eps0 = get(o, "ensemble_eps0", 16.0);
    opt.girsanov = true;
    auto sum = capm_ensemble(ens, opt);
    r["ensemble"] = {{"paths", paths},
                     {"model", model_name(s.model)},
                     {"seed", s.seed},
                     {"eps0", opt.eps0},
                     {"corrected_stieltjes_weighted", mt_json(sum.girsanov_stieltjes_weighted)},
                     {"corrected_log_covariation_weighted", mt_json(sum.girsanov_log_weighted)},
                     {"uncorrected_weighted", mt_json(sum.growth_weighted)},
                     {"method_gap_max", sum.girsanov_method_gap}};
    ok = sum.girsanov_stieltjes_weighted.pass && sum.girsanov_log_weighted.pass;
  }
  r["ok"] = ok;
  return r;
}

Json dubins(const Json& o) {
  Json r{{"command", "dubins"}};
  const int n = get(o, "level", 8);
  const double eps0 = get(o, "eps0", 0.5);
  const std::size_t qv_steps = get<std::size_t>(o, "qv_steps", 64);
  bool ok = true;
  if (o.contains("x")) {
    SampledPath x = load_path(o, "x");
    SampledPath mon[] = {x};
    auto p = lebesgue_partition(mon, n, eps0);
    auto inc = unit_qv_increments(x, p, qv_steps);
    r["path"] = {{"level", level_json(p)}, {"qv", quadratic_variation(x, p).back()}, {"increments", inc}};
  }
  const std::size_t paths = get<std::size_t>(o, "paths", 200);
  if (paths > 0) {
    ModelSpec s = model_of(o, Model::BrownianSkeleton);
    if (!o.contains("sigma")) s.sigma = 2.0;
    if (!o.contains("skeleton_level")) s.skeleton_level = n;
    Ensemble ens(s, paths);
    auto incs = parallel_map<std::vector<double>>(paths, [&](std::size_t k) {
      auto x = ens.frame(k).column(0);
      SampledPath mon[] = {x};
      return unit_qv_increments(x, lebesgue_partition(mon, n, eps0), qv_steps);
    });
    std::vector<double> all;
    for (auto& v : incs) all.insert(all.end(), v.begin(), v.end());
    auto ks = brownian_law_test(all);
    double var = 0.0;
    for (double v : all) var += v * v;
    var /= static_cast<double>(all.size());
    ModelSpec ms = s;
    ms.model = Model::CorrelatedGbm;
    ms.steps = get<std::size_t>(o, "numeraire_steps", 1000);
    ms.horizon = o.contains("horizon") ? s.horizon : 1.0;
    Ensemble numeraire(ms, get<std::size_t>(o, "numeraire_paths", 2000));
    auto one = upper_expectation_estimate([](const MarketFrame&) { return 1.0; }, numeraire, std::string("I"), 1.0);
    r["ensemble"] = {{"paths", paths},
                     {"model", model_name(s.model)},
                     {"seed", s.seed},
                     {"ks_statistic", ks.statistic},
                     {"ks_critical", ks.critical},
                     {"ks_pass", ks.pass},
                     {"increment_count", ks.n},
                     {"increment_second_moment", var},
                     {"unit_functional", mean_json(one.estimate)},
                     {"unit_functional_consistent", one.consistent}};
    ok = ks.pass && std::abs(one.estimate.mean - 1.0) <= 3.0 * one.estimate.std_error;
  }
  r["ok"] = ok;
  return r;
}

Json capm(const Json& o) {
  Json r{{"command", "capm"}};
  const int n = get(o, "level", 8);
  const double eps0 = get(o, "eps0", 0.5);
  const double delta = get(o, "delta", 0.05);
  const double budget = get(o, "qv_budget", 0.04);
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::BadParameter, "delta must be in (0, 1)");
  if (!(budget > 0.0)) fail(ErrorCode::BadParameter, "QV budget must be positive");
  r["delta"] = delta;
  r["qv_budget"] = budget;
  r["z_quantile"] = normal_upper_quantile(delta / 2.0);
  bool ok = true;

  ModelSpec s = model_of(o, Model::CorrelatedGbm);
  if (o.contains("stock") && o.contains("index")) {
    SampledPath st = load_path(o, "stock"), ix = load_path(o, "index");
    SampledPath mon[] = {st, ix};
    auto p = log_partition(mon, n, eps0);
    auto c = capm_paths(st, ix, p);
    const std::size_t last = c.mu_s.size() - 1;
    auto lil = lil_ratio(c);
    Json path{{"level", level_json(p)},
              {"mu_s", c.mu_s[last]},
              {"mu_i", c.mu_i[last]},
              {"sigma_s", c.sigma_s[last]},
              {"sigma_i", c.sigma_i[last]},
              {"sigma_si", c.sigma_si[last]},
              {"deviation", c.deviation(last)},
              {"lil_empty", lil.empty},
              {"lil_running_max", lil.empty ? std::numeric_limits<double>::quiet_NaN() : lil.running_max.back()}};
    if (c.sigma_i[last] != 0.0) {
      auto b = capm_beta(c, c.grid->back());
      path["beta_lhs"] = b.lhs;
      path["beta_rhs"] = b.rhs;
    }
    r["path"] = path;
    std::vector<double> dev(c.mu_s.size());
    for (std::size_t k = 0; k < dev.size(); ++k) dev[k] = c.deviation(k);
    write_path_csv(o, {SampledPath::build(c.grid, dev), SampledPath::build(c.grid, c.sigma_s)},
                   {"deviation", "sigma_s"});
    // Ensemble parameters default to the ones realized on the data.
    const double span = c.grid->back() - c.grid->front();
    if (span > 0.0) {
      if (!o.contains("sigma_s")) s.sigma_s = std::sqrt(std::max(0.0, c.sigma_s[last]) / span);
      if (!o.contains("sigma_i")) s.sigma_i = std::sqrt(std::max(0.0, c.sigma_i[last]) / span);
      if (!o.contains("rho") && s.sigma_s > 0.0 && s.sigma_i > 0.0)
        s.rho = std::clamp(c.sigma_si[last] / span / (s.sigma_s * s.sigma_i), -1.0, 1.0);
    }
  } else if (!o.contains("rho")) {
    s.rho = 0.5;
  }
  const std::size_t paths = get<std::size_t>(o, "paths", 0);
  if (paths > 0) {
    if (!o.contains("horizon")) {
      // Long enough that Sigma^S reaches the budget on almost every path.
      double rate = s.sigma_s * s.sigma_s;
      s.horizon = rate > 0.0 ? std::max(1.6, 1.6 * budget / rate) : 1.6;
    }
    if (!o.contains("steps")) s.steps = static_cast<std::size_t>(std::ceil(30000.0 * s.horizon));
    Ensemble ens(s, paths);
    CapmEnsembleOptions opt;
    opt.level = n;
    opt.eps0 = get(o, "ensemble_eps0", 16.0);
    opt.delta = delta;
    opt.budget = budget;
    auto sum = capm_ensemble(ens, opt);
    r["ensemble"] = {{"paths", paths},
                     {"seed", s.seed},
                     {"sigma_s", s.sigma_s},
                     {"sigma_i", s.sigma_i},
                     {"rho", s.rho},
                     {"horizon", s.horizon},
                     {"steps", s.steps},
                     {"eps0", opt.eps0},
                     {"mean_crossings", sum.mean_stops},
                     {"deviation_weighted", mt_json(sum.deviation_weighted)},
                     {"equity_premium_weighted", mt_json(sum.equity_premium_weighted)},
                     {"exp_plus_weighted", mt_json(sum.exp_plus_weighted)},
                     {"exp_minus_weighted", mt_json(sum.exp_minus_weighted)}};
    r["exceed_frequency"] = sum.clt.exceed_frequency;
    r["exceed_std_error"] = sum.clt.std_error;
    r["reached"] = sum.clt.reached;
    r["within_bound"] = sum.clt.within_bound;
    ok = sum.clt.within_bound && sum.deviation_weighted.pass;
  }
  r["ok"] = ok;
  return r;
}

Json ingest(const Json& o) {
  if (!o.contains("input") || !o["input"].is_string()) fail(ErrorCode::BadParameter, "missing input file");
  ColumnMapping m;
  m.time_column = get<std::string>(o, "time_column", "time");
  if (o.contains("columns")) {
    std::string list = o["columns"].get<std::string>();
    std::stringstream ss(list);
    for (std::string c; std::getline(ss, c, ',');)
      if (!c.empty()) m.value_columns.push_back(c);
  }
  m.traded_count = get<std::size_t>(o, "traded", 0);
  MarketFrame f = ingest_csv_file(o["input"].get<std::string>(), m);
  if (o.contains("csv") && o["csv"].is_string()) export_csv_file(o["csv"].get<std::string>(), f);
  Json cols = Json::array();
  for (std::size_t j = 0; j < f.column_count(); ++j) {
    auto v = f.column_values(j);
    auto [a, b] = std::minmax_element(v.begin(), v.end());
    cols.push_back({{"name", f.names()[j]}, {"traded", j < f.traded_count()}, {"min", *a}, {"max", *b}});
  }
  return {{"command", "ingest"},
          {"rows", f.times().size()},
          {"time_begin", f.times().front()},
          {"time_end", f.times().back()},
          {"columns", cols},
          {"ok", true}};
}

// --- selfcheck -------------------------------------------------------------------

struct Check {
  Json body;
  bool pass;
};

Json selfcheck(const Json& o) {
  const std::uint64_t seed = get<std::uint64_t>(o, "seed", 42);
  std::vector<std::pair<std::string, Check>> checks;
  auto add = [&](const std::string& name, Json body, bool pass) {
    body["pass"] = pass;
    checks.push_back({name, {std::move(body), pass}});
  };

  ModelSpec bm;
  bm.model = Model::Brownian;
  bm.steps = 20000;
  bm.columns = 2;
  bm.seed = seed;
  {
    double worst_bp = 0.0, worst_pol = 0.0;
    for (std::uint64_t k = 0; k < 4; ++k) {
      auto f = generate_paths(bm, k);
      auto x = f.column(0), y = f.column(1);
      double scale = 1.0 + sup_abs(multiply_paths(x, y));
      SampledPath mon[] = {x, y};
      for (int n = 4; n <= 8; ++n) {
        auto p = lebesgue_partition(mon, n, 0.5);
        worst_bp = std::max(worst_bp, by_parts_residual(x, y, p) / scale);
        auto cv = covariation_approx(x, y, p);
        worst_pol = std::max(worst_pol, sup_distance(polarization(x, y, p), cv) / (1.0 + sup_abs(cv)));
      }
    }
    add("by_parts", {{"max_relative_residual", worst_bp}}, worst_bp <= 1e-8);
    add("polarization", {{"max_relative_gap", worst_pol}}, worst_pol <= 1e-9);
  }
  {
    ModelSpec sk;
    sk.model = Model::BrownianSkeleton;
    sk.skeleton_level = 6;
    sk.seed = seed;
    std::vector<double> q;
    for (std::uint64_t k = 0; k < 40; ++k) {
      auto x = generate_paths(sk, k).column(0);
      SampledPath mon[] = {x};
      q.push_back(quadratic_variation(x, lebesgue_partition(mon, 6, 0.5)).back());
    }
    auto m = weighted_mean(q, {});
    add("quadratic_variation", {{"mean", m.mean}, {"std_error", m.std_error}}, std::abs(m.mean - 1.0) <= 0.05);
  }
  {
    auto f = generate_paths(bm, 10);
    std::vector<SampledPath> one{f.column(0)};
    auto sq = field_named("square");
    double r = 0.0;
    for (int n = 4; n <= 8; ++n) r = std::max(r, ito_formula_residual(sq, one, lebesgue_partition(one, n, 0.5)));
    add("ito_square", {{"max_residual", r}}, r <= 1e-9 * (1.0 + sup_abs(one[0]) * sup_abs(one[0])));
  }
  {
    ModelSpec s = bm;
    s.sigma = 0.2;
    s.columns = 1;
    auto x = generate_paths(s, 11).column(0);
    SampledPath mon[] = {x};
    auto p = lebesgue_partition(mon, 9, 0.5);
    auto e = doleans_exp(x, p);
    double a = sup_distance(doleans_log(e, p), x);
    double sde = sde_residual(e, x, p);
    add("doleans", {{"round_trip", a}, {"sde_residual", sde}}, a <= 5e-2 && sde <= 5e-2);
  }
  {
    ModelSpec cg;
    cg.model = Model::CorrelatedGbm;
    cg.steps = 2000;
    cg.rho = 0.5;
    cg.seed = seed;
    double worst = 0.0, defect = 0.0;
    Philox4x32 rng(seed, 1u << 20);
    for (std::uint64_t k = 0; k < 5; ++k) {
      auto f = generate_paths(cg, k);
      SimpleStrategy g;
      double t = 0.0;
      for (int j = 0; j < 6; ++j) {
        g.stop_times.push_back(t);
        g.bets.push_back({4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0});
        t += 0.15 * rng.uniform();
      }
      ModelSpec ns = cg;
      ns.model = Model::Gbm;
      ns.columns = 1;
      ns.x0 = 1.0;
      ns.sigma = 0.25;
      auto num = generate_paths(ns, 1000 + k).column(0);
      auto sf = expand_self_financing(g, f, num, 1.0);
      auto cap = capital_process(g, f, 1.0);
      auto disc = discount_by_numeraire(sf.capital, num);
      worst = std::max(worst, sup_distance(disc, cap) / (1.0 + sup_abs(cap)));
      defect = std::max(defect, sf.self_financing_defect);
    }
    add("numeraire", {{"max_relative_gap", worst}, {"self_financing_defect", defect}}, worst <= 1e-9 && defect <= 1e-9);
  }
  {
    ModelSpec cg;
    cg.model = Model::CorrelatedGbm;
    cg.steps = 4000;
    cg.horizon = 1.6;
    cg.rho = 0.5;
    cg.seed = seed;
    Ensemble ens(cg, 400);
    CapmEnsembleOptions opt;
    opt.eps0 = 16.0;
    opt.girsanov = true;
    auto s = capm_ensemble(ens, opt);
    add("girsanov", {{"deviation_weighted", mt_json(s.deviation_weighted)},
                     {"stieltjes_weighted", mt_json(s.girsanov_stieltjes_weighted)},
                     {"method_gap_max", s.girsanov_method_gap}},
        s.deviation_weighted.pass && s.girsanov_stieltjes_weighted.pass);
    add("equity_premium", {{"weighted", mt_json(s.equity_premium_weighted)}, {"sigma_i_at_1", mean_json(s.sigma_i_at)}},
        s.equity_premium_weighted.pass);
    add("exp_martingale", {{"plus", mt_json(s.exp_plus_weighted)}, {"minus", mt_json(s.exp_minus_weighted)}},
        s.exp_plus_weighted.pass && s.exp_minus_weighted.pass);
    add("clt_bound", {{"exceed_frequency", s.clt.exceed_frequency},
                      {"std_error", s.clt.std_error},
                      {"z_quantile", s.clt.z_quantile}},
        s.clt.within_bound);
  }
  {
    ModelSpec sk;
    sk.model = Model::BrownianSkeleton;
    sk.skeleton_level = 6;
    sk.sigma = 2.0;
    sk.seed = seed;
    std::vector<double> all;
    for (std::uint64_t k = 0; k < 20; ++k) {
      auto x = generate_paths(sk, k).column(0);
      SampledPath mon[] = {x};
      auto inc = unit_qv_increments(x, lebesgue_partition(mon, 6, 0.5), 64);
      all.insert(all.end(), inc.begin(), inc.end());
    }
    auto ks = brownian_law_test(all);
    add("dubins_schwarz", {{"ks_statistic", ks.statistic}, {"ks_critical", ks.critical}}, ks.pass);
  }

  Json list = Json::array();
  bool ok = true;
  for (auto& [name, c] : checks) {
    Json b = c.body;
    b["name"] = name;
    list.push_back(b);
    ok = ok && c.pass;
  }
  return {{"command", "selfcheck"}, {"seed", seed}, {"checks", list}, {"ok", ok}};
}

}  // namespace

Json run_analysis(const std::string& name, const Json& options) {
  const Json& o = options.is_null() ? Json::object() : options;
  if (!o.is_object()) fail(ErrorCode::BadParameter, "options must be a JSON object");
  if (name == "ingest") return ingest(o);
  if (name == "integrate") return integrate(o);
  if (name == "qv") return qv(o);
  if (name == "byparts") return byparts(o);
  if (name == "ito") return ito(o);
  if (name == "doleans") return doleans(o);
  if (name == "girsanov") return girsanov(o);
  if (name == "dubins") return dubins(o);
  if (name == "capm") return capm(o);
  if (name == "selfcheck") return selfcheck(o);
  fail(ErrorCode::BadParameter, "unknown analysis '" + name + "'");
}

}  // namespace pathcalc
