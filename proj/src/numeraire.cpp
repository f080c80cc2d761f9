#include "pathcalc/numeraire.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "pathcalc/calculus.hpp"
#include "pathcalc/doleans.hpp"
#include "pathcalc/error.hpp"
#include "pathcalc/stats.hpp"

namespace pathcalc {

void validate(const SimpleStrategy& g, std::size_t traded) {
  if (g.stop_times.size() != g.bets.size()) fail(ErrorCode::LengthMismatch, "strategy needs one bet per stop time");
  for (std::size_t k = 0; k < g.stop_times.size(); ++k) {
    if (!std::isfinite(g.stop_times[k])) fail(ErrorCode::NonFiniteValue, "non-finite stop time");
    if (k > 0 && g.stop_times[k] < g.stop_times[k - 1])
      fail(ErrorCode::NonMonotoneTimes, "strategy stop times must be nondecreasing");
    if (g.bets[k].size() != traded) {
      std::ostringstream os;
      os << "bet " << k << " has " << g.bets[k].size() << " components, market trades " << traded;
      fail(ErrorCode::DimensionMismatch, os.str());
    }
    for (double b : g.bets[k]) {
      if (!std::isfinite(b)) fail(ErrorCode::NonFiniteValue, "non-finite bet");
      if (std::abs(b) > g.bound) fail(ErrorCode::BadParameter, "bet exceeds the declared bound");
    }
  }
}

SimpleStrategy parse_strategy_json(const std::string& text, double bound) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("strategy JSON: ") + e.what());
  }
  if (!j.is_array()) fail(ErrorCode::ParseError, "strategy JSON must be an array");
  SimpleStrategy g;
  g.bound = bound;
  for (const auto& rec : j) {
    if (!rec.is_object() || !rec.contains("time") || !rec.contains("bets") || !rec["time"].is_number() ||
        !rec["bets"].is_array())
      fail(ErrorCode::ParseError, "strategy record needs numeric 'time' and array 'bets'");
    g.stop_times.push_back(rec["time"].get<double>());
    std::vector<double> b;
    for (const auto& v : rec["bets"]) {
      if (!v.is_number()) fail(ErrorCode::ParseError, "bets must be numbers");
      b.push_back(v.get<double>());
    }
    g.bets.push_back(std::move(b));
  }
  validate(g, g.bets.empty() ? 0 : g.bets.front().size());
  return g;
}

std::string strategy_to_json(const SimpleStrategy& g) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t k = 0; k < g.stop_times.size(); ++k) j.push_back({{"time", g.stop_times[k]}, {"bets", g.bets[k]}});
  return j.dump();
}

namespace {

// Frame grid joined with the rebalance times, plus the index of each
// rebalance in it (one entry per distinct time, carrying the last bet given
// at that time).
struct Schedule {
  Grid grid;
  std::vector<std::size_t> at;
  std::vector<const std::vector<double>*> bets;
};

Schedule schedule(const SimpleStrategy& g, const MarketFrame& frame, std::span<const double> extra_times) {
  const double lo = frame.times().front(), hi = frame.times().back();
  for (double s : g.stop_times)
    if (s < lo || s > hi) fail(ErrorCode::DomainMismatch, "strategy stop time outside the frame domain");
  std::vector<std::span<const double>> parts{frame.times(), g.stop_times};
  if (!extra_times.empty()) parts.push_back(extra_times);
  Schedule s;
  s.grid = make_grid(merge_sorted(parts));
  const auto& t = *s.grid;
  std::size_t i = 0;
  for (std::size_t k = 0; k < g.stop_times.size(); ++k) {
    while (t[i] < g.stop_times[k]) ++i;
    if (!s.at.empty() && s.at.back() == i) {
      s.bets.back() = &g.bets[k];
    } else {
      s.at.push_back(i);
      s.bets.push_back(&g.bets[k]);
    }
  }
  return s;
}

std::vector<std::vector<double>> traded_on(const MarketFrame& frame, const Grid& grid) {
  std::vector<std::vector<double>> out;
  for (std::size_t j = 0; j < frame.traded_count(); ++j) {
    auto r = resample(frame.column(j), grid);
    out.emplace_back(r.values().begin(), r.values().end());
  }
  return out;
}

}  // namespace

SampledPath capital_process(const SimpleStrategy& g, const MarketFrame& frame, double c) {
  validate(g, frame.traded_count());
  if (!std::isfinite(c)) fail(ErrorCode::NonFiniteValue, "initial capital must be finite");
  Schedule s = schedule(g, frame, {});
  auto w = traded_on(frame, s.grid);
  const std::size_t n = s.grid->size(), J = w.size();
  std::vector<double> out(n, c);
  CompensatedSum done;
  done.add(c);
  std::size_t k = 0;
  bool active = false;
  for (std::size_t i = 0; i < n; ++i) {
    while (k < s.at.size() && s.at[k] <= i) {
      if (active) {
        std::size_t a = s.at[k - 1], b = s.at[k];
        for (std::size_t j = 0; j < J; ++j) done.add((*s.bets[k - 1])[j] * (w[j][b] - w[j][a]));
      }
      active = true;
      ++k;
    }
    double v = done.value();
    if (active) {
      std::size_t a = s.at[k - 1];
      for (std::size_t j = 0; j < J; ++j) v += (*s.bets[k - 1])[j] * (w[j][i] - w[j][a]);
    }
    out[i] = v;
  }
  return SampledPath::build(s.grid, std::move(out));
}

SelfFinancingResult expand_self_financing(const SimpleStrategy& g, const MarketFrame& frame,
                                          const SampledPath& numeraire, double c) {
  validate(g, frame.traded_count());
  require_positive(numeraire, "expand_self_financing");
  SampledPath first = frame.column(0);
  require_same_domain(first, numeraire, "expand_self_financing");
  Schedule s = schedule(g, frame, numeraire.times());
  auto w = traded_on(frame, s.grid);
  auto s0 = resample(numeraire, s.grid);
  const std::size_t n = s.grid->size(), J = w.size();

  // Barred prices wbar_j = S0bar * S_j.
  std::vector<std::vector<double>> bar(J, std::vector<double>(n));
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t i = 0; i < n; ++i) bar[j][i] = s0.values()[i] * w[j][i];

  SelfFinancingResult r{{}, s0, 0.0};
  std::vector<double> cap(n);
  std::vector<double> hold(J + 1, 0.0);
  hold[0] = c;
  auto value = [&](const std::vector<double>& h, std::size_t i) {
    double v = h[0] * s0.values()[i];
    for (std::size_t j = 0; j < J; ++j) v += h[j + 1] * bar[j][i];
    return v;
  };
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k < s.at.size() && s.at[k] == i) {
      const double before = value(hold, i);
      const auto& h = *s.bets[k];
      double risky = 0.0;
      for (std::size_t j = 0; j < J; ++j) risky += h[j] * bar[j][i];
      std::vector<double> next(J + 1);
      next[0] = (before - risky) / s0.values()[i];
      for (std::size_t j = 0; j < J; ++j) next[j + 1] = h[j];
      const double after = value(next, i);
      r.self_financing_defect = std::max(r.self_financing_defect, std::abs(after - before) / (1.0 + std::abs(before)));
      hold = std::move(next);
      r.holdings.push_back(hold);
      ++k;
    }
    cap[i] = value(hold, i);
  }
  r.capital = SampledPath::build(s.grid, std::move(cap));
  return r;
}

namespace {

template <class Op>
SampledPath combine(const SampledPath& x, const SampledPath& y, const char* what, Op op) {
  require_same_domain(x, y, what);
  Grid g;
  if (x.grid() == y.grid()) {
    g = x.grid();
  } else {
    std::span<const double> parts[] = {x.times(), y.times()};
    g = make_grid(merge_sorted(parts));
  }
  auto a = resample(x, g), b = resample(y, g);
  std::vector<double> out(g->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a.values()[i], b.values()[i]);
  return SampledPath::build(g, std::move(out));
}

}  // namespace

SampledPath discount_by_numeraire(const SampledPath& x, const SampledPath& i) {
  require_positive(i, "discount_by_numeraire");
  return combine(x, i, "discount_by_numeraire", [](double a, double b) { return a / b; });
}

SampledPath multiply_paths(const SampledPath& x, const SampledPath& y) {
  return combine(x, y, "multiply_paths", [](double a, double b) { return a * b; });
}

SampledPath girsanov_correct(const SampledPath& m, const SampledPath& i, const PartitionLevel& p,
                             GirsanovMethod method) {
  require_positive(i, "girsanov_correct");
  require_same_domain(m, i, "girsanov_correct");
  if (method == GirsanovMethod::Stieltjes) {
    SampledPath both[] = {m, i};
    EvalGrid g = make_eval_grid(both, p);
    auto ms = resample(m, g.grid), is = resample(i, g.grid);
    auto cv = covariation_sums(g, is.values(), ms.values());
    std::vector<double> inv(cv.size());
    for (std::size_t k = 0; k < inv.size(); ++k) inv[k] = 1.0 / is.values()[k];
    auto corr = stieltjes_sums(inv, cv);
    std::vector<double> out(cv.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = ms.values()[k] - corr[k];
    return SampledPath::build(g.grid, std::move(out));
  }
  auto l = doleans_log(i, p);
  SampledPath both[] = {m, l};
  EvalGrid g = make_eval_grid(both, p);
  auto ms = resample(m, g.grid), ls = resample(l, g.grid);
  auto cv = covariation_sums(g, ls.values(), ms.values());
  std::vector<double> out(cv.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = ms.values()[k] - cv[k];
  return SampledPath::build(g.grid, std::move(out));
}

MartingaleTestReport martingale_test(std::span<const double> terminal, double initial,
                                     std::span<const double> weights) {
  if (terminal.size() < 30) fail(ErrorCode::TooFewSamples, "martingale test needs at least 30 values");
  if (!weights.empty() && weights.size() != terminal.size())
    fail(ErrorCode::LengthMismatch, "one weight per terminal value required");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w)) fail(ErrorCode::BadWeight, "weights must be positive and finite");
  for (double x : terminal)
    if (!std::isfinite(x)) fail(ErrorCode::NonFiniteValue, "non-finite terminal value");
  auto est = weighted_mean(terminal, weights);
  MartingaleTestReport r;
  r.n_paths = est.n;
  r.weighted_mean_terminal = est.mean;
  r.initial_value = initial;
  r.std_error = est.std_error;
  const double diff = est.mean - initial;
  if (est.std_error > 0.0)
    r.z_score = diff / est.std_error;
  else
    r.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  r.pass = std::abs(r.z_score) <= 3.0;
  return r;
}

}  // namespace pathcalc
