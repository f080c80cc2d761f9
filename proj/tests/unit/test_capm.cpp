#include <algorithm>

#include "pathcalc/calculus.hpp"
#include "pathcalc/capm.hpp"
#include "pathcalc/doleans.hpp"
#include "pathcalc/parallel.hpp"
#include "pathcalc/stats.hpp"
#include "support.hpp"

using namespace testing;

namespace {

SampledPath gbm(std::uint64_t seed, std::uint64_t k, double sigma, std::size_t steps, double horizon = 1.0) {
  ModelSpec s;
  s.model = Model::Gbm;
  s.x0 = 1.0;
  s.sigma = sigma;
  s.steps = steps;
  s.seed = seed;
  s.horizon = horizon;
  return generate_paths(s, k).column(0);
}

PartitionLevel logs(std::vector<SampledPath> xs, int n, double eps0 = 16.0) { return log_partition(xs, n, eps0); }

}  // namespace

TEST_CASE("relative growth") {
  auto c = constant(4.0);
  CHECK(sup_abs(relative_growth(c, logs({c}, 6))) == 0.0);
  CHECK(code_of([] { relative_growth(line(1.0, -1.0), explicit_partition({0.0}, 0.0, 1.0)); }) ==
        ErrorCode::NonPositivePath);

  auto mu = parallel_map<double>(4000, [](std::size_t k) {
    auto x = gbm(81, k, 0.2, 2000);
    return relative_growth(x, logs({x}, 8)).back();
  });
  CHECK(std::abs(mean(mu)) <= 3.0 * std::sqrt(0.04 / 4000.0));
  CHECK(variance(mu) == doctest::Approx(0.04).epsilon(0.1));

  for (std::uint64_t k = 0; k < 5; ++k) {
    auto x = gbm(82, k, 0.2, 100000);
    auto p = lebesgue_partition(std::vector<SampledPath>{log_path(x, "x")}, 9, 0.5);
    auto lam = doleans_log(x, p);
    CHECK(sup_distance(relative_growth(x, p), add(lam, constant(std::log(x.front()), 1), -1.0)) <= 5e-2);
  }
}

TEST_CASE("relative covariation") {
  auto c = constant(2.0);
  auto x = gbm(83, 0, 0.3, 1000);
  CHECK(sup_abs(relative_covariation(c, x, logs({c, x}, 6))) == 0.0);

  std::vector<double> ssi, ss;
  for (std::uint64_t k = 0; k < 20; ++k) {
    auto f = correlated(84, k, 40000);
    auto s = f.column("S"), i = f.column("I");
    auto p = logs({s, i}, 8, 2.0);
    auto a = relative_covariation(s, i, p);
    auto b = relative_covariation(s, i, p, SigmaMethod::LogCovariation);
    CHECK(std::abs(a.back() - 0.03) <= 0.01);
    CHECK(sup_distance(a, b) <= 1e-2);
    CHECK(sup_distance(a, relative_covariation(i, s, p)) <= 1e-15);
    auto y = gbm(85, k, 0.3, 40000);
    CHECK(std::abs(relative_covariation(y, y, logs({y}, 8, 2.0)).back() - 0.09) <= 0.02);
  }
}

TEST_CASE("capm deviation and the exponential test process") {
  auto c = constant(1.3);
  auto pc = logs({c}, 5);
  CHECK(sup_abs(capm_deviation(c, c, pc)) == 0.0);
  auto x = gbm(86, 0, 0.3, 2000);
  auto px = logs({x}, 8);
  CHECK(sup_distance(exp_test_process(x, x, px, 0.0), map_values(x, [](double) { return 1.0; })) == 0.0);

  // Equity premium under the index numeraire, and the exponential
  // I-martingales, over an ensemble.
  struct Row {
    double w, dev, ep, em, indep_gap;
  };
  const std::size_t n = 2000;
  auto rows = parallel_map<Row>(n, [](std::size_t k) {
    auto i = gbm(87, k, 0.3, 10000);
    auto p = logs({i}, 8);
    Row r;
    r.w = i.back() / i.front();
    r.dev = capm_deviation(i, i, p).back();
    r.ep = exp_test_process(i, i, p, 1.0).back();
    r.em = exp_test_process(i, i, p, -1.0).back();
    auto f = correlated(88, k, 2000, 0.0);
    auto s = f.column("S"), j = f.column("I");
    auto q = logs({s, j}, 8);
    r.indep_gap = capm_deviation(s, j, q).back() - relative_growth(s, q).back();
    return r;
  });
  std::vector<double> w, dev, ep, em, gap;
  for (auto& r : rows) {
    w.push_back(r.w);
    dev.push_back(r.dev);
    ep.push_back(r.ep);
    em.push_back(r.em);
    gap.push_back(r.indep_gap);
  }
  CHECK(martingale_test(dev, 0.0, w).pass);
  CHECK(martingale_test(ep, 1.0, w).pass);
  CHECK(martingale_test(em, 1.0, w).pass);
  CHECK(std::abs(mean(gap)) <= 0.005);
}

TEST_CASE("clt bound pieces") {
  CHECK(normal_upper_quantile(0.025) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(std::abs(normal_upper_quantile(0.025) - 1.959964) <= 1e-6);
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-10));
  CHECK(code_of([] { normal_quantile(1.0); }) == ErrorCode::BadParameter);

  auto f = correlated(89, 0, 2000);
  auto s = f.column("S"), i = f.column("I");
  auto c = capm_paths(s, i, logs({s, i}, 8));
  auto never = clt_event(c, 10.0, 1.96);
  CHECK_FALSE(never.reached);
  CHECK_FALSE(never.exceed);
  std::vector<CltEvent> evs(40, never);
  auto rep = clt_report(evs, std::vector<double>(40, 1.0), 0.05, 10.0);
  CHECK(rep.exceed_frequency == 0.0);
  CHECK(rep.reached == 0);
  CHECK(code_of([&] { clt_report(evs, {}, 1.5, 10.0); }) == ErrorCode::BadParameter);
  CHECK(code_of([&] { clt_report(evs, {}, 0.05, 0.0); }) == ErrorCode::BadParameter);

  auto hit = clt_event(c, 0.02, 1.96);
  CHECK(hit.reached);
  CHECK(value_at(c.grid, c.sigma_s, hit.tau) == doctest::Approx(0.02).epsilon(1e-9));
  CHECK(hit.deviation == doctest::Approx(value_at(c.grid, std::vector<double>([&] {
                                           std::vector<double> d(c.mu_s.size());
                                           for (std::size_t k = 0; k < d.size(); ++k) d[k] = c.deviation(k);
                                           return d;
                                         }()),
                                                  hit.tau)));
}

TEST_CASE("law of the iterated logarithm ratio") {
  auto short_path = correlated(90, 0, 1000);
  auto s0 = short_path.column("S"), i0 = short_path.column("I");
  CHECK(lil_ratio(s0, i0, logs({s0, i0}, 6)).empty);

  // sigma_S^2 horizon = 20
  auto maxima = parallel_map<double>(200, [](std::size_t k) {
    ModelSpec s;
    s.model = Model::CorrelatedGbm;
    s.sigma_s = 1.0;
    s.sigma_i = 0.3;
    s.horizon = 20.0;
    s.steps = 40000;
    s.seed = 91;
    auto f = generate_paths(s, k);
    auto a = f.column("S"), b = f.column("I");
    auto l = lil_ratio(a, b, log_partition(std::vector<SampledPath>{a, b}, 6, 16.0));
    return l.empty ? -1.0 : l.running_max.back();
  });
  std::size_t inside = 0;
  for (double m : maxima) inside += (m >= 0.3 && m <= 1.3);
  CHECK(inside >= 130);
  std::sort(maxima.begin(), maxima.end());
  CHECK(maxima[100] >= 0.3);
  CHECK(maxima[100] <= 1.3);

  auto same = lil_ratio(s0, s0, logs({s0}, 6));
  CHECK(same.empty);
}

TEST_CASE("beta sides") {
  auto x = gbm(92, 0, 0.3, 5000);
  auto p = logs({x}, 8);
  auto b = capm_beta(x, x, p, 1.0);
  CHECK(b.lhs == b.rhs);
  auto c = map_values(x, [](double) { return 2.0; });
  CHECK(code_of([&] { capm_beta(x, c, p, 1.0); }) == ErrorCode::DegenerateDenominator);
  CHECK(code_of([&] { capm_beta(x, x, p, 2.0); }) == ErrorCode::OutOfDomain);

  // Sigma^I_t = 9 on a long horizon: deviation bounded like the LIL ratio.
  ModelSpec s;
  s.model = Model::CorrelatedGbm;
  s.sigma_s = 0.4;
  s.sigma_i = 0.3;
  s.rho = 0.5;
  s.horizon = 100.0;
  s.steps = 100000;
  s.seed = 93;
  std::size_t bounded = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    auto f = generate_paths(s, k);
    auto a = f.column("S"), i = f.column("I");
    auto q = log_partition(std::vector<SampledPath>{a, i}, 6, 16.0);
    auto beta = capm_beta(a, i, q, 100.0);
    auto c2 = capm_paths(a, i, q);
    double ss = c2.sigma_s.back();
    bounded += std::abs(beta.lhs - beta.rhs) / std::sqrt(2.0 * ss * std::log(std::log(ss))) <= 2.0;
  }
  CHECK(bounded >= 16);
}
