#include "pathcalc/capm.hpp"
#include "pathcalc/numeraire.hpp"
#include "pathcalc/parallel.hpp"
#include "pathcalc/random.hpp"
#include "support.hpp"

using namespace testing;

namespace {

SimpleStrategy random_strategy(Philox4x32& rng, std::size_t traded, std::size_t count, double horizon) {
  SimpleStrategy g;
  double t = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    g.stop_times.push_back(t);
    std::vector<double> b(traded);
    for (double& v : b) v = 4.0 * rng.uniform() - 2.0;
    g.bets.push_back(b);
    t += horizon / static_cast<double>(count) * (0.05 + 0.9 * rng.uniform());
  }
  return g;
}

SampledPath gbm_path(std::uint64_t stream, double sigma, std::size_t steps) {
  ModelSpec s;
  s.model = Model::Gbm;
  s.x0 = 1.0;
  s.sigma = sigma;
  s.steps = steps;
  s.seed = 808;
  return generate_paths(s, stream).column(0);
}

}  // namespace

TEST_CASE("capital processes") {
  auto f = correlated(61, 0, 400);
  SimpleStrategy zero{{0.0, 0.4}, {{0.0, 0.0}, {0.0, 0.0}}};
  CHECK(sup_distance(capital_process(zero, f, 2.0), constant(2.0)) == 0.0);

  MarketFrame one(f.grid(), {std::vector<double>(f.column_values(0).begin(), f.column_values(0).end())}, {"S"}, 1);
  SimpleStrategy hold{{0.0}, {{1.0}}};
  auto k = capital_process(hold, one, 5.0);
  auto s = one.column(0);
  CHECK(sup_distance(k, add(constant(5.0 - s.front(), 1), s)) <= 1e-12);

  std::vector<double> col(f.column_values(0).begin(), f.column_values(0).end());
  MarketFrame twins(f.grid(), {col, col}, {"A", "B"}, 2);
  SimpleStrategy hedge{{0.0, 0.3, 0.7}, {{1.0, -1.0}, {2.5, -2.5}, {-1.0, 1.0}}};
  CHECK(sup_distance(capital_process(hedge, twins, 1.0), constant(1.0)) <= 1e-15);

  SimpleStrategy wrong{{0.0}, {{1.0}}};
  CHECK(code_of([&] { capital_process(wrong, f, 1.0); }) == ErrorCode::DimensionMismatch);
  SimpleStrategy late{{0.0, 3.0}, {{1.0, 0.0}, {0.0, 0.0}}};
  CHECK(code_of([&] { capital_process(late, f, 1.0); }) == ErrorCode::DomainMismatch);
  SimpleStrategy big{{0.0}, {{5.0, 0.0}}, 1.0};
  CHECK(code_of([&] { capital_process(big, f, 1.0); }) == ErrorCode::BadParameter);
}

TEST_CASE("self-financing expansion") {
  auto f = correlated(62, 0, 2000);
  auto num = gbm_path(7, 0.25, 2000);
  SimpleStrategy zero{{0.0, 0.5}, {{0.0, 0.0}, {0.0, 0.0}}};
  auto z = expand_self_financing(zero, f, num, 3.0);
  CHECK(sup_distance(z.capital, scale(num, 3.0)) <= 1e-12 * 3.0 * sup_abs(num));

  Philox4x32 rng(62, 1);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = random_strategy(rng, 2, 8, 1.0);
    auto cash = map_values(num, [](double) { return 1.0; });
    auto plain = expand_self_financing(g, f, cash, 1.5);
    auto direct = capital_process(g, f, 1.5);
    CHECK(sup_distance(plain.capital, direct) <= 1e-12 * (1.0 + sup_abs(direct)));

    auto r = expand_self_financing(g, f, num, 1.5);
    CHECK(r.self_financing_defect <= 1e-9);
    CHECK(r.holdings.size() == g.stop_times.size());
    auto disc = discount_by_numeraire(r.capital, num);
    CHECK(sup_distance(disc, direct) <= 1e-9 * (1.0 + sup_abs(direct)));
  }
  CHECK(code_of([&] { expand_self_financing(zero, f, scale(num, -1.0), 1.0); }) == ErrorCode::NonPositivePath);
}

TEST_CASE("discounting") {
  auto x = brownian(63, 0, 300).column(0);
  auto i = gbm_path(1, 0.3, 300);
  CHECK(sup_distance(discount_by_numeraire(x, map_values(i, [](double) { return 1.0; })), x) == 0.0);
  CHECK(sup_distance(discount_by_numeraire(i, i), map_values(i, [](double) { return 1.0; })) == 0.0);
  CHECK(sup_distance(multiply_paths(discount_by_numeraire(x, i), i), x) <= 1e-14 * (1.0 + sup_abs(x)));
  CHECK(code_of([&] { discount_by_numeraire(x, x); }) == ErrorCode::NonPositivePath);
}

TEST_CASE("strategy files") {
  auto g = parse_strategy_json(R"([{"time": 0, "bets": [1, -0.5]}, {"time": 0.25, "bets": [0, 2]}])");
  CHECK(g.stop_times == std::vector<double>{0.0, 0.25});
  CHECK(g.bets[1][1] == 2.0);
  auto again = parse_strategy_json(strategy_to_json(g));
  CHECK(again.stop_times == g.stop_times);
  CHECK(again.bets == g.bets);
  CHECK(code_of([] { parse_strategy_json("[{\"time\": 0}]"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_strategy_json("not json"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_strategy_json(R"([{"time": 0.5, "bets": [1]}, {"time": 0.1, "bets": [1]}])"); }) ==
        ErrorCode::NonMonotoneTimes);
}

TEST_CASE("girsanov correction basics") {
  auto m = brownian(64, 0, 20000).column(0);
  auto c = map_values(m, [](double) { return 2.0; });
  SampledPath mon[] = {m, c};
  auto p = lebesgue_partition(mon, 8, 0.5);
  for (auto how : {GirsanovMethod::Stieltjes, GirsanovMethod::LogCovariation})
    CHECK(sup_distance(girsanov_correct(m, c, p, how), m) <= 1e-15);
  auto one = map_values(m, [](double) { return 1.0; });
  CHECK(sup_distance(girsanov_correct(m, one, p, GirsanovMethod::Stieltjes), m) == 0.0);
  CHECK(code_of([&] { girsanov_correct(m, m, p, GirsanovMethod::Stieltjes); }) == ErrorCode::NonPositivePath);
}

TEST_CASE("girsanov methods agree and the correction matches the covariation") {
  struct Row {
    double gap, corr_indep, corr_linked;
  };
  const std::size_t n = 1000;
  auto rows = parallel_map<Row>(n, [](std::size_t k) {
    auto f = correlated(65, k, 20000);
    auto s = f.column("S"), i = f.column("I");
    SampledPath mon[] = {s, i};
    auto p = log_partition(mon, 8, 16.0);
    auto mu = relative_growth(s, p);
    auto a = girsanov_correct(mu, i, p, GirsanovMethod::Stieltjes);
    auto b = girsanov_correct(mu, i, p, GirsanovMethod::LogCovariation);
    auto w = brownian(66, k, 20000).column(0);
    SampledPath mon2[] = {w, i};
    auto q = lebesgue_partition(mon2, 8, 0.5);
    auto ind = girsanov_correct(w, i, q, GirsanovMethod::Stieltjes);
    return Row{sup_distance(a, b), w.back() - ind.back(), mu.back() - a.back()};
  });
  std::vector<double> indep, linked;
  double gap = 0.0;
  for (auto& r : rows) {
    gap = std::max(gap, r.gap);
    indep.push_back(r.corr_indep);
    linked.push_back(r.corr_linked);
  }
  CHECK(gap <= 5e-2);
  CHECK(std::abs(mean(indep)) <= 3.0 * std::sqrt(variance(indep) / double(n)) + 1e-9);
  // rho sigma_S sigma_I t = 0.03
  CHECK(std::abs(mean(linked) - 0.03) <= 0.01);
}

TEST_CASE("martingale test gate") {
  std::vector<double> flat(50, 2.0);
  auto r = martingale_test(flat, 2.0, {});
  CHECK(r.z_score == 0.0);
  CHECK(r.pass);

  GaussianStream g(67, 0);
  std::vector<double> draws(1000);
  for (double& d : draws) d = g();
  auto ok = martingale_test(draws, 0.0, {});
  CHECK(ok.pass);
  double sd = std::sqrt(variance(draws));
  std::vector<double> shifted = draws;
  for (double& d : shifted) d += 10.0 * sd / std::sqrt(1000.0);
  auto bad = martingale_test(shifted, 0.0, {});
  CHECK_FALSE(bad.pass);
  CHECK(bad.z_score > 3.0);

  std::vector<double> w(1000, 1.0);
  CHECK(martingale_test(draws, 0.0, w).weighted_mean_terminal == ok.weighted_mean_terminal);
  w[3] = -1.0;
  CHECK(code_of([&] { martingale_test(draws, 0.0, w); }) == ErrorCode::BadWeight);
  CHECK(code_of([&] { martingale_test(std::vector<double>(29, 0.0), 0.0, {}); }) == ErrorCode::TooFewSamples);
}
