#include "pathcalc/calculus.hpp"
#include "pathcalc/capm.hpp"
#include "pathcalc/doleans.hpp"
#include "support.hpp"

using namespace testing;

namespace {

PartitionLevel level(const SampledPath& x, int n) { return lebesgue_partition(std::vector<SampledPath>{x}, n, 0.5); }

SampledPath gbm_of(const SampledPath& w, double sigma) {
  std::vector<double> v(w.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::exp(sigma * w.values()[i] - 0.5 * sigma * sigma * w.times()[i]);
  return SampledPath::build(w.grid(), v);
}

}  // namespace

TEST_CASE("constants") {
  auto c = constant(0.7);
  auto p = level(c, 6);
  CHECK(sup_distance(doleans_exp(c, p), constant(std::exp(0.7))) == 0.0);
  CHECK(sup_distance(doleans_log(c, p), constant(std::log(0.7))) == 0.0);
  CHECK(sup_distance(doleans_log_integral(c, p), constant(std::log(0.7))) == 0.0);
  CHECK(sde_residual(c, c, p) == 0.0);
}

TEST_CASE("exponential of a scaled skeleton is the exponential martingale") {
  // Oracle: exp(sigma W_t - sigma^2 t / 2), with [sigma W]_t = sigma^2 t.
  const double sigma = 0.2;
  auto w = skeleton(51, 0, 9).column(0);
  auto x = scale(w, sigma);
  auto e = doleans_exp(x, level(x, 8));
  auto g = gbm_of(w, sigma);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); i += 7)
    worst = std::max(worst, std::abs(e.sample_at(g.times()[i]) / g.values()[i] - 1.0));
  CHECK(worst <= 1e-2);
  for (double v : e.values()) CHECK(v > 0.0);
}

TEST_CASE("finite variation inputs") {
  auto x = line(0.0, 0.8, 4000);
  for (int n = 4; n <= 10; n += 3) {
    auto p = level(x, n);
    auto e = doleans_exp(x, p);
    double tv = total_variation(x);
    CHECK(sup_distance(e, map_values(x, [](double v) { return std::exp(v); })) <=
          std::exp(0.8) * std::ldexp(1.0, -n) * tv);
  }
  auto y = map_values(line(0.0, 0.8, 4000), [](double v) { return 2.0 * std::exp(v); });
  auto ly = doleans_log_integral(y, lebesgue_partition(std::vector<SampledPath>{log_path(y, "y")}, 8, 0.5));
  CHECK(sup_distance(ly, map_values(line(0.0, 0.8, 4000), [](double v) { return v + std::log(2.0); })) <=
        4.0 * std::ldexp(1.0, -8));
}

TEST_CASE("logarithm of gbm recovers the driver") {
  const double sigma = 0.3;
  auto w = skeleton(52, 0, 9).column(0);
  auto y = gbm_of(w, sigma);
  auto p = lebesgue_partition(std::vector<SampledPath>{log_path(y, "y")}, 8, 0.5);
  auto l = doleans_log(y, p);
  CHECK(sup_distance(l, scale(w, sigma)) <= 1e-2);
  CHECK(sup_distance(l, doleans_log_integral(y, p)) <= 2e-2);
  CHECK(code_of([] { doleans_log(line(1.0, 0.0), explicit_partition({0.0}, 0.0, 1.0)); }) ==
        ErrorCode::NonPositivePath);
  CHECK(code_of([] { doleans_log_integral(line(1.0, -1.0), explicit_partition({0.0}, 0.0, 1.0)); }) ==
        ErrorCode::NonPositivePath);
}

TEST_CASE("round trips and the exponential sde") {
  for (std::uint64_t k = 0; k < 5; ++k) {
    auto x = scale(brownian(53, k, 100000).column(0), 0.3);
    auto p = level(x, 9);
    auto e = doleans_exp(x, p);
    CHECK(sup_distance(doleans_log(e, p), x) <= 5e-2);
    CHECK(sde_residual(e, x, p) <= 5e-2);

    auto y = gbm_of(brownian(54, k, 100000).column(0), 0.3);
    auto py = lebesgue_partition(std::vector<SampledPath>{log_path(y, "y")}, 9, 0.5);
    CHECK(sup_distance(doleans_exp(doleans_log(y, py), py), y) <= 5e-2);
  }
}

TEST_CASE("sde residual degenerate cases") {
  auto x = brownian(55, 0, 1000).column(0);
  auto one = map_values(x, [](double) { return 1.0; });
  auto p = level(x, 6);
  CHECK(sde_residual(one, x, p) == doctest::Approx(sup_abs(add(x, constant(x.front(), 1), -1.0))));
  auto c = constant(0.0, 1000);
  auto y = map_values(x, [](double v) { return 2.0 + v; });
  CHECK(sde_residual(y, c, lebesgue_partition(std::vector<SampledPath>{c}, 6, 0.5)) ==
        doctest::Approx(sup_abs(add(y, constant(y.front(), 1), -1.0))));
  CHECK(sde_residual(constant(3.0), c, lebesgue_partition(std::vector<SampledPath>{c}, 6, 0.5)) == 0.0);
}
