#pragma once

#include <doctest.h>

#include <cmath>
#include <vector>

#include "pathcalc/error.hpp"
#include "pathcalc/generate.hpp"
#include "pathcalc/path.hpp"

namespace testing {

using namespace pathcalc;

inline SampledPath line(double a, double b, std::size_t steps = 4, double t0 = 0.0, double t1 = 1.0) {
  std::vector<double> t(steps + 1), v(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    double u = static_cast<double>(i) / static_cast<double>(steps);
    t[i] = t0 + (t1 - t0) * u;
    v[i] = a + (b - a) * u;
  }
  t.back() = t1;
  v.back() = b;
  return SampledPath::build(t, v);
}

inline SampledPath constant(double c, std::size_t steps = 10) { return line(c, c, steps); }

inline MarketFrame brownian(std::uint64_t seed, std::uint64_t stream, std::size_t steps, std::size_t columns = 1,
                            double sigma = 1.0) {
  ModelSpec s;
  s.model = Model::Brownian;
  s.steps = steps;
  s.seed = seed;
  s.columns = columns;
  s.sigma = sigma;
  return generate_paths(s, stream);
}

inline MarketFrame skeleton(std::uint64_t seed, std::uint64_t stream, int level, std::size_t columns = 1,
                            double sigma = 1.0, double horizon = 1.0) {
  ModelSpec s;
  s.model = Model::BrownianSkeleton;
  s.skeleton_level = level;
  s.seed = seed;
  s.columns = columns;
  s.sigma = sigma;
  s.horizon = horizon;
  return generate_paths(s, stream);
}

inline MarketFrame correlated(std::uint64_t seed, std::uint64_t stream, std::size_t steps, double rho = 0.5,
                              double horizon = 1.0) {
  ModelSpec s;
  s.model = Model::CorrelatedGbm;
  s.steps = steps;
  s.seed = seed;
  s.rho = rho;
  s.horizon = horizon;
  return generate_paths(s, stream);
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  double m = mean(v), s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::BadParameter;
}

}  // namespace testing
