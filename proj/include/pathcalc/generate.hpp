#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pathcalc/path.hpp"

namespace pathcalc {

enum class Model {
  Brownian,        // x0 + sigma * W on a uniform grid
  Gbm,             // x0 * exp(sigma W - sigma^2 t / 2)
  CorrelatedGbm,   // columns S and I, drivers with correlation rho
  Deterministic,   // named test path
  // x0 + sigma * W recorded at its successive exits from intervals of
  // half-width delta = skeleton_eps0 * 2^-skeleton_level. Lebesgue partitions
  // with threshold a multiple of delta then land exactly on nodes, so levels
  // n <= skeleton_level see the Brownian motion itself rather than its
  // interpolant. Extra columns take independent +-delta steps on the same
  // clock.
  BrownianSkeleton,
};

std::string model_name(Model m);
Model model_from_name(const std::string& name);

struct ModelSpec {
  Model model = Model::Brownian;
  double horizon = 1.0;
  std::size_t steps = 1000;
  std::uint64_t seed = 0;

  double sigma = 1.0;
  double x0 = 0.0;

  double sigma_s = 0.2;
  double sigma_i = 0.3;
  double rho = 0.0;
  double s0 = 1.0;
  double i0 = 1.0;

  // deterministic: constant | line | tent | sine | exp_line
  std::string shape = "line";
  double slope = 1.0;
  double amplitude = 1.0;

  int skeleton_level = 8;
  double skeleton_eps0 = 0.5;
  std::size_t columns = 1;
};

void validate(const ModelSpec& spec);

// Member `stream` of the generator family keyed by spec.seed. Stream 0 is
// what the one-shot generator returns.
MarketFrame generate_paths(const ModelSpec& spec, std::uint64_t stream = 0);

// Exit time of standard Brownian motion from (-1, 1), by inverse-CDF table.
class ExitTimeSampler {
public:
  static const ExitTimeSampler& instance();
  double operator()(double u) const noexcept;
  // P(tau <= t) from the two theta-function series.
  static double cdf(double t) noexcept;
  static double density(double t) noexcept;

private:
  ExitTimeSampler();
  std::vector<double> table_;
};

// Seeded collection of independent frames. Members are generated on demand
// from (seed, index), so an ensemble of any size costs nothing until read.
class Ensemble {
public:
  Ensemble(ModelSpec spec, std::size_t size);

  std::size_t size() const noexcept { return size_; }
  std::uint64_t seed() const noexcept { return spec_.seed; }
  const ModelSpec& model() const noexcept { return spec_; }
  MarketFrame frame(std::size_t index) const;

private:
  ModelSpec spec_;
  std::size_t size_;
};

}  // namespace pathcalc
