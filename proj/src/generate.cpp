#include "pathcalc/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pathcalc/error.hpp"
#include "pathcalc/random.hpp"

namespace pathcalc {

std::string model_name(Model m) {
  switch (m) {
    case Model::Brownian: return "brownian";
    case Model::Gbm: return "gbm";
    case Model::CorrelatedGbm: return "correlated_gbm";
    case Model::Deterministic: return "deterministic";
    case Model::BrownianSkeleton: return "brownian_skeleton";
  }
  return "unknown";
}

Model model_from_name(const std::string& name) {
  if (name == "brownian") return Model::Brownian;
  if (name == "gbm") return Model::Gbm;
  if (name == "correlated_gbm") return Model::CorrelatedGbm;
  if (name == "deterministic") return Model::Deterministic;
  if (name == "brownian_skeleton") return Model::BrownianSkeleton;
  fail(ErrorCode::BadParameter, "unknown model '" + name + "'");
}

namespace {

constexpr double kMaxSkeletonNodes = 5e7;

bool known_shape(const std::string& s) {
  return s == "constant" || s == "line" || s == "tent" || s == "sine" || s == "exp_line";
}

std::vector<double> uniform_grid(double horizon, std::size_t steps) {
  std::vector<double> t(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i)
    t[i] = horizon * static_cast<double>(i) / static_cast<double>(steps);
  t.back() = horizon;
  return t;
}

std::vector<std::string> column_names(const char* single, std::size_t count) {
  if (count == 1) return {single};
  std::vector<std::string> names;
  for (std::size_t j = 0; j < count; ++j) names.push_back(std::string(single) + std::to_string(j + 1));
  return names;
}

// Standard Brownian motion on the grid, one draw per step.
std::vector<double> brownian_walk(GaussianStream& rng, const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) w[i] = w[i - 1] + std::sqrt(t[i] - t[i - 1]) * rng();
  return w;
}

MarketFrame make_brownian(const ModelSpec& s, std::uint64_t stream) {
  GaussianStream rng(s.seed, stream);
  auto t = uniform_grid(s.horizon, s.steps);
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < s.columns; ++j) {
    auto w = brownian_walk(rng, t);
    for (double& v : w) v = s.x0 + s.sigma * v;
    cols.push_back(std::move(w));
  }
  return MarketFrame(make_grid(std::move(t)), std::move(cols), column_names("X", s.columns), s.columns);
}

std::vector<double> exponential_level(double x0, double sigma, const std::vector<double>& w,
                                      const std::vector<double>& t) {
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = x0 * std::exp(sigma * w[i] - 0.5 * sigma * sigma * t[i]);
  return out;
}

MarketFrame make_gbm(const ModelSpec& s, std::uint64_t stream) {
  GaussianStream rng(s.seed, stream);
  auto t = uniform_grid(s.horizon, s.steps);
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < s.columns; ++j) cols.push_back(exponential_level(s.x0, s.sigma, brownian_walk(rng, t), t));
  return MarketFrame(make_grid(std::move(t)), std::move(cols), column_names("X", s.columns), s.columns);
}

MarketFrame make_correlated_gbm(const ModelSpec& s, std::uint64_t stream) {
  GaussianStream rng(s.seed, stream);
  auto t = uniform_grid(s.horizon, s.steps);
  std::vector<double> wi(t.size(), 0.0), ws(t.size(), 0.0);
  const double r = s.rho, q = std::sqrt(std::max(0.0, 1.0 - s.rho * s.rho));
  for (std::size_t i = 1; i < t.size(); ++i) {
    double dt = std::sqrt(t[i] - t[i - 1]);
    double zi = rng(), z = rng();
    wi[i] = wi[i - 1] + dt * zi;
    ws[i] = ws[i - 1] + dt * (r * zi + q * z);
  }
  std::vector<std::vector<double>> cols;
  cols.push_back(exponential_level(s.s0, s.sigma_s, ws, t));
  cols.push_back(exponential_level(s.i0, s.sigma_i, wi, t));
  return MarketFrame(make_grid(std::move(t)), std::move(cols), {"S", "I"}, 2);
}

MarketFrame make_deterministic(const ModelSpec& s) {
  auto t = uniform_grid(s.horizon, s.steps);
  std::vector<double> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    double u = t[i] / s.horizon;
    if (s.shape == "constant")
      v[i] = s.x0;
    else if (s.shape == "line")
      v[i] = s.x0 + s.slope * t[i];
    else if (s.shape == "tent")
      v[i] = s.x0 + s.amplitude * (1.0 - std::abs(2.0 * u - 1.0));
    else if (s.shape == "sine")
      v[i] = s.x0 + s.amplitude * std::sin(2.0 * std::numbers::pi * u);
    else
      v[i] = s.x0 * std::exp(s.slope * t[i]);
  }
  std::vector<std::vector<double>> cols{std::move(v)};
  return MarketFrame(make_grid(std::move(t)), std::move(cols), {"X"}, 1);
}

MarketFrame make_skeleton(const ModelSpec& s, std::uint64_t stream) {
  GaussianStream rng(s.seed, stream);
  const auto& tau = ExitTimeSampler::instance();
  const double delta = std::ldexp(s.skeleton_eps0, -s.skeleton_level);
  const double scale = (delta / s.sigma) * (delta / s.sigma);
  const std::size_t expected = static_cast<std::size_t>(s.horizon / scale);

  std::vector<double> t;
  std::vector<std::vector<double>> cols(s.columns);
  t.reserve(expected + expected / 16 + 16);
  for (auto& c : cols) c.reserve(t.capacity());
  t.push_back(0.0);
  for (auto& c : cols) c.push_back(s.x0);

  double now = 0.0;
  for (;;) {
    double next = now + scale * tau(rng.uniform());
    if (!(next < s.horizon)) break;
    now = next;
    t.push_back(now);
    std::uint32_t bits = 0;
    for (std::size_t j = 0; j < s.columns; ++j) {
      if (j % 32 == 0) bits = rng.bits();
      double step = ((bits >> (j % 32)) & 1u) ? delta : -delta;
      cols[j].push_back(cols[j].back() + step);
    }
  }
  // The motion has not left its current interval by the horizon; it is held
  // at the last exit level, which is within delta of the true value.
  t.push_back(s.horizon);
  for (auto& c : cols) c.push_back(c.back());
  return MarketFrame(make_grid(std::move(t)), std::move(cols), column_names("X", s.columns), s.columns);
}

}  // namespace

void validate(const ModelSpec& s) {
  if (!(s.horizon > 0.0) || !std::isfinite(s.horizon)) fail(ErrorCode::BadParameter, "horizon must be positive");
  if (s.model != Model::BrownianSkeleton && s.steps < 2) fail(ErrorCode::BadParameter, "steps must be at least 2");
  if (s.columns < 1) fail(ErrorCode::BadParameter, "columns must be at least 1");
  auto nonneg = [](double v) { return v >= 0.0 && std::isfinite(v); };
  auto pos = [](double v) { return v > 0.0 && std::isfinite(v); };
  switch (s.model) {
    case Model::Brownian:
      if (!nonneg(s.sigma)) fail(ErrorCode::BadParameter, "sigma must be >= 0");
      if (!std::isfinite(s.x0)) fail(ErrorCode::BadParameter, "x0 must be finite");
      break;
    case Model::Gbm:
      if (!nonneg(s.sigma)) fail(ErrorCode::BadParameter, "sigma must be >= 0");
      if (!pos(s.x0)) fail(ErrorCode::BadParameter, "gbm needs x0 > 0");
      break;
    case Model::CorrelatedGbm:
      if (!nonneg(s.sigma_s) || !nonneg(s.sigma_i)) fail(ErrorCode::BadParameter, "volatilities must be >= 0");
      if (!(std::abs(s.rho) <= 1.0)) fail(ErrorCode::BadParameter, "|rho| must be <= 1");
      if (!pos(s.s0) || !pos(s.i0)) fail(ErrorCode::BadParameter, "correlated_gbm needs s0, i0 > 0");
      break;
    case Model::Deterministic:
      if (!known_shape(s.shape)) fail(ErrorCode::BadParameter, "unknown deterministic shape '" + s.shape + "'");
      if (!std::isfinite(s.x0) || !std::isfinite(s.slope) || !std::isfinite(s.amplitude))
        fail(ErrorCode::BadParameter, "shape parameters must be finite");
      if (s.shape == "exp_line" && !pos(s.x0)) fail(ErrorCode::BadParameter, "exp_line needs x0 > 0");
      break;
    case Model::BrownianSkeleton: {
      if (!pos(s.sigma)) fail(ErrorCode::BadParameter, "skeleton needs sigma > 0");
      if (!std::isfinite(s.x0)) fail(ErrorCode::BadParameter, "x0 must be finite");
      if (!pos(s.skeleton_eps0)) fail(ErrorCode::BadParameter, "skeleton eps0 must be positive");
      if (s.skeleton_level < 0 || s.skeleton_level > 30) fail(ErrorCode::BadParameter, "skeleton level must be in [0, 30]");
      double delta = std::ldexp(s.skeleton_eps0, -s.skeleton_level);
      if (s.sigma * s.sigma * s.horizon / (delta * delta) > kMaxSkeletonNodes)
        fail(ErrorCode::BadParameter, "skeleton would exceed 5e7 nodes");
      break;
    }
  }
}

MarketFrame generate_paths(const ModelSpec& spec, std::uint64_t stream) {
  validate(spec);
  switch (spec.model) {
    case Model::Brownian: return make_brownian(spec, stream);
    case Model::Gbm: return make_gbm(spec, stream);
    case Model::CorrelatedGbm: return make_correlated_gbm(spec, stream);
    case Model::Deterministic: return make_deterministic(spec);
    case Model::BrownianSkeleton: return make_skeleton(spec, stream);
  }
  fail(ErrorCode::BadParameter, "unknown model");
}

// --- exit time of (-1, 1) ---------------------------------------------------

namespace {

constexpr std::size_t kCells = 1u << 16;
// Above this quantile the leading tail term alone is exact to ~1e-7.
constexpr double kTailFrom = 0.9;

double tail_survival(double t) noexcept {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double s = 0.0;
  for (int k = 0; k < 8; ++k) {
    double m = 2.0 * k + 1.0;
    s += ((k % 2) ? -1.0 : 1.0) / m * std::exp(-m * m * pi2 * t / 8.0);
  }
  return 4.0 / std::numbers::pi * s;
}

double tail_quantile(double u) noexcept {
  return -8.0 / (std::numbers::pi * std::numbers::pi) * std::log(std::numbers::pi / 4.0 * (1.0 - u));
}

}  // namespace

double ExitTimeSampler::cdf(double t) noexcept {
  if (!(t > 0.0)) return 0.0;
  if (t < 1.0) {
    double s = 0.0;
    for (int k = 1; k <= 8; ++k) s += ((k % 2) ? 1.0 : -1.0) * std::erfc((2.0 * k - 1.0) / std::sqrt(2.0 * t));
    return 2.0 * s;
  }
  return 1.0 - tail_survival(t);
}

double ExitTimeSampler::density(double t) noexcept {
  if (!(t > 0.0)) return 0.0;
  double s = 0.0;
  if (t < 1.0) {
    for (int k = 1; k <= 8; ++k) {
      double c = 2.0 * k - 1.0;
      s += ((k % 2) ? 1.0 : -1.0) * c * std::exp(-c * c / (2.0 * t));
    }
    return 2.0 * s / (std::sqrt(2.0 * std::numbers::pi) * t * std::sqrt(t));
  }
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (int k = 0; k < 8; ++k) {
    double m = 2.0 * k + 1.0;
    s += ((k % 2) ? -1.0 : 1.0) * m * std::exp(-m * m * pi2 * t / 8.0);
  }
  return std::numbers::pi / 2.0 * s;
}

// table_[i] is the quantile at u = i * kTailFrom / kCells: bisection for the
// first cell, then Newton steps warm-started from the previous quantile.
ExitTimeSampler::ExitTimeSampler() : table_(kCells + 1) {
  table_[0] = 0.0;
  double a = 1e-3, b = 4.0, u1 = kTailFrom / kCells;
  for (int it = 0; it < 80; ++it) {
    double m = 0.5 * (a + b);
    (cdf(m) < u1 ? a : b) = m;
  }
  table_[1] = 0.5 * (a + b);
  for (std::size_t i = 2; i <= kCells; ++i) {
    double u = kTailFrom * static_cast<double>(i) / kCells;
    double t = table_[i - 1];
    for (int it = 0; it < 4; ++it) t -= (cdf(t) - u) / density(t);
    table_[i] = t;
  }
}

const ExitTimeSampler& ExitTimeSampler::instance() {
  static const ExitTimeSampler sampler;
  return sampler;
}

double ExitTimeSampler::operator()(double u) const noexcept {
  if (u >= kTailFrom) return tail_quantile(u);
  double x = u * (kCells / kTailFrom);
  std::size_t i = static_cast<std::size_t>(x);
  if (i >= kCells) return table_[kCells];
  double w = x - static_cast<double>(i);
  return table_[i] + w * (table_[i + 1] - table_[i]);
}

Ensemble::Ensemble(ModelSpec spec, std::size_t size) : spec_(std::move(spec)), size_(size) { validate(spec_); }

MarketFrame Ensemble::frame(std::size_t index) const {
  if (index >= size_) fail(ErrorCode::OutOfDomain, "ensemble index out of range");
  return generate_paths(spec_, index);
}

}  // namespace pathcalc
