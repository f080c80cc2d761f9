#include "pathcalc/path.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pathcalc/error.hpp"

namespace pathcalc {

Grid make_grid(std::vector<double> times) {
  return std::make_shared<const std::vector<double>>(std::move(times));
}

namespace {

void validate(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size()) {
    std::ostringstream os;
    os << "path has " << times.size() << " times but " << values.size() << " values";
    fail(ErrorCode::LengthMismatch, os.str());
  }
  if (times.size() < 2) fail(ErrorCode::LengthMismatch, "path needs at least two points");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) fail(ErrorCode::NonFiniteValue, "non-finite time");
    if (!std::isfinite(values[i])) {
      std::ostringstream os;
      os << "non-finite value at index " << i;
      fail(ErrorCode::NonFiniteValue, os.str());
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      std::ostringstream os;
      os << "times not strictly increasing at index " << i;
      fail(ErrorCode::NonMonotoneTimes, os.str());
    }
  }
}

}  // namespace

SampledPath SampledPath::build(std::vector<double> times, std::vector<double> values) {
  validate(times, values);
  return SampledPath(make_grid(std::move(times)), std::move(values));
}

SampledPath SampledPath::build(Grid times, std::vector<double> values) {
  if (!times) fail(ErrorCode::LengthMismatch, "null grid");
  // Grids produced inside the library are already validated; the values still
  // need checking.
  if (times->size() != values.size() || values.size() < 2) validate(*times, values);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i])) {
      std::ostringstream os;
      os << "non-finite value at index " << i;
      fail(ErrorCode::NonFiniteValue, os.str());
    }
  return SampledPath(std::move(times), std::move(values));
}

bool SampledPath::covers(double t) const noexcept {
  return t >= times_->front() && t <= times_->back();
}

double SampledPath::sample_at(double t) const {
  const auto& ts = *times_;
  if (!covers(t)) {
    std::ostringstream os;
    os << "t=" << t << " outside [" << ts.front() << ", " << ts.back() << "]";
    fail(ErrorCode::OutOfDomain, os.str());
  }
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  if (it == ts.end()) return values_.back();
  std::size_t i = static_cast<std::size_t>(it - ts.begin());
  std::size_t j = i - 1;
  if (ts[j] == t) return values_[j];
  double w = (t - ts[j]) / (ts[i] - ts[j]);
  return values_[j] + w * (values_[i] - values_[j]);
}

std::vector<double> SampledPath::sample_sorted(std::span<const double> ts) const {
  const auto& g = *times_;
  std::vector<double> out(ts.size());
  std::size_t j = 0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    double t = ts[k];
    if (t < g.front() || t > g.back()) {
      std::ostringstream os;
      os << "t=" << t << " outside [" << g.front() << ", " << g.back() << "]";
      fail(ErrorCode::OutOfDomain, os.str());
    }
    while (j + 1 < g.size() && g[j + 1] <= t) ++j;
    if (g[j] == t || j + 1 == g.size()) {
      out[k] = values_[j];
    } else {
      double w = (t - g[j]) / (g[j + 1] - g[j]);
      out[k] = values_[j] + w * (values_[j + 1] - values_[j]);
    }
  }
  return out;
}

MarketFrame::MarketFrame(Grid grid, std::vector<std::vector<double>> columns,
                         std::vector<std::string> names, std::size_t traded_count)
    : grid_(std::move(grid)),
      columns_(std::move(columns)),
      names_(std::move(names)),
      traded_count_(traded_count) {
  if (!grid_ || grid_->size() < 2) fail(ErrorCode::LengthMismatch, "frame grid needs two points");
  if (columns_.empty()) fail(ErrorCode::DimensionMismatch, "frame has no columns");
  if (names_.size() != columns_.size())
    fail(ErrorCode::DimensionMismatch, "column names do not match column count");
  if (traded_count_ < 1 || traded_count_ > columns_.size())
    fail(ErrorCode::BadParameter, "traded_count must be in [1, column count]");
  for (std::size_t i = 1; i < grid_->size(); ++i)
    if (!((*grid_)[i] > (*grid_)[i - 1]))
      fail(ErrorCode::NonMonotoneTimes, "frame grid not strictly increasing");
  for (const auto& c : columns_) {
    if (c.size() != grid_->size()) fail(ErrorCode::LengthMismatch, "column length differs from grid");
    for (double v : c)
      if (!std::isfinite(v)) fail(ErrorCode::NonFiniteValue, "non-finite frame value");
  }
}

std::span<const double> MarketFrame::column_values(std::size_t j) const {
  if (j >= columns_.size()) fail(ErrorCode::MissingColumn, "column index out of range");
  return columns_[j];
}

SampledPath MarketFrame::column(std::size_t j) const {
  if (j >= columns_.size()) fail(ErrorCode::MissingColumn, "column index out of range");
  return SampledPath::build(grid_, columns_[j]);
}

std::size_t MarketFrame::column_index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) fail(ErrorCode::MissingColumn, "no column named '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

SampledPath MarketFrame::column(const std::string& name) const {
  return column(column_index(name));
}

std::vector<double> merge_sorted(std::span<const std::span<const double>> parts) {
  std::vector<double> out;
  std::size_t total = 0;
  for (auto p : parts) total += p.size();
  out.reserve(total);
  if (parts.size() == 1) {
    out.assign(parts[0].begin(), parts[0].end());
  } else if (parts.size() == 2) {
    std::merge(parts[0].begin(), parts[0].end(), parts[1].begin(), parts[1].end(),
               std::back_inserter(out));
  } else {
    out.assign(parts[0].begin(), parts[0].end());
    std::vector<double> next;
    next.reserve(total);
    for (std::size_t k = 1; k < parts.size(); ++k) {
      next.clear();
      std::merge(out.begin(), out.end(), parts[k].begin(), parts[k].end(), std::back_inserter(next));
      out.swap(next);
    }
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool same_domain(const SampledPath& a, const SampledPath& b) noexcept {
  auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max(1.0, std::max(std::abs(x), std::abs(y)));
  };
  return close(a.front_time(), b.front_time()) && close(a.back_time(), b.back_time());
}

void require_same_domain(const SampledPath& a, const SampledPath& b, const char* what) {
  if (!same_domain(a, b)) {
    std::ostringstream os;
    os << what << ": domains [" << a.front_time() << ", " << a.back_time() << "] and ["
       << b.front_time() << ", " << b.back_time() << "] differ";
    fail(ErrorCode::DomainMismatch, os.str());
  }
}

SampledPath resample(const SampledPath& path, const Grid& grid) {
  if (grid == path.grid()) return path;
  auto& g = *grid;
  // Endpoints that agree to rounding are clamped onto the path's domain.
  std::vector<double> ts(g.begin(), g.end());
  ts.front() = std::max(ts.front(), path.front_time());
  ts.back() = std::min(ts.back(), path.back_time());
  return SampledPath::build(grid, path.sample_sorted(ts));
}

SampledPath add(const SampledPath& a, const SampledPath& b, double scale_b) {
  require_same_domain(a, b, "add");
  Grid g;
  if (a.grid() == b.grid()) {
    g = a.grid();
  } else {
    std::span<const double> parts[] = {a.times(), b.times()};
    g = make_grid(merge_sorted(parts));
  }
  auto ra = resample(a, g);
  auto rb = resample(b, g);
  std::vector<double> out(g->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ra.values()[i] + scale_b * rb.values()[i];
  return SampledPath::build(g, std::move(out));
}

SampledPath scale(const SampledPath& a, double factor) {
  return map_values(a, [factor](double v) { return factor * v; });
}

double sup_abs(const SampledPath& a) noexcept {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double total_variation(const SampledPath& a) noexcept {
  double tv = 0.0;
  auto v = a.values();
  for (std::size_t i = 1; i < v.size(); ++i) tv += std::abs(v[i] - v[i - 1]);
  return tv;
}

double sup_distance(const SampledPath& a, const SampledPath& b) {
  require_same_domain(a, b, "sup_distance");
  if (a.grid() == b.grid()) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
  }
  std::span<const double> parts[] = {a.times(), b.times()};
  auto g = make_grid(merge_sorted(parts));
  auto ra = resample(a, g);
  auto rb = resample(b, g);
  double m = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i)
    m = std::max(m, std::abs(ra.values()[i] - rb.values()[i]));
  return m;
}

void require_positive(const SampledPath& a, const char* what) {
  for (double v : a.values())
    if (!(v > 0.0)) fail(ErrorCode::NonPositivePath, std::string(what) + ": path is not strictly positive");
}

}  // namespace pathcalc
