#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pathcalc {

using Grid = std::shared_ptr<const std::vector<double>>;

Grid make_grid(std::vector<double> times);

// A continuous path known at finitely many strictly increasing times and
// linearly interpolated in between. Immutable once built; copies share the
// time grid.
class SampledPath {
public:
  // Validates: equal lengths >= 2, strictly increasing times, finite values.
  static SampledPath build(std::vector<double> times, std::vector<double> values);
  static SampledPath build(Grid times, std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> times() const noexcept { return *times_; }
  std::span<const double> values() const noexcept { return values_; }
  const Grid& grid() const noexcept { return times_; }

  double front_time() const noexcept { return times_->front(); }
  double back_time() const noexcept { return times_->back(); }
  double front() const noexcept { return values_.front(); }
  double back() const noexcept { return values_.back(); }

  // Linear interpolation; exact at nodes. OutOfDomain outside the grid span.
  double sample_at(double t) const;

  // Values at a nondecreasing sequence of times inside the domain, by a
  // single merge pass.
  std::vector<double> sample_sorted(std::span<const double> ts) const;

  bool covers(double t) const noexcept;

private:
  SampledPath(Grid times, std::vector<double> values)
      : times_(std::move(times)), values_(std::move(values)) {}

  Grid times_;
  std::vector<double> values_;
};

// J aligned value columns on one grid; the first traded_count are traded.
class MarketFrame {
public:
  MarketFrame(Grid grid, std::vector<std::vector<double>> columns,
              std::vector<std::string> names, std::size_t traded_count);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> times() const noexcept { return *grid_; }
  std::size_t column_count() const noexcept { return columns_.size(); }
  std::size_t traded_count() const noexcept { return traded_count_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::span<const double> column_values(std::size_t j) const;
  SampledPath column(std::size_t j) const;
  SampledPath column(const std::string& name) const;
  std::size_t column_index(const std::string& name) const;

private:
  Grid grid_;
  std::vector<std::vector<double>> columns_;
  std::vector<std::string> names_;
  std::size_t traded_count_;
};

// --- grid helpers shared by the calculus modules ---------------------------

// Sorted union of several sorted sequences; exact duplicates collapse.
std::vector<double> merge_sorted(std::span<const std::span<const double>> parts);

bool same_domain(const SampledPath& a, const SampledPath& b) noexcept;
void require_same_domain(const SampledPath& a, const SampledPath& b, const char* what);

// Path evaluated on a grid that must lie inside its domain.
SampledPath resample(const SampledPath& path, const Grid& grid);

// Pointwise combinations on the union of both grids.
SampledPath add(const SampledPath& a, const SampledPath& b, double scale_b = 1.0);
SampledPath scale(const SampledPath& a, double factor);

template <class F>
SampledPath map_values(const SampledPath& a, F&& f) {
  std::vector<double> out(a.size());
  auto v = a.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(v[i]);
  return SampledPath::build(a.grid(), std::move(out));
}

double sup_abs(const SampledPath& a) noexcept;
double total_variation(const SampledPath& a) noexcept;
// Sup-norm distance over the union of both grids.
double sup_distance(const SampledPath& a, const SampledPath& b);

void require_positive(const SampledPath& a, const char* what);

}  // namespace pathcalc
