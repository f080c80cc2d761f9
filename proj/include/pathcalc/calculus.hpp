#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pathcalc/partition.hpp"
#include "pathcalc/path.hpp"

namespace pathcalc {

// Union of some path grids and a partition's stop times, with the position of
// every stop in it. All approximants are evaluated here.
struct EvalGrid {
  Grid grid;
  std::vector<std::size_t> stop_index;
};

EvalGrid make_eval_grid(std::span<const SampledPath> paths, const PartitionLevel& p);

// Left-point sums on an eval grid, from values already sampled on it.
std::vector<double> ito_sums(const EvalGrid& g, std::span<const double> h, std::span<const double> x);
std::vector<double> covariation_sums(const EvalGrid& g, std::span<const double> x, std::span<const double> y);
// Left-point Riemann-Stieltjes sum of h against a over consecutive grid nodes.
std::vector<double> stieltjes_sums(std::span<const double> h, std::span<const double> a);

// (H.X)^p on X's grid joined with the stop times.
SampledPath ito_approx(const SampledPath& h, const SampledPath& x, const PartitionLevel& p);
// [X,Y]^p on both grids joined with the stop times.
SampledPath covariation_approx(const SampledPath& x, const SampledPath& y, const PartitionLevel& p);
inline SampledPath quadratic_variation(const SampledPath& x, const PartitionLevel& p) {
  return covariation_approx(x, x, p);
}

// Value at one of p's stop times; used for the sum-of-squares invariant.
std::vector<double> values_at_stops(const SampledPath& approx, const PartitionLevel& p);

struct ConvergenceReport {
  std::vector<int> levels;
  std::vector<double> sup_deltas;
  SampledPath limit;
  bool converged = false;
  double tol = 0.0;
};

// Approximants at n_min..n_max; each delta is the sup-norm gap between
// consecutive levels over the time nodes their grids share (for ito
// approximants, the integrator's grid).
ConvergenceReport converge(const std::function<SampledPath(int)>& make_approx, int n_min, int n_max,
                           double tol);

// sup_t |X_t Y_t - X_0 Y_0 - (X.Y)_t - (Y.X)_t - [X,Y]_t| over the eval grid.
double by_parts_residual(const SampledPath& x, const SampledPath& y, const PartitionLevel& p);

// (1/2)([X+Y] - [X] - [Y]) on the eval grid of X and Y.
SampledPath polarization(const SampledPath& x, const SampledPath& y, const PartitionLevel& p);

struct ScalarField {
  std::size_t dim = 1;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;  // dim entries
  std::function<void(std::span<const double>, std::span<double>)> hessian;   // dim*dim, row major
};

// sup_t |F(X_t) - F(X_0) - sum_i (d_iF(X).X^i)_t - 1/2 sum_ij (d_ijF(X) . [X^i,X^j])_t|,
// first-order terms by ito sums, second-order by Stieltjes sums against the
// covariation approximants, all at level p.
double ito_formula_residual(const ScalarField& f, std::span<const SampledPath> x, const PartitionLevel& p);

// t -> sum over A's grid intervals before t of H(left end) * dA.
SampledPath stieltjes_integral(const SampledPath& h, const SampledPath& a);

}  // namespace pathcalc
