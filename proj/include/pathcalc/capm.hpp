#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pathcalc/generate.hpp"
#include "pathcalc/numeraire.hpp"
#include "pathcalc/partition.hpp"
#include "pathcalc/stats.hpp"
#include "pathcalc/path.hpp"

namespace pathcalc {

// Mu^X = (1/X . X)^p.
SampledPath relative_growth(const SampledPath& x, const PartitionLevel& p);

enum class SigmaMethod { Stieltjes, LogCovariation };

// Sigma^{X,Y}: int d[X,Y]^p / (XY), or [Lambda^X, Lambda^Y]^p with Lambda the
// Doleans logarithm.
SampledPath relative_covariation(const SampledPath& x, const SampledPath& y, const PartitionLevel& p,
                                 SigmaMethod method = SigmaMethod::Stieltjes);

// Mu^S, Mu^I, Sigma^S, Sigma^I, Sigma^{S,I} on one eval grid (Stieltjes route).
struct CapmPaths {
  Grid grid;
  std::vector<double> mu_s, mu_i, sigma_s, sigma_i, sigma_si;
  std::vector<double> s, i;

  double deviation(std::size_t k) const { return mu_s[k] - sigma_si[k]; }
};

CapmPaths capm_paths(const SampledPath& s, const SampledPath& i, const PartitionLevel& p);

// Mu^S - Sigma^{S,I}.
SampledPath capm_deviation(const SampledPath& s, const SampledPath& i, const PartitionLevel& p);

// exp(eps (Mu^S - Sigma^{S,I}) - eps^2 Sigma^S / 2).
SampledPath exp_test_process(const SampledPath& s, const SampledPath& i, const PartitionLevel& p, double eps);

// Partition of the logarithms of positive paths.
PartitionLevel log_partition(std::span<const SampledPath> positive, int n, double eps0, std::size_t max_stops = 0);

// One path's contribution to the CLT bound: tau_T is the first time Sigma^S
// reaches T, with linear interpolation between eval points.
struct CltEvent {
  bool reached = false;
  double tau = 0.0;
  double deviation = 0.0;
  bool exceed = false;
};

CltEvent clt_event(const CapmPaths& c, double budget, double z);

struct CltReport {
  double delta = 0.0;
  double budget = 0.0;
  double z_quantile = 0.0;
  std::size_t n_paths = 0;
  std::size_t reached = 0;
  double exceed_frequency = 0.0;
  double std_error = 0.0;
  // frequency <= delta + 3 s.e. (the bound itself)
  bool within_bound = false;
  // |frequency - delta| <= 3 s.e.
  bool matches_delta = false;
};

// Frequency of exceedances weighted by I_end / I_0.
CltReport clt_report(std::span<const CltEvent> events, std::span<const double> weights, double delta,
                     double budget);

struct LilResult {
  bool empty = true;
  SampledPath ratio;        // only meaningful when !empty
  SampledPath running_max;  // same grid as ratio; 0 until Sigma^S reaches e^e
};

// |Mu^S - Sigma^{S,I}| / sqrt(2 Sigma^S ln ln Sigma^S) where Sigma^S > e.
// The running maximum only starts once ln ln Sigma^S >= 1.
LilResult lil_ratio(const CapmPaths& c);
LilResult lil_ratio(const SampledPath& s, const SampledPath& i, const PartitionLevel& p);

struct Beta {
  double lhs = 0.0;
  double rhs = 0.0;
};

// lhs = Mu^S_t, rhs = (Sigma^{S,I}_t / Sigma^I_t) Mu^I_t.
Beta capm_beta(const CapmPaths& c, double t);
Beta capm_beta(const SampledPath& s, const SampledPath& i, const PartitionLevel& p, double t);

struct CapmEnsembleOptions {
  std::string stock = "S";
  std::string index = "I";
  int level = 8;
  double eps0 = 0.5;
  // Partition the logarithms of S and I rather than the levels.
  bool log_partition = true;
  double delta = 0.05;
  double budget = 0.04;
  // Time at which the Sigma ensemble means are read.
  double sigma_time = 1.0;
  // Also correct Mu^S with girsanov_correct by both methods.
  bool girsanov = false;
};

// Ensemble statistics; all martingale tests use terminal values at the end
// of the data. "weighted" means weights I_end / I_0.
struct CapmEnsembleSummary {
  std::size_t n_paths = 0;
  MartingaleTestReport deviation_weighted;     // Mu^S - Sigma^{S,I}
  MartingaleTestReport growth_weighted;        // Mu^S, uncorrected
  MartingaleTestReport growth_unweighted;      // Mu^S under equal weights
  MartingaleTestReport deviation_unweighted;   // Mu^S - Sigma^{S,I} under equal weights
  MartingaleTestReport equity_premium_weighted;  // Mu^I - Sigma^I
  MartingaleTestReport exp_plus_weighted;      // eps = +1
  MartingaleTestReport exp_minus_weighted;     // eps = -1
  MartingaleTestReport numeraire_weight;       // F = 1 under the weights
  MartingaleTestReport girsanov_stieltjes_weighted;
  MartingaleTestReport girsanov_log_weighted;
  double girsanov_method_gap = 0.0;            // max sup-norm gap over paths
  MeanEstimate sigma_s_at, sigma_i_at, sigma_si_at;
  CltReport clt;
  double mean_stops = 0.0;
};

CapmEnsembleSummary capm_ensemble(const Ensemble& ensemble, const CapmEnsembleOptions& opt);

// Value of an eval-grid series at t by linear interpolation.
double value_at(const Grid& grid, std::span<const double> v, double t);

}  // namespace pathcalc
