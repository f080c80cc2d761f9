#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pathcalc/partition.hpp"
#include "pathcalc/path.hpp"

namespace pathcalc {

// bets[k] is held over (stop_times[k], stop_times[k+1]]; the last bet is
// held to the end of the data.
struct SimpleStrategy {
  std::vector<double> stop_times;
  std::vector<std::vector<double>> bets;
  double bound = std::numeric_limits<double>::infinity();
};

void validate(const SimpleStrategy& g, std::size_t traded);

// JSON array of {"time": t, "bets": [...]} records.
SimpleStrategy parse_strategy_json(const std::string& text, double bound = std::numeric_limits<double>::infinity());
std::string strategy_to_json(const SimpleStrategy& g);

// c + sum_n h_n . (w*(tau_{n+1} ^ t) - w*(tau_n ^ t)) over the traded columns.
SampledPath capital_process(const SimpleStrategy& g, const MarketFrame& frame, double c);

struct SelfFinancingResult {
  // (H_n, h_n) per rebalance: units of the numeraire, then of each security.
  std::vector<std::vector<double>> holdings;
  // Capital in the numeraire-times-price units, on the frame grid joined with
  // the rebalance times.
  SampledPath capital;
  // max_n |hbar_{n-1} . wbar(tau_n) - hbar_n . wbar(tau_n)| / (1 + |capital|).
  double self_financing_defect = 0.0;
};

// Frame prices are in units of `numeraire`; the barred prices are
// numeraire * price. Before the first rebalance the endowment is c units of
// the numeraire.
SelfFinancingResult expand_self_financing(const SimpleStrategy& g, const MarketFrame& frame,
                                          const SampledPath& numeraire, double c);

// X / I on the union grid.
SampledPath discount_by_numeraire(const SampledPath& x, const SampledPath& i);
SampledPath multiply_paths(const SampledPath& x, const SampledPath& y);

enum class GirsanovMethod { Stieltjes, LogCovariation };

// M - int d[I,M]/I, or M - [L(I), M]; both at level p.
SampledPath girsanov_correct(const SampledPath& m, const SampledPath& i, const PartitionLevel& p,
                             GirsanovMethod method);

struct MartingaleTestReport {
  std::size_t n_paths = 0;
  double weighted_mean_terminal = 0.0;
  double initial_value = 0.0;
  double std_error = 0.0;
  double z_score = 0.0;
  bool pass = false;
};

// Mean of w_i * x_i against the initial value, 3-sigma gate. Empty weights
// mean all 1.
MartingaleTestReport martingale_test(std::span<const double> terminal, double initial,
                                     std::span<const double> weights);

}  // namespace pathcalc
