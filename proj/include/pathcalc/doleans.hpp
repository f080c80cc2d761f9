#pragma once

#include "pathcalc/partition.hpp"
#include "pathcalc/path.hpp"

namespace pathcalc {

// exp(X - [X]^p / 2) on the eval grid.
SampledPath doleans_exp(const SampledPath& x, const PartitionLevel& p);

// ln Y + [ln Y]^p / 2, with ln Y taken on Y's grid.
SampledPath doleans_log(const SampledPath& y, const PartitionLevel& p);

// ln Y_0 + (1/Y . Y)^p.
SampledPath doleans_log_integral(const SampledPath& y, const PartitionLevel& p);

// sup_t |Y_t - Y_0 - (Y.X)^p_t|.
double sde_residual(const SampledPath& y, const SampledPath& x, const PartitionLevel& p);

SampledPath log_path(const SampledPath& y, const char* what);

}  // namespace pathcalc
