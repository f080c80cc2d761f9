#include "pathcalc/pathcalc.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <fstream>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "pathcalc/calculus.hpp"
#include "pathcalc/capm.hpp"
#include "pathcalc/csv.hpp"
#include "pathcalc/doleans.hpp"
#include "pathcalc/dubins_schwarz.hpp"
#include "pathcalc/error.hpp"
#include "pathcalc/generate.hpp"
#include "pathcalc/numeraire.hpp"
#include "pathcalc/partition.hpp"
#include "pathcalc/report.hpp"

using namespace pathcalc;

struct pc_path {
  SampledPath path;
};
struct pc_frame {
  MarketFrame frame;
};
struct pc_partition {
  PartitionLevel level;
};
struct pc_strategy {
  SimpleStrategy strategy;
};
struct pc_ensemble {
  Ensemble ensemble;
};

namespace {

thread_local std::string last_error;

template <class F>
pc_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return PC_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<pc_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PC_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PC_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return PC_INTERNAL;
  }
}

template <class... T>
void need(const T*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw Error(ErrorCode::BadParameter, "null argument");
}

pc_path* wrap(SampledPath p) { return new pc_path{std::move(p)}; }

std::vector<SampledPath> unwrap(const pc_path* const* paths, std::size_t count) {
  if (count > 0) need(paths);
  std::vector<SampledPath> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    need(paths[k]);
    out.push_back(paths[k]->path);
  }
  return out;
}

ModelSpec to_spec(const pc_model_params& p) {
  ModelSpec s;
  s.model = static_cast<Model>(p.model);
  s.horizon = p.horizon;
  s.steps = p.steps;
  s.seed = p.seed;
  s.sigma = p.sigma;
  s.x0 = p.x0;
  s.sigma_s = p.sigma_s;
  s.sigma_i = p.sigma_i;
  s.rho = p.rho;
  s.s0 = p.s0;
  s.i0 = p.i0;
  if (p.shape) s.shape = p.shape;
  s.slope = p.slope;
  s.amplitude = p.amplitude;
  s.skeleton_level = p.skeleton_level;
  s.skeleton_eps0 = p.skeleton_eps0;
  s.columns = p.columns;
  if (p.model < PC_MODEL_BROWNIAN || p.model > PC_MODEL_BROWNIAN_SKELETON)
    fail(ErrorCode::BadParameter, "unknown model");
  return s;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* pc_status_name(pc_status status) {
  switch (status) {
    case PC_OK: return "Ok";
    case PC_NULL_ARGUMENT: return "NullArgument";
    case PC_OUT_OF_MEMORY: return "OutOfMemory";
    case PC_INTERNAL: return "Internal";
    default:
      if (status >= PC_LENGTH_MISMATCH && status <= PC_IO_ERROR)
        return error_code_name(static_cast<ErrorCode>(status));
      return "Unknown";
  }
}

const char* pc_last_error(void) { return last_error.c_str(); }

const char* pc_version(void) { return "1.0.0"; }

// ---- paths

pc_status pc_path_create(const double* times, const double* values, size_t n, pc_path** out) {
  if (!times || !values || !out) return PC_NULL_ARGUMENT;
  return guarded([&] {
    *out = wrap(SampledPath::build(std::vector<double>(times, times + n), std::vector<double>(values, values + n)));
  });
}

void pc_path_free(pc_path* path) { delete path; }

size_t pc_path_size(const pc_path* path) { return path ? path->path.size() : 0; }
const double* pc_path_times(const pc_path* path) { return path ? path->path.times().data() : nullptr; }
const double* pc_path_values(const pc_path* path) { return path ? path->path.values().data() : nullptr; }

pc_status pc_path_sample(const pc_path* path, double t, double* out) {
  if (!path || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = path->path.sample_at(t); });
}

pc_status pc_sup_distance(const pc_path* a, const pc_path* b, double* out) {
  if (!a || !b || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = sup_distance(a->path, b->path); });
}

// ---- frames

pc_status pc_frame_create(const double* times, size_t n, const double* const* columns, const char* const* names,
                          size_t column_count, size_t traded_count, pc_frame** out) {
  if (!times || !out || (column_count > 0 && (!columns || !names))) return PC_NULL_ARGUMENT;
  return guarded([&] {
    std::vector<std::vector<double>> cols;
    std::vector<std::string> ns;
    for (size_t j = 0; j < column_count; ++j) {
      need(columns[j], names[j]);
      cols.emplace_back(columns[j], columns[j] + n);
      ns.emplace_back(names[j]);
    }
    *out = new pc_frame{MarketFrame(make_grid(std::vector<double>(times, times + n)), std::move(cols),
                                    std::move(ns), traded_count)};
  });
}

void pc_frame_free(pc_frame* frame) { delete frame; }
size_t pc_frame_column_count(const pc_frame* frame) { return frame ? frame->frame.column_count() : 0; }
size_t pc_frame_traded_count(const pc_frame* frame) { return frame ? frame->frame.traded_count() : 0; }
size_t pc_frame_size(const pc_frame* frame) { return frame ? frame->frame.times().size() : 0; }

const char* pc_frame_column_name(const pc_frame* frame, size_t j) {
  if (!frame || j >= frame->frame.column_count()) return nullptr;
  return frame->frame.names()[j].c_str();
}

pc_status pc_frame_column(const pc_frame* frame, size_t j, pc_path** out) {
  if (!frame || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(frame->frame.column(j)); });
}

pc_status pc_frame_column_by_name(const pc_frame* frame, const char* name, pc_path** out) {
  if (!frame || !name || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(frame->frame.column(std::string(name))); });
}

pc_status pc_read_csv(const char* file, const char* time_column, const char* const* columns, size_t column_count,
                      size_t traded_count, pc_frame** out) {
  if (!file || !out || (column_count > 0 && !columns)) return PC_NULL_ARGUMENT;
  return guarded([&] {
    ColumnMapping m;
    if (time_column) m.time_column = time_column;
    for (size_t j = 0; j < column_count; ++j) {
      need(columns[j]);
      m.value_columns.emplace_back(columns[j]);
    }
    m.traded_count = traded_count;
    *out = new pc_frame{ingest_csv_file(file, m)};
  });
}

pc_status pc_write_csv(const pc_frame* frame, const char* file) {
  if (!frame || !file) return PC_NULL_ARGUMENT;
  return guarded([&] { export_csv_file(file, frame->frame); });
}

pc_status pc_write_paths_csv(const pc_path* const* paths, const char* const* names, size_t count, const char* file) {
  if (!file || (count > 0 && !names)) return PC_NULL_ARGUMENT;
  return guarded([&] {
    auto ps = unwrap(paths, count);
    std::vector<std::string> ns;
    for (size_t k = 0; k < count; ++k) {
      need(names[k]);
      ns.emplace_back(names[k]);
    }
    std::ofstream f(file, std::ios::binary);
    if (!f) fail(ErrorCode::IOError, std::string("cannot write '") + file + "'");
    export_paths_csv(f, ps, ns);
    if (!f) fail(ErrorCode::IOError, std::string("write to '") + file + "' failed");
  });
}

// ---- generators

void pc_model_params_default(pc_model_params* params) {
  if (!params) return;
  ModelSpec s;
  static const std::string shape = s.shape;
  *params = pc_model_params{static_cast<pc_model>(s.model), s.horizon, s.steps, s.seed, s.sigma, s.x0,
                            s.sigma_s, s.sigma_i, s.rho, s.s0, s.i0, shape.c_str(), s.slope, s.amplitude,
                            s.skeleton_level, s.skeleton_eps0, s.columns};
}

pc_status pc_model_from_name(const char* name, pc_model* out) {
  if (!name || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = static_cast<pc_model>(model_from_name(name)); });
}

pc_status pc_generate(const pc_model_params* params, uint64_t stream, pc_frame** out) {
  if (!params || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = new pc_frame{generate_paths(to_spec(*params), stream)}; });
}

pc_status pc_ensemble_create(const pc_model_params* params, size_t size, pc_ensemble** out) {
  if (!params || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = new pc_ensemble{Ensemble(to_spec(*params), size)}; });
}

void pc_ensemble_free(pc_ensemble* ensemble) { delete ensemble; }
size_t pc_ensemble_size(const pc_ensemble* ensemble) { return ensemble ? ensemble->ensemble.size() : 0; }

pc_status pc_ensemble_frame(const pc_ensemble* ensemble, size_t index, pc_frame** out) {
  if (!ensemble || !out) return PC_NULL_ARGUMENT;
  return guarded([&] {
    if (index >= ensemble->ensemble.size()) fail(ErrorCode::BadParameter, "ensemble index out of range");
    *out = new pc_frame{ensemble->ensemble.frame(index)};
  });
}

// ---- partitions

pc_status pc_lebesgue_partition(const pc_path* const* monitored, size_t count, int n, double eps0, size_t max_stops,
                                pc_partition** out) {
  if (!out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = new pc_partition{lebesgue_partition(unwrap(monitored, count), n, eps0, max_stops)}; });
}

pc_status pc_log_partition(const pc_path* const* monitored, size_t count, int n, double eps0, size_t max_stops,
                           pc_partition** out) {
  if (!out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = new pc_partition{log_partition(unwrap(monitored, count), n, eps0, max_stops)}; });
}

pc_status pc_explicit_partition(const double* stops, size_t count, double begin, double end, pc_partition** out) {
  if (!out || (count > 0 && !stops)) return PC_NULL_ARGUMENT;
  return guarded([&] {
    *out = new pc_partition{explicit_partition(std::vector<double>(stops, stops + count), begin, end)};
  });
}

void pc_partition_free(pc_partition* p) { delete p; }
size_t pc_partition_stop_count(const pc_partition* p) { return p ? p->level.stop_times.size() : 0; }
const double* pc_partition_stops(const pc_partition* p) { return p ? p->level.stop_times.data() : nullptr; }
double pc_partition_threshold(const pc_partition* p) { return p ? p->level.threshold : 0.0; }
int pc_partition_exhausted(const pc_partition* p) { return p ? (p->level.exhausted ? 1 : 0) : 0; }

pc_status pc_verify_fineness(const pc_partition* p, const pc_path* path, double bound, int* fine,
                             double* max_oscillation) {
  if (!p || !path) return PC_NULL_ARGUMENT;
  return guarded([&] {
    auto r = verify_fineness(p->level, path->path, bound);
    if (fine) *fine = r.fine ? 1 : 0;
    if (max_oscillation) *max_oscillation = r.max_oscillation;
  });
}

// ---- calculus

pc_status pc_ito_approx(const pc_path* h, const pc_path* x, const pc_partition* p, pc_path** out) {
  if (!h || !x || !p || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(ito_approx(h->path, x->path, p->level)); });
}

pc_status pc_covariation(const pc_path* x, const pc_path* y, const pc_partition* p, pc_path** out) {
  if (!x || !y || !p || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(covariation_approx(x->path, y->path, p->level)); });
}

pc_status pc_polarization(const pc_path* x, const pc_path* y, const pc_partition* p, pc_path** out) {
  if (!x || !y || !p || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(polarization(x->path, y->path, p->level)); });
}

pc_status pc_by_parts_residual(const pc_path* x, const pc_path* y, const pc_partition* p, double* out) {
  if (!x || !y || !p || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = by_parts_residual(x->path, y->path, p->level); });
}

pc_status pc_stieltjes_integral(const pc_path* h, const pc_path* a, pc_path** out) {
  if (!h || !a || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(stieltjes_integral(h->path, a->path)); });
}

pc_status pc_ito_formula_residual(const pc_scalar_field* f, const pc_path* const* x, size_t count,
                                  const pc_partition* p, double* out) {
  if (!f || !p || !out || !f->value || !f->gradient || !f->hessian) return PC_NULL_ARGUMENT;
  return guarded([&] {
    ScalarField field;
    field.dim = f->dim;
    void* user = f->user;
    auto value = f->value;
    auto gradient = f->gradient;
    auto hessian = f->hessian;
    field.value = [=](std::span<const double> v) { return value(v.data(), user); };
    field.gradient = [=](std::span<const double> v, std::span<double> g) { gradient(v.data(), g.data(), user); };
    field.hessian = [=](std::span<const double> v, std::span<double> h) { hessian(v.data(), h.data(), user); };
    *out = ito_formula_residual(field, unwrap(x, count), p->level);
  });
}

// ---- Doleans

pc_status pc_doleans_exp(const pc_path* x, const pc_partition* p, pc_path** out) {
  if (!x || !p || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(doleans_exp(x->path, p->level)); });
}

pc_status pc_doleans_log(const pc_path* y, const pc_partition* p, pc_path** out) {
  if (!y || !p || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(doleans_log(y->path, p->level)); });
}

pc_status pc_doleans_log_integral(const pc_path* y, const pc_partition* p, pc_path** out) {
  if (!y || !p || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(doleans_log_integral(y->path, p->level)); });
}

pc_status pc_sde_residual(const pc_path* y, const pc_path* x, const pc_partition* p, double* out) {
  if (!y || !x || !p || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = sde_residual(y->path, x->path, p->level); });
}

// ---- strategies

pc_status pc_strategy_create(const double* stop_times, size_t count, const double* bets, size_t traded, double bound,
                             pc_strategy** out) {
  if (!out || (count > 0 && (!stop_times || (traded > 0 && !bets)))) return PC_NULL_ARGUMENT;
  return guarded([&] {
    SimpleStrategy g;
    g.stop_times.assign(stop_times, stop_times + count);
    for (size_t k = 0; k < count; ++k) g.bets.emplace_back(bets + k * traded, bets + (k + 1) * traded);
    if (bound > 0.0) g.bound = bound;
    validate(g, traded);
    *out = new pc_strategy{std::move(g)};
  });
}

pc_status pc_strategy_parse(const char* json, double bound, pc_strategy** out) {
  if (!json || !out) return PC_NULL_ARGUMENT;
  return guarded([&] {
    *out = new pc_strategy{
        parse_strategy_json(json, bound > 0.0 ? bound : std::numeric_limits<double>::infinity())};
  });
}

pc_status pc_strategy_to_json(const pc_strategy* g, char** out) {
  if (!g || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = dup_string(strategy_to_json(g->strategy)); });
}

void pc_strategy_free(pc_strategy* g) { delete g; }

pc_status pc_capital_process(const pc_strategy* g, const pc_frame* frame, double c, pc_path** out) {
  if (!g || !frame || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(capital_process(g->strategy, frame->frame, c)); });
}

pc_status pc_self_financing(const pc_strategy* g, const pc_frame* frame, const pc_path* numeraire, double c,
                            pc_path** capital, double* defect) {
  if (!g || !frame || !numeraire) return PC_NULL_ARGUMENT;
  return guarded([&] {
    auto r = expand_self_financing(g->strategy, frame->frame, numeraire->path, c);
    if (defect) *defect = r.self_financing_defect;
    if (capital) *capital = wrap(std::move(r.capital));
  });
}

pc_status pc_discount(const pc_path* x, const pc_path* numeraire, pc_path** out) {
  if (!x || !numeraire || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(discount_by_numeraire(x->path, numeraire->path)); });
}

pc_status pc_girsanov_correct(const pc_path* m, const pc_path* i, const pc_partition* p, pc_girsanov_method method,
                              pc_path** out) {
  if (!m || !i || !p || !out) return PC_NULL_ARGUMENT;
  return guarded([&] {
    auto how = method == PC_GIRSANOV_LOG_COVARIATION ? GirsanovMethod::LogCovariation : GirsanovMethod::Stieltjes;
    *out = wrap(girsanov_correct(m->path, i->path, p->level, how));
  });
}

pc_status pc_martingale_test(const double* terminal, size_t n, double initial, const double* weights,
                             pc_martingale_report* out) {
  if (!out || (n > 0 && !terminal)) return PC_NULL_ARGUMENT;
  return guarded([&] {
    std::span<const double> w;
    if (weights) w = std::span<const double>(weights, n);
    auto r = martingale_test(std::span<const double>(terminal, n), initial, w);
    *out = pc_martingale_report{r.n_paths, r.weighted_mean_terminal, r.initial_value,
                                r.std_error, r.z_score,              r.pass ? 1 : 0};
  });
}

// ---- time change

pc_status pc_qv_time_change(const pc_path* x, const pc_partition* p, const double* s_grid, size_t count,
                            pc_path** out) {
  if (!x || !p || !out || (count > 0 && !s_grid)) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(qv_time_change(x->path, p->level, std::span<const double>(s_grid, count))); });
}

pc_status pc_unit_qv_increments(const pc_path* x, const pc_partition* p, size_t steps, double* out) {
  if (!x || !p || !out) return PC_NULL_ARGUMENT;
  return guarded([&] {
    auto inc = unit_qv_increments(x->path, p->level, steps);
    std::copy(inc.begin(), inc.end(), out);
  });
}

pc_status pc_brownian_law_test(const double* increments, size_t n, pc_ks_result* out) {
  if (!out || (n > 0 && !increments)) return PC_NULL_ARGUMENT;
  return guarded([&] {
    auto r = brownian_law_test(std::span<const double>(increments, n));
    *out = pc_ks_result{r.n, r.statistic, r.critical, r.pass ? 1 : 0};
  });
}

// ---- CAPM

pc_status pc_relative_growth(const pc_path* x, const pc_partition* p, pc_path** out) {
  if (!x || !p || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(relative_growth(x->path, p->level)); });
}

pc_status pc_relative_covariation(const pc_path* x, const pc_path* y, const pc_partition* p,
                                  pc_girsanov_method method, pc_path** out) {
  if (!x || !y || !p || !out) return PC_NULL_ARGUMENT;
  return guarded([&] {
    auto how = method == PC_GIRSANOV_LOG_COVARIATION ? SigmaMethod::LogCovariation : SigmaMethod::Stieltjes;
    *out = wrap(relative_covariation(x->path, y->path, p->level, how));
  });
}

pc_status pc_capm_deviation(const pc_path* s, const pc_path* i, const pc_partition* p, pc_path** out) {
  if (!s || !i || !p || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(capm_deviation(s->path, i->path, p->level)); });
}

pc_status pc_exp_test_process(const pc_path* s, const pc_path* i, const pc_partition* p, double eps, pc_path** out) {
  if (!s || !i || !p || !out) return PC_NULL_ARGUMENT;
  return guarded([&] { *out = wrap(exp_test_process(s->path, i->path, p->level, eps)); });
}

pc_status pc_capm_beta(const pc_path* s, const pc_path* i, const pc_partition* p, double t, double* lhs,
                       double* rhs) {
  if (!s || !i || !p || !lhs || !rhs) return PC_NULL_ARGUMENT;
  return guarded([&] {
    auto b = capm_beta(s->path, i->path, p->level, t);
    *lhs = b.lhs;
    *rhs = b.rhs;
  });
}

// ---- reports

pc_status pc_run_analysis(const char* name, const char* options_json, char** out, int* ok) {
  if (!name || !out) return PC_NULL_ARGUMENT;
  return guarded([&] {
    Json options = Json::object();
    if (options_json && *options_json) {
      try {
        options = Json::parse(options_json);
      } catch (const Json::exception& e) {
        fail(ErrorCode::ParseError, std::string("options: ") + e.what());
      }
    }
    Json report = run_analysis(name, options);
    if (ok) *ok = report.value("ok", false) ? 1 : 0;
    *out = dup_string(canonical_dump(report));
  });
}

void pc_string_free(char* s) { std::free(s); }

}  // extern "C"
