#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "pathcalc/pathcalc.h"

static int failures = 0;

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                \
    }                                                            \
  } while (0)

static double square(const double* x, void* user) {
  (void)user;
  return x[0] * x[0];
}
static void square_grad(const double* x, double* g, void* user) {
  (void)user;
  g[0] = 2.0 * x[0];
}
static void square_hess(const double* x, double* h, void* user) {
  (void)x;
  (void)user;
  h[0] = 2.0;
}

static void paths_and_errors(void) {
  double t[] = {0.0, 0.5, 1.0};
  double v[] = {0.0, 1.0, 0.0};
  pc_path* p = NULL;
  CHECK(pc_path_create(t, v, 3, &p) == PC_OK);
  CHECK(pc_path_size(p) == 3);
  CHECK(strcmp(pc_last_error(), "") == 0);
  double s = 0.0;
  CHECK(pc_path_sample(p, 0.25, &s) == PC_OK);
  CHECK(s == 0.5);
  CHECK(pc_path_sample(p, 2.0, &s) == PC_OUT_OF_DOMAIN);
  CHECK(strlen(pc_last_error()) > 0);
  CHECK(strcmp(pc_status_name(PC_OUT_OF_DOMAIN), "OutOfDomain") == 0);

  double bad_t[] = {0.0, 1.0, 0.5};
  pc_path* q = NULL;
  CHECK(pc_path_create(bad_t, v, 3, &q) == PC_NON_MONOTONE_TIMES);
  CHECK(q == NULL);
  CHECK(pc_path_create(t, v, 3, NULL) == PC_NULL_ARGUMENT);
  double d = -1.0;
  CHECK(pc_sup_distance(p, p, &d) == PC_OK && d == 0.0);
  pc_path_free(p);
  pc_path_free(NULL);
}

static void calculus_round(void) {
  pc_model_params m;
  pc_model_params_default(&m);
  CHECK(pc_model_from_name("brownian_skeleton", &m.model) == PC_OK);
  CHECK(pc_model_from_name("nope", &m.model) == PC_BAD_PARAMETER);
  m.model = PC_MODEL_BROWNIAN_SKELETON;
  m.skeleton_level = 8;
  m.seed = 5;
  pc_frame* f = NULL;
  CHECK(pc_generate(&m, 0, &f) == PC_OK);
  pc_path* w = NULL;
  CHECK(pc_frame_column(f, 0, &w) == PC_OK);
  const pc_path* mon[] = {w};
  pc_partition* part = NULL;
  CHECK(pc_lebesgue_partition(mon, 1, 8, 0.5, 0, &part) == PC_OK);
  CHECK(pc_partition_threshold(part) == ldexp(0.5, -8));
  CHECK(pc_partition_exhausted(part) == 1);
  CHECK(pc_partition_stop_count(part) > 10);

  double r = 1.0;
  CHECK(pc_by_parts_residual(w, w, part, &r) == PC_OK);
  CHECK(r < 1e-9);

  pc_path* qv = NULL;
  CHECK(pc_covariation(w, w, part, &qv) == PC_OK);
  size_t n = pc_path_size(qv);
  CHECK(n > 1 && pc_path_values(qv)[n - 1] > 0.0);

  pc_scalar_field fsq = {1, NULL, square, square_grad, square_hess};
  const pc_path* xs[] = {w};
  double res = 1.0;
  CHECK(pc_ito_formula_residual(&fsq, xs, 1, part, &res) == PC_OK);
  CHECK(res <= 1e-2);
  CHECK(pc_ito_formula_residual(&fsq, xs, 0, part, &res) != PC_OK);

  pc_path_free(qv);
  pc_partition_free(part);
  pc_path_free(w);
  pc_frame_free(f);
}

static void strategies(void) {
  pc_strategy* g = NULL;
  CHECK(pc_strategy_parse("[{\"time\":0.0,\"bets\":[1.0]},{\"time\":0.5,\"bets\":[2.0]}]", 0.0, &g) == PC_OK);
  char* js = NULL;
  CHECK(pc_strategy_to_json(g, &js) == PC_OK);
  CHECK(js != NULL && strstr(js, "\"time\"") != NULL);
  pc_string_free(js);
  pc_strategy_free(g);
  CHECK(pc_strategy_parse("{bad", 0.0, &g) == PC_PARSE_ERROR);

  double ts[] = {0.0, 0.4};
  double bets[] = {1.0, 0.0, 0.0, 0.0};
  CHECK(pc_strategy_create(ts, 2, bets, 2, 0.0, &g) == PC_OK);
  pc_strategy_free(g);

  double z[200];
  pc_ks_result ks;
  for (int k = 0; k < 200; ++k) z[k] = 0.0;
  CHECK(pc_brownian_law_test(z, 200, &ks) == PC_OK);
  CHECK(ks.pass == 0);
  CHECK(pc_brownian_law_test(z, 50, &ks) == PC_TOO_FEW_SAMPLES);

  double term[40];
  for (int k = 0; k < 40; ++k) term[k] = (k % 2) ? 1.5 : 0.5;
  pc_martingale_report mr;
  CHECK(pc_martingale_test(term, 40, 1.0, NULL, &mr) == PC_OK);
  CHECK(mr.pass == 1 && mr.n_paths == 40);
  CHECK(pc_martingale_test(term, 40, 2.0, NULL, &mr) == PC_OK);
  CHECK(mr.pass == 0);
  CHECK(pc_martingale_test(term, 10, 1.0, NULL, &mr) == PC_TOO_FEW_SAMPLES);
}

static void reports(void) {
  char* out = NULL;
  int ok = 0;
  CHECK(pc_run_analysis("selfcheck", "{\"seed\": 42}", &out, &ok) == PC_OK);
  CHECK(ok == 1);
  CHECK(out != NULL && strstr(out, "\"command\": \"selfcheck\"") != NULL);
  char* again = NULL;
  CHECK(pc_run_analysis("selfcheck", "{\"seed\": 42}", &again, &ok) == PC_OK);
  CHECK(out && again && strcmp(out, again) == 0);
  pc_string_free(out);
  pc_string_free(again);
  out = NULL;
  CHECK(pc_run_analysis("selfcheck", "not json", &out, &ok) == PC_PARSE_ERROR);
  CHECK(out == NULL);
  CHECK(pc_run_analysis("unknown", "{}", &out, &ok) == PC_BAD_PARAMETER);
  CHECK(strlen(pc_version()) > 0);
}

int main(void) {
  paths_and_errors();
  calculus_round();
  strategies();
  reports();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
