/* Exercises the C interface from plain C. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "abflux/abflux.h"

static int failures = 0;

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: CHECK failed: %s (last error: %s)\n", \
              __FILE__, __LINE__, #cond, abf_last_error());     \
      ++failures;                                                \
    }                                                            \
  } while (0)

static int close_to(double x, double y, double tol) { return fabs(x - y) <= tol; }

int main(void) {
  double v = 0.0, w = 0.0;

  CHECK(abf_normalize_flux(1.3, &v) == ABF_OK && close_to(v, 0.3, 1e-15));
  CHECK(abf_normalize_flux(0.8, &v) == ABF_OK && close_to(v, 0.2, 1e-15));

  /* (1 - 4a^2)/(2 - p) at a = 0.3, p = 1.5 */
  CHECK(abf_ring_threshold(0.3, 1.5, &v) == ABF_OK && close_to(v, 1.28, 1e-14));
  /* (1 - a^2(p+2))/(p-2) at a = 0.1, p = 4 */
  CHECK(abf_ring_threshold(0.1, 4.0, &v) == ABF_OK && close_to(v, 0.47, 1e-14));

  CHECK(abf_sphere2_ground(0.25, &v) == ABF_OK && close_to(v, 0.3125, 1e-14));

  CHECK(abf_planar_thresholds(0.0, 4.0, &v, &w) == ABF_OK && close_to(v, w, 1e-14));
  CHECK(abf_planar_mu(0.0, 4.0, 1.0, &v, NULL) == ABF_OK &&
        close_to(v, 4.0 / sqrt(3.0) * sqrt(2.0 * 3.14159265358979323846), 1e-12));

  /* Errors carry a status and a message. */
  CHECK(abf_ring_threshold(0.1, 2.0, &v) != ABF_OK);
  CHECK(strlen(abf_last_error()) > 0);
  CHECK(abf_normalize_flux(0.1, NULL) == ABF_INVALID_ARGUMENT);
  CHECK(abf_normalize_flux(0.1, &v) == ABF_OK && abf_last_error()[0] == '\0');

  int sym = -1;
  CHECK(abf_ring_optimum(0.3, 1.5, 1.0, 64, &v, &sym) == ABF_OK);
  CHECK(close_to(v, 1.09, 1e-6) && sym == 1);

  abf_certificate cert;
  CHECK(abf_certify_saturation("KLT_S1_SUB", 0.2, 1.5, 0.5, &cert) == ABF_OK);
  CHECK(cert.verdict == ABF_SATURATED);
  CHECK(abf_certify_case("KLT_S1_SUPER", 7, &cert) == ABF_OK);
  CHECK(cert.verdict != ABF_VIOLATED && cert.lhs >= cert.rhs - 1e-9 * fabs(cert.rhs));
  CHECK(abf_certify_case("NO_SUCH_ID", 7, &cert) == ABF_INVALID_ARGUMENT);

  abf_config* cfg = NULL;
  CHECK(abf_config_new(&cfg) == ABF_OK);
  CHECK(abf_config_parse(cfg, "subcommand = constants\n# comment\na = 0, 0.25, 0.5\n") ==
        ABF_OK);
  CHECK(abf_config_set(cfg, "p", "4") == ABF_OK);
  size_t need = 0;
  CHECK(abf_config_serialize(cfg, NULL, 0, &need) == ABF_OK && need > 1);
  char* text = (char*)malloc(need);
  CHECK(abf_config_serialize(cfg, text, need, &need) == ABF_OK);
  CHECK(strcmp(text, "a = 0, 0.25, 0.5\np = 4\nsubcommand = constants\n") == 0);
  free(text);

  abf_table* t = NULL;
  CHECK(abf_run(cfg, &t) == ABF_OK);
  CHECK(abf_table_rows(t) == 3);
  CHECK(abf_table_columns(t) == 13);
  CHECK(strcmp(abf_table_column_name(t, 0), "a_raw") == 0);
  CHECK(strcmp(abf_table_cell(t, 1, 0), "0.25") == 0);
  CHECK(strcmp(abf_table_cell(t, 2, 12), "ok") == 0);
  CHECK(abf_table_cell(t, 3, 0) == NULL);
  CHECK(abf_table_error_rows(t) == 0 && abf_table_violated(t) == 0);
  CHECK(abf_table_write(t, "xml", "-") == ABF_INVALID_ARGUMENT);
  CHECK(abf_table_write(t, "csv", "/nonexistent-dir/out.csv") == ABF_IO);
  CHECK(strstr(abf_last_error(), "/nonexistent-dir/out.csv") != NULL);
  abf_table_free(t);

  CHECK(abf_config_set(cfg, "bogus_key", "1") == ABF_OK);
  t = NULL;
  CHECK(abf_run(cfg, &t) == ABF_INVALID_ARGUMENT && t == NULL);
  abf_config_free(cfg);

  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
