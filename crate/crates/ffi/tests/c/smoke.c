#include <math.h>
#include <stdio.h>
#include <string.h>

#include "lawson_forge.h"

#define CHECK(cond)                                                     \
  do {                                                                  \
    if (!(cond)) {                                                      \
      const char *e = lf_last_error();                                  \
      fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond, e ? e : ""); \
      return 1;                                                         \
    }                                                                   \
  } while (0)

int main(void) {
  LfUEdge u = {1.0, 0.0, 1.0}, up;
  LfVEdge v = {1.0, 0.0, 1.0}, vp;
  CHECK(lf_solve_quad(&u, &v, &up, &vp) == LF_STATUS_OK);
  CHECK(fabs(up.u - 1.0) < 1e-12 && fabs(vp.v - 1.0) < 1e-12);

  LfLattice *lat = NULL;
  CHECK(lf_lattice_random(4, 3, 7, &lat) == LF_STATUS_OK);
  CHECK(lf_lattice_width(lat) == 4 && lf_lattice_height(lat) == 3);

  LfNet *net = NULL;
  CHECK(lf_immerse_s3(lat, 0.7853981633974483, &net) == LF_STATUS_OK);
  size_t n = lf_net_vertex_count(net) * lf_net_dimension(net);
  CHECK(n == 48);
  double buf[48];
  CHECK(lf_net_vertices(net, buf, n) == LF_STATUS_OK);
  for (size_t i = 0; i < 12; i++) {
    double *p = buf + 4 * i;
    CHECK(fabs(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3] - 1.0) < 1e-12);
  }
  CHECK(lf_net_vertices(net, buf, 3) == LF_STATUS_BUFFER_TOO_SMALL);

  int passed = 0;
  CHECK(lf_net_verify(net, &passed) == LF_STATUS_OK && passed == 1);

  char *json = NULL;
  CHECK(lf_net_to_json(net, &json) == LF_STATUS_OK);
  CHECK(strstr(json, "\"ambient\": \"s3\"") != NULL);
  lf_string_free(json);

  CHECK(lf_immerse_s3(lat, 2.0, &net) == LF_STATUS_INVALID_INPUT);
  CHECK(lf_last_error() != NULL);

  lf_net_free(net);
  lf_lattice_free(lat);
  printf("ok\n");
  return 0;
}
