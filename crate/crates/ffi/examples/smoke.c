/* cc -I crates/ffi/include crates/ffi/examples/smoke.c target/debug/libgraphmul_ffi.a -lpthread -ldl -lm */
#include <stdio.h>
#include "graphmul.h"

int main(void) {
  uint32_t src[] = {0, 0, 1, 1, 2};
  uint32_t dst[] = {1, 2, 1, 2, 0};
  GmGraph *g = NULL;
  GmRefMatrix *rm = NULL;
  double x[3] = {1.0, 2.0, 4.0}, y[3];
  uint64_t adds = 0;

  if (gm_graph_from_edges(src, dst, 5, 3, &g) != GM_STATUS_OK ||
      gm_ref_compress(g, 7, &rm) != GM_STATUS_OK ||
      gm_ref_matvec(rm, x, 3, y, 3, &adds) != GM_STATUS_OK) {
    fprintf(stderr, "error: %s\n", gm_last_error_message());
    return 1;
  }
  printf("y = %g %g %g (%llu adds)\n", y[0], y[1], y[2], (unsigned long long)adds);
  gm_ref_free(rm);
  gm_graph_free(g);
  return 0;
}
