#include <stdio.h>
#include <string.h>

#include "noma_qubo.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  double re[1] = {1.0}, im[1] = {0.0};
  NqChannel *ch = NULL;
  CHECK(nq_channel_new(re, im, 1, &ch) == NQ_STATUS_OK);
  CHECK(nq_channel_num_users(ch) == 1);

  NqQubo *q = NULL;
  CHECK(nq_qubo_build(ch, 1.0, 0.0, 1.0, NQ_SCHEME_BPSK, 0, &q) == NQ_STATUS_OK);
  double v = 0.0;
  CHECK(nq_qubo_num_qubits(q) == 1);
  CHECK(nq_qubo_get(q, 0, 0, &v) == NQ_STATUS_OK && v == -4.0);
  CHECK(nq_qubo_offset(q, &v) == NQ_STATUS_OK && v == 4.0);
  uint8_t one = 1;
  CHECK(nq_qubo_energy(q, &one, 1, &v) == NQ_STATUS_OK && v == 0.0);
  CHECK(nq_qubo_get(q, 1, 0, &v) == NQ_STATUS_OUT_OF_RANGE);
  CHECK(nq_last_error_message() != NULL);
  nq_qubo_free(q);

  uint8_t bits[8];
  size_t len = 0;
  double metric = -1.0;
  CHECK(nq_decode(ch, 1.0, 0.0, 1.0, NQ_SCHEME_BPSK, NQ_DECODER_BRUTE_FORCE, 0, bits, 8, &len,
                  &metric) == NQ_STATUS_OK);
  CHECK(len == 1 && bits[0] == 1 && metric == 0.0);
  CHECK(nq_decode(ch, 1.0, 0.0, 1.0, 42, NQ_DECODER_SIC, 0, bits, 8, &len, NULL) ==
        NQ_STATUS_INVALID_ARGUMENT);
  nq_channel_free(ch);

  char *csv = NULL;
  const char *cfg =
      "n_users = 2\nscheme = \"bpsk\"\npower_dbm_list = [0.0]\ntrials = 10\ndecoders = [\"bf\"]\n";
  CHECK(nq_ber_sweep_csv(cfg, &csv) == NQ_STATUS_OK);
  CHECK(strncmp(csv, "power_dbm,user_index", 20) == 0);
  nq_string_free(csv);
  CHECK(nq_ber_sweep_csv("trials = ", &csv) == NQ_STATUS_CONFIG);

  printf("ok %s\n", nq_version());
  return 0;
}
