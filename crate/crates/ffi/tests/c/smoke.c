#include <stdio.h>
#include <string.h>
#include "biassoc.h"

#define CHECK(cond)                                             \
  do {                                                          \
    if (!(cond)) {                                              \
      fprintf(stderr, "line %d: %s\n", __LINE__, #cond);        \
      return 1;                                                 \
    }                                                           \
  } while (0)

int main(void) {
  BiassocPair *pair = NULL;
  CHECK(biassoc_pair_parse("((* *)3 *)1 ~ (* *)2", &pair) == BIASSOC_STATUS_OK);
  char *code = NULL;
  CHECK(biassoc_pair_gamma(pair, &code) == BIASSOC_STATUS_OK);
  printf("gamma %s\n", code);
  biassoc_string_free(code);

  BiassocTerm *term = NULL;
  CHECK(biassoc_pair_varpi(pair, &term) == BIASSOC_STATUS_OK);
  char *json = NULL;
  CHECK(biassoc_term_to_json(term, &json) == BIASSOC_STATUS_OK);
  CHECK(strstr(json, "\"wires\"") != NULL);
  biassoc_string_free(json);
  biassoc_term_free(term);
  biassoc_pair_free(pair);

  BiassocPoset *poset = NULL;
  CHECK(biassoc_poset_new(BIASSOC_FAMILY_BIASSOCIAHEDRON, 3, 2, &poset) == BIASSOC_STATUS_OK);
  uintptr_t f[4] = {0};
  uintptr_t len = 0;
  CHECK(biassoc_poset_fvector(poset, f, 4, &len) == BIASSOC_STATUS_OK);
  CHECK(len == 3 && f[0] == 6 && f[1] == 6 && f[2] == 1);
  biassoc_poset_free(poset);

  CHECK(biassoc_pair_parse("(*", &pair) == BIASSOC_STATUS_PARSE);
  char *message = biassoc_last_error_message();
  CHECK(message != NULL);
  printf("error %s\n", message);
  biassoc_string_free(message);
  printf("ok %s\n", biassoc_version());
  return 0;
}
