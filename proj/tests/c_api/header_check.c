/* The public header must compile as C. */
#include "framekit/framekit.h"

#include <stdio.h>
#include <string.h>

int main(void) {
  fk_corpus *corpus = NULL;
  char *stats = NULL;
  size_t failures = 0;
  if (fk_corpus_generate(1, 5, &corpus) != FK_OK) return 1;
  if (fk_oracle(corpus, NULL, &stats) != FK_OK) return 1;
  if (strstr(stats, "SHIFT") == NULL) return 1;
  if (fk_roundtrip_failures(corpus, &failures) != FK_OK || failures != 0) return 1;
  fk_string_free(stats);
  fk_corpus_free(corpus);
  if (fk_corpus_generate(1, -1, &corpus) == FK_OK) return 1;
  printf("%s\n", fk_version());
  return 0;
}
