/* framekit C API.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Functions return FK_OK or an error status; the
 * message of the most recent failure on the calling thread is available from
 * fk_last_error(). Strings returned through char** are released with
 * fk_string_free().
 */
#ifndef FRAMEKIT_FRAMEKIT_H_
#define FRAMEKIT_FRAMEKIT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FK_API __declspec(dllexport)
#else
#define FK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fk_status {
  FK_OK = 0,
  FK_ERR_INVALID_ARGUMENT = 1,
  FK_ERR_FROZEN_STORE = 2,
  FK_ERR_EMPTY_NAME = 3,
  FK_ERR_FOREIGN_HANDLE = 4,
  FK_ERR_DANGLING_HANDLE = 5,
  FK_ERR_DUPLICATE_ID = 6,
  FK_ERR_SYNTAX = 7,
  FK_ERR_UNRESOLVED_REFERENCE = 8,
  FK_ERR_DUPLICATE_LABEL = 9,
  FK_ERR_SCHEMA = 10,
  FK_ERR_INVALID_ACTION = 11,
  FK_ERR_INDEX_OUT_OF_RANGE = 12,
  FK_ERR_UNREPRESENTABLE = 13,
  FK_ERR_TOKEN_MISMATCH = 14,
  FK_ERR_LENGTH_MISMATCH = 15,
  FK_ERR_SHAPE_MISMATCH = 16,
  FK_ERR_NON_FINITE_LOSS = 17,
  FK_ERR_IO = 18,
  FK_ERR_INTERNAL = 99
} fk_status;

typedef enum fk_metric {
  FK_METRIC_SPAN = 0,
  FK_METRIC_FRAME = 1,
  FK_METRIC_TYPE = 2,
  FK_METRIC_ROLE = 3,
  FK_METRIC_LABEL = 4,
  FK_METRIC_SLOT = 5,
  FK_METRIC_COMBINED = 6
} fk_metric;

typedef struct fk_corpus fk_corpus;
typedef struct fk_config fk_config;
typedef struct fk_model fk_model;
typedef struct fk_report fk_report;

FK_API const char *fk_version(void);
FK_API const char *fk_status_name(fk_status status);
FK_API const char *fk_last_error(void);
FK_API void fk_string_free(char *s);

/* Corpora: sequences of annotated documents. */
FK_API fk_status fk_corpus_generate(uint64_t seed, int num_docs, fk_corpus **out);
FK_API fk_status fk_corpus_read(const char *path, fk_corpus **out);
FK_API fk_status fk_corpus_parse(const char *text, size_t length, fk_corpus **out);
/* One unannotated document per non-empty line. */
FK_API fk_status fk_corpus_from_lines(const char *text, size_t length, fk_corpus **out);
FK_API fk_status fk_corpus_write(const fk_corpus *corpus, const char *path);
FK_API fk_status fk_corpus_to_string(const fk_corpus *corpus, char **out);
FK_API size_t fk_corpus_size(const fk_corpus *corpus);
FK_API fk_status fk_corpus_slice(const fk_corpus *corpus, size_t begin, size_t end,
                                 fk_corpus **out);
FK_API void fk_corpus_free(fk_corpus *corpus);

/* Oracle transition sequences, one block per document separated by blank
 * lines, and the action statistics table. Either output may be NULL. */
FK_API fk_status fk_oracle(const fk_corpus *corpus, char **sequences, char **stats);
/* Number of documents whose oracle replay does not reproduce them. */
FK_API fk_status fk_roundtrip_failures(const fk_corpus *corpus, size_t *failures);

/* Model configuration with defaults; keys as in ModelConfig. */
FK_API fk_status fk_config_new(fk_config **out);
FK_API fk_status fk_config_set(fk_config *config, const char *key, const char *value);
FK_API fk_status fk_config_to_json(const fk_config *config, char **out);
FK_API void fk_config_free(fk_config *config);

typedef struct fk_train_options {
  int steps;
  int checkpoint_every;
  uint64_t seed;
  int jobs;
} fk_train_options;

FK_API void fk_train_options_init(fk_train_options *options);

typedef struct fk_checkpoint_info {
  int step;
  double loss;
  int has_dev;
  double slot_f1;
  double span_f1;
} fk_checkpoint_info;

/* Called at every checkpoint with the model being evaluated; the model
 * pointer is valid only during the call. */
typedef void (*fk_checkpoint_fn)(const fk_checkpoint_info *info, const fk_model *model,
                                 void *user_data);

/* dev, callback and best may be NULL. */
FK_API fk_status fk_train(const fk_corpus *train, const fk_corpus *dev,
                          const fk_config *config, const fk_train_options *options,
                          fk_checkpoint_fn callback, void *user_data,
                          fk_model **final_model, fk_model **best_model, int *best_step);

FK_API fk_status fk_model_save(const fk_model *model, const char *path);
FK_API fk_status fk_model_load(const char *path, fk_model **out);
FK_API int fk_model_num_actions(const fk_model *model);
FK_API void fk_model_free(fk_model *model);

/* Parses the tokens of every input document. Output order equals input
 * order for any number of jobs. */
FK_API fk_status fk_parse(const fk_model *model, const fk_corpus *input, int jobs,
                          fk_corpus **out);
FK_API fk_status fk_parse_text(const fk_model *model, const char *text, fk_corpus **out);

typedef struct fk_metric_counts {
  int64_t matched_pred;
  int64_t total_pred;
  int64_t matched_gold;
  int64_t total_gold;
  double precision;
  double recall;
  double f1;
} fk_metric_counts;

FK_API fk_status fk_evaluate(const fk_corpus *gold, const fk_corpus *pred, int jobs,
                             fk_report **out);
FK_API fk_status fk_report_get(const fk_report *report, fk_metric metric,
                               fk_metric_counts *out);
FK_API fk_status fk_report_table(const fk_report *report, char **out);
FK_API fk_status fk_report_metrics(const fk_report *report, char **out);
FK_API void fk_report_free(fk_report *report);

typedef struct fk_grad_check_result {
  double max_relative_error;
  int64_t values_checked;
  double loss;
  double gradient_norm;
} fk_grad_check_result;

/* Double-precision gradient check on one document of the corpus. */
FK_API fk_status fk_grad_check(const fk_corpus *corpus, size_t doc_index,
                               const fk_config *config, uint64_t seed,
                               fk_grad_check_result *out);

#ifdef __cplusplus
}
#endif

#endif /* FRAMEKIT_FRAMEKIT_H_ */
