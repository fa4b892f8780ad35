/* SynSym C API.
 *
 * Every function returns a synsym_status. On failure the message is available
 * from synsym_last_error() on the same thread until the next call. Strings
 * handed out through char** parameters are owned by the caller and released
 * with synsym_string_free(). Handles are released with their *_free function;
 * passing NULL to any *_free function is a no-op. */
#ifndef SYNSYM_H
#define SYNSYM_H

#include <stddef.h>
#include <stdint.h>

#if defined(SYNSYM_BUILDING_LIBRARY)
#define SYNSYM_API __attribute__((visibility("default")))
#else
#define SYNSYM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum synsym_status {
  SYNSYM_OK = 0,
  SYNSYM_E_INVALID_ARGUMENT = 1,
  SYNSYM_E_IO = 2,
  SYNSYM_E_SCHEMA_VIOLATION = 3,
  SYNSYM_E_PROVIDER_EXHAUSTED = 4,
  SYNSYM_E_AUTH_MISSING = 5,
  SYNSYM_E_MALFORMED_REPLY = 6,
  SYNSYM_E_UNPARSEABLE_REPLY = 7,
  SYNSYM_E_FANOUT_TOO_SMALL = 8,
  SYNSYM_E_COMBINATION_STALL = 9,
  SYNSYM_E_UNSCORED = 10,
  SYNSYM_E_UNKNOWN_SOURCE_LABEL = 11,
  SYNSYM_E_EMPTY_CORPUS = 12,
  SYNSYM_E_TOO_FEW_SAMPLES = 13,
  SYNSYM_E_TRANSLATION_FAILED = 14,
  SYNSYM_E_EMPTY_TRAIN_SET = 15,
  SYNSYM_E_LENGTH_MISMATCH = 16,
  SYNSYM_E_NO_EVALUABLE_CLASSES = 17,
  SYNSYM_E_SCHEME_MISMATCH = 18,
  SYNSYM_E_TRANSIENT = 19,
  SYNSYM_E_INTERNAL = 100
} synsym_status;

typedef struct synsym_config synsym_config;
typedef struct synsym_corpus synsym_corpus;
typedef struct synsym_remap synsym_remap;
typedef struct synsym_model synsym_model;

SYNSYM_API const char* synsym_version(void);
SYNSYM_API const char* synsym_last_error(void);
SYNSYM_API const char* synsym_status_name(synsym_status status);
SYNSYM_API void synsym_string_free(char* s);

/* ---- configuration ---- */

SYNSYM_API synsym_status synsym_config_default(synsym_config** out);
/* JSON run configuration; relative paths resolve against the file's directory. */
SYNSYM_API synsym_status synsym_config_load(const char* path, synsym_config** out);
SYNSYM_API void synsym_config_free(synsym_config* cfg);
/* Root seed; all pipeline and mock seeds derive from it. */
SYNSYM_API synsym_status synsym_config_set_seed(synsym_config* cfg, uint64_t seed);
SYNSYM_API synsym_status synsym_config_force_mock(synsym_config* cfg);
/* Sets the four pipeline component switches (non-zero = on). */
SYNSYM_API synsym_status synsym_config_set_flags(synsym_config* cfg, int ev, int ck, int du, int se);
/* Replaces the training seeds of the evaluation protocol. */
SYNSYM_API synsym_status synsym_config_set_seeds(synsym_config* cfg, const uint64_t* seeds, size_t n);
SYNSYM_API synsym_status synsym_config_set_folds(synsym_config* cfg, int k);
SYNSYM_API synsym_status synsym_config_scheme_name(const synsym_config* cfg, char** out);

/* ---- corpora ---- */

/* scheme_ref: "DSM5-14", "PHQ9-9", "builtin:<name>" or a scheme JSON path.
 * lenient != 0 drops invalid rows (reported on stderr) instead of failing. */
SYNSYM_API synsym_status synsym_corpus_load(const char* path, const char* scheme_ref, int lenient,
                                            synsym_corpus** out);
SYNSYM_API synsym_status synsym_corpus_save(const synsym_corpus* corpus, const char* path);
SYNSYM_API void synsym_corpus_free(synsym_corpus* corpus);
SYNSYM_API size_t synsym_corpus_size(const synsym_corpus* corpus);
SYNSYM_API synsym_status synsym_corpus_scheme_name(const synsym_corpus* corpus, char** out);
/* Concatenates corpora sharing a scheme; later duplicate ids are dropped. */
SYNSYM_API synsym_status synsym_corpus_concat(const synsym_corpus* const* corpora, size_t n, synsym_corpus** out);
/* Statistics as JSON and as a fixed-layout text table. */
SYNSYM_API synsym_status synsym_corpus_stats(const synsym_corpus* corpus, char** json_out, char** table_out);

/* ---- label remapping ---- */

/* "default" (DSM5-14 -> PHQ9-9) or a JSON table path. */
SYNSYM_API synsym_status synsym_remap_load(const char* ref, synsym_remap** out);
SYNSYM_API void synsym_remap_free(synsym_remap* table);
SYNSYM_API synsym_status synsym_remap_apply(const synsym_corpus* corpus, const synsym_remap* table,
                                            const char* target_scheme_ref, synsym_corpus** out,
                                            char** stats_json);

/* ---- generation ---- */

/* Sub-concepts for every configured symptom, as JSONL. */
SYNSYM_API synsym_status synsym_expand(const synsym_config* cfg, char** subconcepts_jsonl);
/* Single-symptom expressions as JSONL. subconcepts_jsonl may be NULL: the
 * configured sub-concepts are used, or expanded when absent. */
SYNSYM_API synsym_status synsym_generate_single(const synsym_config* cfg, const char* subconcepts_jsonl,
                                                char** expressions_jsonl);
SYNSYM_API synsym_status synsym_combine(const synsym_config* cfg, char** combinations_jsonl);
SYNSYM_API synsym_status synsym_generate_multi(const synsym_config* cfg, const char* combinations_jsonl,
                                               const char* subconcepts_jsonl, char** expressions_jsonl);
/* Scores expressions, returns them with scores and the retained corpus. */
SYNSYM_API synsym_status synsym_score(const synsym_config* cfg, const char* expressions_jsonl, char** scored_jsonl,
                                      synsym_corpus** retained, size_t* dropped);
/* Full pipeline. On a stage failure the partial outputs are still returned
 * together with the failure status. */
SYNSYM_API synsym_status synsym_pipeline_run(const synsym_config* cfg, synsym_corpus** corpus, char** report_json,
                                             char** subconcepts_jsonl, char** combinations_jsonl,
                                             char** expressions_jsonl);

/* ---- augmentation ---- */

SYNSYM_API synsym_status synsym_rewrite(const synsym_config* cfg, const synsym_corpus* corpus, synsym_corpus** out,
                                        size_t* failed);
/* identity != 0 uses the identity translator instead of the provider. */
SYNSYM_API synsym_status synsym_backtranslate(const synsym_config* cfg, const synsym_corpus* corpus,
                                              const char* pivot, int identity, synsym_corpus** out,
                                              size_t* skipped);

/* ---- classification ---- */

SYNSYM_API synsym_status synsym_train(const synsym_config* cfg, const synsym_corpus* corpus, uint64_t seed,
                                      synsym_model** out);
SYNSYM_API synsym_status synsym_model_save(const synsym_model* model, const char* path);
SYNSYM_API synsym_status synsym_model_load(const char* path, synsym_model** out);
SYNSYM_API void synsym_model_free(synsym_model* model);
/* JSON array of predicted class names. long_mode != 0 aggregates sentences. */
SYNSYM_API synsym_status synsym_model_predict(const synsym_model* model, const char* text, double threshold,
                                              int long_mode, char** labels_json);
/* Scores a trained model on a corpus. */
SYNSYM_API synsym_status synsym_model_evaluate(const synsym_model* model, const synsym_corpus* test,
                                               double threshold, int long_mode, char** metrics_json,
                                               char** table);
/* Zero-shot LLM classification ("zsl", "cot", "ps") of every sample, scored
 * against the corpus labels. predictions_jsonl has one {id, labels, failed} row per sample. */
SYNSYM_API synsym_status synsym_llm_classify(const synsym_config* cfg, const synsym_corpus* corpus,
                                             const char* strategy, char** predictions_jsonl, char** metrics_json,
                                             char** table);

/* ---- evaluation protocol ---- */

/* k-fold x seeds on corpus, or one run per seed on (corpus, test) when test
 * is not NULL. */
SYNSYM_API synsym_status synsym_evaluate_protocol(const synsym_config* cfg, const synsym_corpus* corpus,
                                                  const synsym_corpus* test, char** report_json, char** table,
                                                  char** per_class_csv);
/* Rows train, columns test. remap may be NULL when all schemes already match
 * target_scheme_ref (NULL = scheme of the first training corpus). */
SYNSYM_API synsym_status synsym_cross_eval(const synsym_config* cfg, const synsym_corpus* const* train,
                                           const char* const* train_names, size_t n_train,
                                           const synsym_corpus* const* test, const char* const* test_names,
                                           size_t n_test, const synsym_remap* remap, const char* target_scheme_ref,
                                           char** report_json, char** table);
/* Full framework plus the four cumulative removals. test and remap may be NULL. */
SYNSYM_API synsym_status synsym_ablate(const synsym_config* cfg, const synsym_corpus* test, const synsym_remap* remap,
                                       char** report_json, char** table);

#ifdef __cplusplus
}
#endif

#endif /* SYNSYM_H */
