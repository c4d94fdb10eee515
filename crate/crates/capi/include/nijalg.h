#ifndef NIJALG_H
#define NIJALG_H

/* Generated with cbindgen:0.26.0 */

/* Generated by cbindgen from nijalg-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by every entry point.
 */
typedef enum NijStatus {
  /**
   * success / property holds
   */
  NIJ_STATUS_OK = 0,
  /**
   * a verification or decidable property failed; a report is still
   * produced where documented
   */
  NIJ_STATUS_VERIFY_FAILED = 1,
  /**
   * usage error: missing data, bad arguments
   */
  NIJ_STATUS_USAGE = 2,
  /**
   * malformed document text
   */
  NIJ_STATUS_PARSE = 3,
  /**
   * a NULL pointer or invalid UTF-8 was passed in
   */
  NIJ_STATUS_BAD_INPUT = 4,
  /**
   * internal error (panic caught at the boundary)
   */
  NIJ_STATUS_INTERNAL = 5,
} NijStatus;

/**
 * Opaque parsed document.
 */
typedef struct NijDocument NijDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The document format version this library reads and writes.
 */
uint32_t nij_format_version(void);

/**
 * The last error message recorded on this thread. The pointer stays valid
 * until the next failing call on the same thread; do not free it.
 */
const char *nij_last_error_message(void);

/**
 * Release a string allocated by this library.
 */
void nij_string_free(char *s);

/**
 * Parse a document from JSON text into an opaque handle.
 */
enum NijStatus nij_document_parse(const char *text, struct NijDocument **out);

/**
 * Release a document handle.
 */
void nij_document_free(struct NijDocument *doc);

/**
 * Emit the canonical text of a document.
 */
enum NijStatus nij_document_emit(const struct NijDocument *doc, char **out_text);

/**
 * Verify every structure declared in the document. `NIJ_STATUS_OK` when all
 * laws hold, `NIJ_STATUS_VERIFY_FAILED` when violations were found (the
 * report lists them).
 */
enum NijStatus nij_verify(const struct NijDocument *doc, uint64_t seed, char **report_json);

/**
 * Betti table of the chosen complex (`hochschild`, `operator`,
 * `relative-operator`, `cone-full`, `cone-reduced`, `ns-shifted`).
 */
enum NijStatus nij_cohomology(const struct NijDocument *doc,
                              const char *complex_kind,
                              uint32_t max_degree,
                              uint64_t seed,
                              char **report_json);

/**
 * Run any engine command with CLI-style arguments (excluding the program
 * name), e.g. `{"wells", "ext.json", "--pair", "pair.json"}`. The report
 * JSON is returned on success and on decidable failures; `exit_code`
 * receives the CLI exit code (0 holds, 1 failed, 2 usage).
 */
enum NijStatus nij_run(size_t argc,
                       const char *const *argv,
                       char **report_json,
                       int32_t *exit_code);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* NIJALG_H */
