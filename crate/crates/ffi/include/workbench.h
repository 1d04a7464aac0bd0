#ifndef WORKBENCH_H
#define WORKBENCH_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Result of every fallible call.
 */
typedef enum WbStatus {
  WB_STATUS_OK = 0,
  /*
   Null pointer, bad UTF-8, malformed argument or rejected input.
   */
  WB_STATUS_INVALID_ARGUMENT = 1,
  WB_STATUS_NOT_FOUND = 2,
  /*
   Operation not allowed in the current state (ordering, duplicates).
   */
  WB_STATUS_CONFLICT = 3,
  /*
   Input parsed but could not be used (no document, bad shape).
   */
  WB_STATUS_UNPROCESSABLE = 4,
  WB_STATUS_INTERNAL = 5,
  /*
   A Rust panic was caught at the boundary.
   */
  WB_STATUS_PANIC = 6,
} WbStatus;

/*
 Design matrix state.
 */
typedef struct WbMatrix WbMatrix;

/*
 Project store rooted at a data directory.
 */
typedef struct WbStore WbStore;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failure on this thread, or NULL. Valid until the
 next call into this library on the same thread; do not free.
 */
const char *wb_last_error(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void wb_string_free(char *s);

/*
 Library version, static storage.
 */
const char *wb_version(void);

/*
 Extracts the html document from a raw completion.

 # Safety
 `raw` is a valid C string; `out` is writable.
 */
enum WbStatus wb_sanitize_code(const char *raw, char **out);

/*
 Lints a document. `rules_json` may be NULL for the default rules. Writes
 a JSON array of issues.

 # Safety
 `html` is a valid C string, `rules_json` is NULL or a valid C string,
 `out` is writable.
 */
enum WbStatus wb_lint_code(const char *html, const char *rules_json, char **out);

/*
 Pulls the first JSON array out of model output; writes it re-serialized.

 # Safety
 `text` is a valid C string; `out` is writable.
 */
enum WbStatus wb_extract_json_array(const char *text, char **out);

/*
 New empty matrix. Never NULL; free with [`wb_matrix_free`].
 */
struct WbMatrix *wb_matrix_new(void);

/*
 # Safety
 `m` is NULL or came from [`wb_matrix_new`] / [`wb_matrix_from_json`].
 */
void wb_matrix_free(struct WbMatrix *m);

/*
 Sets the problem statement and clears all cells.

 # Safety
 `m` is a live handle; `text` is a valid C string.
 */
enum WbStatus wb_matrix_submit_problem(struct WbMatrix *m, const char *text);

/*
 Submits `content` into a cell named like `"person:idea"`.

 # Safety
 `m` is a live handle; `cell` and `content` are valid C strings.
 */
enum WbStatus wb_matrix_submit_cell(struct WbMatrix *m, const char *cell_key, const char *content);

/*
 Writes the context a generation for `cell` would receive, as a JSON
 array of `[cell, text]` pairs in submit order.

 # Safety
 `m` is a live handle; `cell` is a valid C string; `out` is writable.
 */
enum WbStatus wb_matrix_context(struct WbMatrix *m, const char *cell_key, char **out);

/*
 Writes 1 to `out` when every cell holds a current submission.

 # Safety
 `m` is a live handle; `out` is writable.
 */
enum WbStatus wb_matrix_is_complete(struct WbMatrix *m, bool *out);

/*
 Serializes the whole matrix state.

 # Safety
 `m` is a live handle; `out` is writable.
 */
enum WbStatus wb_matrix_to_json(struct WbMatrix *m, char **out);

/*
 Restores a matrix from [`wb_matrix_to_json`] output.

 # Safety
 `json` is a valid C string; `out` is writable.
 */
enum WbStatus wb_matrix_from_json(const char *json, struct WbMatrix **out);

/*
 Opens (creating if needed) a store under `data_dir`.

 # Safety
 `data_dir` is a valid C string; `out` is writable.
 */
enum WbStatus wb_store_open(const char *data_dir, struct WbStore **out);

/*
 # Safety
 `s` is NULL or came from [`wb_store_open`].
 */
void wb_store_free(struct WbStore *s);

/*
 Creates a project; writes its id.

 # Safety
 `s` is a live handle; `name` is a valid C string; `out_id` is writable.
 */
enum WbStatus wb_store_create_project(struct WbStore *s, const char *name, char **out_id);

/*
 Writes a JSON array of project summaries.

 # Safety
 `s` is a live handle; `out` is writable.
 */
enum WbStatus wb_store_list_projects(struct WbStore *s, char **out);

/*
 Writes the full project, code included, as JSON.

 # Safety
 `s` is a live handle; `id` is a valid C string; `out` is writable.
 */
enum WbStatus wb_store_load_project(struct WbStore *s, const char *id, char **out);

/*
 Replaces a project's design matrix with the handle's state.

 # Safety
 `s` and `m` are live handles; `id` is a valid C string.
 */
enum WbStatus wb_store_save_matrix(struct WbStore *s, const char *id, struct WbMatrix *m);

/*
 # Safety
 `s` is a live handle; `id` is a valid C string.
 */
enum WbStatus wb_store_delete_project(struct WbStore *s, const char *id);

/*
 Exports a code version as a standalone document and writes its path.
 `step` 0 and a NULL `version` pick the defaults. `origin` NULL selects
 inline data; otherwise the document reads from that server.

 # Safety
 `s` is a live handle; `id` is a valid C string; `version` and `origin`
 are NULL or valid C strings; `out_path` is writable.
 */
enum WbStatus wb_store_export(struct WbStore *s,
                              const char *id,
                              uintptr_t step,
                              const char *version,
                              const char *origin,
                              char **out_path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WORKBENCH_H */
