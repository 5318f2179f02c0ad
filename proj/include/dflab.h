/* dflab C API: a small opaque-handle surface over the solver library.
 *
 * Usage pattern:
 *
 *   dflab_run* run = NULL;
 *   if (dflab_run_open("run.cfg", &run) != DFLAB_OK) { ... }
 *   dflab_run_set_option(run, "output.dir", "out");
 *   dflab_result* res = NULL;
 *   dflab_status st = dflab_run_execute(run, "solve-df", &res);
 *   if (st == DFLAB_OK) puts(dflab_result_json(res));
 *   dflab_result_close(res);
 *   dflab_run_close(run);
 *
 * All functions are thread-compatible: distinct handles may be used from
 * distinct threads; a single handle must not be shared without external
 * synchronization. Error messages for the calling thread are retrieved
 * with dflab_last_error().
 */

#ifndef DFLAB_H
#define DFLAB_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dflab_status {
  DFLAB_OK = 0,
  DFLAB_ERR_ARG = 1,     /* null pointer / unknown option or command */
  DFLAB_ERR_CONFIG = 2,  /* config file rejected */
  DFLAB_ERR_NUMERIC = 3, /* solver or model failure */
  DFLAB_ERR_CLAIM = 4,   /* verification claims failed */
  DFLAB_ERR_INTERNAL = 5
} dflab_status;

typedef struct dflab_run dflab_run;       /* loaded, validated run config */
typedef struct dflab_result dflab_result; /* outcome of one command */

const char* dflab_version(void);

/* Load and validate a config file / config text. On success *out owns the
 * run handle; free with dflab_run_close. */
dflab_status dflab_run_open(const char* config_path, dflab_run** out);
dflab_status dflab_run_open_string(const char* config_text, dflab_run** out);
void dflab_run_close(dflab_run* run);

/* Override a config entry after loading. Supported keys: "output.dir",
 * "output.seed", "output.workers", "verify.claims" (comma list). */
dflab_status dflab_run_set_option(dflab_run* run, const char* key,
                                  const char* value);

/* Execute one command: "solve-df", "solve-ephf", "mittleman", "verify",
 * "sweep", "dump-model". Report files are written under the configured
 * output directory. Returns DFLAB_OK whenever a result document was
 * produced; the semantic outcome is in dflab_result_exit_code (0 ok,
 * 3 numeric failure recorded in the report, 4 claims failed). */
dflab_status dflab_run_execute(dflab_run* run, const char* command,
                               dflab_result** out);

/* JSON document of the command report; owned by the result handle. */
const char* dflab_result_json(const dflab_result* res);
int dflab_result_exit_code(const dflab_result* res);
/* Number of files written, and the i-th path. */
int dflab_result_file_count(const dflab_result* res);
const char* dflab_result_file(const dflab_result* res, int i);
void dflab_result_close(dflab_result* res);

/* Message for the last failing call on this thread ("" if none). */
const char* dflab_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* DFLAB_H */
