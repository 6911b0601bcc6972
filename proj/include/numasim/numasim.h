/* SPDX-License-Identifier: Apache-2.0 */

/*
 * numasim: trace-driven ccNUMA last-level-cache simulator.
 *
 * C interface. All objects are opaque handles owned by the caller and
 * released with the matching *_free function. Every fallible call returns a
 * numasim_status; on failure, numasim_last_error() returns a message for the
 * calling thread that stays valid until that thread's next API call.
 *
 * Strings returned through `char** out` are NUL-terminated, heap allocated
 * and released with numasim_string_free.
 */

#ifndef NUMASIM_NUMASIM_H
#define NUMASIM_NUMASIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define NUMASIM_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define NUMASIM_API __attribute__((visibility("default")))
#else
#  define NUMASIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum numasim_status {
  NUMASIM_OK = 0,
  NUMASIM_ERR_INVALID_ARGUMENT = 1, /* null handle or pointer */
  NUMASIM_ERR_CONFIG = 2,           /* bad key, value or combination */
  NUMASIM_ERR_PARSE = 3,            /* malformed trace line */
  NUMASIM_ERR_VALIDATION = 4,       /* well-formed input out of range */
  NUMASIM_ERR_IO = 5,               /* file could not be read */
  NUMASIM_ERR_INTERNAL = 6          /* simulator invariant broken */
} numasim_status;

typedef enum numasim_format { NUMASIM_FORMAT_JSON = 0, NUMASIM_FORMAT_TABLE = 1 } numasim_format;

typedef struct numasim_config numasim_config;
typedef struct numasim_trace numasim_trace;
typedef struct numasim_report numasim_report;

NUMASIM_API const char* numasim_version(void);
NUMASIM_API const char* numasim_last_error(void);
NUMASIM_API const char* numasim_status_name(numasim_status status);
NUMASIM_API void numasim_string_free(char* s);

/* Configuration. Keys are the CLI flag names without dashes, for example
 * "sockets", "assoc", "policy", "high-water", "lat-c2c", "gen-kind". */
NUMASIM_API numasim_status numasim_config_new(numasim_config** out);
NUMASIM_API void numasim_config_free(numasim_config* cfg);
NUMASIM_API numasim_status numasim_config_set(numasim_config* cfg, const char* key, const char* value);
/* key=value lines; '#' comments. Later calls override earlier values. */
NUMASIM_API numasim_status numasim_config_load_file(numasim_config* cfg, const char* path);
NUMASIM_API numasim_status numasim_config_validate(const numasim_config* cfg);
/* The "report" key; NUMASIM_FORMAT_TABLE unless set. */
NUMASIM_API numasim_format numasim_config_report_format(const numasim_config* cfg);

/* Traces. Records are validated against the config's topology. */
NUMASIM_API numasim_status numasim_trace_load_file(const numasim_config* cfg, const char* path, numasim_trace** out);
NUMASIM_API numasim_status numasim_trace_parse(const numasim_config* cfg, const char* text, size_t len,
                                               numasim_trace** out);
/* Uses gen-kind, gen-lines, gen-iterations, gen-pairs, gen-home and seed. */
NUMASIM_API numasim_status numasim_trace_generate(const numasim_config* cfg, numasim_trace** out);
/* Loads the config's single trace source ("trace" path or "gen-kind"). */
NUMASIM_API numasim_status numasim_trace_from_config(const numasim_config* cfg, numasim_trace** out);
NUMASIM_API size_t numasim_trace_size(const numasim_trace* trace);
NUMASIM_API numasim_status numasim_trace_format(const numasim_trace* trace, char** out, size_t* len);
NUMASIM_API void numasim_trace_free(numasim_trace* trace);

/* Simulation. run uses the config's "policy"; compare uses "policies". */
NUMASIM_API numasim_status numasim_run(const numasim_config* cfg, const numasim_trace* trace, numasim_report** out);
NUMASIM_API numasim_status numasim_compare(const numasim_config* cfg, const numasim_trace* trace,
                                           numasim_report** out);
NUMASIM_API void numasim_report_free(numasim_report* report);
NUMASIM_API numasim_status numasim_report_render(const numasim_report* report, numasim_format format, char** out,
                                                 size_t* len);
NUMASIM_API size_t numasim_report_run_count(const numasim_report* report);
/* Reads a whole-run counter from result `run_index`: "accesses", "hits",
 * "misses", "remote_c2c", "local_dram", "remote_dram", "writebacks",
 * "bias_events", "counter_resets", "total_cost". */
NUMASIM_API numasim_status numasim_report_counter(const numasim_report* report, size_t run_index, const char* name,
                                                  uint64_t* out);

#ifdef __cplusplus
}
#endif

#endif /* NUMASIM_NUMASIM_H */
