#ifndef NCCECH_H
#define NCCECH_H

#include <stddef.h>

#if defined(_WIN32)
#define NCCECH_API __declspec(dllexport)
#else
#define NCCECH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nccech_status {
  NCCECH_OK = 0,
  NCCECH_INVALID_ARGUMENT = 1,
  NCCECH_ARITHMETIC = 2,
  NCCECH_REWRITE = 3,
  NCCECH_MISMATCH = 4,
  NCCECH_PARSE = 5,
  NCCECH_REFERENCE = 6,
  NCCECH_COMMAND = 7,
  NCCECH_INTERNAL = 8
} nccech_status;

typedef struct nccech_workspace nccech_workspace;

/* Overrides for the workspace window; a has_* flag of 0 keeps the declared value. */
typedef struct nccech_options {
  int has_window, window_lo, window_hi;
  int has_secondary, secondary_lo, secondary_hi;
  int has_length_cap, length_cap;
  int has_pmax, pmax;
} nccech_options;

NCCECH_API const char* nccech_version(void);
NCCECH_API const char* nccech_status_name(nccech_status s);
/* Message of the last failed call on this thread ("" if none). */
NCCECH_API const char* nccech_last_error(void);

/* Always yields a handle when out is non-null; on NCCECH_PARSE and friends the
 * handle carries the diagnostics and cannot be run. */
NCCECH_API nccech_status nccech_workspace_open(const char* path, nccech_workspace** out);
NCCECH_API nccech_status nccech_workspace_parse(const char* text, size_t len, nccech_workspace** out);
NCCECH_API void nccech_workspace_free(nccech_workspace* ws);

NCCECH_API size_t nccech_diagnostic_count(const nccech_workspace* ws);
NCCECH_API int nccech_diagnostic_line(const nccech_workspace* ws, size_t i);
NCCECH_API nccech_status nccech_diagnostic_kind(const nccech_workspace* ws, size_t i);
/* "line N: kind: message"; owned by the handle. */
NCCECH_API const char* nccech_diagnostic_text(const nccech_workspace* ws, size_t i);

NCCECH_API size_t nccech_command_count(void);
NCCECH_API const char* nccech_command_name(size_t i);

/* Runs one command with key=value arguments. On success *report is a JSON
 * document to release with nccech_string_free. options may be null. */
NCCECH_API nccech_status nccech_run(const nccech_workspace* ws, const char* command, size_t nargs,
                                    const char* const* keys, const char* const* values,
                                    const nccech_options* options, char** report);
NCCECH_API void nccech_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
