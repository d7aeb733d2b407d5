// Copyright 2026 The gtdlab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to gtdlab. Every function returns a gtdlab_status; on failure
 * gtdlab_last_error() describes the problem for the calling thread. Strings
 * returned through char** out-parameters are JSON documents owned by the
 * caller and released with gtdlab_free_string(). */
#ifndef GTDLAB_GTDLAB_H_
#define GTDLAB_GTDLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(GTDLAB_BUILDING_LIBRARY)
#define GTDLAB_API __attribute__((visibility("default")))
#else
#define GTDLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gtdlab_status {
  GTDLAB_OK = 0,
  GTDLAB_ERR_VALIDATION = 1,     /* config parse, schema or model conditions */
  GTDLAB_ERR_RUNTIME = 2,        /* numerical or I/O failure */
  GTDLAB_ERR_CHECK_FAILED = 3,   /* a verification check did not pass */
  GTDLAB_ERR_INVALID_ARGUMENT = 4
} gtdlab_status;

typedef struct gtdlab_session gtdlab_session;

GTDLAB_API const char* gtdlab_version(void);
GTDLAB_API const char* gtdlab_last_error(void);
GTDLAB_API void gtdlab_free_string(char* s);

/* Parses and fully validates the config. Relative model paths resolve
 * against the config file's directory (or base_dir for JSON text). */
GTDLAB_API int gtdlab_session_open_file(const char* path, gtdlab_session** out);
GTDLAB_API int gtdlab_session_open_json(const char* json, const char* base_dir,
                                        gtdlab_session** out);
GTDLAB_API void gtdlab_session_close(gtdlab_session* session);

/* Replaces the config's seed list. */
GTDLAB_API int gtdlab_session_set_seeds(gtdlab_session* session, const uint64_t* seeds,
                                        size_t n);
/* Concurrent runs; values below 1 mean 1. */
GTDLAB_API int gtdlab_session_set_workers(gtdlab_session* session, int workers);

/* Dimensions of the loaded model. */
GTDLAB_API int gtdlab_session_dims(const gtdlab_session* session, int* n_states,
                                   int* feature_dim);

/* Reports every model condition without opening a session. Returns
 * GTDLAB_ERR_VALIDATION with the report filled when anything fails. */
GTDLAB_API int gtdlab_validate_file(const char* path, char** report_json);
GTDLAB_API int gtdlab_validate_json(const char* json, const char* base_dir,
                                    char** report_json);

GTDLAB_API int gtdlab_oracle(gtdlab_session* session, char** oracle_json);
GTDLAB_API int gtdlab_run(gtdlab_session* session, const char* out_dir, char** summary_json);
GTDLAB_API int gtdlab_sweep(gtdlab_session* session, const char* out_dir,
                            char** summary_json);
/* Returns GTDLAB_ERR_CHECK_FAILED with the report filled on any failure. */
GTDLAB_API int gtdlab_check(gtdlab_session* session, char** report_json);

/* Model quantities: stationary distribution of P^o and v_pi, written into a
 * caller buffer of capacity cap; *n receives the state count. */
GTDLAB_API int gtdlab_stationary_distribution(const gtdlab_session* session, double* out,
                                              size_t cap, size_t* n);
GTDLAB_API int gtdlab_value_function(const gtdlab_session* session, double* out,
                                     size_t cap, size_t* n);

#ifdef __cplusplus
}
#endif

#endif /* GTDLAB_GTDLAB_H_ */
