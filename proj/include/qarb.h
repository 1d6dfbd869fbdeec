// Copyright 2026 The qarb Authors
//
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

#ifndef QARB_H_
#define QARB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QARB_API __declspec(dllexport)
#else
#define QARB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qarb_status {
  QARB_OK = 0,
  QARB_ERR_ARGUMENT = 1,
  QARB_ERR_CAPACITY = 2,
  QARB_ERR_STRUCTURE = 3,
  QARB_ERR_DOMAIN = 4,
  QARB_ERR_UNSUPPORTED = 5,
  QARB_ERR_NOT_HERMITIAN = 6,
  QARB_ERR_TRACE_NOT_ONE = 7,
  QARB_ERR_NOT_PSD = 8,
  QARB_ERR_NON_FINITE = 9,
  QARB_ERR_NOT_NORMALIZED = 10,
  QARB_ERR_CONFIG = 11,
  QARB_ERR_IO = 12,
  QARB_ERR_INTERNAL = 99
} qarb_status;

typedef enum qarb_distance {
  QARB_DISTANCE_TRACE = 0,
  QARB_DISTANCE_HILBERT_SCHMIDT = 1,
  QARB_DISTANCE_BURES = 2,
  QARB_DISTANCE_HELLINGER = 3
} qarb_distance;

typedef struct qarb_state qarb_state;
typedef struct qarb_classifier qarb_classifier;

/* Library version string, static storage. */
QARB_API const char* qarb_version(void);

/* Message of the last failed call on this thread; empty after success. */
QARB_API const char* qarb_last_error_message(void);

/* Amplitude encoding of n pixels in [0, 1] with d levels per site. */
QARB_API qarb_status qarb_state_encode(const double* pixels, size_t n, size_t d,
                                       qarb_state** out);
/* Density matrix from row-major interleaved (re, im) entries, dim x dim. */
QARB_API qarb_status qarb_state_from_matrix(const double* re_im, size_t dim,
                                            qarb_state** out);
QARB_API size_t qarb_state_dim(const qarb_state* s);
QARB_API void qarb_state_free(qarb_state* s);

QARB_API qarb_status qarb_distance_between(qarb_distance kind, const qarb_state* a,
                                           const qarb_state* b, double* out);
QARB_API qarb_status qarb_fidelity(const qarb_state* a, const qarb_state* b,
                                   double* out);

/* Layered-circuit classifier from its JSON spec. */
QARB_API qarb_status qarb_classifier_from_json(const char* spec_json,
                                               qarb_classifier** out);
QARB_API qarb_status qarb_classifier_predict(const qarb_classifier* c,
                                             const qarb_state* s, int* label);
/* Writes min(capacity, K) confidences; *count receives K. */
QARB_API qarb_status qarb_classifier_confidences(const qarb_classifier* c,
                                                 const qarb_state* s, double* out,
                                                 size_t capacity, size_t* count);
QARB_API void qarb_classifier_free(qarb_classifier* c);

/* Haar prediction-change bound: epsilon_unitary, lambda1 and trace bound. */
QARB_API qarb_status qarb_bound_pc_haar(double N, double eta, double gamma,
                                        double* epsilon_unitary, double* lambda1,
                                        double* trace_bound);
QARB_API qarb_status qarb_bound_error_region(double N, double mu, double gamma,
                                             double* out);
QARB_API qarb_status qarb_bound_thm3_lower(double eps_in, size_t n, double* out);
QARB_API double qarb_gaussian_cdf(double x);

/* Runs an experiment from a JSON config and writes artifacts into out_dir.
   *report_json receives the report (free with qarb_string_free); *all_passed
   is 1 iff every check passed. */
QARB_API qarb_status qarb_run_experiment(const char* config_json, const char* out_dir,
                                         char** report_json, int* all_passed);
QARB_API void qarb_string_free(char* s);

/* Applies one "dotted.key=value" override to a JSON config; the value is
   parsed as JSON and falls back to a string. Free *out_json with
   qarb_string_free. */
QARB_API qarb_status qarb_config_override(const char* config_json,
                                          const char* assignment, char** out_json);

#ifdef __cplusplus
}
#endif

#endif  // QARB_H_
