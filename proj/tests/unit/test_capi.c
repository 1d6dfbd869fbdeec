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

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "qarb.h"

static int failures = 0;

#define EXPECT(cond)                                                 \
  do {                                                               \
    if (!(cond)) {                                                   \
      fprintf(stderr, "%s:%d: expectation failed: %s\n", __FILE__,   \
              __LINE__, #cond);                                      \
      ++failures;                                                    \
    }                                                                \
  } while (0)

static const char* kSpec =
    "{\"n_sites\":1,\"d\":2,\"layers\":[],\"parameters\":[],\"povm_site\":0,"
    "\"labels\":[0,1]}";

int main(void) {
  EXPECT(strcmp(qarb_version(), "0.1.0") == 0);

  const double zero[] = {0.0};
  const double one[] = {1.0};
  qarb_state* a = NULL;
  qarb_state* b = NULL;
  EXPECT(qarb_state_encode(zero, 1, 2, &a) == QARB_OK);
  EXPECT(qarb_state_encode(one, 1, 2, &b) == QARB_OK);
  EXPECT(qarb_state_dim(a) == 2);

  double v = -1.0;
  EXPECT(qarb_distance_between(QARB_DISTANCE_TRACE, a, b, &v) == QARB_OK);
  EXPECT(fabs(v - 2.0) < 1e-12);
  EXPECT(qarb_fidelity(a, b, &v) == QARB_OK);
  EXPECT(fabs(v) < 1e-12);

  const double bad[] = {1.5};
  qarb_state* c = NULL;
  EXPECT(qarb_state_encode(bad, 1, 2, &c) == QARB_ERR_ARGUMENT);
  EXPECT(c == NULL);
  EXPECT(strlen(qarb_last_error_message()) > 0);

  const double not_psd[] = {2.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0};
  EXPECT(qarb_state_from_matrix(not_psd, 2, &c) == QARB_ERR_NOT_PSD);
  const double mixed[] = {0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0};
  EXPECT(qarb_state_from_matrix(mixed, 2, &c) == QARB_OK);
  EXPECT(qarb_fidelity(a, c, &v) == QARB_OK);
  EXPECT(fabs(v - 0.5) < 1e-12);

  qarb_classifier* clf = NULL;
  EXPECT(qarb_classifier_from_json(kSpec, &clf) == QARB_OK);
  EXPECT(qarb_classifier_from_json("{", &clf) == QARB_ERR_ARGUMENT);
  int label = -1;
  EXPECT(qarb_classifier_predict(clf, b, &label) == QARB_OK);
  EXPECT(label == 1);
  double conf[2] = {0.0, 0.0};
  size_t count = 0;
  EXPECT(qarb_classifier_confidences(clf, a, conf, 2, &count) == QARB_OK);
  EXPECT(count == 2);
  EXPECT(fabs(conf[0] - 1.0) < 1e-12);
  EXPECT(qarb_classifier_predict(NULL, a, &label) == QARB_ERR_ARGUMENT);

  double eps = 0.0;
  double lambda1 = 0.0;
  double trace = 0.0;
  EXPECT(qarb_bound_pc_haar(16.0, 0.5, 0.5, &eps, &lambda1, &trace) == QARB_OK);
  EXPECT(fabs(lambda1 - 2.0 * sqrt(log(2.0 * sqrt(2.0) / 0.5))) < 1e-14);
  EXPECT(fabs(trace - 4.0 * lambda1 / 16.0) < 1e-15);
  EXPECT(qarb_bound_pc_haar(16.0, 0.0, 0.5, &eps, &lambda1, &trace) == QARB_ERR_DOMAIN);
  EXPECT(qarb_bound_thm3_lower(2.0, 2, &v) == QARB_OK);
  EXPECT(fabs(v - 0.2679491924311227) < 1e-15);
  EXPECT(qarb_bound_error_region(1024.0, 0.5, 0.5, &v) == QARB_OK);
  EXPECT(fabs(qarb_gaussian_cdf(0.0) - 0.5) < 1e-15);

  char* cfg = NULL;
  EXPECT(qarb_config_override("{\"seed\":1}", "gamma_grid=[0.5]", &cfg) == QARB_OK);
  char* cfg2 = NULL;
  EXPECT(qarb_config_override(cfg, "command=bounds", &cfg2) == QARB_OK);
  char* report = NULL;
  int passed = 0;
  EXPECT(qarb_run_experiment(cfg2, "capi_out", &report, &passed) == QARB_OK);
  EXPECT(passed == 1);
  EXPECT(report != NULL && strstr(report, "\"command\":\"bounds\"") != NULL);
  EXPECT(qarb_run_experiment("{\"command\":\"bounds\"}", "capi_out", &report, &passed) ==
         QARB_ERR_CONFIG);
  EXPECT(strstr(qarb_last_error_message(), "seed") != NULL);

  qarb_string_free(report);
  qarb_string_free(cfg);
  qarb_string_free(cfg2);
  qarb_classifier_free(clf);
  qarb_state_free(a);
  qarb_state_free(b);
  qarb_state_free(c);
  if (failures) fprintf(stderr, "%d failures\n", failures);
  return failures ? 1 : 0;
}
