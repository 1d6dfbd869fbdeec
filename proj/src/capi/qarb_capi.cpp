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

#include "qarb.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "core/bounds.hpp"
#include "core/classifier.hpp"
#include "core/defense.hpp"
#include "core/encoding.hpp"
#include "core/experiments.hpp"
#include "core/metrics.hpp"

struct qarb_state {
  qarb::DensityMatrix rho;
};

struct qarb_classifier {
  qarb::QuantumClassifier clf;
};

namespace {

thread_local std::string g_last_error;

qarb_status set_error(qarb_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <class F>
qarb_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return QARB_OK;
  } catch (const qarb::Error& e) {
    return set_error(static_cast<qarb_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(QARB_ERR_CAPACITY, "out of memory");
  } catch (const std::exception& e) {
    return set_error(QARB_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(QARB_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* name) {
  qarb::require(p != nullptr, qarb::ErrorCode::kArgument,
                std::string(name) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* qarb_version(void) { return qarb::kVersion.data(); }

const char* qarb_last_error_message(void) { return g_last_error.c_str(); }

qarb_status qarb_state_encode(const double* pixels, size_t n, size_t d, qarb_state** out) {
  return guarded([&] {
    need(out, "out");
    need(pixels, "pixels");
    const qarb::PixelVector u(std::vector<double>(pixels, pixels + n));
    *out = new qarb_state{
        qarb::DensityMatrix::from_pure(qarb::encode(u, qarb::EncodingSpec{d, n}))};
  });
}

qarb_status qarb_state_from_matrix(const double* re_im, size_t dim, qarb_state** out) {
  return guarded([&] {
    need(out, "out");
    need(re_im, "re_im");
    qarb::check_capacity(dim);
    const auto k = static_cast<Eigen::Index>(dim);
    qarb::ComplexMatrix m(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) {
        const std::size_t i = 2 * static_cast<std::size_t>(r * k + c);
        m(r, c) = {re_im[i], re_im[i + 1]};
      }
    }
    *out = new qarb_state{qarb::DensityMatrix::from_matrix(m)};
  });
}

size_t qarb_state_dim(const qarb_state* s) { return s ? s->rho.dim() : 0; }

void qarb_state_free(qarb_state* s) { delete s; }

qarb_status qarb_distance_between(qarb_distance kind, const qarb_state* a,
                                  const qarb_state* b, double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    qarb::require(kind >= QARB_DISTANCE_TRACE && kind <= QARB_DISTANCE_HELLINGER,
                  qarb::ErrorCode::kArgument, "unknown distance kind");
    *out = qarb::distance(static_cast<qarb::DistanceKind>(kind), a->rho, b->rho);
  });
}

qarb_status qarb_fidelity(const qarb_state* a, const qarb_state* b, double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = qarb::fidelity(a->rho, b->rho);
  });
}

qarb_status qarb_classifier_from_json(const char* spec_json, qarb_classifier** out) {
  return guarded([&] {
    need(out, "out");
    need(spec_json, "spec_json");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(spec_json);
    } catch (const nlohmann::json::exception& e) {
      qarb::fail(qarb::ErrorCode::kArgument, std::string("invalid JSON: ") + e.what());
    }
    *out = new qarb_classifier{qarb::build_layered(qarb::spec_from_json(j))};
  });
}

qarb_status qarb_classifier_predict(const qarb_classifier* c, const qarb_state* s,
                                    int* label) {
  return guarded([&] {
    need(c, "classifier");
    need(s, "state");
    need(label, "label");
    *label = c->clf.predict(s->rho);
  });
}

qarb_status qarb_classifier_confidences(const qarb_classifier* c, const qarb_state* s,
                                        double* out, size_t capacity, size_t* count) {
  return guarded([&] {
    need(c, "classifier");
    need(s, "state");
    need(count, "count");
    const std::vector<double> conf = qarb::confidences(c->clf, s->rho);
    *count = conf.size();
    if (capacity > 0) need(out, "out");
    for (std::size_t i = 0; i < conf.size() && i < capacity; ++i) out[i] = conf[i];
  });
}

void qarb_classifier_free(qarb_classifier* c) { delete c; }

qarb_status qarb_bound_pc_haar(double N, double eta, double gamma, double* epsilon_unitary,
                               double* lambda1, double* trace_bound) {
  return guarded([&] {
    const qarb::PcBoundHaar b = qarb::pc_bound_haar({N, eta, gamma, 0.5});
    if (epsilon_unitary) *epsilon_unitary = b.epsilon_unitary;
    if (lambda1) *lambda1 = b.lambda1;
    if (trace_bound) *trace_bound = b.trace_bound;
  });
}

qarb_status qarb_bound_error_region(double N, double mu, double gamma, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = qarb::error_region_bound({N, 0.5, gamma, mu});
  });
}

qarb_status qarb_bound_thm3_lower(double eps_in, size_t n, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = qarb::thm3_lower(eps_in, n);
  });
}

double qarb_gaussian_cdf(double x) { return qarb::gaussian_cdf(x); }

qarb_status qarb_run_experiment(const char* config_json, const char* out_dir,
                                char** report_json, int* all_passed) {
  return guarded([&] {
    need(config_json, "config_json");
    need(out_dir, "out_dir");
    nlohmann::json config;
    try {
      config = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
      qarb::fail(qarb::ErrorCode::kConfig, std::string("invalid JSON: ") + e.what());
    }
    const qarb::RunReport report = qarb::run_experiment(config, out_dir);
    for (auto f : {qarb::ReportFormat::kJson, qarb::ReportFormat::kCsv,
                   qarb::ReportFormat::kText}) {
      qarb::emit_report(report, f, out_dir);
    }
    if (all_passed) *all_passed = report.all_passed() ? 1 : 0;
    if (report_json) *report_json = dup_string(qarb::report_to_json(report).dump());
  });
}

void qarb_string_free(char* s) { delete[] s; }

qarb_status qarb_config_override(const char* config_json, const char* assignment,
                                 char** out_json) {
  return guarded([&] {
    need(config_json, "config_json");
    need(assignment, "assignment");
    need(out_json, "out_json");
    nlohmann::json config;
    try {
      config = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
      qarb::fail(qarb::ErrorCode::kConfig, std::string("invalid JSON: ") + e.what());
    }
    qarb::apply_override(config, assignment);
    *out_json = dup_string(config.dump());
  });
}

}  // extern "C"
