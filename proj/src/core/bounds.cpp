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

#include "core/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "core/errors.hpp"

namespace qarb {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

void require_finite(double v, const char* name) {
  require(std::isfinite(v), ErrorCode::kArgument,
          std::string(name) + " must be finite");
}

// sqrt(ln(c / x)) for x in (0, c]; zero exactly at x = c.
double sqrt_log_ratio(double c, double x) {
  return std::sqrt(std::max(0.0, std::log(c / x)));
}

}  // namespace

PcBoundHaar pc_bound_haar(const HaarBoundParams& p) {
  require_finite(p.N, "N");
  require_finite(p.eta, "eta");
  require_finite(p.gamma, "gamma");
  require(p.N >= 1.0, ErrorCode::kArgument, "N must be >= 1");
  require(p.eta != 0.0, ErrorCode::kDomain,
          "eta = 0 makes ln(2 sqrt2 / eta) diverge; the bound is vacuous");
  require(p.eta > 0.0 && p.eta <= 0.5, ErrorCode::kArgument,
          "eta must lie in (0, 1/2]");
  require(p.gamma != 0.0, ErrorCode::kDomain,
          "gamma = 0 makes ln(2 sqrt2 / gamma) diverge");
  require(p.gamma > 0.0 && p.gamma <= 1.0, ErrorCode::kArgument,
          "gamma must lie in (0, 1]");
  PcBoundHaar out;
  out.lambda1 = sqrt_log_ratio(2.0 * kSqrt2, p.eta) +
                sqrt_log_ratio(2.0 * kSqrt2, p.gamma);
  out.epsilon_unitary = std::sqrt(4.0 / p.N) * out.lambda1;
  out.trace_bound = 4.0 * out.lambda1 / p.N;
  return out;
}

double error_region_bound(const HaarBoundParams& p) {
  require_finite(p.N, "N");
  require_finite(p.mu, "mu");
  require_finite(p.gamma, "gamma");
  require(p.N >= 1.0, ErrorCode::kArgument, "N must be >= 1");
  require(p.mu > 0.0 && p.gamma > 0.0, ErrorCode::kDomain,
          "mu and gamma must be positive; the logarithm diverges at 0");
  require(p.mu <= kSqrt2 && p.gamma <= kSqrt2, ErrorCode::kDomain,
          "mu and gamma above sqrt2 give a negative logarithm");
  return std::sqrt(4.0 / p.N) *
         (sqrt_log_ratio(kSqrt2, p.mu) + sqrt_log_ratio(kSqrt2, p.gamma));
}

ModulusSpec ModulusSpec::certified_linear(double lipschitz, double clamp) {
  require(std::isfinite(lipschitz) && lipschitz >= 0.0, ErrorCode::kArgument,
          "Lipschitz constant must be finite and non-negative");
  require(std::isfinite(clamp) && clamp >= 0.0, ErrorCode::kArgument,
          "clamp must be finite and non-negative");
  ModulusSpec s;
  s.kind_ = Kind::kCertifiedLinear;
  s.lipschitz_ = lipschitz;
  s.clamp_ = clamp;
  return s;
}

ModulusSpec ModulusSpec::tabulated(std::vector<std::pair<double, double>> table,
                                   double clamp) {
  require(!table.empty(), ErrorCode::kArgument, "modulus table is empty");
  require(std::isfinite(clamp) && clamp >= 0.0, ErrorCode::kArgument,
          "clamp must be finite and non-negative");
  double prev_tau = 0.0;
  double prev_w = 0.0;
  for (const auto& [tau, w] : table) {
    require(std::isfinite(tau) && std::isfinite(w), ErrorCode::kArgument,
            "modulus table entries must be finite");
    require(tau >= prev_tau && w >= prev_w, ErrorCode::kArgument,
            "modulus table must be nondecreasing with omega1(0) = 0");
    prev_tau = tau;
    prev_w = w;
  }
  ModulusSpec s;
  s.kind_ = Kind::kTabulated;
  s.clamp_ = clamp;
  s.table_ = std::move(table);
  return s;
}

double ModulusSpec::omega1(double tau) const {
  require(std::isfinite(tau) && tau >= 0.0, ErrorCode::kArgument,
          "tau must be finite and non-negative");
  if (kind_ == Kind::kCertifiedLinear) return std::min(clamp_, lipschitz_ * tau);
  double t0 = 0.0;
  double w0 = 0.0;
  for (const auto& [t1, w1] : table_) {
    if (tau <= t1) {
      const double w = t1 > t0 ? w0 + (w1 - w0) * (tau - t0) / (t1 - t0) : w1;
      return std::min(clamp_, w);
    }
    t0 = t1;
    w0 = w1;
  }
  return std::min(clamp_, w0);
}

std::string_view propagation_variant_name(PropagationVariant v) {
  return v == PropagationVariant::kStated ? "prop1_stated" : "prop1_factor_two";
}

double omega_lower_prop1(const ModulusSpec& spec, double tau, std::size_t n,
                         std::size_t d, PropagationVariant variant) {
  require(n >= 1 && d >= 2, ErrorCode::kArgument, "need n >= 1 and d >= 2");
  const double nd = static_cast<double>(n);
  const double angle =
      std::clamp(std::numbers::pi * spec.omega1(tau) / (2.0 * nd), 0.0, kHalfPi);
  const double power = 2.0 * nd * static_cast<double>(d - 1);
  const double c = std::cos(angle);
  // 1 - c^power without cancellation when the angle is small.
  const double one_minus = c <= 0.0 ? 1.0 : -std::expm1(power * std::log(c));
  const double value = std::sqrt(std::max(0.0, one_minus));
  return variant == PropagationVariant::kFactorTwo ? 2.0 * value : value;
}

double omega_inverse(const ModulusSpec& spec, double eps, std::size_t n,
                     std::size_t d, PropagationVariant variant) {
  require(std::isfinite(eps) && eps >= 0.0, ErrorCode::kArgument,
          "epsilon must be finite and non-negative");
  if (eps == 0.0) return 0.0;
  double hi = 1.0;
  int grow = 0;
  while (omega_lower_prop1(spec, hi, n, d, variant) < eps) {
    hi *= 2.0;
    require(++grow < 200, ErrorCode::kDomain,
            "epsilon exceeds the range of the modulus");
  }
  double lo = 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (omega_lower_prop1(spec, mid, n, d, variant) >= eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double indist_bound_thm2(const ModulusSpec& spec, double gamma, std::size_t n,
                         std::size_t d, PropagationVariant variant) {
  const double top = std::sqrt(kHalfPi);
  require(std::isfinite(gamma) && gamma > 0.0, ErrorCode::kDomain,
          "gamma must be positive");
  // 1e-15 lets the exact endpoint sqrt(pi/2) through despite rounding.
  require(gamma <= top * (1.0 + 1e-15), ErrorCode::kDomain,
          "gamma above sqrt(pi/2) gives a negative logarithm");
  const double lambda2 = std::sqrt(std::max(0.0, std::log(kHalfPi / (gamma * gamma))));
  return omega_lower_prop1(spec, lambda2, n, d, variant);
}

double indist_bound_alternate(const ModulusSpec& spec, double gamma, double eta,
                              std::size_t n, std::size_t d,
                              PropagationVariant variant) {
  require(std::isfinite(gamma) && std::isfinite(eta) && gamma > 0.0 &&
              eta > 0.0 && gamma <= 2.0 && eta <= 2.0,
          ErrorCode::kArgument, "gamma and eta must lie in (0, 2]");
  const double radius = std::sqrt(std::max(0.0, std::log(4.0 / (gamma * gamma)))) +
                        std::sqrt(std::max(0.0, std::log(4.0 / (eta * eta))));
  return omega_lower_prop1(spec, radius, n, d, variant);
}

std::string_view multiclass_variant_name(MulticlassVariant v) {
  return v == MulticlassVariant::kAsPrinted ? "multiclass_as_printed"
                                            : "multiclass_latent_radius";
}

double multiclass_risk_lower(double eps, double omega_inv_eps, int K,
                             MulticlassVariant variant) {
  require(K >= 5, ErrorCode::kArgument, "the multiclass bound needs K >= 5");
  require(std::isfinite(eps) && eps >= 0.0 && std::isfinite(omega_inv_eps) &&
              omega_inv_eps >= 0.0,
          ErrorCode::kArgument, "epsilon and its preimage must be non-negative");
  const double k = static_cast<double>(K);
  const double rate = std::sqrt(std::log(k * k / (4.0 * std::numbers::pi * std::log(k))));
  const double x = variant == MulticlassVariant::kAsPrinted ? eps : omega_inv_eps;
  return 1.0 - std::sqrt(kHalfPi) *
                   std::exp(-0.5 * omega_inv_eps * omega_inv_eps - x * rate);
}

double multiclass_risk_lower_clamped(double eps, double omega_inv_eps, int K,
                                     MulticlassVariant variant) {
  return std::max(0.0, multiclass_risk_lower(eps, omega_inv_eps, K, variant));
}

double gaussian_cdf(double x) {
  if (std::isnan(x)) return x;
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double gaussian_quantile(double p) {
  require(p > 0.0 && p < 1.0, ErrorCode::kDomain,
          "quantile needs p in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

Lemma1Audit lemma1_audit(std::span<const double> p_grid,
                         std::span<const double> eta_grid,
                         std::span<const int> K_grid) {
  for (double p : p_grid) {
    require(p >= 0.5 && p < 1.0, ErrorCode::kArgument, "p must lie in [1/2, 1)");
  }
  for (double eta : eta_grid) {
    require(std::isfinite(eta) && eta > 0.0, ErrorCode::kArgument,
            "eta must be positive");
  }
  for (int K : K_grid) {
    require(K >= 5, ErrorCode::kArgument, "K form needs K >= 5");
  }
  Lemma1Audit audit;
  audit.min_first_slack = INFINITY;
  audit.min_k_slack = INFINITY;
  const double c = std::sqrt(kHalfPi);
  for (double p : p_grid) {
    const double a = gaussian_quantile(p);
    for (double eta : eta_grid) {
      // Compare the upper tails; 1 - x loses everything near 1.
      const double lhs_tail = gaussian_cdf(-(a + eta));
      const double rhs_tail = (1.0 - p) * c * std::exp(-0.5 * eta * eta);
      ++audit.first_form_checks;
      audit.min_first_slack = std::min(audit.min_first_slack, rhs_tail - lhs_tail);
      if (lhs_tail > rhs_tail) {
        audit.violations.push_back({false, p, eta, 0, 1.0 - lhs_tail, 1.0 - rhs_tail});
      }
    }
  }
  for (int K : K_grid) {
    const double k = static_cast<double>(K);
    const double p = 1.0 - 1.0 / k;
    const double a = gaussian_quantile(p);
    const double rate =
        std::sqrt(std::log(k * k / (4.0 * std::numbers::pi * std::log(k))));
    for (double eta : eta_grid) {
      if (eta < 1.0) continue;
      const double lhs_tail = gaussian_cdf(-(a + eta));
      const double rhs_tail = c / k * std::exp(-0.5 * eta * eta - eta * rate);
      ++audit.k_form_checks;
      audit.min_k_slack = std::min(audit.min_k_slack, rhs_tail - lhs_tail);
      if (lhs_tail > rhs_tail) {
        audit.violations.push_back({true, p, eta, K, 1.0 - lhs_tail, 1.0 - rhs_tail});
      }
    }
  }
  return audit;
}

double levy_alpha_bound(const LevyParams& p, double N, double eps) {
  require(p.k1 > 0.0 && p.k2 > 0.0, ErrorCode::kArgument,
          "Levy constants must be positive");
  require(N > 0.0 && eps >= 0.0, ErrorCode::kArgument,
          "N must be positive and eps non-negative");
  return p.k1 * std::exp(-p.k2 * p.k2 * eps * eps * N);
}

}  // namespace qarb
