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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qarb {

/// Evaluated bound plus the inputs and formula variant that produced it.
struct BoundReport {
  std::string bound_name;
  std::vector<std::pair<std::string, double>> params;
  double value = 0.0;
  std::vector<std::string> variant_flags;
};

// ---------------------------------------------------------------------------
// Haar-random classifier bounds

struct HaarBoundParams {
  double N = 2.0;      // Hilbert dimension
  double eta = 0.5;    // (0, 1/2]
  double gamma = 0.5;  // (0, 1]
  double mu = 0.5;     // measure of the error region
};

struct PcBoundHaar {
  double epsilon_unitary = 0.0;  // sqrt(4/N) lambda1
  double lambda1 = 0.0;
  double trace_bound = 0.0;  // 4 lambda1 / N
};

/// lambda1 = sqrt(ln(2 sqrt2 / eta)) + sqrt(ln(2 sqrt2 / gamma)).
PcBoundHaar pc_bound_haar(const HaarBoundParams& p);

/// sqrt(4/N) [sqrt(ln(sqrt2/mu)) + sqrt(ln(sqrt2/gamma))]. mu and gamma may
/// reach sqrt2, where each log term vanishes.
double error_region_bound(const HaarBoundParams& p);

// ---------------------------------------------------------------------------
// Generator moduli

/// Modulus of continuity omega1 of the latent-to-pixel map (l2 -> l1).
class ModulusSpec {
 public:
  enum class Kind { kCertifiedLinear, kTabulated };

  /// omega1(tau) = min(clamp, L tau).
  static ModulusSpec certified_linear(double lipschitz, double clamp);
  /// Piecewise-linear through (tau, omega1) pairs; (0, 0) is implied, values
  /// past the last point hold. Pairs must be nondecreasing.
  static ModulusSpec tabulated(std::vector<std::pair<double, double>> table,
                               double clamp);

  Kind kind() const { return kind_; }
  double lipschitz() const { return lipschitz_; }
  double clamp() const { return clamp_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }

  double omega1(double tau) const;

 private:
  Kind kind_ = Kind::kCertifiedLinear;
  double lipschitz_ = 0.0;
  double clamp_ = 0.0;
  std::vector<std::pair<double, double>> table_;
};

/// Which printed form of the modulus propagation to use.
enum class PropagationVariant {
  kStated,      // sqrt(1 - cos^(2n(d-1))(pi w1 / 2n))
  kFactorTwo,   // 2 sqrt(1 - cos^(2n(d-1))(pi w1 / 2n))
};

std::string_view propagation_variant_name(PropagationVariant v);

/// Trace-norm modulus omega(tau) of the composed generator, propagated from
/// omega1 through the encoding. The angle is clamped to [0, pi/2].
double omega_lower_prop1(const ModulusSpec& spec, double tau, std::size_t n,
                         std::size_t d,
                         PropagationVariant variant = PropagationVariant::kStated);

/// Inverse of omega_lower_prop1 by bisection to 1e-10 in tau. Returns the
/// smallest tau with omega(tau) >= eps; domain error if omega never gets there.
double omega_inverse(const ModulusSpec& spec, double eps, std::size_t n,
                     std::size_t d,
                     PropagationVariant variant = PropagationVariant::kStated);

/// omega(sqrt(ln(pi / (2 gamma^2)))), gamma in (0, sqrt(pi/2)].
double indist_bound_thm2(const ModulusSpec& spec, double gamma, std::size_t n,
                         std::size_t d,
                         PropagationVariant variant = PropagationVariant::kStated);

/// omega(sqrt(ln(4/gamma^2)) + sqrt(ln(4/eta^2))), gamma, eta in (0, 2].
double indist_bound_alternate(const ModulusSpec& spec, double gamma, double eta,
                              std::size_t n, std::size_t d,
                              PropagationVariant variant = PropagationVariant::kStated);

/// Second exponent of the multiclass bound.
enum class MulticlassVariant {
  kAsPrinted,     // e^(-eps sqrt(log(K^2 / (4 pi log K))))
  kLatentRadius,  // e^(-omega^-1(eps) sqrt(...))
};

std::string_view multiclass_variant_name(MulticlassVariant v);

/// 1 - sqrt(pi/2) e^(-w^2/2) e^(-x sqrt(log(K^2/(4 pi log K)))) with
/// w = omega^-1(eps) and x = eps (as printed) or w. May be negative.
double multiclass_risk_lower(double eps, double omega_inv_eps, int K,
                             MulticlassVariant variant = MulticlassVariant::kAsPrinted);

/// max(0, multiclass_risk_lower(...)).
double multiclass_risk_lower_clamped(
    double eps, double omega_inv_eps, int K,
    MulticlassVariant variant = MulticlassVariant::kAsPrinted);

// ---------------------------------------------------------------------------
// Gaussian helpers and audits

/// Standard normal CDF via erfc; exactly 1/2 at 0.
double gaussian_cdf(double x);
/// Inverse of gaussian_cdf on (0, 1).
double gaussian_quantile(double p);

struct Lemma1Violation {
  bool k_form = false;
  double p = 0.0;  // 1 - 1/K for the K form
  double eta = 0.0;
  int K = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct Lemma1Audit {
  std::size_t first_form_checks = 0;
  std::size_t k_form_checks = 0;
  double min_first_slack = 0.0;  // min over the grid of lhs - rhs
  double min_k_slack = 0.0;
  std::vector<Lemma1Violation> violations;
};

/// Checks Phi(Phi^-1(p) + eta) >= 1 - (1-p) sqrt(pi/2) e^(-eta^2/2) on
/// p_grid x eta_grid, and the K form on K_grid x {eta in eta_grid, eta >= 1}.
Lemma1Audit lemma1_audit(std::span<const double> p_grid,
                         std::span<const double> eta_grid,
                         std::span<const int> K_grid);

// ---------------------------------------------------------------------------
// Levy families

struct LevyParams {
  double k1 = 1.4142135623730951;
  double k2 = 0.25;
};

/// k1 exp(-k2^2 eps^2 N).
double levy_alpha_bound(const LevyParams& p, double N, double eps);

}  // namespace qarb
