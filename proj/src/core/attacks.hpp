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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "core/classifier.hpp"
#include "core/concentration.hpp"
#include "core/random.hpp"
#include "core/state.hpp"

namespace qarb {

enum class AttackKind { kSubstitution, kInDistribution, kUnconstrained };

std::string_view attack_kind_name(AttackKind kind);

/// A found adversarial perturbation. Sizes are upper bounds on the minimal
/// perturbation: the search may miss smaller ones.
struct AttackOutcome {
  AttackKind kind = AttackKind::kUnconstrained;
  bool success = false;
  /// The input already sat on a decision boundary; reported as size 0.
  bool on_boundary = false;
  /// Trace norm ||rho - sigma||_1, or the mixing fraction for substitution.
  double perturbation_size = 0.0;
  /// ||rho - sigma||_1 for every kind.
  double induced_trace_norm = 0.0;
  Label original_label = 0;
  Label adversarial_label = 0;
  std::optional<DensityMatrix> adversarial_state;
  std::size_t search_evaluations = 0;
  std::size_t numeric_rank = 0;  // of adversarial_state
};

// ---------------------------------------------------------------------------
// Substitution

/// 1 - 1/(1 + 2 delta): mixing fractions strictly above it flip a binary
/// decision with margin delta.
double substitution_threshold(double delta);

struct SubstitutionOutcome {
  AttackOutcome outcome;
  double margin = 0.0;       // delta = confidence of the original label - 1/2
  double threshold = 0.0;    // substitution_threshold(delta)
  /// induced_trace_norm >= eps (1 + 2 delta) - 1e-9.
  bool perturbation_bound_holds = false;
};

/// (1 - eps) rho + eps sigma with sigma = reverse_prepare(clf, target).
/// Succeeds when the original label's confidence drops below 1/2.
SubstitutionOutcome substitution_attack(const QuantumClassifier& clf,
                                        const DensityMatrix& rho, Label target,
                                        double eps);

// ---------------------------------------------------------------------------
// In-distribution

struct LatentSearch {
  std::size_t budget = 32;         // random latent directions
  double max_radius = 6.0;         // latent l2 radius scanned per direction
  std::size_t scan_steps = 48;     // coarse radius grid per direction
  double radius_tol = 1e-4;        // bisection tolerance in latent radius
  std::uint64_t seed = 0;
};

/// Searches g(z + r v) over random unit directions v (direction k is the
/// same for every budget, so a larger budget never reports a larger size).
/// Each direction is scanned and the first flip is bisected in r.
AttackOutcome in_distribution_attack(const Predictor& clf, const Generator& gen,
                                     std::size_t d, const Eigen::VectorXd& z,
                                     const LatentSearch& search);

// ---------------------------------------------------------------------------
// Unconstrained

struct MixtureSearch {
  std::size_t scan_steps = 16;     // coarse grid in t before bisection
  double t_tol = 1e-3;             // bisection tolerance in t
  /// Iterations of the local pure-target search; 0 disables it.
  std::size_t refine_iterations = 200;
  std::uint64_t seed = 0;
};

/// Minimum over three candidate families of ||sigma - rho||_1 with a changed
/// prediction: mixtures toward every other label's seed states, the caller's
/// candidates, and a local search over pure mixture targets.
AttackOutcome unconstrained_attack(const Predictor& clf, const DensityMatrix& rho,
                                   std::span<const DensityMatrix> candidates,
                                   const MixtureSearch& search);

// ---------------------------------------------------------------------------
// Brute-force reference

struct OracleResult {
  double min_perturbation = 0.0;  // +inf when no grid point changes the label
  double grid_error = 0.0;        // one cell diameter
  std::size_t grid_points = 0;
  std::size_t evaluations = 0;
};

/// Exhaustive Bloch-ball grid: radii i/R (i = 0..R), polar angles pi j/R
/// (j = 0..R), azimuths pi k/R (k = 0..2R-1). Doubling R refines the grid
/// without dropping points.
OracleResult oracle_min_perturbation(const Predictor& clf, const DensityMatrix& rho,
                                     std::size_t grid_resolution);

// ---------------------------------------------------------------------------
// Risk

enum class RiskKind { kErrorRegion, kPredictionChange };

std::string_view risk_kind_name(RiskKind kind);

/// Fraction of sampled states whose attack-found perturbation is within
/// epsilon. A lower bound on the true risk, because attacks over-estimate
/// minimal perturbations.
struct RiskEstimate {
  RiskKind kind = RiskKind::kPredictionChange;
  double epsilon = 0.0;
  double estimate = 0.0;
  std::size_t sample_count = 0;
  double std_error = 0.0;
  bool lower_bound = true;
};

using StateSampler = std::function<DensityMatrix(Engine&)>;
using Labeling = std::function<Label(const DensityMatrix&)>;
using AttackProcedure =
    std::function<AttackOutcome(const DensityMatrix&, Engine&)>;

RiskEstimate estimate_risk(RiskKind kind, const Predictor& clf,
                           const StateSampler& sampler,
                           const Labeling* ground_truth, double epsilon,
                           std::size_t samples, const AttackProcedure& attack,
                           Engine& rng);

}  // namespace qarb
