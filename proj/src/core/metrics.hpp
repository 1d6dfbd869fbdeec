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

#include <string_view>
#include <vector>

#include "core/channel.hpp"
#include "core/state.hpp"

namespace qarb {

enum class DistanceKind { kTrace, kHilbertSchmidt, kBures, kHellinger };

std::string_view distance_kind_name(DistanceKind kind);
DistanceKind parse_distance_kind(std::string_view name);

/// Distances between states. kTrace is the full norm ||rho - sigma||_1 in
/// [0, 2]; use trace_distance_halved() for the conventional [0, 1] value.
double distance(DistanceKind kind, const DensityMatrix& rho,
                const DensityMatrix& sigma);

double trace_distance_halved(const DensityMatrix& rho,
                             const DensityMatrix& sigma);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix& hermitian);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. Falls back to
/// <v|sigma|v> when either argument is numerically pure.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

inline constexpr double kRankRelTol = 1e-10;

/// Number of eigenvalues above 1e-10 times the largest one.
std::size_t numeric_rank(const DensityMatrix& rho);

inline constexpr double kAuditSlack = 1e-9;

/// Confidence change under a channel + POVM against every distance-based
/// upper bound.
struct ConfidenceAudit {
  std::vector<double> confidence_deltas;  // |tr(E(rho - sigma) Pi_s)|
  double confidence_sum = 0.0;
  double channel_trace_norm = 0.0;  // ||E(rho) - E(sigma)||_1
  double trace_norm = 0.0;          // ||rho - sigma||_1
  std::vector<double> dual_bounds;  // tr(E*(Pi_s)) ||rho - sigma||_1
  double hs_rank_factor = 0.0;      // R = r_rho r_sigma / (r_rho + r_sigma)
  double hs_bound = 0.0;            // 2 sqrt(R) ||rho - sigma||_2
  double bures_bound = 0.0;         // 2 ||rho - sigma||_B
  double hellinger_bound = 0.0;     // 2 ||rho - sigma||_H

  bool measurement_holds = false;  // sum <= ||E(rho) - E(sigma)||_1
  bool contraction_holds = false;  // ||E(rho) - E(sigma)||_1 <= ||rho - sigma||_1
  bool trace_holds = false;
  bool dual_holds = false;
  bool hs_holds = false;
  bool bures_holds = false;
  bool hellinger_holds = false;

  bool all_hold() const {
    return measurement_holds && contraction_holds && trace_holds &&
           dual_holds && hs_holds && bures_holds && hellinger_holds;
  }
};

ConfidenceAudit confidence_change_audit(const KrausChannel& channel,
                                        const POVMSet& povm,
                                        const DensityMatrix& rho,
                                        const DensityMatrix& sigma);

/// Fuchs-van de Graaf and the Bures/Hellinger ordering
///   ||rho-sigma||_1 <= 2 sqrt(B^2 - B^4/4) <= 2B <= 2H.
struct DistanceOrderingAudit {
  double trace_norm = 0.0;
  double fidelity = 0.0;
  double fvdg_lower = 0.0;  // 2 - 2 sqrt(F)
  double fvdg_upper = 0.0;  // 2 sqrt(1 - F)
  double bures_chain = 0.0;
  double bures = 0.0;
  double hellinger = 0.0;
  bool fvdg_holds = false;
  bool chain_holds = false;
};

DistanceOrderingAudit distance_ordering_audit(const DensityMatrix& rho,
                                              const DensityMatrix& sigma);

}  // namespace qarb
