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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "core/channel.hpp"
#include "core/encoding.hpp"
#include "core/errors.hpp"
#include "core/random.hpp"
#include "core/state.hpp"

namespace qarb {

// ---------------------------------------------------------------------------
// Samplers. All draw from the caller's engine, so a fixed (seed, stream)
// reproduces the same values.

/// Haar unitary on U(N): Ginibre matrix, QR, phases of R's diagonal removed.
ComplexMatrix sample_haar_unitary(std::size_t N, Engine& rng);

/// Normalised complex Gaussian vector.
PureState sample_haar_pure(std::size_t N, Engine& rng);

/// count x m matrix of iid standard normals, one latent point per row.
Eigen::MatrixXd sample_gaussian(std::size_t m, std::size_t count, Engine& rng);

/// G G† / tr(G G†) with G an N x rank complex Ginibre matrix.
DensityMatrix sample_mixed_state(std::size_t N, std::size_t rank, Engine& rng);

/// k Kraus operators cut from an isometry dim -> k dim taken from a Haar
/// unitary (Stinespring).
KrausChannel sample_channel(std::size_t dim, std::size_t k, Engine& rng);

/// POVM {M_i† M_i} from the same construction, labels 0..K-1.
POVMSet sample_povm(std::size_t dim, std::size_t K, Engine& rng);

// ---------------------------------------------------------------------------
// Empirical concentration function

/// A probability space the estimator can draw from and measure distances in.
template <class Point>
struct SampleSpace {
  std::function<Point(Engine&)> sample;
  std::function<double(const Point&, const Point&)> metric;
};

/// Threshold sets {x : statistic(x) <= threshold}. A NaN threshold is tuned
/// to the empirical median. The distance of a point to the set comes from,
/// in order of preference: `distance` when provided (and the threshold is
/// fixed), (statistic - threshold) / `lipschitz` when `lipschitz` > 0 (a
/// lower bound on the true distance), or the nearest retained base-set
/// sample (an upper bound).
template <class Point>
struct SetFamily {
  std::function<double(const Point&)> statistic;
  double threshold = std::numeric_limits<double>::quiet_NaN();
  double lipschitz = 0.0;
  std::function<double(const Point&)> distance;
};

enum class AlphaDistance { kNearestSample, kLipschitz, kExact };

std::string_view alpha_distance_name(AlphaDistance d);

struct AlphaRow {
  double epsilon = 0.0;
  double alpha = 0.0;
  double std_error = 0.0;
};

struct AlphaTable {
  double threshold = 0.0;
  double base_measure = 0.0;
  AlphaDistance method = AlphaDistance::kNearestSample;
  std::size_t retained = 0;
  std::vector<AlphaRow> rows;
};

inline constexpr std::size_t kMaxRetained = 5000;

/// 1 - (empirical measure of the eps-expansion of the base set), for one
/// set of the family. The concentration function is a supremum over all
/// sets, so this is a one-sided estimate of it.
template <class Point>
AlphaTable empirical_alpha(const SampleSpace<Point>& space,
                           const SetFamily<Point>& family,
                           std::span<const double> eps_grid,
                           std::size_t samples, Engine& rng) {
  require(samples >= 2, ErrorCode::kArgument, "need at least two samples");
  for (double e : eps_grid) {
    require(std::isfinite(e) && e >= 0.0, ErrorCode::kArgument,
            "epsilon grid must be finite and non-negative");
  }
  std::vector<Point> points;
  std::vector<double> stats;
  points.reserve(samples);
  stats.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    points.push_back(space.sample(rng));
    stats.push_back(family.statistic(points.back()));
  }
  AlphaTable table;
  table.threshold = family.threshold;
  if (std::isnan(table.threshold)) {
    std::vector<double> sorted = stats;
    std::nth_element(sorted.begin(), sorted.begin() + samples / 2, sorted.end());
    table.threshold = sorted[samples / 2];
  }
  const double n = static_cast<double>(samples);
  const auto inside = static_cast<double>(std::count_if(
      stats.begin(), stats.end(), [&](double s) { return s <= table.threshold; }));
  table.base_measure = inside / n;
  const double mc = 3.0 * std::sqrt(0.25 / n);
  require(table.base_measure >= 0.5 - mc, ErrorCode::kConfig,
          "threshold set has empirical measure below 1/2");

  // Distance of every sample to the base set.
  std::vector<double> dist(samples, 0.0);
  if (family.distance && !std::isnan(family.threshold)) {
    table.method = AlphaDistance::kExact;
    for (std::size_t i = 0; i < samples; ++i) {
      if (stats[i] > table.threshold) dist[i] = family.distance(points[i]);
    }
  } else if (family.lipschitz > 0.0) {
    table.method = AlphaDistance::kLipschitz;
    for (std::size_t i = 0; i < samples; ++i) {
      dist[i] = std::max(0.0, stats[i] - table.threshold) / family.lipschitz;
    }
  } else {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < samples && kept.size() < kMaxRetained; ++i) {
      if (stats[i] <= table.threshold) kept.push_back(i);
    }
    table.retained = kept.size();
    for (std::size_t i = 0; i < samples; ++i) {
      if (stats[i] <= table.threshold) continue;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j : kept) best = std::min(best, space.metric(points[i], points[j]));
      dist[i] = best;
    }
  }
  for (double e : eps_grid) {
    const auto covered = static_cast<double>(
        std::count_if(dist.begin(), dist.end(), [&](double v) { return v <= e; }));
    AlphaRow row;
    row.epsilon = e;
    row.alpha = 1.0 - covered / n;
    row.std_error = std::sqrt(row.alpha * (1.0 - row.alpha) / n);
    table.rows.push_back(row);
  }
  return table;
}

/// Unitaries under the Hilbert-Schmidt metric, Haar measure.
SampleSpace<ComplexMatrix> haar_unitary_space(std::size_t N);

/// Sets {U : Re tr(W† U) <= 0} with the given distance method. The
/// statistic is ||W||_HS-Lipschitz in the Hilbert-Schmidt norm. kExact is
/// available for W = I only and uses unitary_overlap_set_distance.
SetFamily<ComplexMatrix> trace_overlap_family(const ComplexMatrix& w,
                                              AlphaDistance method);

/// Hilbert-Schmidt distance from U to the nearest V in {V : Re tr V <= 0}
/// that commutes with U, i.e. min sum_k |e^{i theta_k} - e^{i phi_k}|^2
/// subject to sum_k cos phi_k <= 0 over the eigenphases theta_k of U. Such a
/// V is in the set, so the result bounds the distance to the set from above.
double unitary_overlap_set_distance(const ComplexMatrix& u);

/// R^m under l2, canonical Gaussian measure.
SampleSpace<Eigen::VectorXd> gaussian_space(std::size_t m);

/// Half-spaces {z : z_1 <= a}; the distance to them is exact.
SetFamily<Eigen::VectorXd> half_space_family(double a);

// ---------------------------------------------------------------------------
// Gaussian isoperimetry

struct IsoperimetryRow {
  double epsilon = 0.0;
  double measured = 0.0;  // empirical measure of the expansion
  double expected = 0.0;  // Phi(a + eps)
  double std_error = 0.0;
  bool within = false;    // |measured - expected| <= 3 sigma
};

struct IsoperimetryAudit {
  std::size_t m = 1;
  double a = 0.0;
  std::vector<IsoperimetryRow> rows;
  std::vector<double> delta_grid;
  bool two_interval_holds = true;  // 1 - Phi(3 delta) <= 1 - Phi(delta)

  bool all_hold() const;
};

/// Half-space Sigma = {z : z_1 <= a} in R^m: its eps-expansion is
/// {z_1 <= a + eps}, measured on fresh Gaussian samples.
IsoperimetryAudit isoperimetry_audit(std::size_t m, double a,
                                     std::span<const double> eps_grid,
                                     std::size_t samples, Engine& rng);

// ---------------------------------------------------------------------------
// Synthetic generators

/// z -> logistic(A z + b), latent R^m to pixels in (0, 1)^n.
class Generator {
 public:
  Generator(Eigen::MatrixXd a, Eigen::VectorXd b);

  std::size_t latent_dim() const { return static_cast<std::size_t>(a_.cols()); }
  std::size_t pixels() const { return static_cast<std::size_t>(a_.rows()); }
  const Eigen::MatrixXd& weights() const { return a_; }
  const Eigen::VectorXd& offset() const { return b_; }
  /// (1/4) sum_i ||a_i||_2; bounds ||g(z) - g(z')||_1 / ||z - z'||_2.
  double certified_lipschitz() const { return lipschitz_; }

  PixelVector operator()(const Eigen::VectorXd& z) const;
  /// encode(g(z)) as a density matrix with d-level sites.
  DensityMatrix state(const Eigen::VectorXd& z, std::size_t d) const;
  /// Certified omega1(tau) = min(n, L tau).
  double certified_omega1(double tau) const;

 private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  double lipschitz_ = 0.0;
};

/// Gaussian weights rescaled so that certified_lipschitz() == scale;
/// offsets N(0, 1/4).
Generator make_generator(std::size_t m, std::size_t n, std::uint64_t seed,
                         double scale);

struct ModulusRow {
  double tau = 0.0;
  double omega_hat = 0.0;  // running-max envelope of sampled maxima
  double certified = 0.0;
};

/// max over random pairs at latent distance tau of the pixel l1 distance,
/// followed by a running-max envelope over the sorted grid. A lower estimate
/// of omega1.
std::vector<ModulusRow> estimate_modulus(const Generator& gen,
                                         std::span<const double> tau_grid,
                                         std::size_t pairs_per_tau, Engine& rng);

// ---------------------------------------------------------------------------
// Observable concentration over Haar pure states

struct DeviationRow {
  double t = 0.0;
  double probability = 0.0;
  double std_error = 0.0;
};

struct DeviationTable {
  std::size_t N = 0;
  double mean = 0.0;  // tr(O) / N
  double median_abs_deviation = 0.0;
  std::vector<DeviationRow> rows;
};

/// Pr[|<psi|O|psi> - tr(O)/N| > t] over Haar pure states.
DeviationTable deviation_probability(std::size_t N, const ComplexMatrix& observable,
                                     std::span<const double> t_grid,
                                     std::size_t samples, Engine& rng);

}  // namespace qarb
