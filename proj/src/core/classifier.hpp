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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core/channel.hpp"
#include "core/encoding.hpp"
#include "core/state.hpp"

namespace qarb {

/// Confidences closer than this are an exact tie.
inline constexpr double kTieTol = 1e-12;

/// Anything that labels density matrices. Attacks and risk estimators only
/// see this interface.
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual Label predict(const DensityMatrix& rho) const = 0;
  virtual std::vector<Label> labels() const = 0;
  /// States the predictor assigns to `label` with maximal confidence. Used as
  /// end points of mixture searches.
  virtual std::vector<DensityMatrix> label_seeds(Label label) const = 0;
  /// Whether rho sits exactly on a decision boundary.
  virtual bool on_boundary(const DensityMatrix& rho) const = 0;
  virtual std::size_t input_dim() const = 0;
};

/// A channel followed by a POVM; predicts the label of the largest
/// expectation value.
class QuantumClassifier final : public Predictor {
 public:
  QuantumClassifier(KrausChannel channel, POVMSet povm);

  const KrausChannel& channel() const { return channel_; }
  const POVMSet& povm() const { return povm_; }

  Label predict(const DensityMatrix& rho) const override;
  std::vector<Label> labels() const override { return povm_.labels(); }
  std::vector<DensityMatrix> label_seeds(Label label) const override;
  bool on_boundary(const DensityMatrix& rho) const override;
  std::size_t input_dim() const override { return channel_.input_dim(); }

 private:
  KrausChannel channel_;
  POVMSet povm_;
};

/// tr(E(rho) Pi_s), ordered like the POVM elements.
std::vector<double> confidences(const QuantumClassifier& clf,
                                const DensityMatrix& rho);

/// argmax of a confidence vector; exact ties go to the lowest label id.
Label argmax_label(const std::vector<double>& conf,
                   const std::vector<Label>& labels);

Label predict(const QuantumClassifier& clf, const DensityMatrix& rho);

/// One gate acting on `width` consecutive sites starting at `site`.
struct GatePlacement {
  std::size_t site = 0;
  std::size_t width = 2;

  friend bool operator==(const GatePlacement&, const GatePlacement&) = default;
};

/// Layered circuit of one- and two-site gates. Each gate is
/// exp(-i sum_k theta_k G_k) over the generalized Gell-Mann basis of its
/// local space, so all-zero parameters give the identity.
struct LayeredCircuitSpec {
  std::size_t n_sites = 1;
  std::size_t d = 2;
  std::vector<std::vector<GatePlacement>> layers;
  std::vector<double> parameters;
  std::size_t povm_site = 0;
  std::vector<Label> labels;  // one per level of the measured site

  std::size_t parameter_count() const;
  void validate() const;

  friend bool operator==(const LayeredCircuitSpec&,
                         const LayeredCircuitSpec&) = default;
};

/// Brickwork layout: `depth` layers alternating even/odd neighbour pairs,
/// finishing with a layer of single-site gates. Parameters start at zero.
LayeredCircuitSpec brickwork_spec(std::size_t n_sites, std::size_t d,
                                  std::size_t depth, std::size_t povm_site,
                                  std::vector<Label> labels);

/// Hermitian, trace-orthogonal basis of su(dim), dim^2 - 1 elements.
std::vector<ComplexMatrix> gell_mann_basis(std::size_t dim);

/// exp(-i sum theta_k G_k) on a `dim`-dimensional space.
ComplexMatrix gate_unitary(std::size_t dim, std::span<const double> theta);

/// Full circuit unitary.
ComplexMatrix circuit_unitary(const LayeredCircuitSpec& spec);

QuantumClassifier build_layered(const LayeredCircuitSpec& spec);

/// U† |v><v| U with |v> the canonical unit vector in the top eigenspace of
/// the target effect: the computational basis vector with the largest
/// projection onto that eigenspace (lowest index on ties), normalised.
DensityMatrix reverse_prepare(const QuantumClassifier& clf, Label target);

struct LabeledSample {
  PixelVector pixels;
  Label label;
};

struct TrainingScore {
  double accuracy = 0.0;
  double mean_confidence = 0.0;  // mean confidence in the true label
};

TrainingScore score_classifier(const LayeredCircuitSpec& spec,
                               std::span<const LabeledSample> data);

/// Derivative-free coordinate search over gate angles. Accepts a move only
/// when it improves (accuracy, mean true-label confidence)
/// lexicographically, so accuracy never drops. `budget` counts classifier
/// evaluations on the whole dataset.
LayeredCircuitSpec train_toy(const LayeredCircuitSpec& spec,
                             std::span<const LabeledSample> data,
                             std::size_t budget, std::uint64_t seed);

nlohmann::json spec_to_json(const LayeredCircuitSpec& spec);
LayeredCircuitSpec spec_from_json(const nlohmann::json& j);

}  // namespace qarb
