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

#include <vector>

#include "core/state.hpp"

namespace qarb {

using Label = int;

inline constexpr double kChannelTol = 1e-9;

/// Completely positive trace-preserving map in Kraus form. A single square
/// unitary operator is the noiseless case.
class KrausChannel {
 public:
  static KrausChannel from_kraus(std::vector<ComplexMatrix> ops);
  static KrausChannel from_unitary(ComplexMatrix u);
  static KrausChannel identity(std::size_t dim);

  std::size_t input_dim() const { return in_dim_; }
  std::size_t output_dim() const { return out_dim_; }
  const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }

  bool is_unitary() const;
  /// The unitary of a one-operator channel; unsupported error otherwise.
  const ComplexMatrix& unitary() const;

 private:
  KrausChannel(std::vector<ComplexMatrix> ops, std::size_t in, std::size_t out)
      : ops_(std::move(ops)), in_dim_(in), out_dim_(out) {}

  std::vector<ComplexMatrix> ops_;
  std::size_t in_dim_ = 0;
  std::size_t out_dim_ = 0;
};

/// Σ M ρ M†.
DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho);

/// Heisenberg-picture map Σ M† Π M.
ComplexMatrix dual_apply(const KrausChannel& channel,
                         const ComplexMatrix& effect);

/// One PSD effect per label; effects sum to the identity.
class POVMSet {
 public:
  static POVMSet from_elements(std::vector<ComplexMatrix> elements,
                               std::vector<Label> labels);
  /// Rank-one projectors onto the computational basis, labelled in order.
  static POVMSet computational(std::size_t dim, std::vector<Label> labels);

  std::size_t dim() const {
    return static_cast<std::size_t>(elements_.front().rows());
  }
  std::size_t size() const { return elements_.size(); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  const std::vector<Label>& labels() const { return labels_; }
  /// Position of `label` in the element list; argument error when absent.
  std::size_t index_of(Label label) const;

 private:
  POVMSet(std::vector<ComplexMatrix> e, std::vector<Label> l)
      : elements_(std::move(e)), labels_(std::move(l)) {}

  std::vector<ComplexMatrix> elements_;
  std::vector<Label> labels_;
};

}  // namespace qarb
