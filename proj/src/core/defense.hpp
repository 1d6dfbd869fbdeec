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
#include <vector>

#include "core/attacks.hpp"
#include "core/classifier.hpp"
#include "core/concentration.hpp"
#include "core/encoding.hpp"
#include "core/state.hpp"

namespace qarb {

/// Product of the single-site marginals, tensor_i tr_{j != i}(sigma).
DensityMatrix project_marginals(const DensityMatrix& sigma);

/// Single-site marginals of a structured state, site 0 first.
std::vector<DensityMatrix> site_marginals(const DensityMatrix& sigma);

/// Pixel u maximising <a(u)| marginal |a(u)> over the encoding family of one
/// site. For qubits: theta = atan2(x, z) of the Bloch vector, u = theta / pi;
/// x < 0 falls back to the better endpoint; degenerate marginals give u = 0.
/// For d > 2 a grid scan refined by golden-section search.
double fit_site(const DensityMatrix& marginal);

/// Per-site fit of every factor. Qubit factors only.
PixelVector fit_pixels(const DensityMatrix& prod);

/// Same fit without the qubit restriction (d > 2 uses the numeric search).
PixelVector fit_pixels_any(const DensityMatrix& prod);

/// Classifier that first replaces its input by the closest encoded product
/// state: inner(encode(fit(project_marginals(sigma)))).
class DefendedClassifier final : public Predictor {
 public:
  DefendedClassifier(QuantumClassifier inner, EncodingSpec spec);

  const QuantumClassifier& inner() const { return inner_; }
  const EncodingSpec& spec() const { return spec_; }

  /// The encoded state the inner classifier actually sees.
  DensityMatrix purify(const DensityMatrix& sigma) const;

  Label predict(const DensityMatrix& sigma) const override;
  std::vector<Label> labels() const override { return inner_.labels(); }
  /// Encoded states the defended classifier assigns to `label`: the fitted
  /// images of the inner seeds and, for n <= 10, the encoded corners of the
  /// pixel cube.
  std::vector<DensityMatrix> label_seeds(Label label) const override;
  bool on_boundary(const DensityMatrix& sigma) const override;
  std::size_t input_dim() const override { return inner_.input_dim(); }

 private:
  QuantumClassifier inner_;
  EncodingSpec spec_;
};

Label defended_predict(const DefendedClassifier& dclf, const DensityMatrix& sigma);

/// 2 - 2 (1 - eps_in^2 / 16)^(1 / n_e), n_e = n for even n and n + 1 for odd.
double thm3_lower(double eps_in, std::size_t n);

struct SandwichRecord {
  double eps_in_hat = 0.0;
  double eps_unc_hat = 0.0;
  double thm3_lower = 0.0;
  bool lower_holds = false;    // thm3_lower <= eps_unc_hat + 1e-9
  bool nesting_holds = false;  // eps_unc_hat <= eps_in_hat + 1e-9
  /// False when the in-distribution search found no flip.
  bool conclusive = false;
  /// Both estimates are upper bounds, so lower_holds is a consistency check
  /// rather than a proof. Always set.
  bool consistency_only = true;
};

/// Attacks g(z) on the defended classifier in the latent space and without
/// constraint (with the latent adversarial state as a candidate), then
/// compares both sizes with thm3_lower. Qubit encodings only.
SandwichRecord sandwich_audit(const DefendedClassifier& dclf, const Generator& gen,
                              const Eigen::VectorXd& z, const LatentSearch& latent,
                              const MixtureSearch& mixture);

}  // namespace qarb
