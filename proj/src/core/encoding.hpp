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

#include <iosfwd>
#include <span>
#include <vector>

#include "core/state.hpp"

namespace qarb {

inline constexpr double kPixelTol = 1e-12;

/// n intensities in [0, 1]. Values within 1e-12 outside the range are
/// clamped onto it.
class PixelVector {
 public:
  explicit PixelVector(std::vector<double> pixels);

  std::size_t size() const { return pixels_.size(); }
  double operator[](std::size_t i) const { return pixels_[i]; }
  const std::vector<double>& values() const { return pixels_; }

  friend bool operator==(const PixelVector&, const PixelVector&) = default;

 private:
  std::vector<double> pixels_;
};

/// Qudit dimension d and number of sites n.
struct EncodingSpec {
  std::size_t d = 2;
  std::size_t n = 1;

  /// d^n, with the capacity guard applied.
  std::size_t dim() const;
  void validate() const;
};

/// sqrt(C(d-1, k)) for k = 0..d-1. Exact integer binomials up to d = 16,
/// log-gamma above.
std::vector<double> sqrt_binomials(std::size_t d);

/// Spin-coherent amplitudes of one pixel:
///   a_k = sqrt(C(d-1, k)) cos^(d-1-k)(pi u / 2) sin^k(pi u / 2).
ComplexVector site_amplitudes(double u, std::size_t d);

/// Product state over all pixels.
PureState encode(const PixelVector& u, const EncodingSpec& spec);

/// prod_i cos^(2(d-1))(|s_i - t_i| pi / 2).
double closed_fidelity(const PixelVector& s, const PixelVector& t,
                       const EncodingSpec& spec);

/// 2 sqrt(1 - closed_fidelity), the trace norm between encoded states.
double closed_trace_distance(const PixelVector& s, const PixelVector& t,
                             const EncodingSpec& spec);

struct CosineProductCheck {
  double lhs = 0.0;  // cos^n(mean x)
  double rhs = 0.0;  // prod cos(x_i)
  bool holds = false;
};

/// cos^n(sum x / n) >= prod cos(x_i) for x_i in [0, pi/2].
CosineProductCheck cosine_product_check(std::span<const double> x);

/// Pixel-space l1 radius matching a trace-norm radius 4 lambda1 / d^n:
///   (2n/pi) acos[(1 - 2 lambda1 / d^n)^(1 / ((d-1) n))].
/// Evaluated with expm1/log1p so that d^n up to ~1e300 stays accurate.
double l1_bound_translation(std::size_t n, std::size_t d, double lambda1);

void write_pixel_csv(std::ostream& out, std::span<const PixelVector> rows);
std::vector<PixelVector> read_pixel_csv(std::istream& in);

}  // namespace qarb
