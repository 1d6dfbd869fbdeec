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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "core/errors.hpp"

namespace qarb {

using Complex = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using SiteDims = std::vector<std::size_t>;

/// Tolerances shared by the state types.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kPureNormTol = 1e-12;
inline constexpr double kEigenInputHermitianTol = 1e-8;
inline constexpr double kSqrtNegativeTol = 1e-8;

inline constexpr std::size_t kDefaultMaxDim = 4096;

/// Hard cap on Hilbert-space dimension. `QARB_MAX_DIM` overrides the default.
std::size_t max_dimension();

/// Throws a capacity error when `dim` exceeds max_dimension().
void check_capacity(std::size_t dim);

/// Product of site dimensions; capacity error on overflow or when the product
/// exceeds max_dimension().
std::size_t checked_dim_product(std::span<const std::size_t> dims);

class PureState {
 public:
  /// Validates the ℓ2 norm; `factor_dims` may be empty.
  static PureState from_amplitudes(ComplexVector amplitudes,
                                   SiteDims factor_dims = {});
  /// |index⟩ in a space of dimension `dim`.
  static PureState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const ComplexVector& amplitudes() const { return amps_; }
  const SiteDims& factor_dims() const { return dims_; }

 private:
  PureState(ComplexVector amps, SiteDims dims)
      : amps_(std::move(amps)), dims_(std::move(dims)) {}
  friend PureState tensor_product(const PureState&, const PureState&);

  ComplexVector amps_;
  SiteDims dims_;
};

class DensityMatrix {
 public:
  /// Validating constructor; equivalent to validate_density().
  static DensityMatrix from_matrix(const ComplexMatrix& m,
                                   SiteDims factor_dims = {});
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(std::size_t dim,
                                       SiteDims factor_dims = {});

  /// Skips validation. Only for results of operations that preserve the
  /// invariants by construction (convex mixtures, unitary conjugation).
  static DensityMatrix trusted(ComplexMatrix m, SiteDims factor_dims = {});

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  const SiteDims& factor_dims() const { return dims_; }
  bool has_structure() const { return !dims_.empty(); }

  DensityMatrix with_factor_dims(SiteDims dims) const;

 private:
  DensityMatrix(ComplexMatrix m, SiteDims dims)
      : m_(std::move(m)), dims_(std::move(dims)) {}

  ComplexMatrix m_;
  SiteDims dims_;
};

/// Checks every DensityMatrix invariant and reports the first violated one
/// with a dedicated error code (non-finite, structure, hermiticity, trace,
/// positivity).
DensityMatrix validate_density(const ComplexMatrix& m,
                               SiteDims factor_dims = {});

PureState tensor_product(const PureState& a, const PureState& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

/// Traces out every site not listed in `keep` (0-based site indices).
DensityMatrix partial_trace(const DensityMatrix& rho,
                            std::span<const std::size_t> keep);

struct EigenDecomposition {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns are eigenvectors
};

EigenDecomposition hermitian_eigen(const ComplexMatrix& m);

/// Principal square root of a PSD state. Eigenvalues in (-1e-8, 0) are
/// clamped to zero; anything more negative is an error.
ComplexMatrix psd_sqrt(const DensityMatrix& rho);

/// (1 - t) a + t b for t in [0, 1].
DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double t);

/// max |m - m†| over entries.
double hermiticity_defect(const ComplexMatrix& m);

/// U rho U†, keeping the factor structure when U is square of matching size.
DensityMatrix conjugate(const ComplexMatrix& u, const DensityMatrix& rho);

}  // namespace qarb
