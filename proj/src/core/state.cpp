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

#include "core/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace qarb {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kArgument: return "argument";
    case ErrorCode::kCapacity: return "capacity";
    case ErrorCode::kStructure: return "structure";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kNotHermitian: return "not_hermitian";
    case ErrorCode::kTraceNotOne: return "trace_not_one";
    case ErrorCode::kNotPsd: return "not_psd";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kNotNormalized: return "not_normalized";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

std::size_t max_dimension() {
  if (const char* env = std::getenv("QARB_MAX_DIM")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultMaxDim;
}

void check_capacity(std::size_t dim) {
  const std::size_t cap = max_dimension();
  if (dim > cap) {
    fail(ErrorCode::kCapacity, "dimension " + std::to_string(dim) +
                                   " exceeds capacity " + std::to_string(cap));
  }
}

std::size_t checked_dim_product(std::span<const std::size_t> dims) {
  const std::size_t cap = max_dimension();
  std::size_t prod = 1;
  for (std::size_t d : dims) {
    require(d > 0, ErrorCode::kArgument, "site dimension must be positive");
    if (prod > cap / d) {
      fail(ErrorCode::kCapacity,
           "dimension product exceeds capacity " + std::to_string(cap));
    }
    prod *= d;
  }
  return prod;
}

namespace {

void check_factor_dims(std::size_t dim, const SiteDims& dims) {
  if (dims.empty()) return;
  std::size_t prod = 1;
  for (std::size_t d : dims) {
    require(d > 0, ErrorCode::kStructure, "factor dimension must be positive");
    require(prod <= dim / d, ErrorCode::kStructure,
            "factor dimensions do not multiply to the state dimension");
    prod *= d;
  }
  require(prod == dim, ErrorCode::kStructure,
          "factor dimensions do not multiply to the state dimension");
}

SiteDims concat(const SiteDims& a, std::size_t da, const SiteDims& b,
                std::size_t db) {
  if (a.empty() && b.empty()) return {};
  SiteDims out = a.empty() ? SiteDims{da} : a;
  if (b.empty()) {
    out.push_back(db);
  } else {
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

PureState PureState::from_amplitudes(ComplexVector amplitudes,
                                     SiteDims factor_dims) {
  require(amplitudes.size() > 0, ErrorCode::kArgument, "empty state vector");
  check_capacity(static_cast<std::size_t>(amplitudes.size()));
  require(amplitudes.allFinite(), ErrorCode::kNonFinite,
          "state vector has non-finite entries");
  const double norm = amplitudes.norm();
  require(std::abs(norm - 1.0) <= kPureNormTol, ErrorCode::kNotNormalized,
          "state vector norm deviates from 1 by " +
              std::to_string(std::abs(norm - 1.0)));
  check_factor_dims(static_cast<std::size_t>(amplitudes.size()), factor_dims);
  return PureState(std::move(amplitudes), std::move(factor_dims));
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  require(index < dim, ErrorCode::kArgument, "basis index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return from_amplitudes(std::move(v));
}

DensityMatrix validate_density(const ComplexMatrix& m, SiteDims factor_dims) {
  require(m.rows() > 0 && m.rows() == m.cols(), ErrorCode::kStructure,
          "density matrix must be square and non-empty");
  check_capacity(static_cast<std::size_t>(m.rows()));
  require(m.allFinite(), ErrorCode::kNonFinite,
          "density matrix has non-finite entries");
  check_factor_dims(static_cast<std::size_t>(m.rows()), factor_dims);
  const double herm = hermiticity_defect(m);
  require(herm <= kHermitianTol, ErrorCode::kNotHermitian,
          "density matrix is not Hermitian (defect " + std::to_string(herm) +
              ")");
  const Complex tr = m.trace();
  require(std::abs(tr - Complex(1.0, 0.0)) <= kTraceTol,
          ErrorCode::kTraceNotOne,
          "density matrix trace is " + std::to_string(tr.real()));
  ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  require(min_eig >= -kPsdTol, ErrorCode::kNotPsd,
          "density matrix has eigenvalue " + std::to_string(min_eig));
  return DensityMatrix::trusted(std::move(sym), std::move(factor_dims));
}

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix& m,
                                         SiteDims factor_dims) {
  return validate_density(m, std::move(factor_dims));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const ComplexVector& a = psi.amplitudes();
  return trusted(a * a.adjoint(), psi.factor_dims());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim,
                                             SiteDims factor_dims) {
  require(dim > 0, ErrorCode::kArgument, "dimension must be positive");
  check_capacity(dim);
  check_factor_dims(dim, factor_dims);
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix m = ComplexMatrix::Identity(n, n) / static_cast<double>(dim);
  return trusted(std::move(m), std::move(factor_dims));
}

DensityMatrix DensityMatrix::trusted(ComplexMatrix m, SiteDims factor_dims) {
  return DensityMatrix(std::move(m), std::move(factor_dims));
}

DensityMatrix DensityMatrix::with_factor_dims(SiteDims dims) const {
  check_factor_dims(dim(), dims);
  return DensityMatrix(m_, std::move(dims));
}

PureState tensor_product(const PureState& a, const PureState& b) {
  const std::size_t dims[] = {a.dim(), b.dim()};
  checked_dim_product(dims);
  const Eigen::Index na = a.amplitudes().size();
  const Eigen::Index nb = b.amplitudes().size();
  ComplexVector out(na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    out.segment(i * nb, nb) = a.amplitudes()(i) * b.amplitudes();
  }
  return PureState(std::move(out),
                   concat(a.factor_dims(), a.dim(), b.factor_dims(), b.dim()));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  const std::size_t dims[] = {a.dim(), b.dim()};
  checked_dim_product(dims);
  const Eigen::Index na = a.matrix().rows();
  const Eigen::Index nb = b.matrix().rows();
  ComplexMatrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) {
      out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
    }
  }
  return DensityMatrix::trusted(
      std::move(out),
      concat(a.factor_dims(), a.dim(), b.factor_dims(), b.dim()));
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            std::span<const std::size_t> keep) {
  require(rho.has_structure(), ErrorCode::kStructure,
          "partial trace needs factor dimensions");
  require(!keep.empty(), ErrorCode::kArgument, "keep set is empty");
  const SiteDims& dims = rho.factor_dims();
  const std::size_t sites = dims.size();

  std::vector<bool> kept(sites, false);
  for (std::size_t k : keep) {
    require(k < sites, ErrorCode::kArgument,
            "site index " + std::to_string(k) + " out of range");
    require(!kept[k], ErrorCode::kArgument, "duplicate site index in keep set");
    kept[k] = true;
  }

  std::vector<std::size_t> stride(sites, 1);
  for (std::size_t i = sites; i-- > 1;) stride[i - 1] = stride[i] * dims[i];

  // Full index = offset(kept digits) + offset(traced digits).
  auto offsets = [&](bool want_kept) {
    std::vector<std::size_t> out{0};
    for (std::size_t s = 0; s < sites; ++s) {
      if (kept[s] != want_kept) continue;
      std::vector<std::size_t> next;
      next.reserve(out.size() * dims[s]);
      for (std::size_t base : out) {
        for (std::size_t digit = 0; digit < dims[s]; ++digit) {
          next.push_back(base + digit * stride[s]);
        }
      }
      out = std::move(next);
    }
    return out;
  };
  const std::vector<std::size_t> keep_off = offsets(true);
  const std::vector<std::size_t> trace_off = offsets(false);

  const auto nk = static_cast<Eigen::Index>(keep_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(nk, nk);
  const ComplexMatrix& m = rho.matrix();
  for (Eigen::Index a = 0; a < nk; ++a) {
    for (Eigen::Index b = 0; b < nk; ++b) {
      Complex acc = 0.0;
      for (std::size_t t : trace_off) {
        acc += m(static_cast<Eigen::Index>(keep_off[a] + t),
                 static_cast<Eigen::Index>(keep_off[b] + t));
      }
      out(a, b) = acc;
    }
  }
  SiteDims out_dims;
  for (std::size_t s = 0; s < sites; ++s) {
    if (kept[s]) out_dims.push_back(dims[s]);
  }
  return DensityMatrix::trusted(std::move(out), std::move(out_dims));
}

EigenDecomposition hermitian_eigen(const ComplexMatrix& m) {
  require(m.rows() > 0 && m.rows() == m.cols(), ErrorCode::kArgument,
          "eigendecomposition needs a square matrix");
  require(m.allFinite(), ErrorCode::kNonFinite, "matrix has non-finite entries");
  require(hermiticity_defect(m) <= kEigenInputHermitianTol,
          ErrorCode::kArgument, "matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
  return {es.eigenvalues(), es.eigenvectors()};
}

ComplexMatrix psd_sqrt(const DensityMatrix& rho) {
  const EigenDecomposition eig = hermitian_eigen(rho.matrix());
  const double top = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  // Eigenvalues at round-off scale are zeroed so that rank-deficient inputs
  // do not pick up sqrt(1e-17) ~ 3e-9 noise per direction.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * top;
  RealVector roots(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double v = eig.values(i);
    require(v >= -kSqrtNegativeTol, ErrorCode::kNotPsd,
            "eigenvalue " + std::to_string(v) + " below -1e-8");
    roots(i) = v <= noise ? 0.0 : std::sqrt(v);
  }
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double t) {
  require(a.dim() == b.dim(), ErrorCode::kArgument, "dimension mismatch");
  require(t >= 0.0 && t <= 1.0, ErrorCode::kArgument,
          "mixing fraction outside [0, 1]");
  ComplexMatrix m = (1.0 - t) * a.matrix() + t * b.matrix();
  return DensityMatrix::trusted(std::move(m), a.factor_dims());
}

DensityMatrix conjugate(const ComplexMatrix& u, const DensityMatrix& rho) {
  require(u.cols() == static_cast<Eigen::Index>(rho.dim()),
          ErrorCode::kArgument, "operator does not act on this state");
  ComplexMatrix out = u * rho.matrix() * u.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  SiteDims dims =
      u.rows() == u.cols() ? rho.factor_dims() : SiteDims{};
  return DensityMatrix::trusted(std::move(out), std::move(dims));
}

}  // namespace qarb
