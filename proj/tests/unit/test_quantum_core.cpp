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

#include <cmath>
#include <cstdlib>

#include "core/concentration.hpp"
#include "core/random.hpp"
#include "core/state.hpp"
#include "test_util.hpp"

using namespace qarb;

namespace {

ComplexMatrix diag(std::initializer_list<double> v) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(v.size()),
                                        static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

DensityMatrix half_identity() { return DensityMatrix::maximally_mixed(2, {2}); }

}  // namespace

TEST_CASE("tensor product of basis kets") {
  const PureState k = tensor_product(PureState::basis(2, 0), PureState::basis(2, 0));
  REQUIRE(k.dim() == 4);
  CHECK(k.amplitudes()(0) == Complex(1.0, 0.0));
  for (int i = 1; i < 4; ++i) CHECK(k.amplitudes()(i) == Complex(0.0, 0.0));
}

TEST_CASE("tensor product of maximally mixed qubits") {
  const DensityMatrix p = tensor_product(half_identity(), half_identity());
  CHECK(p.dim() == 4);
  CHECK(p.factor_dims() == SiteDims{2, 2});
  CHECK((p.matrix() - 0.25 * ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("tensor product trace and associativity") {
  Engine rng = make_engine(7);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix a = sample_mixed_state(2, 2, rng);
    const DensityMatrix b = sample_mixed_state(2, 1, rng);
    const DensityMatrix c = sample_mixed_state(2, 2, rng);
    CHECK(std::abs(tensor_product(a, b).matrix().trace() -
                   a.matrix().trace() * b.matrix().trace()) < 1e-12);
    const auto left = tensor_product(tensor_product(a, b), c).matrix();
    const auto right = tensor_product(a, tensor_product(b, c)).matrix();
    CHECK((left - right).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("tensor product capacity guard") {
  const DensityMatrix big = DensityMatrix::maximally_mixed(64);
  CHECK_CODE(tensor_product(big, DensityMatrix::maximally_mixed(128)), ErrorCode::kCapacity);
}

TEST_CASE("partial trace recovers factors") {
  Engine rng = make_engine(8);
  const DensityMatrix a = sample_mixed_state(2, 2, rng).with_factor_dims({2});
  const DensityMatrix b = sample_mixed_state(3, 2, rng).with_factor_dims({3});
  const DensityMatrix ab = tensor_product(a, b);
  const std::size_t first[] = {0};
  const std::size_t second[] = {1};
  CHECK((partial_trace(ab, first).matrix() - a.matrix()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((partial_trace(ab, second).matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("partial trace of a Bell state is maximally mixed") {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix bell = DensityMatrix::from_pure(PureState::from_amplitudes(v, {2, 2}));
  const std::size_t keep[] = {0};
  CHECK((partial_trace(bell, keep).matrix() - 0.5 * ComplexMatrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("partial trace preserves trace on three qubits") {
  Engine rng = make_engine(9);
  const DensityMatrix rho = DensityMatrix::from_pure(sample_haar_pure(8, rng)).with_factor_dims({2, 2, 2});
  const std::size_t keep[] = {0, 2};
  const DensityMatrix r = partial_trace(rho, keep);
  CHECK(r.dim() == 4);
  CHECK(std::abs(r.matrix().trace() - Complex(1.0)) < 1e-10);
  CHECK(hermiticity_defect(r.matrix()) < 1e-12);
  CHECK(hermitian_eigen(r.matrix()).values.minCoeff() > -1e-10);
}

TEST_CASE("partial trace errors") {
  const std::size_t keep[] = {0};
  CHECK_CODE(partial_trace(DensityMatrix::maximally_mixed(4), keep), ErrorCode::kStructure);
  CHECK_CODE(partial_trace(tensor_product(half_identity(), half_identity()),
                           std::span<const std::size_t>{}),
             ErrorCode::kArgument);
}

TEST_CASE("hermitian eigen spectra") {
  const EigenDecomposition e = hermitian_eigen(diag({1, 2, 3}));
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(2.0));
  CHECK(e.values(2) == doctest::Approx(3.0));
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const EigenDecomposition ex = hermitian_eigen(x);
  CHECK(ex.values(0) == doctest::Approx(-1.0));
  CHECK(ex.values(1) == doctest::Approx(1.0));
}

TEST_CASE("hermitian eigen reconstruction on 16x16") {
  Engine rng = make_engine(10);
  for (int t = 0; t < 5; ++t) {
    ComplexMatrix g = sample_haar_unitary(16, rng) * Complex(0.3, 0.1);
    const ComplexMatrix h = g + g.adjoint();
    const EigenDecomposition e = hermitian_eigen(h);
    const ComplexMatrix rec = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    CHECK((rec - h).cwiseAbs().maxCoeff() <= 1e-10 * 16);
    CHECK(std::abs(e.values.sum() - h.trace().real()) < 1e-10);
    for (int i = 1; i < 16; ++i) CHECK(e.values(i) >= e.values(i - 1));
  }
}

TEST_CASE("hermitian eigen rejects non-Hermitian input") {
  ComplexMatrix m(2, 2);
  m << 1, 1, 0, 1;
  CHECK_CODE(hermitian_eigen(m), ErrorCode::kArgument);
}

TEST_CASE("psd sqrt examples") {
  const ComplexMatrix s = psd_sqrt(DensityMatrix::maximally_mixed(2));
  CHECK((s - ComplexMatrix::Identity(2, 2) / std::sqrt(2.0)).cwiseAbs().maxCoeff() < 1e-12);
  const DensityMatrix zero = DensityMatrix::from_pure(PureState::basis(2, 0));
  CHECK((psd_sqrt(zero) - zero.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("psd sqrt squares back on random mixed states") {
  Engine rng = make_engine(11);
  for (std::size_t dim : {2, 4, 8, 16}) {
    for (int i = 0; i < 25; ++i) {
      std::uniform_int_distribution<std::size_t> rank(1, dim);
      const DensityMatrix rho = sample_mixed_state(dim, rank(rng), rng);
      const ComplexMatrix s = psd_sqrt(rho);
      CHECK((s * s - rho.matrix()).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("validate density accepts and rejects") {
  CHECK_NOTHROW(validate_density(diag({0.5, 0.5})));
  // diag(2, -1) has unit trace; its defect is the negative eigenvalue.
  CHECK_CODE(validate_density(diag({2, -1})), ErrorCode::kNotPsd);
  CHECK_CODE(validate_density(diag({2, 1})), ErrorCode::kTraceNotOne);
  ComplexMatrix upper(2, 2);
  upper << 0.5, 0.3, 0, 0.5;
  CHECK_CODE(validate_density(upper), ErrorCode::kNotHermitian);
  ComplexMatrix nan = diag({0.5, 0.5});
  nan(0, 1) = std::nan("");
  CHECK_CODE(validate_density(nan), ErrorCode::kNonFinite);
  CHECK_CODE(validate_density(diag({0.5, 0.5}), {3}), ErrorCode::kStructure);
}

TEST_CASE("pure state normalisation") {
  ComplexVector v(2);
  v << 1.0, 1.0;
  CHECK_CODE(PureState::from_amplitudes(v), ErrorCode::kNotNormalized);
}

TEST_CASE("capacity override from the environment") {
  ::setenv("QARB_MAX_DIM", "8", 1);
  CHECK(max_dimension() == 8);
  CHECK_CODE(check_capacity(16), ErrorCode::kCapacity);
  ::unsetenv("QARB_MAX_DIM");
  CHECK(max_dimension() == kDefaultMaxDim);
}
