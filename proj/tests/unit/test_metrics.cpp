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

#include "core/channel.hpp"
#include "core/concentration.hpp"
#include "core/metrics.hpp"
#include "core/random.hpp"
#include "test_util.hpp"

using namespace qarb;

namespace {

DensityMatrix ket(std::size_t dim, std::size_t i) {
  return DensityMatrix::from_pure(PureState::basis(dim, i));
}

constexpr DistanceKind kAllKinds[] = {DistanceKind::kTrace, DistanceKind::kHilbertSchmidt,
                                      DistanceKind::kBures, DistanceKind::kHellinger};

}  // namespace

TEST_CASE("distances vanish on equal states") {
  Engine rng = make_engine(21);
  const DensityMatrix rho = sample_mixed_state(4, 3, rng);
  for (DistanceKind k : kAllKinds) CHECK(distance(k, rho, rho) == doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("orthogonal pure states") {
  CHECK(distance(DistanceKind::kTrace, ket(2, 0), ket(2, 1)) == doctest::Approx(2.0));
  CHECK(distance(DistanceKind::kHilbertSchmidt, ket(2, 0), ket(2, 1)) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(fidelity(ket(2, 0), ket(2, 1)) == doctest::Approx(0.0));
}

TEST_CASE("pure-state trace identity on random pairs") {
  Engine rng = make_engine(22);
  for (int i = 0; i < 200; ++i) {
    const PureState a = sample_haar_pure(4, rng);
    const PureState b = sample_haar_pure(4, rng);
    const double f = std::norm(a.amplitudes().dot(b.amplitudes()));
    const double t = distance(DistanceKind::kTrace, DensityMatrix::from_pure(a),
                              DensityMatrix::from_pure(b));
    CHECK(std::abs(t - 2.0 * std::sqrt(1.0 - f)) <= 1e-8);
    CHECK(std::abs(fidelity(DensityMatrix::from_pure(a), DensityMatrix::from_pure(b)) - f) <= 1e-9);
  }
}

TEST_CASE("distance symmetry and dimension mismatch") {
  Engine rng = make_engine(23);
  const DensityMatrix a = sample_mixed_state(4, 2, rng);
  const DensityMatrix b = sample_mixed_state(4, 4, rng);
  for (DistanceKind k : kAllKinds) {
    CHECK(distance(k, a, b) == doctest::Approx(distance(k, b, a)).epsilon(1e-9));
    CHECK_CODE(distance(k, a, ket(2, 0)), ErrorCode::kArgument);
  }
  CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-9));
  CHECK_CODE(fidelity(a, ket(2, 0)), ErrorCode::kArgument);
}

TEST_CASE("fidelity examples") {
  CHECK(fidelity(ket(2, 0), ket(2, 0)) == doctest::Approx(1.0));
  CHECK(fidelity(ket(2, 0), DensityMatrix::maximally_mixed(2)) == doctest::Approx(0.5));
}

TEST_CASE("numeric rank") {
  CHECK(numeric_rank(ket(3, 1)) == 1);
  CHECK(numeric_rank(DensityMatrix::maximally_mixed(5)) == 5);
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 0.999;
  m(1, 1) = 0.001;
  CHECK(numeric_rank(DensityMatrix::from_matrix(m)) == 2);
}

TEST_CASE("confidence audit on equal states") {
  Engine rng = make_engine(24);
  const DensityMatrix rho = sample_mixed_state(4, 2, rng);
  const ConfidenceAudit a =
      confidence_change_audit(sample_channel(4, 2, rng), sample_povm(4, 3, rng), rho, rho);
  for (double d : a.confidence_deltas) CHECK(d == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(a.all_hold());
}

TEST_CASE("confidence audit is tight on orthogonal inputs") {
  const ConfidenceAudit a = confidence_change_audit(
      KrausChannel::identity(2), POVMSet::computational(2, {0, 1}), ket(2, 0), ket(2, 1));
  CHECK(a.confidence_sum == doctest::Approx(2.0));
  CHECK(a.trace_norm == doctest::Approx(2.0));
  CHECK(a.all_hold());
}

TEST_CASE("confidence audit over random tuples") {
  Engine rng = make_engine(25);
  std::size_t violations = 0;
  for (int i = 0; i < 150; ++i) {
    const std::size_t dim = std::size_t{2} << (i % 3);
    std::uniform_int_distribution<std::size_t> rank(1, dim);
    const ConfidenceAudit a = confidence_change_audit(
        sample_channel(dim, 3, rng), sample_povm(dim, 3, rng), sample_mixed_state(dim, rank(rng), rng),
        sample_mixed_state(dim, rank(rng), rng));
    if (!a.all_hold()) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("confidence audit rejects invalid inputs") {
  CHECK_CODE(confidence_change_audit(KrausChannel::identity(2), POVMSet::computational(4, {0, 1, 2, 3}),
                                     ket(2, 0), ket(2, 1)),
             ErrorCode::kArgument);
}

TEST_CASE("distance ordering chain on random states") {
  Engine rng = make_engine(26);
  for (int i = 0; i < 50; ++i) {
    const DistanceOrderingAudit a =
        distance_ordering_audit(sample_mixed_state(4, 2, rng), sample_mixed_state(4, 3, rng));
    CHECK(a.fvdg_holds);
    CHECK(a.chain_holds);
  }
}
