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
#include <limits>

#include "core/attacks.hpp"
#include "core/concentration.hpp"
#include "core/encoding.hpp"
#include "core/random.hpp"
#include "test_util.hpp"

using namespace qarb;

namespace {

DensityMatrix ket(std::size_t dim, std::size_t i) {
  return DensityMatrix::from_pure(PureState::basis(dim, i));
}

QuantumClassifier z_classifier() {
  return QuantumClassifier(KrausChannel::identity(2), POVMSet::computational(2, {0, 1}));
}

QuantumClassifier constant_classifier() {
  return QuantumClassifier(KrausChannel::identity(2),
                           POVMSet::from_elements({ComplexMatrix::Identity(2, 2),
                                                   ComplexMatrix::Zero(2, 2)},
                                                  {0, 1}));
}

// One pixel, u = logistic(z).
Generator unit_generator() {
  return Generator(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1));
}

}  // namespace

TEST_CASE("substitution threshold") {
  CHECK(substitution_threshold(0.5) == doctest::Approx(0.5));
  CHECK(substitution_threshold(0.25) == doctest::Approx(1.0 / 3.0));
  CHECK(substitution_threshold(1e-6) < 1e-5);
  double prev = 0.0;
  for (double d = 0.01; d <= 0.5; d += 0.01) {
    CHECK(substitution_threshold(d) > prev);
    prev = substitution_threshold(d);
  }
  CHECK_CODE(substitution_threshold(0.0), ErrorCode::kArgument);
  CHECK_CODE(substitution_threshold(0.6), ErrorCode::kArgument);
}

TEST_CASE("substitution attack flips just above the threshold") {
  Engine rng = make_engine(51);
  const QuantumClassifier clf(KrausChannel::from_unitary(sample_haar_unitary(4, rng)),
                              POVMSet::from_elements(
                                  {[] {
                                     ComplexMatrix p = ComplexMatrix::Zero(4, 4);
                                     p(0, 0) = p(1, 1) = 1.0;
                                     return p;
                                   }(),
                                   [] {
                                     ComplexMatrix p = ComplexMatrix::Zero(4, 4);
                                     p(2, 2) = p(3, 3) = 1.0;
                                     return p;
                                   }()},
                                  {0, 1}));
  for (int i = 0; i < 10; ++i) {
    const DensityMatrix rho = DensityMatrix::from_pure(sample_haar_pure(4, rng));
    const std::vector<double> c = confidences(clf, rho);
    const Label orig = clf.predict(rho);
    const double delta = c[clf.povm().index_of(orig)] - 0.5;
    if (delta <= 1e-6) continue;
    const double thr = substitution_threshold(delta);
    const double above = std::min(1.0, std::floor(thr / 0.01 + 1.0) * 0.01);
    const double below = std::max(0.0, std::ceil(thr / 0.01 - 1.0) * 0.01);
    const SubstitutionOutcome hit = substitution_attack(clf, rho, 1 - orig, above);
    CHECK(hit.outcome.success);
    CHECK(hit.perturbation_bound_holds);
    CHECK(hit.outcome.induced_trace_norm >= above * (1.0 + 2.0 * delta) - 1e-9);
    CHECK_FALSE(substitution_attack(clf, rho, 1 - orig, below).outcome.success);
  }
  const SubstitutionOutcome none = substitution_attack(z_classifier(), ket(2, 0), 1, 0.0);
  CHECK_FALSE(none.outcome.success);
  CHECK(none.outcome.induced_trace_norm == 0.0);
  CHECK_CODE(substitution_attack(QuantumClassifier(sample_channel(2, 2, rng),
                                                   POVMSet::computational(2, {0, 1})),
                                 ket(2, 0), 1, 0.5),
             ErrorCode::kUnsupported);
}

TEST_CASE("in-distribution attack on a one-pixel threshold") {
  const Generator gen = unit_generator();
  const QuantumClassifier clf = z_classifier();
  LatentSearch search;
  search.budget = 4;
  const Eigen::VectorXd z = Eigen::VectorXd::Constant(1, -1.0);
  const AttackOutcome a = in_distribution_attack(clf, gen, 2, z, search);
  REQUIRE(a.success);
  const double expected =
      closed_trace_distance(gen(z), PixelVector({0.5}), EncodingSpec{2, 1});
  CHECK(std::abs(a.perturbation_size - expected) <= 1e-3);
  CHECK(a.adversarial_label == 1);
}

TEST_CASE("in-distribution attack is monotone in the budget") {
  Engine rng = make_engine(52);
  const Generator gen = make_generator(3, 2, 5, 2.0);
  const QuantumClassifier clf(KrausChannel::from_unitary(sample_haar_unitary(4, rng)),
                              POVMSet::computational(4, {0, 1, 2, 3}));
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(3);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t b : {2, 4, 8, 16, 32}) {
    LatentSearch s;
    s.budget = b;
    s.seed = 3;
    const AttackOutcome a = in_distribution_attack(clf, gen, 2, z, s);
    const double size = a.success ? a.perturbation_size : std::numeric_limits<double>::infinity();
    CHECK(size <= prev);
    prev = size;
  }
  LatentSearch zero;
  zero.budget = 0;
  CHECK_CODE(in_distribution_attack(clf, gen, 2, z, zero), ErrorCode::kArgument);
}

TEST_CASE("in-distribution attack on a constant classifier fails") {
  const AttackOutcome a = in_distribution_attack(constant_classifier(), unit_generator(), 2,
                                                 Eigen::VectorXd::Zero(1), LatentSearch{});
  CHECK_FALSE(a.success);
}

TEST_CASE("unconstrained attack") {
  const AttackOutcome a = unconstrained_attack(z_classifier(), ket(2, 0), {}, MixtureSearch{});
  REQUIRE(a.success);
  CHECK(std::abs(a.perturbation_size - 1.0) <= 3e-3);

  const AttackOutcome tie =
      unconstrained_attack(z_classifier(), DensityMatrix::maximally_mixed(2), {}, MixtureSearch{});
  CHECK(tie.success);
  CHECK(tie.perturbation_size <= 1e-3);

  CHECK_FALSE(unconstrained_attack(constant_classifier(), ket(2, 0), {}, MixtureSearch{}).success);

  // Caller candidates can only lower the result.
  Engine rng = make_engine(53);
  const QuantumClassifier clf(KrausChannel::from_unitary(sample_haar_unitary(2, rng)),
                              POVMSet::computational(2, {0, 1}));
  const DensityMatrix rho = DensityMatrix::from_pure(sample_haar_pure(2, rng));
  MixtureSearch no_refine;
  no_refine.refine_iterations = 0;
  const AttackOutcome base = unconstrained_attack(clf, rho, {}, no_refine);
  const DensityMatrix cand[] = {*base.adversarial_state};
  CHECK(unconstrained_attack(clf, rho, cand, no_refine).perturbation_size <=
        base.perturbation_size + 1e-12);
  CHECK_CODE(unconstrained_attack(clf, ket(3, 0), {}, no_refine), ErrorCode::kArgument);
}

TEST_CASE("Bloch grid oracle") {
  const OracleResult o = oracle_min_perturbation(z_classifier(), ket(2, 0), 32);
  CHECK(std::abs(o.min_perturbation - 1.0) <= o.grid_error);
  const OracleResult fine = oracle_min_perturbation(z_classifier(), ket(2, 0), 64);
  CHECK(fine.min_perturbation <= o.min_perturbation);
  CHECK(std::isinf(oracle_min_perturbation(constant_classifier(), ket(2, 0), 16).min_perturbation));
  CHECK_CODE(oracle_min_perturbation(z_classifier(), ket(3, 0), 16), ErrorCode::kUnsupported);

  Engine rng = make_engine(54);
  for (int i = 0; i < 5; ++i) {
    const QuantumClassifier clf(KrausChannel::from_unitary(sample_haar_unitary(2, rng)),
                                POVMSet::computational(2, {0, 1}));
    const DensityMatrix rho = DensityMatrix::from_pure(sample_haar_pure(2, rng));
    const double coarse = oracle_min_perturbation(clf, rho, 12).min_perturbation;
    CHECK(oracle_min_perturbation(clf, rho, 24).min_perturbation <= coarse);
  }
}

TEST_CASE("risk estimates") {
  const StateSampler sampler = [](Engine& rng) {
    return DensityMatrix::from_pure(sample_haar_pure(2, rng));
  };
  const QuantumClassifier zc = z_classifier();
  MixtureSearch ms;
  ms.refine_iterations = 0;
  const AttackProcedure attack_z = [&](const DensityMatrix& rho, Engine&) {
    return unconstrained_attack(zc, rho, {}, ms);
  };
  const QuantumClassifier cc = constant_classifier();
  const AttackProcedure attack_c = [&](const DensityMatrix& rho, Engine&) {
    return unconstrained_attack(cc, rho, {}, ms);
  };
  for (double eps : {0.0, 1.0, 2.0}) {
    Engine rng = make_engine(55);
    CHECK(estimate_risk(RiskKind::kPredictionChange, cc, sampler, nullptr, eps, 50, attack_c, rng)
              .estimate == 0.0);
  }
  const Labeling truth = [&](const DensityMatrix& r) { return zc.predict(r); };
  Engine rng = make_engine(56);
  const RiskEstimate er =
      estimate_risk(RiskKind::kErrorRegion, zc, sampler, &truth, 1.0, 50, attack_z, rng);
  CHECK(er.estimate == 0.0);
  CHECK(er.lower_bound);
  Engine rng2 = make_engine(57);
  const RiskEstimate pc =
      estimate_risk(RiskKind::kPredictionChange, zc, sampler, nullptr, 2.0, 200, attack_z, rng2);
  CHECK(pc.estimate == 1.0);
  CHECK(pc.sample_count == 200);
  Engine rng3 = make_engine(58);
  CHECK_CODE(estimate_risk(RiskKind::kErrorRegion, zc, sampler, nullptr, 1.0, 10, attack_z, rng3),
             ErrorCode::kArgument);
}
