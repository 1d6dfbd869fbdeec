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

#include "core/classifier.hpp"
#include "core/concentration.hpp"
#include "core/random.hpp"
#include "test_util.hpp"

using namespace qarb;

namespace {

DensityMatrix ket(std::size_t dim, std::size_t i) {
  return DensityMatrix::from_pure(PureState::basis(dim, i));
}

LayeredCircuitSpec random_spec(std::size_t n, std::size_t depth, Engine& rng) {
  LayeredCircuitSpec spec = brickwork_spec(n, 2, depth, 0, {0, 1});
  std::normal_distribution<double> g(0.0, 1.0);
  for (double& p : spec.parameters) p = g(rng);
  return spec;
}

}  // namespace

TEST_CASE("projective confidences") {
  const QuantumClassifier clf(KrausChannel::identity(3), POVMSet::computational(3, {0, 1, 2}));
  const std::vector<double> c = confidences(clf, ket(3, 2));
  CHECK(c[2] == doctest::Approx(1.0));
  CHECK(clf.predict(ket(3, 2)) == 2);
  for (double v : confidences(clf, DensityMatrix::maximally_mixed(3))) {
    CHECK(v == doctest::Approx(1.0 / 3.0));
  }
  CHECK_CODE(confidences(clf, ket(2, 0)), ErrorCode::kArgument);
}

TEST_CASE("confidences sum to one on random classifiers") {
  Engine rng = make_engine(41);
  for (int i = 0; i < 20; ++i) {
    const QuantumClassifier clf(sample_channel(4, 2, rng), sample_povm(4, 3, rng));
    const std::vector<double> c = confidences(clf, sample_mixed_state(4, 2, rng));
    double s = 0.0;
    for (double v : c) {
      CHECK(v >= -1e-9);
      CHECK(v <= 1.0 + 1e-9);
      s += v;
    }
    CHECK(std::abs(s - 1.0) <= 1e-8);
  }
}

TEST_CASE("argmax and ties") {
  CHECK(argmax_label({0.9, 0.1}, {0, 1}) == 0);
  CHECK(argmax_label({0.5, 0.5}, {0, 1}) == 0);
  CHECK(argmax_label({0.5, 0.5}, {7, 3}) == 3);
}

TEST_CASE("prediction invariant under POVM reordering") {
  Engine rng = make_engine(42);
  const KrausChannel ch = sample_channel(3, 2, rng);
  const POVMSet p = sample_povm(3, 3, rng);
  std::vector<ComplexMatrix> rev(p.elements().rbegin(), p.elements().rend());
  std::vector<Label> labels(p.labels().rbegin(), p.labels().rend());
  const QuantumClassifier a(ch, p);
  const QuantumClassifier b(ch, POVMSet::from_elements(rev, labels));
  for (int i = 0; i < 30; ++i) {
    const DensityMatrix rho = sample_mixed_state(3, 2, rng);
    CHECK(a.predict(rho) == b.predict(rho));
  }
}

TEST_CASE("dual map") {
  Engine rng = make_engine(43);
  ComplexMatrix pi = ComplexMatrix::Zero(2, 2);
  pi(1, 1) = 1.0;
  CHECK((dual_apply(KrausChannel::identity(2), pi) - pi).cwiseAbs().maxCoeff() < 1e-15);
  const ComplexMatrix u = sample_haar_unitary(2, rng);
  CHECK((dual_apply(KrausChannel::from_unitary(u), pi) - u.adjoint() * pi * u).cwiseAbs().maxCoeff() <
        1e-12);
  const KrausChannel ch = sample_channel(3, 3, rng);
  const POVMSet povm = sample_povm(3, 2, rng);
  const ComplexMatrix dual = dual_apply(ch, povm.elements()[0]);
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = sample_mixed_state(3, 3, rng);
    const Complex lhs = (rho.matrix() * dual).trace();
    const Complex rhs = (apply(ch, rho).matrix() * povm.elements()[0]).trace();
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
  CHECK_CODE(dual_apply(ch, ComplexMatrix::Identity(2, 2)), ErrorCode::kArgument);
}

TEST_CASE("layered circuits") {
  const LayeredCircuitSpec zero = brickwork_spec(3, 2, 2, 0, {0, 1});
  CHECK((circuit_unitary(zero) - ComplexMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-14);

  Engine rng = make_engine(44);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> theta(15);
  for (double& t : theta) t = g(rng);
  const ComplexMatrix gate = gate_unitary(4, theta);
  CHECK((gate.adjoint() * gate - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);

  const QuantumClassifier clf = build_layered(random_spec(2, 1, rng));
  const DensityMatrix rho = sample_mixed_state(4, 2, rng);
  CHECK(clf.predict(rho) == clf.predict(rho));
  CHECK(clf.channel().is_unitary());
}

TEST_CASE("invalid placements are structure errors") {
  LayeredCircuitSpec spec = brickwork_spec(2, 2, 1, 0, {0, 1});
  spec.layers.push_back({{1, 2}});
  CHECK_CODE(spec.validate(), ErrorCode::kStructure);
  LayeredCircuitSpec overlap = brickwork_spec(3, 2, 0, 0, {0, 1});
  overlap.layers = {{{0, 2}, {1, 2}}};
  overlap.parameters.assign(overlap.parameter_count(), 0.0);
  CHECK_CODE(build_layered(overlap), ErrorCode::kStructure);
}

TEST_CASE("spec json round trip") {
  Engine rng = make_engine(45);
  const LayeredCircuitSpec spec = random_spec(3, 2, rng);
  CHECK(spec_from_json(spec_to_json(spec)) == spec);
  CHECK_CODE(spec_from_json(nlohmann::json::parse(R"({"n_sites": "x"})")), ErrorCode::kArgument);
}

TEST_CASE("reverse prepare") {
  ComplexMatrix one = ComplexMatrix::Zero(2, 2);
  one(1, 1) = 1.0;
  const QuantumClassifier id(KrausChannel::identity(2), POVMSet::computational(2, {0, 1}));
  CHECK((reverse_prepare(id, 1).matrix() - one).cwiseAbs().maxCoeff() < 1e-14);

  Engine rng = make_engine(46);
  for (int i = 0; i < 10; ++i) {
    const QuantumClassifier clf = build_layered(random_spec(2, 2, rng));
    for (Label t : {0, 1}) {
      const DensityMatrix sigma = reverse_prepare(clf, t);
      const std::vector<double> c = confidences(clf, sigma);
      CHECK(clf.predict(sigma) == t);
      CHECK(c[clf.povm().index_of(t)] >= 1.0 - 1e-9);
      CHECK(c[clf.povm().index_of(1 - t)] <= 1e-9);
    }
  }
  CHECK_CODE(reverse_prepare(QuantumClassifier(sample_channel(2, 2, rng),
                                               POVMSet::computational(2, {0, 1})),
                             0),
             ErrorCode::kUnsupported);
  ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  const QuantumClassifier rank0(KrausChannel::identity(2),
                                POVMSet::from_elements({zero, ComplexMatrix::Identity(2, 2)}, {0, 1}));
  CHECK_CODE(reverse_prepare(rank0, 0), ErrorCode::kArgument);
}

TEST_CASE("training") {
  std::vector<LabeledSample> data;
  for (double u : {0.0, 0.1, 0.2, 0.25, 0.29}) data.push_back({PixelVector({u}), 0});
  for (double u : {0.71, 0.75, 0.8, 0.9, 1.0}) data.push_back({PixelVector({u}), 1});
  LayeredCircuitSpec spec = brickwork_spec(1, 2, 1, 0, {1, 0});
  const LayeredCircuitSpec trained = train_toy(spec, data, 500, 7);
  CHECK(score_classifier(trained, data).accuracy == 1.0);
  CHECK(train_toy(spec, data, 0, 7) == spec);
  CHECK(train_toy(spec, data, 200, 9) == train_toy(spec, data, 200, 9));
  CHECK(score_classifier(trained, data).accuracy >= score_classifier(spec, data).accuracy);
  CHECK_CODE(train_toy(spec, {}, 10, 1), ErrorCode::kArgument);
}
