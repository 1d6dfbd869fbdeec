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

#include "core/channel.hpp"

#include <algorithm>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

namespace qarb {

KrausChannel KrausChannel::from_kraus(std::vector<ComplexMatrix> ops) {
  require(!ops.empty(), ErrorCode::kArgument, "channel needs Kraus operators");
  const Eigen::Index out = ops.front().rows();
  const Eigen::Index in = ops.front().cols();
  require(in > 0 && out > 0, ErrorCode::kArgument, "empty Kraus operator");
  ComplexMatrix sum = ComplexMatrix::Zero(in, in);
  for (const ComplexMatrix& m : ops) {
    require(m.rows() == out && m.cols() == in, ErrorCode::kArgument,
            "Kraus operators have inconsistent shapes");
    require(m.allFinite(), ErrorCode::kNonFinite, "non-finite Kraus operator");
    sum += m.adjoint() * m;
  }
  const double defect =
      (sum - ComplexMatrix::Identity(in, in)).cwiseAbs().maxCoeff();
  require(defect <= kChannelTol, ErrorCode::kArgument,
          "Kraus operators are not trace preserving (defect " +
              std::to_string(defect) + ")");
  return KrausChannel(std::move(ops), static_cast<std::size_t>(in),
                      static_cast<std::size_t>(out));
}

KrausChannel KrausChannel::from_unitary(ComplexMatrix u) {
  require(u.rows() == u.cols(), ErrorCode::kArgument, "unitary must be square");
  std::vector<ComplexMatrix> ops;
  ops.push_back(std::move(u));
  return from_kraus(std::move(ops));
}

KrausChannel KrausChannel::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return from_unitary(ComplexMatrix::Identity(n, n));
}

bool KrausChannel::is_unitary() const {
  return ops_.size() == 1 && in_dim_ == out_dim_;
}

const ComplexMatrix& KrausChannel::unitary() const {
  require(is_unitary(), ErrorCode::kUnsupported,
          "channel is not a single unitary");
  return ops_.front();
}

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho) {
  require(rho.dim() == channel.input_dim(), ErrorCode::kArgument,
          "state dimension does not match channel input");
  const auto n = static_cast<Eigen::Index>(channel.output_dim());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const ComplexMatrix& m : channel.kraus_ops()) {
    out.noalias() += m * rho.matrix() * m.adjoint();
  }
  out = 0.5 * (out + out.adjoint()).eval();
  SiteDims dims = channel.input_dim() == channel.output_dim()
                      ? rho.factor_dims()
                      : SiteDims{};
  return DensityMatrix::trusted(std::move(out), std::move(dims));
}

ComplexMatrix dual_apply(const KrausChannel& channel,
                         const ComplexMatrix& effect) {
  const auto n = static_cast<Eigen::Index>(channel.output_dim());
  require(effect.rows() == n && effect.cols() == n, ErrorCode::kArgument,
          "effect dimension does not match channel output");
  const auto k = static_cast<Eigen::Index>(channel.input_dim());
  ComplexMatrix out = ComplexMatrix::Zero(k, k);
  for (const ComplexMatrix& m : channel.kraus_ops()) {
    out.noalias() += m.adjoint() * effect * m;
  }
  return 0.5 * (out + out.adjoint());
}

POVMSet POVMSet::from_elements(std::vector<ComplexMatrix> elements,
                               std::vector<Label> labels) {
  require(!elements.empty(), ErrorCode::kArgument, "POVM has no elements");
  require(elements.size() == labels.size(), ErrorCode::kArgument,
          "POVM needs one label per element");
  require(std::set<Label>(labels.begin(), labels.end()).size() ==
              labels.size(),
          ErrorCode::kArgument, "POVM labels must be distinct");
  const Eigen::Index n = elements.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (ComplexMatrix& e : elements) {
    require(e.rows() == n && e.cols() == n, ErrorCode::kArgument,
            "POVM elements have inconsistent shapes");
    require(e.allFinite(), ErrorCode::kNonFinite, "non-finite POVM element");
    require(hermiticity_defect(e) <= kChannelTol, ErrorCode::kArgument,
            "POVM element is not Hermitian");
    e = 0.5 * (e + e.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(e, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= -kChannelTol, ErrorCode::kArgument,
            "POVM element is not positive semidefinite");
    sum += e;
  }
  const double defect = (sum - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  require(defect <= kChannelTol, ErrorCode::kArgument,
          "POVM elements do not sum to identity (defect " +
              std::to_string(defect) + ")");
  return POVMSet(std::move(elements), std::move(labels));
}

POVMSet POVMSet::computational(std::size_t dim, std::vector<Label> labels) {
  require(labels.size() == dim, ErrorCode::kArgument,
          "computational POVM needs one label per basis state");
  std::vector<ComplexMatrix> elements;
  const auto n = static_cast<Eigen::Index>(dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    p(i, i) = 1.0;
    elements.push_back(std::move(p));
  }
  return from_elements(std::move(elements), std::move(labels));
}

std::size_t POVMSet::index_of(Label label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  require(it != labels_.end(), ErrorCode::kArgument,
          "label " + std::to_string(label) + " not in POVM");
  return static_cast<std::size_t>(it - labels_.begin());
}

}  // namespace qarb
