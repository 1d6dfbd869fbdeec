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

#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace qarb {

std::string_view distance_kind_name(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::kTrace: return "trace";
    case DistanceKind::kHilbertSchmidt: return "hilbert_schmidt";
    case DistanceKind::kBures: return "bures";
    case DistanceKind::kHellinger: return "hellinger";
  }
  return "unknown";
}

DistanceKind parse_distance_kind(std::string_view name) {
  for (DistanceKind k : {DistanceKind::kTrace, DistanceKind::kHilbertSchmidt,
                         DistanceKind::kBures, DistanceKind::kHellinger}) {
    if (distance_kind_name(k) == name) return k;
  }
  fail(ErrorCode::kArgument, "unknown distance kind '" + std::string(name) + "'");
}

namespace {

void check_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.dim() == b.dim(), ErrorCode::kArgument,
          "state dimensions differ: " + std::to_string(a.dim()) + " vs " +
              std::to_string(b.dim()));
}

double hellinger_overlap(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const ComplexMatrix a = psd_sqrt(rho);
  const ComplexMatrix b = psd_sqrt(sigma);
  return (a * b).trace().real();
}

}  // namespace

double trace_norm(const ComplexMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
      0.5 * (hermitian + hermitian.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  check_same_dim(rho, sigma);
  const EigenDecomposition er = hermitian_eigen(rho.matrix());
  const Eigen::Index top = er.values.size() - 1;
  auto is_pure = [](const RealVector& vals) {
    const double mx = vals.maxCoeff();
    return (vals.array() > kRankRelTol * mx).count() == 1;
  };
  if (is_pure(er.values)) {
    const ComplexVector v = er.vectors.col(top);
    return std::clamp((v.adjoint() * sigma.matrix() * v)(0, 0).real(), 0.0,
                      1.0);
  }
  const EigenDecomposition es = hermitian_eigen(sigma.matrix());
  if (is_pure(es.values)) {
    const ComplexVector v = es.vectors.col(top);
    return std::clamp((v.adjoint() * rho.matrix() * v)(0, 0).real(), 0.0, 1.0);
  }
  const ComplexMatrix s = psd_sqrt(rho);
  const ComplexMatrix inner = s * sigma.matrix() * s;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ei(
      0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  // Rounding noise on the kernel would otherwise contribute sqrt(1e-17) each.
  const double floor = kRankRelTol * std::max(ei.eigenvalues().maxCoeff(), 0.0);
  double root_sum = 0.0;
  for (Eigen::Index i = 0; i < ei.eigenvalues().size(); ++i) {
    const double v = ei.eigenvalues()(i);
    if (v > floor) root_sum += std::sqrt(v);
  }
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

double distance(DistanceKind kind, const DensityMatrix& rho,
                const DensityMatrix& sigma) {
  check_same_dim(rho, sigma);
  switch (kind) {
    case DistanceKind::kTrace:
      return trace_norm(rho.matrix() - sigma.matrix());
    case DistanceKind::kHilbertSchmidt:
      return (rho.matrix() - sigma.matrix()).norm();
    case DistanceKind::kBures: {
      const double f = fidelity(rho, sigma);
      return std::sqrt(std::max(0.0, 2.0 * (1.0 - std::sqrt(f))));
    }
    case DistanceKind::kHellinger:
      return std::sqrt(std::max(0.0, 2.0 - 2.0 * hellinger_overlap(rho, sigma)));
  }
  fail(ErrorCode::kArgument, "unknown distance kind");
}

double trace_distance_halved(const DensityMatrix& rho,
                             const DensityMatrix& sigma) {
  return 0.5 * distance(DistanceKind::kTrace, rho, sigma);
}

std::size_t numeric_rank(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(),
                                                  Eigen::EigenvaluesOnly);
  const double mx = es.eigenvalues().maxCoeff();
  return static_cast<std::size_t>(
      (es.eigenvalues().array() > kRankRelTol * mx).count());
}

ConfidenceAudit confidence_change_audit(const KrausChannel& channel,
                                        const POVMSet& povm,
                                        const DensityMatrix& rho,
                                        const DensityMatrix& sigma) {
  check_same_dim(rho, sigma);
  require(rho.dim() == channel.input_dim(), ErrorCode::kArgument,
          "state dimension does not match channel input");
  require(povm.dim() == channel.output_dim(), ErrorCode::kArgument,
          "POVM dimension does not match channel output");

  ConfidenceAudit a;
  const DensityMatrix er = apply(channel, rho);
  const DensityMatrix es = apply(channel, sigma);
  const ComplexMatrix out_diff = er.matrix() - es.matrix();
  const ComplexMatrix in_diff = rho.matrix() - sigma.matrix();

  a.trace_norm = trace_norm(in_diff);
  a.channel_trace_norm = trace_norm(out_diff);
  bool dual_ok = true;
  for (const ComplexMatrix& effect : povm.elements()) {
    const double delta = std::abs((out_diff * effect).trace().real());
    a.confidence_deltas.push_back(delta);
    a.confidence_sum += delta;
    const double weight = dual_apply(channel, effect).trace().real();
    const double bound = weight * a.trace_norm;
    a.dual_bounds.push_back(bound);
    dual_ok = dual_ok && delta <= bound + kAuditSlack;
  }

  const double rr = static_cast<double>(numeric_rank(rho));
  const double rs = static_cast<double>(numeric_rank(sigma));
  a.hs_rank_factor = rr * rs / (rr + rs);
  a.hs_bound = 2.0 * std::sqrt(a.hs_rank_factor) *
               distance(DistanceKind::kHilbertSchmidt, rho, sigma);
  a.bures_bound = 2.0 * distance(DistanceKind::kBures, rho, sigma);
  a.hellinger_bound = 2.0 * distance(DistanceKind::kHellinger, rho, sigma);

  a.measurement_holds = a.confidence_sum <= a.channel_trace_norm + kAuditSlack;
  a.contraction_holds = a.channel_trace_norm <= a.trace_norm + kAuditSlack;
  a.trace_holds = a.confidence_sum <= a.trace_norm + kAuditSlack;
  a.dual_holds = dual_ok;
  a.hs_holds = a.confidence_sum <= a.hs_bound + kAuditSlack;
  a.bures_holds = a.confidence_sum <= a.bures_bound + kAuditSlack;
  a.hellinger_holds = a.confidence_sum <= a.hellinger_bound + kAuditSlack;
  return a;
}

DistanceOrderingAudit distance_ordering_audit(const DensityMatrix& rho,
                                              const DensityMatrix& sigma) {
  DistanceOrderingAudit a;
  a.trace_norm = distance(DistanceKind::kTrace, rho, sigma);
  a.fidelity = fidelity(rho, sigma);
  a.fvdg_lower = 2.0 - 2.0 * std::sqrt(a.fidelity);
  a.fvdg_upper = 2.0 * std::sqrt(std::max(0.0, 1.0 - a.fidelity));
  a.bures = distance(DistanceKind::kBures, rho, sigma);
  a.hellinger = distance(DistanceKind::kHellinger, rho, sigma);
  const double b2 = a.bures * a.bures;
  a.bures_chain = 2.0 * std::sqrt(std::max(0.0, b2 - 0.25 * b2 * b2));
  a.fvdg_holds = a.fvdg_lower <= a.trace_norm + kAuditSlack &&
                 a.trace_norm <= a.fvdg_upper + kAuditSlack;
  a.chain_holds = a.trace_norm <= a.bures_chain + kAuditSlack &&
                  a.bures_chain <= 2.0 * a.bures + kAuditSlack &&
                  a.bures <= a.hellinger + kAuditSlack;
  return a;
}

}  // namespace qarb
