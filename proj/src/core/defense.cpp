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

#include "core/defense.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qarb {

std::vector<DensityMatrix> site_marginals(const DensityMatrix& sigma) {
  require(sigma.has_structure(), ErrorCode::kStructure,
          "projection needs per-site factor dimensions");
  std::vector<DensityMatrix> out;
  const std::size_t n = sigma.factor_dims().size();
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t keep[] = {i};
    out.push_back(partial_trace(sigma, keep));
  }
  return out;
}

DensityMatrix project_marginals(const DensityMatrix& sigma) {
  std::vector<DensityMatrix> parts = site_marginals(sigma);
  DensityMatrix prod = parts.front().with_factor_dims({parts.front().dim()});
  for (std::size_t i = 1; i < parts.size(); ++i) prod = tensor_product(prod, parts[i]);
  return prod;
}

namespace {

double site_fidelity(const DensityMatrix& marginal, double u) {
  const ComplexVector a = site_amplitudes(u, marginal.dim());
  return a.dot(marginal.matrix() * a).real();
}

double fit_qubit(const DensityMatrix& marginal) {
  const auto& m = marginal.matrix();
  const double x = 2.0 * m(0, 1).real();
  const double z = (m(0, 0) - m(1, 1)).real();
  if (std::hypot(x, z) <= 1e-12) return 0.0;
  if (x < 0.0) return z >= 0.0 ? 0.0 : 1.0;
  return std::clamp(std::atan2(x, z) / std::numbers::pi, 0.0, 1.0);
}

double fit_qudit(const DensityMatrix& marginal) {
  constexpr int kGrid = 400;
  double best_u = 0.0;
  double best_f = site_fidelity(marginal, 0.0);
  for (int k = 1; k <= kGrid; ++k) {
    const double u = static_cast<double>(k) / kGrid;
    const double f = site_fidelity(marginal, u);
    if (f > best_f + 1e-14) {
      best_f = f;
      best_u = u;
    }
  }
  // Golden-section refinement inside the neighbouring cells.
  double lo = std::max(0.0, best_u - 1.0 / kGrid);
  double hi = std::min(1.0, best_u + 1.0 / kGrid);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - g * (hi - lo);
  double b = lo + g * (hi - lo);
  double fa = site_fidelity(marginal, a);
  double fb = site_fidelity(marginal, b);
  while (hi - lo > 1e-12) {
    if (fa >= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = site_fidelity(marginal, a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = site_fidelity(marginal, b);
    }
  }
  const double u = 0.5 * (lo + hi);
  return site_fidelity(marginal, u) > best_f ? u : best_u;
}

}  // namespace

double fit_site(const DensityMatrix& marginal) {
  return marginal.dim() == 2 ? fit_qubit(marginal) : fit_qudit(marginal);
}

PixelVector fit_pixels_any(const DensityMatrix& prod) {
  std::vector<double> u;
  for (const DensityMatrix& m : site_marginals(prod)) u.push_back(fit_site(m));
  return PixelVector(std::move(u));
}

PixelVector fit_pixels(const DensityMatrix& prod) {
  require(prod.has_structure(), ErrorCode::kStructure,
          "fit needs per-site factor dimensions");
  for (std::size_t f : prod.factor_dims()) {
    require(f == 2, ErrorCode::kUnsupported,
            "closed-form fit handles qubit factors only");
  }
  return fit_pixels_any(prod);
}

DefendedClassifier::DefendedClassifier(QuantumClassifier inner, EncodingSpec spec)
    : inner_(std::move(inner)), spec_(spec) {
  require(inner_.input_dim() == spec_.dim(), ErrorCode::kArgument,
          "classifier input dimension does not match d^n");
}

DensityMatrix DefendedClassifier::purify(const DensityMatrix& sigma) const {
  require(sigma.dim() == spec_.dim(), ErrorCode::kArgument,
          "state dimension does not match d^n");
  const DensityMatrix structured =
      sigma.has_structure() ? sigma : sigma.with_factor_dims(SiteDims(spec_.n, spec_.d));
  // Marginals of the projected product equal those of the input, so the fit
  // reads them directly.
  return DensityMatrix::from_pure(encode(fit_pixels_any(structured), spec_));
}

Label DefendedClassifier::predict(const DensityMatrix& sigma) const {
  return inner_.predict(purify(sigma));
}

Label defended_predict(const DefendedClassifier& dclf, const DensityMatrix& sigma) {
  return dclf.predict(sigma);
}

bool DefendedClassifier::on_boundary(const DensityMatrix& sigma) const {
  return inner_.on_boundary(purify(sigma));
}

std::vector<DensityMatrix> DefendedClassifier::label_seeds(Label label) const {
  std::vector<DensityMatrix> seeds;
  auto consider = [&](const DensityMatrix& s) {
    DensityMatrix p = purify(s);
    if (inner_.predict(p) == label) seeds.push_back(std::move(p));
  };
  for (const DensityMatrix& s : inner_.label_seeds(label)) consider(s);
  if (spec_.n <= 10) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << spec_.n); ++mask) {
      std::vector<double> u(spec_.n);
      for (std::size_t i = 0; i < spec_.n; ++i) u[i] = (mask >> i) & 1U ? 1.0 : 0.0;
      consider(DensityMatrix::from_pure(encode(PixelVector(std::move(u)), spec_)));
    }
  }
  return seeds;
}

double thm3_lower(double eps_in, std::size_t n) {
  require(n >= 1, ErrorCode::kArgument, "need at least one qubit");
  require(std::isfinite(eps_in) && eps_in >= 0.0 && eps_in <= 2.0,
          ErrorCode::kArgument, "eps_in must lie in [0, 2]");
  const double ne = static_cast<double>(n % 2 == 0 ? n : n + 1);
  // 2 - 2 (1 - x)^(1/ne) = -2 expm1(log1p(-x) / ne).
  return -2.0 * std::expm1(std::log1p(-eps_in * eps_in / 16.0) / ne);
}

SandwichRecord sandwich_audit(const DefendedClassifier& dclf, const Generator& gen,
                              const Eigen::VectorXd& z, const LatentSearch& latent,
                              const MixtureSearch& mixture) {
  require(dclf.spec().d == 2, ErrorCode::kUnsupported,
          "the sandwich audit is stated for qubit encodings only");
  require(gen.pixels() == dclf.spec().n, ErrorCode::kArgument,
          "generator pixel count does not match the encoding");
  SandwichRecord rec;
  const AttackOutcome in = in_distribution_attack(dclf, gen, 2, z, latent);
  if (!in.success) return rec;
  rec.conclusive = true;
  rec.eps_in_hat = in.perturbation_size;
  const DensityMatrix rho = gen.state(z, 2);
  std::vector<DensityMatrix> candidates;
  if (in.adversarial_state) candidates.push_back(*in.adversarial_state);
  const AttackOutcome unc = unconstrained_attack(dclf, rho, candidates, mixture);
  if (!unc.success) {
    rec.conclusive = false;
    return rec;
  }
  rec.eps_unc_hat = unc.perturbation_size;
  rec.thm3_lower = thm3_lower(std::min(rec.eps_in_hat, 2.0), dclf.spec().n);
  rec.lower_holds = rec.thm3_lower <= rec.eps_unc_hat + 1e-9;
  rec.nesting_holds = rec.eps_unc_hat <= rec.eps_in_hat + 1e-9;
  return rec;
}

}  // namespace qarb
