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

#include "core/concentration.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "core/bounds.hpp"

namespace qarb {

namespace {

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Engine& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

double logistic(double x) {
  const double v = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                            : std::exp(x) / (1.0 + std::exp(x));
  // Keep pixels strictly inside (0, 1) even where rounding saturates.
  return std::clamp(v, std::numeric_limits<double>::min(),
                    1.0 - std::numeric_limits<double>::epsilon() / 2.0);
}

}  // namespace

ComplexMatrix sample_haar_unitary(std::size_t N, Engine& rng) {
  require(N >= 1, ErrorCode::kArgument, "dimension must be positive");
  check_capacity(N);
  const ComplexMatrix g = ginibre(N, N, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(j) *= diag / mag;
  }
  return q;
}

PureState sample_haar_pure(std::size_t N, Engine& rng) {
  require(N >= 1, ErrorCode::kArgument, "dimension must be positive");
  check_capacity(N);
  ComplexVector v = ginibre(N, 1, rng).col(0);
  v /= v.norm();
  return PureState::from_amplitudes(std::move(v));
}

Eigen::MatrixXd sample_gaussian(std::size_t m, std::size_t count, Engine& rng) {
  require(m >= 1, ErrorCode::kArgument, "latent dimension must be positive");
  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = normal(rng);
  }
  return z;
}

DensityMatrix sample_mixed_state(std::size_t N, std::size_t rank, Engine& rng) {
  require(N >= 1 && rank >= 1, ErrorCode::kArgument,
          "dimension and rank must be positive");
  check_capacity(N);
  const ComplexMatrix g = ginibre(N, rank, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix::from_matrix(std::move(m));
}

namespace {

std::vector<ComplexMatrix> isometry_blocks(std::size_t dim, std::size_t k,
                                           Engine& rng) {
  require(dim >= 1 && k >= 1, ErrorCode::kArgument,
          "dimension and Kraus count must be positive");
  const ComplexMatrix u = sample_haar_unitary(dim * k, rng);
  const auto d = static_cast<Eigen::Index>(dim);
  std::vector<ComplexMatrix> blocks;
  for (std::size_t i = 0; i < k; ++i) {
    blocks.push_back(u.block(static_cast<Eigen::Index>(i) * d, 0, d, d));
  }
  return blocks;
}

}  // namespace

KrausChannel sample_channel(std::size_t dim, std::size_t k, Engine& rng) {
  return KrausChannel::from_kraus(isometry_blocks(dim, k, rng));
}

POVMSet sample_povm(std::size_t dim, std::size_t K, Engine& rng) {
  std::vector<ComplexMatrix> elements;
  std::vector<Label> labels;
  for (ComplexMatrix& m : isometry_blocks(dim, K, rng)) {
    ComplexMatrix e = m.adjoint() * m;
    elements.push_back(0.5 * (e + e.adjoint()));
    labels.push_back(static_cast<Label>(labels.size()));
  }
  return POVMSet::from_elements(std::move(elements), std::move(labels));
}

SampleSpace<ComplexMatrix> haar_unitary_space(std::size_t N) {
  return {[N](Engine& rng) { return sample_haar_unitary(N, rng); },
          [](const ComplexMatrix& a, const ComplexMatrix& b) {
            return (a - b).norm();
          }};
}

std::string_view alpha_distance_name(AlphaDistance d) {
  switch (d) {
    case AlphaDistance::kNearestSample: return "nearest_sample";
    case AlphaDistance::kLipschitz: return "lipschitz";
    case AlphaDistance::kExact: return "exact";
  }
  return "unknown";
}

SetFamily<ComplexMatrix> trace_overlap_family(const ComplexMatrix& w,
                                              AlphaDistance method) {
  SetFamily<ComplexMatrix> f;
  f.statistic = [w](const ComplexMatrix& u) {
    return (w.adjoint() * u).trace().real();
  };
  // U -> -U preserves Haar measure, so the statistic is symmetric about 0.
  f.threshold = 0.0;
  if (method == AlphaDistance::kLipschitz) {
    // |Re tr(W†(U - V))| <= ||W||_HS ||U - V||_HS.
    f.lipschitz = w.norm();
  } else if (method == AlphaDistance::kExact) {
    require(w.rows() == w.cols() &&
                (w - ComplexMatrix::Identity(w.rows(), w.cols())).cwiseAbs().maxCoeff() == 0.0,
            ErrorCode::kUnsupported, "exact distance is implemented for W = I only");
    f.distance = unitary_overlap_set_distance;
  }
  return f;
}

double unitary_overlap_set_distance(const ComplexMatrix& u) {
  require(u.rows() == u.cols() && u.rows() > 0, ErrorCode::kArgument,
          "expected a square unitary");
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(u), false);
  std::vector<double> theta;
  for (Eigen::Index k = 0; k < u.rows(); ++k) theta.push_back(std::arg(es.eigenvalues()(k)));
  double c0 = 0.0;
  for (double t : theta) c0 += std::cos(t);
  if (c0 <= 0.0) return 0.0;
  // For a multiplier m >= 0 each phase minimises 2 - 2 cos(d) + m cos(theta + d)
  // = 2 + Re[e^{i d} (m e^{i theta} - 2)], attained at e^{i d} = -conj(c) / |c|.
  // A phase at exactly 0 makes this minimiser jump from 0 to pi, so such phases
  // start from +-1e-7; distances are still measured from the true phases.
  std::vector<double> start(theta);
  for (double& t : start) {
    if (std::abs(t) < 1e-7) t = std::copysign(1e-7, t);
  }
  const auto phases = [&](double m) {
    std::vector<double> phi(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
      const std::complex<double> c = m * std::polar(1.0, start[k]) - 2.0;
      const double d = std::abs(c) > 0.0 ? std::arg(-std::conj(c)) : std::numbers::pi;
      phi[k] = start[k] + d;
    }
    return phi;
  };
  const auto cos_sum = [](const std::vector<double>& phi) {
    double cs = 0.0;
    for (double f : phi) cs += std::cos(f);
    return cs;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (cos_sum(phases(hi)) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cos_sum(phases(mid)) > 0.0 ? lo : hi) = mid;
  }
  // Near-degenerate phases move steeply in m; close the remaining gap by
  // interpolating the phases between the two brackets.
  const std::vector<double> pa = phases(lo);
  const std::vector<double> pb = phases(hi);
  const auto blend = [&](double w) {
    std::vector<double> phi(pa.size());
    for (std::size_t k = 0; k < pa.size(); ++k) phi[k] = (1.0 - w) * pa[k] + w * pb[k];
    return phi;
  };
  double wl = 0.0;
  double wh = 1.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (wl + wh);
    (cos_sum(blend(mid)) > 0.0 ? wl : wh) = mid;
  }
  double d2 = 0.0;
  const std::vector<double> phi = blend(wh);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    d2 += std::norm(std::polar(1.0, phi[k]) - std::polar(1.0, theta[k]));
  }
  return std::sqrt(d2);
}

SampleSpace<Eigen::VectorXd> gaussian_space(std::size_t m) {
  return {[m](Engine& rng) -> Eigen::VectorXd {
            return sample_gaussian(m, 1, rng).row(0).transpose();
          },
          [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
            return (a - b).norm();
          }};
}

SetFamily<Eigen::VectorXd> half_space_family(double a) {
  SetFamily<Eigen::VectorXd> f;
  f.statistic = [](const Eigen::VectorXd& z) { return z(0); };
  f.threshold = a;
  f.lipschitz = 1.0;
  return f;
}

bool IsoperimetryAudit::all_hold() const {
  if (!two_interval_holds) return false;
  return std::all_of(rows.begin(), rows.end(),
                     [](const IsoperimetryRow& r) { return r.within; });
}

IsoperimetryAudit isoperimetry_audit(std::size_t m, double a,
                                     std::span<const double> eps_grid,
                                     std::size_t samples, Engine& rng) {
  require(m >= 1 && samples >= 1, ErrorCode::kArgument,
          "need m >= 1 and at least one sample");
  require(std::isfinite(a), ErrorCode::kArgument, "offset must be finite");
  IsoperimetryAudit audit;
  audit.m = m;
  audit.a = a;
  const Eigen::MatrixXd z = sample_gaussian(m, samples, rng);
  const double n = static_cast<double>(samples);
  for (double eps : eps_grid) {
    require(std::isfinite(eps) && eps >= 0.0, ErrorCode::kArgument,
            "epsilon grid must be finite and non-negative");
    IsoperimetryRow row;
    row.epsilon = eps;
    row.expected = gaussian_cdf(a + eps);
    row.measured = static_cast<double>((z.col(0).array() <= a + eps).count()) / n;
    row.std_error = std::sqrt(row.expected * (1.0 - row.expected) / n);
    row.within = std::abs(row.measured - row.expected) <= 3.0 * row.std_error + 1e-15;
    audit.rows.push_back(row);
  }
  for (int k = 1; k <= 50; ++k) {
    const double delta = 0.05 * k;
    audit.delta_grid.push_back(delta);
    if (1.0 - gaussian_cdf(3.0 * delta) > 1.0 - gaussian_cdf(delta)) {
      audit.two_interval_holds = false;
    }
  }
  return audit;
}

Generator::Generator(Eigen::MatrixXd a, Eigen::VectorXd b)
    : a_(std::move(a)), b_(std::move(b)) {
  require(a_.rows() >= 1 && a_.cols() >= 1, ErrorCode::kArgument,
          "generator needs positive dimensions");
  require(b_.size() == a_.rows(), ErrorCode::kArgument,
          "offset length must equal the pixel count");
  require(a_.allFinite() && b_.allFinite(), ErrorCode::kNonFinite,
          "generator weights must be finite");
  lipschitz_ = 0.25 * a_.rowwise().norm().sum();
}

PixelVector Generator::operator()(const Eigen::VectorXd& z) const {
  require(z.size() == a_.cols(), ErrorCode::kArgument,
          "latent point has the wrong dimension");
  const Eigen::VectorXd pre = a_ * z + b_;
  std::vector<double> px(static_cast<std::size_t>(pre.size()));
  for (Eigen::Index i = 0; i < pre.size(); ++i) {
    px[static_cast<std::size_t>(i)] = logistic(pre(i));
  }
  return PixelVector(std::move(px));
}

DensityMatrix Generator::state(const Eigen::VectorXd& z, std::size_t d) const {
  return DensityMatrix::from_pure(encode((*this)(z), EncodingSpec{d, pixels()}));
}

double Generator::certified_omega1(double tau) const {
  return std::min(static_cast<double>(pixels()), lipschitz_ * tau);
}

Generator make_generator(std::size_t m, std::size_t n, std::uint64_t seed,
                         double scale) {
  require(m >= 1 && n >= 1, ErrorCode::kArgument,
          "generator needs positive dimensions");
  require(std::isfinite(scale) && scale >= 0.0, ErrorCode::kArgument,
          "scale must be finite and non-negative");
  Engine rng = make_engine(seed, 0);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = normal(rng);
  }
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = 0.5 * normal(rng);
  const double raw = 0.25 * a.rowwise().norm().sum();
  a *= raw > 0.0 ? scale / raw : 0.0;
  return Generator(std::move(a), std::move(b));
}

std::vector<ModulusRow> estimate_modulus(const Generator& gen,
                                         std::span<const double> tau_grid,
                                         std::size_t pairs_per_tau, Engine& rng) {
  require(pairs_per_tau >= 1, ErrorCode::kArgument, "need at least one pair");
  std::vector<double> taus(tau_grid.begin(), tau_grid.end());
  for (double t : taus) {
    require(std::isfinite(t) && t >= 0.0, ErrorCode::kArgument,
            "tau grid must be finite and non-negative");
  }
  std::sort(taus.begin(), taus.end());
  const std::size_t m = gen.latent_dim();
  std::vector<ModulusRow> rows;
  double envelope = 0.0;
  for (double tau : taus) {
    double best = 0.0;
    for (std::size_t p = 0; p < pairs_per_tau; ++p) {
      const Eigen::VectorXd z = sample_gaussian(m, 1, rng).row(0).transpose();
      Eigen::VectorXd dir = sample_gaussian(m, 1, rng).row(0).transpose();
      const double norm = dir.norm();
      if (norm == 0.0) continue;
      dir /= norm;
      const PixelVector a = gen(z);
      const PixelVector b = gen(z + tau * dir);
      double l1 = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) l1 += std::abs(a[i] - b[i]);
      best = std::max(best, l1);
    }
    envelope = std::max(envelope, best);
    rows.push_back({tau, envelope, gen.certified_omega1(tau)});
  }
  return rows;
}

DeviationTable deviation_probability(std::size_t N, const ComplexMatrix& observable,
                                     std::span<const double> t_grid,
                                     std::size_t samples, Engine& rng) {
  require(samples >= 1, ErrorCode::kArgument, "need at least one sample");
  require(observable.rows() == static_cast<Eigen::Index>(N) &&
              observable.cols() == static_cast<Eigen::Index>(N),
          ErrorCode::kArgument, "observable must be N x N");
  require(hermiticity_defect(observable) <= kEigenInputHermitianTol,
          ErrorCode::kNotHermitian, "observable must be Hermitian");
  DeviationTable table;
  table.N = N;
  table.mean = observable.trace().real() / static_cast<double>(N);
  std::vector<double> dev(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const PureState psi = sample_haar_pure(N, rng);
    const Complex v = psi.amplitudes().dot(observable * psi.amplitudes());
    dev[i] = std::abs(v.real() - table.mean);
  }
  std::vector<double> sorted = dev;
  std::sort(sorted.begin(), sorted.end());
  table.median_abs_deviation =
      samples % 2 ? sorted[samples / 2]
                  : 0.5 * (sorted[samples / 2 - 1] + sorted[samples / 2]);
  const double n = static_cast<double>(samples);
  for (double t : t_grid) {
    const auto above = static_cast<double>(
        std::count_if(dev.begin(), dev.end(), [t](double x) { return x > t; }));
    DeviationRow row;
    row.t = t;
    row.probability = above / n;
    row.std_error = std::sqrt(row.probability * (1.0 - row.probability) / n);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace qarb
