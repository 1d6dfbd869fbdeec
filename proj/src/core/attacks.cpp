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

#include "core/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "core/metrics.hpp"

namespace qarb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void fill_state(AttackOutcome& out, const DensityMatrix& rho,
                DensityMatrix sigma, Label label) {
  out.induced_trace_norm = distance(DistanceKind::kTrace, rho, sigma);
  out.adversarial_label = label;
  out.numeric_rank = numeric_rank(sigma);
  out.adversarial_state = std::move(sigma);
}

AttackOutcome boundary_outcome(AttackKind kind, const DensityMatrix& rho,
                               Label label) {
  AttackOutcome out;
  out.kind = kind;
  out.success = true;
  out.on_boundary = true;
  out.original_label = label;
  fill_state(out, rho, rho, label);
  return out;
}

DensityMatrix pure_density(const ComplexVector& v, const SiteDims& dims) {
  return DensityMatrix::trusted(v * v.adjoint(), dims);
}

ComplexVector top_vector(const DensityMatrix& s) {
  const EigenDecomposition eig = hermitian_eigen(s.matrix());
  return eig.vectors.col(eig.values.size() - 1);
}

ComplexVector random_direction(Eigen::Index n, Engine& rng) {
  std::normal_distribution<double> normal;
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

/// First flip along (1 - t) rho + t target, bisected to t_tol.
struct SegmentHit {
  double size = kInf;
  double t = 0.0;
  Label label = 0;
};

class SegmentSearch {
 public:
  SegmentSearch(const Predictor& clf, const DensityMatrix& rho, Label label0,
                const MixtureSearch& params)
      : clf_(clf), rho_(rho), label0_(label0), params_(params) {}

  SegmentHit run(const DensityMatrix& target) {
    SegmentHit hit;
    double lo = 0.0;
    double hi = -1.0;
    for (std::size_t s = 1; s <= params_.scan_steps; ++s) {
      const double t = static_cast<double>(s) / static_cast<double>(params_.scan_steps);
      if (flips(target, t)) {
        hi = t;
        break;
      }
      lo = t;
    }
    if (hi < 0.0) return hit;
    while (hi - lo > params_.t_tol) {
      const double mid = 0.5 * (lo + hi);
      if (flips(target, mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    hit.t = hi;
    hit.label = clf_.predict(mix(rho_, target, hi));
    ++evaluations;
    hit.size = hi * trace_norm(target.matrix() - rho_.matrix());
    return hit;
  }

  std::size_t evaluations = 0;

 private:
  bool flips(const DensityMatrix& target, double t) {
    ++evaluations;
    return clf_.predict(mix(rho_, target, t)) != label0_;
  }

  const Predictor& clf_;
  const DensityMatrix& rho_;
  Label label0_;
  MixtureSearch params_;
};

}  // namespace

std::string_view attack_kind_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::kSubstitution: return "substitution";
    case AttackKind::kInDistribution: return "in_distribution";
    case AttackKind::kUnconstrained: return "unconstrained";
  }
  return "unknown";
}

double substitution_threshold(double delta) {
  require(std::isfinite(delta) && delta > 0.0 && delta <= 0.5,
          ErrorCode::kArgument, "margin delta must lie in (0, 1/2]");
  return 1.0 - 1.0 / (1.0 + 2.0 * delta);
}

SubstitutionOutcome substitution_attack(const QuantumClassifier& clf,
                                        const DensityMatrix& rho, Label target,
                                        double eps) {
  require(clf.channel().is_unitary(), ErrorCode::kUnsupported,
          "substitution needs a unitary classifier to run in reverse");
  require(std::isfinite(eps) && eps >= 0.0 && eps <= 1.0, ErrorCode::kArgument,
          "mixing fraction must lie in [0, 1]");
  const std::vector<double> conf = confidences(clf, rho);
  const Label original = argmax_label(conf, clf.povm().labels());
  require(original != target, ErrorCode::kArgument,
          "target label equals the current prediction");
  SubstitutionOutcome res;
  res.margin = conf[clf.povm().index_of(original)] - 0.5;
  require(res.margin > 0.0, ErrorCode::kArgument,
          "original label must have confidence above 1/2");
  res.threshold = substitution_threshold(std::min(res.margin, 0.5));

  const DensityMatrix sigma = reverse_prepare(clf, target);
  DensityMatrix mixed = mix(rho, sigma, eps);
  const std::vector<double> after = confidences(clf, mixed);
  const Label label = argmax_label(after, clf.povm().labels());

  AttackOutcome& out = res.outcome;
  out.kind = AttackKind::kSubstitution;
  out.original_label = original;
  out.perturbation_size = eps;
  out.search_evaluations = 1;
  out.success = after[clf.povm().index_of(original)] < 0.5 && label != original;
  fill_state(out, rho, std::move(mixed), label);
  res.perturbation_bound_holds =
      out.induced_trace_norm >= eps * (1.0 + 2.0 * res.margin) - 1e-9;
  return res;
}

AttackOutcome in_distribution_attack(const Predictor& clf, const Generator& gen,
                                     std::size_t d, const Eigen::VectorXd& z,
                                     const LatentSearch& search) {
  require(search.budget > 0, ErrorCode::kArgument,
          "in-distribution search needs a positive budget");
  require(search.scan_steps > 0 && search.max_radius > 0.0 && search.radius_tol > 0.0,
          ErrorCode::kArgument, "scan parameters must be positive");
  const DensityMatrix rho = gen.state(z, d);
  const Label label0 = clf.predict(rho);
  if (clf.on_boundary(rho)) {
    AttackOutcome out = boundary_outcome(AttackKind::kInDistribution, rho, label0);
    out.search_evaluations = 1;
    return out;
  }
  const PixelVector u = gen(z);
  const EncodingSpec spec{d, gen.pixels()};
  const auto m = static_cast<Eigen::Index>(gen.latent_dim());

  AttackOutcome out;
  out.kind = AttackKind::kInDistribution;
  out.original_label = label0;
  std::size_t evals = 1;
  double best = kInf;
  Eigen::VectorXd best_z;
  Label best_label = label0;

  for (std::size_t k = 0; k < search.budget; ++k) {
    // One stream per direction keeps direction k fixed across budgets.
    Engine rng = make_engine(search.seed, k);
    Eigen::VectorXd dir = sample_gaussian(static_cast<std::size_t>(m), 1, rng).row(0).transpose();
    if (dir.norm() == 0.0) continue;
    dir.normalize();
    auto label_at = [&](double r) {
      ++evals;
      return clf.predict(gen.state(z + r * dir, d));
    };
    double lo = 0.0;
    double hi = -1.0;
    for (std::size_t s = 1; s <= search.scan_steps; ++s) {
      const double r = search.max_radius * static_cast<double>(s) /
                       static_cast<double>(search.scan_steps);
      if (label_at(r) != label0) {
        hi = r;
        break;
      }
      lo = r;
    }
    if (hi < 0.0) continue;
    while (hi - lo > search.radius_tol) {
      const double mid = 0.5 * (lo + hi);
      if (label_at(mid) != label0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    const Eigen::VectorXd zc = z + hi * dir;
    const double size = closed_trace_distance(u, gen(zc), spec);
    if (size < best) {
      best = size;
      best_z = zc;
      best_label = label_at(hi);
    }
  }
  out.search_evaluations = evals;
  if (best == kInf) return out;
  out.success = true;
  fill_state(out, rho, gen.state(best_z, d), best_label);
  out.perturbation_size = out.induced_trace_norm;
  return out;
}

AttackOutcome unconstrained_attack(const Predictor& clf, const DensityMatrix& rho,
                                   std::span<const DensityMatrix> candidates,
                                   const MixtureSearch& search) {
  require(rho.dim() == clf.input_dim(), ErrorCode::kArgument,
          "state dimension does not match the classifier");
  require(search.scan_steps > 0 && search.t_tol > 0.0, ErrorCode::kArgument,
          "scan parameters must be positive");
  const Label label0 = clf.predict(rho);
  if (clf.on_boundary(rho)) {
    AttackOutcome out = boundary_outcome(AttackKind::kUnconstrained, rho, label0);
    out.search_evaluations = 1;
    return out;
  }

  AttackOutcome out;
  out.kind = AttackKind::kUnconstrained;
  out.original_label = label0;
  std::size_t evals = 1;
  double best = kInf;
  std::optional<DensityMatrix> best_state;
  Label best_label = label0;
  auto offer = [&](double size, const DensityMatrix& s, Label label) {
    if (size < best) {
      best = size;
      best_state = s;
      best_label = label;
    }
  };

  SegmentSearch segment(clf, rho, label0, search);
  std::vector<ComplexVector> starts;
  for (Label label : clf.labels()) {
    if (label == label0) continue;
    for (const DensityMatrix& seed : clf.label_seeds(label)) {
      const SegmentHit hit = segment.run(seed);
      if (hit.size < kInf) offer(hit.size, mix(rho, seed, hit.t), hit.label);
      starts.push_back(top_vector(seed));
    }
  }

  for (const DensityMatrix& c : candidates) {
    require(c.dim() == rho.dim(), ErrorCode::kArgument,
            "candidate dimension does not match the input");
    ++evals;
    const Label label = clf.predict(c);
    if (label != label0) offer(distance(DistanceKind::kTrace, rho, c), c, label);
  }

  // The best mixture toward a fixed seed can overshoot the true minimum by a
  // factor up to sqrt(2); moving the pure end point recovers it.
  if (search.refine_iterations > 0) {
    Engine rng = make_engine(search.seed, 1);
    const SiteDims& dims = rho.factor_dims();
    for (const ComplexVector& start : starts) {
      ComplexVector v = start;
      SegmentHit cur = segment.run(pure_density(v, dims));
      double step = 0.5;
      std::size_t fails = 0;
      for (std::size_t it = 0; it < search.refine_iterations && step > 1e-4; ++it) {
        ComplexVector w = v + step * random_direction(v.size(), rng);
        w /= w.norm();
        const SegmentHit hit = segment.run(pure_density(w, dims));
        if (hit.size < cur.size) {
          v = std::move(w);
          cur = hit;
          fails = 0;
        } else if (++fails >= 6) {
          step *= 0.5;
          fails = 0;
        }
      }
      if (cur.size < kInf) {
        offer(cur.size, mix(rho, pure_density(v, dims), cur.t), cur.label);
      }
    }
  }

  out.search_evaluations = evals + segment.evaluations;
  if (!best_state) return out;
  out.success = true;
  fill_state(out, rho, std::move(*best_state), best_label);
  out.perturbation_size = out.induced_trace_norm;
  return out;
}

OracleResult oracle_min_perturbation(const Predictor& clf, const DensityMatrix& rho,
                                     std::size_t grid_resolution) {
  require(rho.dim() == 2, ErrorCode::kUnsupported,
          "the Bloch-ball oracle only handles one qubit");
  require(grid_resolution >= 1, ErrorCode::kArgument,
          "grid resolution must be positive");
  const auto& m = rho.matrix();
  const double x0 = 2.0 * m(0, 1).real();
  const double y0 = -2.0 * m(0, 1).imag();
  const double z0 = (m(0, 0) - m(1, 1)).real();
  const Label label0 = clf.predict(rho);

  const std::size_t R = grid_resolution;
  const double rr = static_cast<double>(R);
  struct Point {
    double dist;
    double x, y, z;
  };
  std::vector<Point> pts;
  auto add = [&](double x, double y, double z) {
    const double dist = std::sqrt((x - x0) * (x - x0) + (y - y0) * (y - y0) +
                                  (z - z0) * (z - z0));
    pts.push_back({dist, x, y, z});
  };
  add(0.0, 0.0, 0.0);
  for (std::size_t i = 1; i <= R; ++i) {
    const double r = static_cast<double>(i) / rr;
    for (std::size_t j = 0; j <= R; ++j) {
      const double theta = std::numbers::pi * static_cast<double>(j) / rr;
      // Poles carry a single azimuth.
      const std::size_t n_phi = (j == 0 || j == R) ? 1 : 2 * R;
      for (std::size_t k = 0; k < n_phi; ++k) {
        const double phi = std::numbers::pi * static_cast<double>(k) / rr;
        add(r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi),
            r * std::cos(theta));
      }
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const Point& a, const Point& b) { return a.dist < b.dist; });

  OracleResult res;
  res.grid_points = pts.size();
  res.grid_error = std::sqrt(1.0 + 2.0 * std::numbers::pi * std::numbers::pi) / rr;
  res.min_perturbation = kInf;
  for (const Point& p : pts) {
    ComplexMatrix s(2, 2);
    s(0, 0) = 0.5 * (1.0 + p.z);
    s(1, 1) = 0.5 * (1.0 - p.z);
    s(0, 1) = Complex(0.5 * p.x, -0.5 * p.y);
    s(1, 0) = std::conj(s(0, 1));
    ++res.evaluations;
    if (clf.predict(DensityMatrix::trusted(std::move(s), rho.factor_dims())) != label0) {
      res.min_perturbation = p.dist;
      break;
    }
  }
  return res;
}

std::string_view risk_kind_name(RiskKind kind) {
  return kind == RiskKind::kErrorRegion ? "error_region" : "prediction_change";
}

RiskEstimate estimate_risk(RiskKind kind, const Predictor& clf,
                           const StateSampler& sampler,
                           const Labeling* ground_truth, double epsilon,
                           std::size_t samples, const AttackProcedure& attack,
                           Engine& rng) {
  require(samples > 0, ErrorCode::kArgument, "need at least one sample");
  require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorCode::kArgument,
          "epsilon must be finite and non-negative");
  require(kind != RiskKind::kErrorRegion || (ground_truth && *ground_truth),
          ErrorCode::kArgument, "error-region risk needs a ground-truth labeling");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const DensityMatrix rho = sampler(rng);
    if (kind == RiskKind::kErrorRegion && clf.predict(rho) != (*ground_truth)(rho)) {
      ++hits;
      continue;
    }
    const AttackOutcome out = attack(rho, rng);
    if (!out.success || out.induced_trace_norm > epsilon) continue;
    if (kind == RiskKind::kPredictionChange) {
      ++hits;
    } else if (out.adversarial_state &&
               clf.predict(*out.adversarial_state) !=
                   (*ground_truth)(*out.adversarial_state)) {
      ++hits;
    }
  }
  RiskEstimate est;
  est.kind = kind;
  est.epsilon = epsilon;
  est.sample_count = samples;
  est.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) /
                            static_cast<double>(samples));
  return est;
}

}  // namespace qarb
