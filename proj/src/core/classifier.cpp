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

#include "core/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include <Eigen/Eigenvalues>

#include "core/random.hpp"

namespace qarb {

QuantumClassifier::QuantumClassifier(KrausChannel channel, POVMSet povm)
    : channel_(std::move(channel)), povm_(std::move(povm)) {
  require(channel_.output_dim() == povm_.dim(), ErrorCode::kArgument,
          "channel output dimension does not match the POVM");
}

std::vector<double> confidences(const QuantumClassifier& clf,
                                const DensityMatrix& rho) {
  require(rho.dim() == clf.channel().input_dim(), ErrorCode::kArgument,
          "state dimension " + std::to_string(rho.dim()) +
              " does not match classifier input " +
              std::to_string(clf.channel().input_dim()));
  const DensityMatrix out = apply(clf.channel(), rho);
  std::vector<double> conf;
  conf.reserve(clf.povm().size());
  for (const ComplexMatrix& e : clf.povm().elements()) {
    // tr(A B) for Hermitian A, B without forming the product.
    conf.push_back((out.matrix().array() * e.transpose().array()).sum().real());
  }
  return conf;
}

Label argmax_label(const std::vector<double>& conf,
                   const std::vector<Label>& labels) {
  require(!conf.empty() && conf.size() == labels.size(), ErrorCode::kArgument,
          "confidence and label lists differ in size");
  const double top = *std::max_element(conf.begin(), conf.end());
  Label best = 0;
  bool found = false;
  for (std::size_t i = 0; i < conf.size(); ++i) {
    if (conf[i] >= top - kTieTol && (!found || labels[i] < best)) {
      best = labels[i];
      found = true;
    }
  }
  return best;
}

Label predict(const QuantumClassifier& clf, const DensityMatrix& rho) {
  return argmax_label(confidences(clf, rho), clf.povm().labels());
}

Label QuantumClassifier::predict(const DensityMatrix& rho) const {
  return qarb::predict(*this, rho);
}

bool QuantumClassifier::on_boundary(const DensityMatrix& rho) const {
  std::vector<double> conf = confidences(*this, rho);
  if (conf.size() < 2) return false;
  std::sort(conf.begin(), conf.end(), std::greater<>());
  return conf[0] - conf[1] <= kTieTol;
}

namespace {

// Canonical unit vector of the top eigenspace of a PSD effect.
ComplexVector top_eigenspace_vector(const ComplexMatrix& effect) {
  const EigenDecomposition eig = hermitian_eigen(effect);
  const double top = eig.values.maxCoeff();
  require(top > 1e-12, ErrorCode::kArgument,
          "target effect has rank zero; no state can select it");
  const Eigen::Index n = effect.rows();
  ComplexMatrix proj = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) >= top - 1e-9) {
      proj += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    }
  }
  Eigen::Index best = 0;
  double best_norm = -1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double norm = proj.col(k).norm();
    if (norm > best_norm + 1e-12) {
      best = k;
      best_norm = norm;
    }
  }
  ComplexVector v = proj.col(best);
  return v / v.norm();
}

}  // namespace

DensityMatrix reverse_prepare(const QuantumClassifier& clf, Label target) {
  const ComplexMatrix& u = clf.channel().unitary();
  const ComplexMatrix& effect =
      clf.povm().elements()[clf.povm().index_of(target)];
  const ComplexVector v = top_eigenspace_vector(effect);
  const ComplexVector back = u.adjoint() * v;
  ComplexMatrix m = back * back.adjoint();
  return DensityMatrix::trusted(std::move(m), SiteDims{});
}

std::vector<DensityMatrix> QuantumClassifier::label_seeds(Label label) const {
  const ComplexMatrix& effect = povm_.elements()[povm_.index_of(label)];
  if (hermitian_eigen(effect).values.maxCoeff() <= 1e-12) return {};
  if (channel_.is_unitary()) return {reverse_prepare(*this, label)};
  // Non-unitary channels: the top eigenvector of E*(Pi) maximises tr(E(s) Pi).
  const ComplexMatrix dual = dual_apply(channel_, effect);
  if (hermitian_eigen(dual).values.maxCoeff() <= 1e-12) return {};
  const ComplexVector v = top_eigenspace_vector(dual);
  return {DensityMatrix::trusted(v * v.adjoint(), SiteDims{})};
}

std::size_t LayeredCircuitSpec::parameter_count() const {
  std::size_t count = 0;
  for (const auto& layer : layers) {
    for (const GatePlacement& g : layer) {
      const std::size_t local = static_cast<std::size_t>(
          std::pow(static_cast<double>(d), static_cast<double>(g.width)));
      count += local * local - 1;
    }
  }
  return count;
}

void LayeredCircuitSpec::validate() const {
  require(d >= 2, ErrorCode::kArgument, "qudit dimension must be >= 2");
  require(n_sites >= 1, ErrorCode::kArgument, "circuit needs at least one site");
  const SiteDims dims(n_sites, d);
  checked_dim_product(dims);
  for (const auto& layer : layers) {
    std::vector<bool> used(n_sites, false);
    for (const GatePlacement& g : layer) {
      require(g.width == 1 || g.width == 2, ErrorCode::kStructure,
              "gates act on one site or two adjacent sites");
      require(g.site + g.width <= n_sites, ErrorCode::kStructure,
              "gate placement at site " + std::to_string(g.site) +
                  " runs past the last site");
      for (std::size_t s = g.site; s < g.site + g.width; ++s) {
        require(!used[s], ErrorCode::kStructure,
                "two gates in one layer share site " + std::to_string(s));
        used[s] = true;
      }
    }
  }
  require(parameters.size() == parameter_count(), ErrorCode::kStructure,
          "parameter count " + std::to_string(parameters.size()) +
              " does not match the gate layout (" +
              std::to_string(parameter_count()) + ")");
  for (double p : parameters) {
    require(std::isfinite(p), ErrorCode::kArgument, "non-finite parameter");
  }
  require(povm_site < n_sites, ErrorCode::kStructure,
          "measured site out of range");
  require(labels.size() == d, ErrorCode::kStructure,
          "need one label per level of the measured site");
  require(std::set<Label>(labels.begin(), labels.end()).size() == d,
          ErrorCode::kStructure, "labels must be distinct");
}

LayeredCircuitSpec brickwork_spec(std::size_t n_sites, std::size_t d,
                                  std::size_t depth, std::size_t povm_site,
                                  std::vector<Label> labels) {
  LayeredCircuitSpec spec;
  spec.n_sites = n_sites;
  spec.d = d;
  spec.povm_site = povm_site;
  spec.labels = std::move(labels);
  for (std::size_t l = 0; l < depth && n_sites >= 2; ++l) {
    std::vector<GatePlacement> layer;
    std::size_t start = (l % 2 == 1 && n_sites > 2) ? 1 : 0;
    for (std::size_t s = start; s + 1 < n_sites; s += 2) {
      layer.push_back({s, 2});
    }
    spec.layers.push_back(std::move(layer));
  }
  std::vector<GatePlacement> singles;
  for (std::size_t s = 0; s < n_sites; ++s) singles.push_back({s, 1});
  spec.layers.push_back(std::move(singles));
  if (n_sites == 1) {
    for (std::size_t l = 1; l < depth; ++l) spec.layers.push_back({{0, 1}});
  }
  spec.parameters.assign(spec.parameter_count(), 0.0);
  spec.validate();
  return spec;
}

std::vector<ComplexMatrix> gell_mann_basis(std::size_t dim) {
  require(dim >= 2, ErrorCode::kArgument, "basis needs dimension >= 2");
  const auto n = static_cast<Eigen::Index>(dim);
  std::vector<ComplexMatrix> basis;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(n, n);
      sym(j, k) = 1.0;
      sym(k, j) = 1.0;
      basis.push_back(std::move(sym));
      ComplexMatrix anti = ComplexMatrix::Zero(n, n);
      anti(j, k) = Complex(0.0, -1.0);
      anti(k, j) = Complex(0.0, 1.0);
      basis.push_back(std::move(anti));
    }
  }
  for (Eigen::Index l = 1; l < n; ++l) {
    ComplexMatrix diag = ComplexMatrix::Zero(n, n);
    const double scale =
        std::sqrt(2.0 / (static_cast<double>(l) * static_cast<double>(l + 1)));
    for (Eigen::Index j = 0; j < l; ++j) diag(j, j) = scale;
    diag(l, l) = -scale * static_cast<double>(l);
    basis.push_back(std::move(diag));
  }
  return basis;
}

ComplexMatrix gate_unitary(std::size_t dim, std::span<const double> theta) {
  const std::vector<ComplexMatrix> basis = gell_mann_basis(dim);
  require(theta.size() == basis.size(), ErrorCode::kArgument,
          "gate needs dim^2 - 1 parameters");
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < basis.size(); ++k) h += theta[k] * basis[k];
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  ComplexVector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phases(i) = std::exp(Complex(0.0, -es.eigenvalues()(i)));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

// In-place left multiplication of `u` by a gate on sites [site, site+width).
void apply_gate_left(ComplexMatrix& u, const ComplexMatrix& gate,
                     std::size_t d, std::size_t n_sites, const GatePlacement& g) {
  const auto local = gate.rows();
  Eigen::Index right = 1;
  for (std::size_t s = g.site + g.width; s < n_sites; ++s) {
    right *= static_cast<Eigen::Index>(d);
  }
  const Eigen::Index full = u.rows();
  const Eigen::Index left = full / (local * right);
  ComplexVector buf(local);
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    for (Eigen::Index a = 0; a < left; ++a) {
      for (Eigen::Index b = 0; b < right; ++b) {
        const Eigen::Index base = a * local * right + b;
        for (Eigen::Index m = 0; m < local; ++m) buf(m) = u(base + m * right, c);
        const ComplexVector out = gate * buf;
        for (Eigen::Index m = 0; m < local; ++m) u(base + m * right, c) = out(m);
      }
    }
  }
}

}  // namespace

ComplexMatrix circuit_unitary(const LayeredCircuitSpec& spec) {
  spec.validate();
  const SiteDims dims(spec.n_sites, spec.d);
  const auto full = static_cast<Eigen::Index>(checked_dim_product(dims));
  ComplexMatrix u = ComplexMatrix::Identity(full, full);
  std::size_t offset = 0;
  for (const auto& layer : spec.layers) {
    for (const GatePlacement& g : layer) {
      const std::size_t local = static_cast<std::size_t>(
          std::pow(static_cast<double>(spec.d), static_cast<double>(g.width)));
      const std::size_t count = local * local - 1;
      const std::span<const double> theta(spec.parameters.data() + offset,
                                          count);
      offset += count;
      apply_gate_left(u, gate_unitary(local, theta), spec.d, spec.n_sites, g);
    }
  }
  return u;
}

QuantumClassifier build_layered(const LayeredCircuitSpec& spec) {
  ComplexMatrix u = circuit_unitary(spec);
  const auto full = u.rows();
  const auto d = static_cast<Eigen::Index>(spec.d);
  Eigen::Index right = 1;
  for (std::size_t s = spec.povm_site + 1; s < spec.n_sites; ++s) right *= d;
  std::vector<ComplexMatrix> effects;
  for (Eigen::Index level = 0; level < d; ++level) {
    ComplexMatrix p = ComplexMatrix::Zero(full, full);
    for (Eigen::Index i = 0; i < full; ++i) {
      if ((i / right) % d == level) p(i, i) = 1.0;
    }
    effects.push_back(std::move(p));
  }
  return QuantumClassifier(KrausChannel::from_unitary(std::move(u)),
                           POVMSet::from_elements(std::move(effects), spec.labels));
}

TrainingScore score_classifier(const LayeredCircuitSpec& spec,
                               std::span<const LabeledSample> data) {
  require(!data.empty(), ErrorCode::kArgument, "training set is empty");
  const QuantumClassifier clf = build_layered(spec);
  const EncodingSpec enc{spec.d, spec.n_sites};
  TrainingScore score;
  for (const LabeledSample& s : data) {
    const DensityMatrix rho = DensityMatrix::from_pure(encode(s.pixels, enc));
    const std::vector<double> conf = confidences(clf, rho);
    const Label pred = argmax_label(conf, clf.povm().labels());
    if (pred == s.label) score.accuracy += 1.0;
    score.mean_confidence += conf[clf.povm().index_of(s.label)];
  }
  const double n = static_cast<double>(data.size());
  score.accuracy /= n;
  score.mean_confidence /= n;
  return score;
}

LayeredCircuitSpec train_toy(const LayeredCircuitSpec& spec,
                             std::span<const LabeledSample> data,
                             std::size_t budget, std::uint64_t seed) {
  require(!data.empty(), ErrorCode::kArgument, "training set is empty");
  spec.validate();
  for (const LabeledSample& s : data) {
    require(std::find(spec.labels.begin(), spec.labels.end(), s.label) !=
                spec.labels.end(),
            ErrorCode::kArgument,
            "sample label " + std::to_string(s.label) + " is not a POVM label");
  }
  LayeredCircuitSpec best = spec;
  if (budget == 0 || best.parameters.empty()) return best;

  auto better = [](const TrainingScore& a, const TrainingScore& b) {
    if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    return a.mean_confidence > b.mean_confidence + 1e-12;
  };

  TrainingScore best_score = score_classifier(best, data);
  std::size_t used = 0;
  Engine rng = make_engine(seed, 0);
  std::vector<std::size_t> order(best.parameters.size());
  std::iota(order.begin(), order.end(), 0);
  double step = std::numbers::pi / 4.0;

  while (used < budget && step > 1e-6) {
    std::shuffle(order.begin(), order.end(), rng);
    bool improved = false;
    for (std::size_t k : order) {
      for (double sign : {1.0, -1.0}) {
        if (used >= budget) break;
        LayeredCircuitSpec trial = best;
        trial.parameters[k] += sign * step;
        const TrainingScore s = score_classifier(trial, data);
        ++used;
        if (better(s, best_score)) {
          best = std::move(trial);
          best_score = s;
          improved = true;
          break;
        }
      }
      if (used >= budget) break;
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

nlohmann::json spec_to_json(const LayeredCircuitSpec& spec) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : spec.layers) {
    nlohmann::json l = nlohmann::json::array();
    for (const GatePlacement& g : layer) {
      nlohmann::json sites = nlohmann::json::array();
      for (std::size_t s = g.site; s < g.site + g.width; ++s) sites.push_back(s);
      l.push_back(std::move(sites));
    }
    layers.push_back(std::move(l));
  }
  return {{"n_sites", spec.n_sites}, {"d", spec.d},
          {"layers", std::move(layers)}, {"parameters", spec.parameters},
          {"povm_site", spec.povm_site}, {"labels", spec.labels}};
}

LayeredCircuitSpec spec_from_json(const nlohmann::json& j) {
  LayeredCircuitSpec spec;
  try {
    spec.n_sites = j.at("n_sites").get<std::size_t>();
    spec.d = j.at("d").get<std::size_t>();
    for (const auto& layer : j.at("layers")) {
      std::vector<GatePlacement> l;
      for (const auto& sites : layer) {
        const auto v = sites.get<std::vector<std::size_t>>();
        require(v.size() == 1 || (v.size() == 2 && v[1] == v[0] + 1),
                ErrorCode::kStructure,
                "gate placements are [site] or [site, site + 1]");
        l.push_back({v[0], v.size()});
      }
      spec.layers.push_back(std::move(l));
    }
    spec.parameters = j.at("parameters").get<std::vector<double>>();
    spec.povm_site = j.at("povm_site").get<std::size_t>();
    spec.labels = j.at("labels").get<std::vector<Label>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kArgument, std::string("classifier spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

}  // namespace qarb
