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

#include "core/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "core/attacks.hpp"
#include "core/concentration.hpp"
#include "core/defense.hpp"
#include "core/format.hpp"
#include "core/metrics.hpp"
#include "core/random.hpp"

namespace qarb {

namespace fs = std::filesystem;
using nlohmann::json;

bool RunReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.passed; });
}

namespace {

// ---------------------------------------------------------------------------
// Config access with field-named errors

class Cfg {
 public:
  Cfg(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {}

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  template <class T>
  T get(const char* key, T fallback) const {
    if (!has(key) || j_.at(key).is_null()) return fallback;
    return read<T>(key);
  }

  template <class T>
  T need(const char* key) const {
    require(has(key) && !j_.at(key).is_null(), ErrorCode::kConfig,
            "missing required field '" + path(key) + "'");
    return read<T>(key);
  }

  Cfg sub(const char* key) const {
    static const json empty = json::object();
    if (!has(key)) return Cfg(empty, path(key) + ".");
    require(j_.at(key).is_object(), ErrorCode::kConfig,
            "field '" + path(key) + "' must be an object");
    return Cfg(j_.at(key), path(key) + ".");
  }

  const json& raw(const char* key) const { return j_.at(key); }
  std::string path(const char* key) const { return prefix_ + key; }

 private:
  template <class T>
  T read(const char* key) const {
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      fail(ErrorCode::kConfig, "field '" + path(key) + "' has the wrong type");
    }
  }

  const json& j_;
  std::string prefix_;
};

void require_positive(std::size_t v, const Cfg& cfg, const char* key) {
  require(v > 0, ErrorCode::kConfig, "field '" + cfg.path(key) + "' must be positive");
}

// ---------------------------------------------------------------------------
// Run context

class Ctx {
 public:
  Ctx(RunReport& report, fs::path out, std::uint64_t seed, std::string prefix = "")
      : report_(report), out_(std::move(out)), seed_(seed), prefix_(std::move(prefix)) {}

  Engine engine(std::uint64_t stream) const { return make_engine(seed_, stream); }
  std::uint64_t seed() const { return seed_; }

  void check(const std::string& name, bool passed, const std::string& detail = "") {
    report_.checks.push_back({prefix_ + name, passed, detail});
  }

  fs::path artifact(const std::string& name) {
    report_.artifacts.push_back(rel_ + name);
    return out_ / name;
  }

  void flag(std::string_view f) {
    const std::string s(f);
    if (std::find(report_.variant_flags.begin(), report_.variant_flags.end(), s) ==
        report_.variant_flags.end()) {
      report_.variant_flags.push_back(s);
    }
  }

  void bound(BoundReport b) { report_.bounds.push_back(std::move(b)); }

  Ctx child(const std::string& command, std::uint64_t seed) {
    Ctx c(report_, out_ / command, seed, prefix_ + command + "/");
    c.rel_ = rel_ + command + "/";
    fs::create_directories(c.out_);
    return c;
  }

 private:
  RunReport& report_;
  fs::path out_;
  std::uint64_t seed_;
  std::string prefix_;
  std::string rel_;
};

class Csv {
 public:
  Csv(const fs::path& path, std::initializer_list<std::string_view> header)
      : out_(path), path_(path) {
    require(static_cast<bool>(out_), ErrorCode::kIo,
            "cannot write '" + path.string() + "'");
    bool first = true;
    for (std::string_view h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    require(static_cast<bool>(out_), ErrorCode::kIo,
            "write to '" + path_.string() + "' failed");
  }

 private:
  std::ofstream out_;
  fs::path path_;
};

std::string num(double v) { return format_double(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string boolean(bool b) { return b ? "true" : "false"; }

std::string worst(double v) { return "worst " + format_double(v); }

std::vector<double> uniform_pixels(std::size_t n, Engine& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> px(n);
  for (double& p : px) p = u(rng);
  return px;
}

Eigen::VectorXd gaussian_point(std::size_t m, Engine& rng) {
  return sample_gaussian(m, 1, rng).row(0).transpose();
}

// ---------------------------------------------------------------------------
// Toy problems shared by attack and defend

struct ToyProblem {
  std::size_t n = 2;
  std::size_t d = 2;
  Generator gen;
  LayeredCircuitSpec spec;
  QuantumClassifier clf;
  double train_accuracy = 0.0;
};

LayeredCircuitSpec load_spec(const Cfg& cfg, const char* key) {
  const json& v = cfg.raw(key);
  if (v.is_object()) return spec_from_json(v);
  require(v.is_string(), ErrorCode::kConfig,
          "field '" + cfg.path(key) + "' must be a path or an object");
  std::ifstream in(v.get<std::string>());
  require(static_cast<bool>(in), ErrorCode::kIo,
          "cannot read classifier spec '" + v.get<std::string>() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfig, "classifier spec is not valid JSON: " + std::string(e.what()));
  }
  return spec_from_json(j);
}

/// Generator-backed binary task labelled by a median split of the mean
/// pixel, and a brickwork classifier trained on it.
ToyProblem make_toy(const Cfg& cfg, std::size_t n, std::uint64_t seed) {
  const std::size_t d = 2;
  const std::size_t m = cfg.get<std::size_t>("latent_dim", 2);
  const double scale = cfg.get<double>("generator_scale", 2.0);
  const std::size_t depth = cfg.get<std::size_t>("depth", 1);
  const std::size_t train = cfg.get<std::size_t>("train_samples", 40);
  const std::size_t budget = cfg.get<std::size_t>("train_budget", 300);
  require_positive(m, cfg, "latent_dim");
  require_positive(train, cfg, "train_samples");

  Generator gen = make_generator(m, n, stream_seed(seed, 100 + n), scale);
  Engine rng = make_engine(seed, 200 + n);
  std::vector<PixelVector> pixels;
  std::vector<double> means;
  for (std::size_t i = 0; i < train; ++i) {
    pixels.push_back(gen(gaussian_point(m, rng)));
    const auto& v = pixels.back().values();
    means.push_back(std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n));
  }
  std::vector<double> sorted = means;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[train / 2];
  std::vector<LabeledSample> data;
  for (std::size_t i = 0; i < train; ++i) {
    data.push_back({pixels[i], means[i] >= median ? 1 : 0});
  }
  LayeredCircuitSpec spec = cfg.has("classifier")
                                ? load_spec(cfg, "classifier")
                                : brickwork_spec(n, d, depth, 0, {0, 1});
  require(spec.n_sites == n && spec.d == d, ErrorCode::kConfig,
          "classifier spec does not match the encoding size");
  // Small random start so training does not sit at the identity's symmetric point.
  std::normal_distribution<double> normal(0.0, 0.3);
  if (!cfg.has("classifier")) {
    for (double& p : spec.parameters) p = normal(rng);
  }
  spec = train_toy(spec, data, budget, stream_seed(seed, 300 + n));
  ToyProblem toy{n, d, std::move(gen), spec, build_layered(spec), 0.0};
  toy.train_accuracy = score_classifier(spec, data).accuracy;
  return toy;
}

// ---------------------------------------------------------------------------
// encode

void cmd_encode(const Cfg& cfg, Ctx& ctx) {
  const auto d_list = cfg.get<std::vector<std::size_t>>("d_list", {2, 3, 4});
  const std::size_t n_max = cfg.get<std::size_t>("n_max", 6);
  const std::size_t pairs = cfg.get<std::size_t>("pairs", 200);
  const std::size_t dense_dim_max = cfg.get<std::size_t>("dense_dim_max", 64);
  const std::size_t cos_vectors = cfg.get<std::size_t>("cosine_vectors", 1000);
  require_positive(n_max, cfg, "n_max");
  require(!d_list.empty(), ErrorCode::kConfig, "field 'd_list' must not be empty");
  for (std::size_t d : d_list) {
    require(d >= 2, ErrorCode::kConfig, "field 'd_list' entries must be >= 2");
  }

  Engine rng = ctx.engine(1);
  std::uniform_int_distribution<std::size_t> pick_d(0, d_list.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_n(1, n_max);
  Csv csv(ctx.artifact("encode.csv"),
          {"pair_id", "n", "d", "closed_fidelity", "brute_fidelity",
           "closed_trace", "dense_trace"});
  std::vector<PixelVector> firsts;
  double worst_fid = 0.0;
  double worst_trace = 0.0;
  double worst_identity = 0.0;
  bool injective = true;
  bool chain = true;
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::size_t d = d_list[pick_d(rng)];
    std::size_t n = pick_n(rng);
    while (std::pow(static_cast<double>(d), static_cast<double>(n)) >
           static_cast<double>(max_dimension())) {
      --n;
    }
    const EncodingSpec spec{d, n};
    const PixelVector s(uniform_pixels(n, rng));
    const PixelVector t(uniform_pixels(n, rng));
    firsts.push_back(s);
    const PureState ps = encode(s, spec);
    const PureState pt = encode(t, spec);
    const double brute = std::norm(ps.amplitudes().dot(pt.amplitudes()));
    const double closed = closed_fidelity(s, t, spec);
    worst_fid = std::max(worst_fid, std::abs(closed - brute) / std::max(brute, 1e-300));
    injective = injective && (s == t || closed < 1.0);

    const double closed_tr = closed_trace_distance(s, t, spec);
    double l1 = 0.0;
    for (std::size_t k = 0; k < n; ++k) l1 += std::abs(s[k] - t[k]);
    const double c = std::cos(std::numbers::pi * l1 / (2.0 * static_cast<double>(n)));
    const double chain_rhs = 2.0 * std::sqrt(std::max(
        0.0, 1.0 - std::pow(c, 2.0 * static_cast<double>((d - 1) * n))));
    chain = chain && closed_tr >= chain_rhs - 1e-12;

    double dense = std::nan("");
    if (spec.dim() <= dense_dim_max) {
      dense = distance(DistanceKind::kTrace, DensityMatrix::from_pure(ps),
                       DensityMatrix::from_pure(pt));
      worst_trace = std::max(worst_trace, std::abs(dense - closed_tr));
      worst_identity =
          std::max(worst_identity, std::abs(dense - 2.0 * std::sqrt(std::max(0.0, 1.0 - brute))));
    }
    csv.row({num(i), num(n), num(d), num(closed), num(brute), num(closed_tr), num(dense)});
  }
  {
    std::ofstream px(ctx.artifact("pixels.csv"));
    write_pixel_csv(px, firsts);
  }
  ctx.check("closed_fidelity_vs_brute_force", worst_fid <= 1e-10, "max rel " + worst(worst_fid));
  ctx.check("closed_trace_vs_dense", worst_trace <= 1e-9, "max abs " + worst(worst_trace));
  ctx.check("pure_trace_fidelity_identity", worst_identity <= 1e-8,
            "max abs " + worst(worst_identity));
  ctx.check("encode_injective", injective);
  ctx.check("pixel_l1_chain", chain);

  std::uniform_int_distribution<std::size_t> pick_len(1, 16);
  std::uniform_real_distribution<double> angle(0.0, 0.5 * std::numbers::pi);
  std::size_t violations = 0;
  for (std::size_t i = 0; i < cos_vectors; ++i) {
    std::vector<double> x(pick_len(rng));
    for (double& v : x) v = angle(rng);
    if (!cosine_product_check(x).holds) ++violations;
  }
  ctx.check("cosine_product_inequality", violations == 0,
            std::to_string(violations) + " violations");
}

// ---------------------------------------------------------------------------
// bounds

BoundReport make_bound(std::string name,
                       std::vector<std::pair<std::string, double>> params,
                       double value, std::vector<std::string> flags = {}) {
  return {std::move(name), std::move(params), value, std::move(flags)};
}

ModulusSpec modulus_from(const Cfg& cfg, std::size_t n) {
  return ModulusSpec::certified_linear(cfg.get<double>("lipschitz", 1.0),
                                       static_cast<double>(n));
}

void cmd_bounds(const Cfg& cfg, Ctx& ctx) {
  const std::size_t n = cfg.get<std::size_t>("n", 16);
  const std::size_t d = cfg.get<std::size_t>("d", 2);
  const double eta = cfg.get<double>("eta", 0.5);
  const double gamma_haar = cfg.get<double>("gamma_haar", 0.5);
  const double mu = cfg.get<double>("mu", 0.5);
  const int K = cfg.get<int>("K", 10);
  require_positive(n, cfg, "n");
  require(d >= 2, ErrorCode::kConfig, "field 'd' must be >= 2");
  std::vector<double> gamma_grid = cfg.get<std::vector<double>>("gamma_grid", {});
  if (gamma_grid.empty()) {
    for (int k = 1; k <= 100; ++k) gamma_grid.push_back(0.01 * k);
  }
  const double N = std::pow(static_cast<double>(d), static_cast<double>(n));
  const ModulusSpec omega = modulus_from(cfg, n);
  const auto variant = cfg.get<std::string>("propagation", "stated") == "factor_two"
                           ? PropagationVariant::kFactorTwo
                           : PropagationVariant::kStated;
  ctx.flag(propagation_variant_name(variant));
  ctx.flag(multiclass_variant_name(MulticlassVariant::kAsPrinted));

  const PcBoundHaar pc = pc_bound_haar({N, eta, gamma_haar, mu});
  ctx.bound(make_bound("pc_bound_haar.lambda1", {{"N", N}, {"eta", eta}, {"gamma", gamma_haar}},
                       pc.lambda1));
  ctx.bound(make_bound("pc_bound_haar.epsilon_unitary",
                       {{"N", N}, {"eta", eta}, {"gamma", gamma_haar}}, pc.epsilon_unitary));
  ctx.bound(make_bound("pc_bound_haar.trace_bound",
                       {{"N", N}, {"eta", eta}, {"gamma", gamma_haar}}, pc.trace_bound));
  ctx.bound(make_bound("error_region_bound", {{"N", N}, {"mu", mu}, {"gamma", gamma_haar}},
                       error_region_bound({N, eta, gamma_haar, mu})));
  ctx.bound(make_bound("l1_bound_translation",
                       {{"n", double(n)}, {"d", double(d)}, {"lambda1", pc.lambda1}},
                       l1_bound_translation(n, d, pc.lambda1)));

  Csv csv(ctx.artifact("bounds.csv"),
          {"gamma", "error_region", "pc_epsilon_unitary", "pc_trace_bound", "thm2",
           "alternate", "multiclass_lower"});
  bool looser = true;
  bool thm2_monotone = true;
  double prev_thm2 = INFINITY;
  std::vector<double> sorted = gamma_grid;
  std::sort(sorted.begin(), sorted.end());
  for (double g : sorted) {
    require(g > 0.0, ErrorCode::kConfig, "field 'gamma_grid' entries must be positive");
    const double thm2 = indist_bound_thm2(omega, g, n, d, variant);
    std::string er = "nan";
    std::string pce = "nan";
    std::string pct = "nan";
    if (g <= std::numbers::sqrt2) er = num(error_region_bound({N, eta, g, mu}));
    if (g <= 1.0) {
      const PcBoundHaar p = pc_bound_haar({N, eta, g, mu});
      pce = num(p.epsilon_unitary);
      pct = num(p.trace_bound);
    }
    std::string alt = "nan";
    if (g <= 2.0) {
      const double a = indist_bound_alternate(omega, g, 0.5, n, d, variant);
      alt = num(a);
      if (g <= 1.0) looser = looser && a >= thm2;
    }
    const double w = thm2 > 0.0 ? omega_inverse(omega, thm2, n, d, variant) : 0.0;
    const double mc = multiclass_risk_lower(thm2, w, std::max(K, 5));
    csv.row({num(g), er, pce, pct, num(thm2), alt, num(mc)});
    thm2_monotone = thm2_monotone && thm2 <= prev_thm2 + 1e-15;
    prev_thm2 = thm2;
    ctx.bound(make_bound("indist_bound_thm2", {{"gamma", g}, {"n", double(n)}, {"d", double(d)}},
                         thm2, {std::string(propagation_variant_name(variant))}));
  }
  ctx.check("alternate_looser_than_thm2", looser);
  ctx.check("thm2_monotone_in_gamma", thm2_monotone);

  // Gaussian tail inequality on its documented grids.
  std::vector<double> p_grid;
  for (int k = 0; k <= 49; ++k) p_grid.push_back(0.5 + 0.01 * k);
  std::vector<double> eta_grid{1e-6};
  for (int k = 1; k <= 100; ++k) eta_grid.push_back(0.05 * k);
  std::vector<int> k_grid;
  for (int k = 5; k <= 50; ++k) k_grid.push_back(k);
  const Lemma1Audit lemma = lemma1_audit(p_grid, eta_grid, k_grid);
  ctx.check("lemma1_first_form", std::none_of(lemma.violations.begin(), lemma.violations.end(),
                                              [](const Lemma1Violation& v) { return !v.k_form; }),
            "min slack " + num(lemma.min_first_slack));
  ctx.check("lemma1_k_form", std::none_of(lemma.violations.begin(), lemma.violations.end(),
                                          [](const Lemma1Violation& v) { return v.k_form; }),
            "min slack " + num(lemma.min_k_slack));

  bool k_monotone = true;
  for (int k = 5; k < 50; ++k) {
    k_monotone = k_monotone &&
                 multiclass_risk_lower(0.5, 1.0, k + 1) >= multiclass_risk_lower(0.5, 1.0, k);
  }
  ctx.check("multiclass_monotone_in_K", k_monotone);
}

// ---------------------------------------------------------------------------
// table1

void cmd_table1(const Cfg& cfg, Ctx& ctx) {
  const std::size_t n_min = cfg.get<std::size_t>("n_min", 1);
  const std::size_t n_max = cfg.get<std::size_t>("n_max", 10);
  const auto d_list = cfg.get<std::vector<std::size_t>>("d_list", {2, 3});
  const double eta = cfg.get<double>("eta", 0.5);
  const double gamma = cfg.get<double>("gamma", 0.5);
  const double lipschitz = cfg.get<double>("lipschitz", 1.0);
  require(n_min >= 1 && n_max >= n_min, ErrorCode::kConfig,
          "fields 'n_min'/'n_max' must satisfy 1 <= n_min <= n_max");
  std::vector<std::size_t> row1;
  for (std::size_t n = n_min; n <= n_max; ++n) row1.push_back(n);
  const auto row2 = cfg.get<std::vector<std::size_t>>("row2_n", row1);
  ctx.flag(propagation_variant_name(PropagationVariant::kStated));

  const std::vector<Table1Row> rows = table1_rows(row1, row2, d_list, eta, gamma, lipschitz);
  Csv csv(ctx.artifact("table1.csv"), {"row", "n", "d", "bound_value", "log_slope"});
  double worst_trace_slope = 0.0;
  double worst_l1 = 0.0;
  bool any_l1 = false;
  std::map<std::size_t, std::vector<std::pair<double, double>>> row2_points;
  for (const Table1Row& r : rows) {
    csv.row({r.row, num(r.n), num(r.d), num(r.value),
             r.log_slope ? num(*r.log_slope) : std::string()});
    if (r.row == "2-trace" && r.n >= 64 && r.value > 0.0) {
      row2_points[r.d].emplace_back(std::log(static_cast<double>(r.n)), std::log(r.value));
    }
    if (!r.log_slope) continue;
    if (r.row == "1-trace") {
      worst_trace_slope = std::max(
          worst_trace_slope, std::abs(*r.log_slope + std::log2(static_cast<double>(r.d))));
    } else if (r.row == "1-l1" && r.n - 1 >= 8 && r.n <= 64) {
      const double pred = table1_l1_predicted_slope(r.n - 1, r.d);
      worst_l1 = std::max(worst_l1, std::abs(*r.log_slope - pred) / std::abs(pred));
      any_l1 = true;
    }
  }
  double worst_row2 = 0.0;
  bool any_row2 = false;
  for (const auto& [d, pts] : row2_points) {
    if (pts.size() < 2) continue;
    worst_row2 = std::max(worst_row2, std::abs(loglog_fit_slope(pts) + 0.5) / 0.5);
    any_row2 = true;
  }
  ctx.check("row1_trace_slope_is_minus_log2_d", worst_trace_slope <= 1e-12,
            worst(worst_trace_slope));
  if (any_l1) ctx.check("row1_l1_slope_within_2pct", worst_l1 <= 0.02, worst(worst_l1));
  if (any_row2) ctx.check("row2_slope_minus_half_within_2pct", worst_row2 <= 0.02,
                          "fit over n >= 64, " + worst(worst_row2));
}

// ---------------------------------------------------------------------------
// attack

void cmd_attack(const Cfg& cfg, Ctx& ctx) {
  const std::size_t n = cfg.get<std::size_t>("n", 2);
  const std::size_t samples = cfg.get<std::size_t>("samples", 20);
  const double step = cfg.get<double>("eps_step", 0.01);
  const std::size_t oracle_instances = cfg.get<std::size_t>("oracle_instances", 20);
  const std::size_t oracle_resolution = cfg.get<std::size_t>("oracle_resolution", 128);
  const double oracle_margin = cfg.get<double>("oracle_margin", 0.25);
  require_positive(n, cfg, "n");
  require(step > 0.0 && step <= 1.0, ErrorCode::kConfig, "field 'eps_step' must lie in (0, 1]");
  LatentSearch latent;
  latent.budget = cfg.get<std::size_t>("latent_budget", 32);
  latent.seed = stream_seed(ctx.seed(), 10);
  MixtureSearch mixture;
  mixture.seed = stream_seed(ctx.seed(), 11);
  mixture.refine_iterations = cfg.get<std::size_t>("refine_iterations", 200);

  const ToyProblem toy = make_toy(cfg, n, ctx.seed());
  Engine rng = ctx.engine(2);
  Csv csv(ctx.artifact("attacks.csv"), {"sample_id", "kind", "epsilon", "size", "success", "labels"});
  auto labels = [](const AttackOutcome& o) {
    return std::to_string(o.original_label) + "->" + std::to_string(o.adversarial_label);
  };

  std::size_t subst_runs = 0;
  bool flip_at_threshold = true;
  bool induced_bound = true;
  bool nesting = true;
  bool label_changes = true;
  for (std::size_t i = 0; i < samples; ++i) {
    const Eigen::VectorXd z = gaussian_point(toy.gen.latent_dim(), rng);
    const DensityMatrix rho = toy.gen.state(z, toy.d);
    const std::vector<double> conf = confidences(toy.clf, rho);
    const Label original = argmax_label(conf, toy.clf.povm().labels());
    const Label target = original == 0 ? 1 : 0;
    const double margin = conf[toy.clf.povm().index_of(original)] - 0.5;

    if (margin > 1e-9) {
      ++subst_runs;
      const double thr = substitution_threshold(std::min(margin, 0.5));
      std::optional<double> first;
      for (std::size_t k = 0; static_cast<double>(k) * step <= 1.0 + 1e-12; ++k) {
        const double eps = std::min(1.0, static_cast<double>(k) * step);
        const SubstitutionOutcome s = substitution_attack(toy.clf, rho, target, eps);
        induced_bound = induced_bound && s.perturbation_bound_holds;
        // Grid points within rounding of the threshold are not decisive.
        if (std::abs(eps - thr) > 1e-9) {
          flip_at_threshold = flip_at_threshold && (s.outcome.success == (eps > thr));
        }
        if (s.outcome.success && !first) {
          first = eps;
          csv.row({num(i), "substitution", num(eps), num(s.outcome.induced_trace_norm),
                   "true", labels(s.outcome)});
        }
      }
    }

    const AttackOutcome in = in_distribution_attack(toy.clf, toy.gen, toy.d, z, latent);
    csv.row({num(i), "in_distribution", "", num(in.perturbation_size), boolean(in.success),
             labels(in)});
    std::vector<DensityMatrix> cands;
    if (in.adversarial_state) cands.push_back(*in.adversarial_state);
    const AttackOutcome unc = unconstrained_attack(toy.clf, rho, cands, mixture);
    csv.row({num(i), "unconstrained", "", num(unc.perturbation_size), boolean(unc.success),
             labels(unc)});
    if (in.success) nesting = nesting && unc.perturbation_size <= in.perturbation_size + 1e-9;
    for (const AttackOutcome* o : {&in, &unc}) {
      if (o->success && !o->on_boundary) {
        label_changes = label_changes && toy.clf.predict(*o->adversarial_state) != o->original_label;
      }
    }
  }
  ctx.check("substitution_flips_exactly_above_threshold", flip_at_threshold && subst_runs > 0,
            std::to_string(subst_runs) + " samples, train accuracy " + num(toy.train_accuracy));
  ctx.check("substitution_induced_perturbation_bound", induced_bound);
  ctx.check("unconstrained_not_above_in_distribution", nesting);
  ctx.check("adversarial_label_differs", label_changes);

  // Brute-force agreement on single-qubit projective classifiers.
  if (oracle_instances > 0) {
    Csv ocsv(ctx.artifact("oracle.csv"), {"instance", "margin", "attack", "oracle", "grid_error"});
    Engine orng = ctx.engine(3);
    double worst_rel = 0.0;
    for (std::size_t i = 0; i < oracle_instances; ++i) {
      const QuantumClassifier clf(KrausChannel::from_unitary(sample_haar_unitary(2, orng)),
                                  POVMSet::computational(2, {0, 1}));
      DensityMatrix rho = DensityMatrix::from_pure(sample_haar_pure(2, orng));
      std::vector<double> c = confidences(clf, rho);
      while (std::abs(c[0] - c[1]) < oracle_margin) {
        rho = DensityMatrix::from_pure(sample_haar_pure(2, orng));
        c = confidences(clf, rho);
      }
      const AttackOutcome a = unconstrained_attack(clf, rho, {}, mixture);
      const OracleResult o = oracle_min_perturbation(clf, rho, oracle_resolution);
      const double rel = std::abs(a.perturbation_size - o.min_perturbation) / o.min_perturbation;
      worst_rel = std::max(worst_rel, rel);
      ocsv.row({num(i), num(std::abs(c[0] - c[1])), num(a.perturbation_size),
                num(o.min_perturbation), num(o.grid_error)});
    }
    ctx.check("mixture_attack_within_5pct_of_oracle", worst_rel <= 0.05, "max rel " + worst(worst_rel));
  }
}

// ---------------------------------------------------------------------------
// defend

void cmd_defend(const Cfg& cfg, Ctx& ctx) {
  const auto n_list = cfg.get<std::vector<std::size_t>>("n_list", {2, 3, 4});
  const std::size_t samples = cfg.get<std::size_t>("samples", 50);
  require(!n_list.empty(), ErrorCode::kConfig, "field 'n_list' must not be empty");
  LatentSearch latent;
  latent.budget = cfg.get<std::size_t>("latent_budget", 16);
  latent.seed = stream_seed(ctx.seed(), 20);
  MixtureSearch mixture;
  mixture.seed = stream_seed(ctx.seed(), 21);
  mixture.refine_iterations = cfg.get<std::size_t>("refine_iterations", 60);

  std::vector<ToyProblem> toys;
  std::vector<DefendedClassifier> defended;
  for (std::size_t n : n_list) {
    require(n >= 1, ErrorCode::kConfig, "field 'n_list' entries must be positive");
    toys.push_back(make_toy(cfg, n, ctx.seed()));
    defended.emplace_back(toys.back().clf, EncodingSpec{2, n});
  }
  ctx.flag("fit_metric_single_qubit_fidelity");

  Engine rng = ctx.engine(4);
  Csv csv(ctx.artifact("sandwich.csv"),
          {"sample_id", "eps_in_hat", "eps_unc_hat", "thm3_lower", "bool1", "bool2", "conclusive"});
  std::size_t conclusive = 0;
  bool lower = true;
  bool nest = true;
  bool fixed_point = true;
  bool idempotent = true;
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t k = i % n_list.size();
    const ToyProblem& toy = toys[k];
    const Eigen::VectorXd z = gaussian_point(toy.gen.latent_dim(), rng);
    const SandwichRecord rec = sandwich_audit(defended[k], toy.gen, z, latent, mixture);
    csv.row({num(i), num(rec.eps_in_hat), num(rec.eps_unc_hat), num(rec.thm3_lower),
             boolean(rec.lower_holds), boolean(rec.nesting_holds), boolean(rec.conclusive)});
    if (rec.conclusive) {
      ++conclusive;
      lower = lower && rec.lower_holds;
      nest = nest && rec.nesting_holds;
    }
    const PixelVector u = toy.gen(z);
    const DensityMatrix rho = toy.gen.state(z, 2);
    const PixelVector back = fit_pixels(project_marginals(rho));
    for (std::size_t p = 0; p < u.size(); ++p) {
      fixed_point = fixed_point && std::abs(back[p] - u[p]) <= 1e-9;
    }
    const DensityMatrix mixed = mix(rho, DensityMatrix::maximally_mixed(rho.dim(), rho.factor_dims()), 0.3);
    const DensityMatrix once = project_marginals(mixed);
    const DensityMatrix twice = project_marginals(once);
    idempotent = idempotent && (once.matrix() - twice.matrix()).cwiseAbs().maxCoeff() <= 1e-10;
  }
  ctx.check("thm3_lower_bound_consistent", lower && conclusive > 0,
            std::to_string(conclusive) + " conclusive of " + std::to_string(samples));
  ctx.check("unconstrained_not_above_in_distribution", nest);
  ctx.check("pipeline_fixed_point", fixed_point);
  ctx.check("projection_idempotent", idempotent);
}

// ---------------------------------------------------------------------------
// risk

void cmd_risk(const Cfg& cfg, Ctx& ctx) {
  const std::size_t samples = cfg.get<std::size_t>("samples", 200);
  const auto eps_grid = cfg.get<std::vector<double>>("eps_grid", {0.0, 0.25, 0.5, 1.0, 1.5, 2.0});
  require_positive(samples, cfg, "samples");
  // Z-hemisphere classifier on Haar-random qubits.
  const QuantumClassifier clf(KrausChannel::identity(2), POVMSet::computational(2, {0, 1}));
  MixtureSearch mixture;
  mixture.seed = stream_seed(ctx.seed(), 30);
  mixture.refine_iterations = cfg.get<std::size_t>("refine_iterations", 0);
  const StateSampler sampler = [](Engine& rng) {
    return DensityMatrix::from_pure(sample_haar_pure(2, rng));
  };
  const AttackProcedure attack = [&](const DensityMatrix& rho, Engine&) {
    return unconstrained_attack(clf, rho, {}, mixture);
  };
  const Labeling truth = [&](const DensityMatrix& rho) { return clf.predict(rho); };

  Csv csv(ctx.artifact("risk.csv"),
          {"kind", "epsilon", "estimate", "std_error", "sample_count", "lower_bound"});
  bool ranges = true;
  bool monotone = true;
  bool er_zero = true;
  double prev = -1.0;
  double at_two = 0.0;
  std::vector<double> sorted = eps_grid;
  std::sort(sorted.begin(), sorted.end());
  for (double eps : sorted) {
    Engine rng = ctx.engine(5);  // same states for every epsilon
    const RiskEstimate pc = estimate_risk(RiskKind::kPredictionChange, clf, sampler, nullptr,
                                          eps, samples, attack, rng);
    Engine rng2 = ctx.engine(5);
    const RiskEstimate er = estimate_risk(RiskKind::kErrorRegion, clf, sampler, &truth, eps,
                                          samples, attack, rng2);
    for (const RiskEstimate* r : {&pc, &er}) {
      csv.row({std::string(risk_kind_name(r->kind)), num(r->epsilon), num(r->estimate),
               num(r->std_error), num(r->sample_count), boolean(r->lower_bound)});
      ranges = ranges && r->estimate >= 0.0 && r->estimate <= 1.0 && r->std_error >= 0.0;
    }
    monotone = monotone && pc.estimate >= prev;
    prev = pc.estimate;
    er_zero = er_zero && er.estimate == 0.0;
    if (eps >= 2.0) at_two = pc.estimate;
  }
  ctx.check("risk_estimates_in_range", ranges);
  ctx.check("prediction_change_monotone_in_eps", monotone);
  ctx.check("error_region_empty_when_h_equals_c", er_zero);
  if (!sorted.empty() && sorted.back() >= 2.0) {
    ctx.check("prediction_change_at_eps_2_is_one", at_two == 1.0, "estimate " + num(at_two));
  }
}

// ---------------------------------------------------------------------------
// concentration

void cmd_concentration(const Cfg& cfg, Ctx& ctx) {
  const std::size_t samples = cfg.get<std::size_t>("samples", 10000);
  const auto n_list = cfg.get<std::vector<std::size_t>>("N_list", {2, 4, 8});
  const auto m_list = cfg.get<std::vector<std::size_t>>("m_list", {1, 10});
  const std::string dist = cfg.get<std::string>("alpha_distance", "exact");
  AlphaDistance method = AlphaDistance::kExact;
  if (dist == "lipschitz") {
    method = AlphaDistance::kLipschitz;
  } else if (dist == "nearest_sample") {
    method = AlphaDistance::kNearestSample;
  } else {
    require(dist == "exact", ErrorCode::kConfig,
            "field 'alpha_distance' must be 'exact', 'lipschitz' or 'nearest_sample'");
  }
  require(samples >= 100, ErrorCode::kConfig, "field 'samples' must be >= 100");
  std::vector<double> eps_grid = cfg.get<std::vector<double>>("eps_grid", {});
  if (eps_grid.empty()) {
    for (int k = 1; k <= 10; ++k) eps_grid.push_back(0.2 * k);
  }
  ctx.flag("alpha_distance_" + std::string(alpha_distance_name(method)));
  ctx.flag("haar_over_U(N)");

  const LevyParams levy;
  bool levy_ok = true;
  for (std::size_t N : n_list) {
    Engine rng = ctx.engine(40 + N);
    const ComplexMatrix w = ComplexMatrix::Identity(static_cast<Eigen::Index>(N),
                                                    static_cast<Eigen::Index>(N));
    const AlphaTable t = empirical_alpha(haar_unitary_space(N),
                                         trace_overlap_family(w, method),
                                         eps_grid, samples, rng);
    Csv csv(ctx.artifact("concentration_levy_N" + std::to_string(N) + ".csv"),
            {"epsilon_or_tau", "value", "std_error", "bound_value", "bound_holds"});
    for (const AlphaRow& r : t.rows) {
      const double b = levy_alpha_bound(levy, static_cast<double>(N), r.epsilon);
      const bool ok = r.alpha <= b + 3.0 * r.std_error;
      levy_ok = levy_ok && ok;
      csv.row({num(r.epsilon), num(r.alpha), num(r.std_error), num(b), boolean(ok)});
    }
  }
  ctx.check("levy_alpha_below_bound", levy_ok);

  bool iso_ok = true;
  Csv iso(ctx.artifact("concentration_isoperimetry.csv"),
          {"epsilon_or_tau", "value", "std_error", "bound_value", "bound_holds"});
  for (std::size_t m : m_list) {
    Engine rng = ctx.engine(60 + m);
    const IsoperimetryAudit a = isoperimetry_audit(m, cfg.get<double>("a", 0.0), eps_grid, samples, rng);
    iso_ok = iso_ok && a.all_hold();
    for (const IsoperimetryRow& r : a.rows) {
      iso.row({num(r.epsilon), num(r.measured), num(r.std_error), num(r.expected), boolean(r.within)});
    }
  }
  ctx.check("gaussian_isoperimetry_half_space", iso_ok);
  {
    Engine rng = ctx.engine(70);
    const double one[] = {1.0};
    const AlphaTable t = empirical_alpha(gaussian_space(1), half_space_family(0.0), one, samples, rng);
    const double expected = 1.0 - gaussian_cdf(1.0);
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(samples));
    ctx.check("gaussian_alpha_at_one", std::abs(t.rows[0].alpha - expected) <= 3.0 * se,
              "alpha " + num(t.rows[0].alpha));
  }
  {
    Engine rng = ctx.engine(71);
    double mean = 0.0;
    double sq = 0.0;
    const std::size_t N = 4;
    for (std::size_t i = 0; i < samples; ++i) {
      const double v = std::norm(sample_haar_unitary(N, rng)(0, 0));
      mean += v;
      sq += v * v;
    }
    mean /= static_cast<double>(samples);
    const double var = sq / static_cast<double>(samples) - mean * mean;
    const double se = std::sqrt(var / static_cast<double>(samples));
    ctx.check("haar_moment_one_over_N", std::abs(mean - 0.25) <= 3.0 * se, "mean " + num(mean));
  }

  // Generator moduli.
  {
    const Generator gen = make_generator(cfg.get<std::size_t>("latent_dim", 4),
                                         cfg.get<std::size_t>("pixels", 8),
                                         stream_seed(ctx.seed(), 72),
                                         cfg.get<double>("generator_scale", 2.0));
    Engine rng = ctx.engine(73);
    bool certified = true;
    for (std::size_t i = 0; i < samples; ++i) {
      const Eigen::VectorXd a = gaussian_point(gen.latent_dim(), rng);
      const Eigen::VectorXd b = gaussian_point(gen.latent_dim(), rng);
      const PixelVector ga = gen(a);
      const PixelVector gb = gen(b);
      double l1 = 0.0;
      for (std::size_t k = 0; k < ga.size(); ++k) l1 += std::abs(ga[k] - gb[k]);
      certified = certified && l1 <= gen.certified_lipschitz() * (a - b).norm() + 1e-9;
    }
    ctx.check("generator_certified_lipschitz", certified);
    std::vector<double> taus;
    for (int k = 0; k <= 20; ++k) taus.push_back(0.25 * k);
    const std::vector<ModulusRow> rows = estimate_modulus(gen, taus, 200, rng);
    Csv csv(ctx.artifact("concentration_modulus.csv"),
            {"epsilon_or_tau", "value", "std_error", "bound_value", "bound_holds"});
    bool below = true;
    for (const ModulusRow& r : rows) {
      const bool ok = r.omega_hat <= r.certified + 1e-9;
      below = below && ok;
      csv.row({num(r.tau), num(r.omega_hat), num(0.0), num(r.certified), boolean(ok)});
    }
    ctx.check("modulus_estimate_below_certified", below);
  }

  // Observable concentration.
  {
    const std::vector<double> t_grid{0.05, 0.1, 0.2, 0.3};
    Csv csv(ctx.artifact("concentration_deviation.csv"),
            {"epsilon_or_tau", "value", "std_error", "bound_value", "bound_holds"});
    double mad_small = 0.0;
    double mad_large = 0.0;
    const std::size_t dev_samples = std::min<std::size_t>(samples, 4000);
    for (std::size_t N : {std::size_t{2}, std::size_t{32}}) {
      ComplexMatrix o = ComplexMatrix::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
      for (std::size_t k = 0; k < N / 2; ++k) o(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
      Engine rng = ctx.engine(80 + N);
      const DeviationTable t = deviation_probability(N, o, t_grid, dev_samples, rng);
      (N == 2 ? mad_small : mad_large) = t.median_abs_deviation;
      for (const DeviationRow& r : t.rows) {
        csv.row({num(r.t), num(r.probability), num(r.std_error), "", ""});
      }
    }
    ctx.check("deviation_shrinks_with_N", mad_large < mad_small,
              "MAD " + num(mad_small) + " -> " + num(mad_large));
  }
}

// ---------------------------------------------------------------------------
// audit-all

void metric_audits(const Cfg& cfg, Ctx& ctx) {
  const std::size_t tuples = cfg.get<std::size_t>("audit_tuples", 500);
  const std::size_t kraus = cfg.get<std::size_t>("kraus_count", 3);
  Engine rng = ctx.engine(90);
  const std::size_t dims[] = {2, 4, 8};
  std::size_t violations = 0;
  bool contraction = true;
  bool fvdg = true;
  bool chain = true;
  bool triangle = true;
  double worst_pure = 0.0;
  std::uniform_int_distribution<std::size_t> pick(0, 2);
  for (std::size_t i = 0; i < tuples; ++i) {
    const std::size_t dim = dims[i % 3];
    std::uniform_int_distribution<std::size_t> rank(1, dim);
    std::uniform_int_distribution<std::size_t> labels(2, std::min<std::size_t>(dim + 1, 4));
    const KrausChannel ch = sample_channel(dim, kraus, rng);
    const POVMSet povm = sample_povm(dim, labels(rng), rng);
    const DensityMatrix rho = sample_mixed_state(dim, rank(rng), rng);
    const DensityMatrix sigma = sample_mixed_state(dim, rank(rng), rng);
    const ConfidenceAudit a = confidence_change_audit(ch, povm, rho, sigma);
    if (!a.all_hold()) ++violations;
    contraction = contraction && a.contraction_holds;
    const DistanceOrderingAudit o = distance_ordering_audit(rho, sigma);
    fvdg = fvdg && o.fvdg_holds;
    chain = chain && o.chain_holds;
    const DensityMatrix tau = sample_mixed_state(dim, rank(rng), rng);
    for (DistanceKind k : {DistanceKind::kTrace, DistanceKind::kHilbertSchmidt,
                           DistanceKind::kBures, DistanceKind::kHellinger}) {
      triangle = triangle && distance(k, rho, sigma) <=
                                 distance(k, rho, tau) + distance(k, tau, sigma) + 1e-9;
    }
    const DensityMatrix p = DensityMatrix::from_pure(sample_haar_pure(dim, rng));
    const DensityMatrix q = DensityMatrix::from_pure(sample_haar_pure(dim, rng));
    worst_pure = std::max(worst_pure,
                          std::abs(distance(DistanceKind::kTrace, p, q) -
                                   2.0 * std::sqrt(std::max(0.0, 1.0 - fidelity(p, q)))));
  }
  ctx.check("confidence_change_bounds", violations == 0,
            std::to_string(violations) + " violating tuples of " + std::to_string(tuples));
  ctx.check("trace_norm_contractive", contraction);
  ctx.check("fuchs_van_de_graaf", fvdg);
  ctx.check("distance_ordering_chain", chain);
  ctx.check("triangle_inequality", triangle);
  ctx.check("pure_trace_fidelity_identity", worst_pure <= 1e-8, "max abs " + worst(worst_pure));
}

void run_command(const std::string& command, const Cfg& cfg, Ctx& ctx);

void cmd_audit_all(const Cfg& cfg, Ctx& ctx) {
  metric_audits(cfg, ctx);
  std::uint64_t stream = 1000;
  for (std::string_view c : kCommands) {
    if (c == "audit-all") continue;
    const std::string name(c);
    Ctx child = ctx.child(name, stream_seed(ctx.seed(), stream++));
    run_command(name, cfg.sub(name.c_str()), child);
  }
}

void run_command(const std::string& command, const Cfg& cfg, Ctx& ctx) {
  if (command == "encode") return cmd_encode(cfg, ctx);
  if (command == "bounds") return cmd_bounds(cfg, ctx);
  if (command == "table1") return cmd_table1(cfg, ctx);
  if (command == "attack") return cmd_attack(cfg, ctx);
  if (command == "defend") return cmd_defend(cfg, ctx);
  if (command == "risk") return cmd_risk(cfg, ctx);
  if (command == "concentration") return cmd_concentration(cfg, ctx);
  if (command == "audit-all") return cmd_audit_all(cfg, ctx);
  fail(ErrorCode::kConfig, "field 'command': unknown command '" + command + "'");
}

}  // namespace

void apply_override(json& config, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  require(eq != std::string_view::npos && eq > 0, ErrorCode::kConfig,
          "override '" + std::string(assignment) + "' is not key=value");
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;
  }
  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    require(!part.empty(), ErrorCode::kConfig, "override key '" + key + "' is malformed");
    if (!node->is_object()) *node = json::object();
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

RunReport run_experiment(const json& config, const fs::path& out_dir) {
  const auto started = std::chrono::steady_clock::now();
  require(config.is_object(), ErrorCode::kConfig, "config must be a JSON object");
  const Cfg cfg(config, "");
  RunReport report;
  report.command = cfg.need<std::string>("command");
  report.seed = cfg.need<std::uint64_t>("seed");
  report.config = config;
  require(std::find(std::begin(kCommands), std::end(kCommands), report.command) !=
              std::end(kCommands),
          ErrorCode::kConfig, "field 'command': unknown command '" + report.command + "'");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  require(!ec && fs::is_directory(out_dir), ErrorCode::kIo,
          "cannot create output directory '" + out_dir.string() + "'");
  Ctx ctx(report, out_dir, report.seed);
  run_command(report.command, cfg, ctx);
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

json bound_report_to_json(const BoundReport& b) {
  json params = json::object();
  for (const auto& [k, v] : b.params) params[k] = v;
  return {{"bound_name", b.bound_name},
          {"params", std::move(params)},
          {"value", b.value},
          {"variant_flags", b.variant_flags}};
}

json report_to_json(const RunReport& report) {
  json checks = json::array();
  for (const Check& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  json bounds = json::array();
  for (const BoundReport& b : report.bounds) bounds.push_back(bound_report_to_json(b));
  return {{"command", report.command},
          {"seed", report.seed},
          {"config", report.config},
          {"checks", std::move(checks)},
          {"all_passed", report.all_passed()},
          {"artifacts", report.artifacts},
          {"variant_flags", report.variant_flags},
          {"bounds", std::move(bounds)},
          {"wall_clock_seconds", report.wall_clock_seconds},
          {"version", report.version}};
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string render_report(const RunReport& report, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::kJson:
      out << report_to_json(report).dump(2) << '\n';
      break;
    case ReportFormat::kCsv:
      out << "check,passed,detail\n";
      for (const Check& c : report.checks) {
        out << csv_escape(c.name) << ',' << (c.passed ? "true" : "false") << ','
            << csv_escape(c.detail) << '\n';
      }
      break;
    case ReportFormat::kText: {
      std::size_t passed = 0;
      for (const Check& c : report.checks) passed += c.passed ? 1 : 0;
      out << "qarb " << report.version << "  command: " << report.command
          << "  seed: " << report.seed << '\n';
      out << "variants:";
      if (report.variant_flags.empty()) out << " none";
      for (const std::string& f : report.variant_flags) out << ' ' << f;
      out << '\n';
      for (const Check& c : report.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) out << "  (" << c.detail << ')';
        out << '\n';
      }
      out << passed << '/' << report.checks.size() << " checks passed\n";
      break;
    }
  }
  return out.str();
}

fs::path emit_report(const RunReport& report, ReportFormat format, const fs::path& out_dir) {
  const char* name = format == ReportFormat::kJson  ? "report.json"
                     : format == ReportFormat::kCsv ? "report.csv"
                                                    : "report.txt";
  const fs::path path = out_dir / name;
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << render_report(report, format);
  require(static_cast<bool>(out), ErrorCode::kIo, "write to '" + path.string() + "' failed");
  return path;
}

std::vector<Table1Row> table1_rows(std::span<const std::size_t> row1_n,
                                   std::span<const std::size_t> row2_n,
                                   std::span<const std::size_t> d_list, double eta,
                                   double gamma, double lipschitz) {
  std::vector<Table1Row> rows;
  const double lambda2 = std::sqrt(std::max(0.0, std::log(0.5 * std::numbers::pi / (gamma * gamma))));
  for (std::size_t d : d_list) {
    const auto series = [&](const std::string& name, std::span<const std::size_t> ns,
                            auto value, bool log_log) {
      std::optional<double> prev;
      std::size_t prev_n = 0;
      for (std::size_t n : ns) {
        const double v = value(n);
        Table1Row r{name, n, d, v, std::nullopt};
        if (prev && *prev > 0.0 && v > 0.0) {  // false for NaN
          r.log_slope = log_log ? std::log(v / *prev) /
                                      std::log(static_cast<double>(n) / static_cast<double>(prev_n))
                                : std::log2(v / *prev) / static_cast<double>(n - prev_n);
        }
        rows.push_back(r);
        prev = v;
        prev_n = n;
      }
    };
    auto lambda1_at = [&](std::size_t n) {
      const double N = std::pow(static_cast<double>(d), static_cast<double>(n));
      return pc_bound_haar({N, eta, gamma, 0.5});
    };
    series("1-trace", row1_n, [&](std::size_t n) { return lambda1_at(n).trace_bound; }, false);
    // The translation is undefined where the trace bound is vacuous.
    series("1-l1", row1_n, [&](std::size_t n) {
      try {
        return l1_bound_translation(n, d, lambda1_at(n).lambda1);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDomain) throw;
        return std::nan("");
      }
    }, false);
    series("2-trace", row2_n, [&](std::size_t n) {
      const ModulusSpec spec = ModulusSpec::certified_linear(lipschitz, static_cast<double>(n));
      return omega_lower_prop1(spec, lambda2, n, d);
    }, true);
    series("2-l1", row2_n, [&](std::size_t n) {
      return ModulusSpec::certified_linear(lipschitz, static_cast<double>(n)).omega1(lambda2);
    }, true);
  }
  return rows;
}

double loglog_fit_slope(std::span<const std::pair<double, double>> points) {
  require(points.size() >= 2, ErrorCode::kArgument, "need at least two points");
  const double k = static_cast<double>(points.size());
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - sx / k) * (x - sx / k);
    sxy += (x - sx / k) * (y - sy / k);
  }
  require(sxx > 0.0, ErrorCode::kArgument, "abscissae must not all coincide");
  return sxy / sxx;
}

double table1_l1_predicted_slope(std::size_t n, std::size_t d) {
  const double nd = static_cast<double>(n);
  return 0.5 * std::log2((nd + 1.0) / nd) - 0.5 * std::log2(static_cast<double>(d));
}

}  // namespace qarb
