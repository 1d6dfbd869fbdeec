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

// Acceptance harness: one PASS/FAIL line per criterion.
// Usage: qarb_acceptance [seed] [scratch_dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "core/bounds.hpp"
#include "core/concentration.hpp"
#include "core/encoding.hpp"
#include "core/experiments.hpp"
#include "core/format.hpp"
#include "core/metrics.hpp"
#include "core/random.hpp"

namespace {

using namespace qarb;
namespace fs = std::filesystem;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds; 0 for none
  std::function<Outcome()> run;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<double> uniform_pixels(std::size_t n, Engine& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> px(n);
  for (double& p : px) p = u(rng);
  return px;
}

std::vector<double> eps_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 10; ++k) g.push_back(0.2 * k);
  return g;
}

Outcome closed_fidelity_criterion(std::uint64_t seed) {
  Engine rng = make_engine(seed, 1);
  const std::size_t d_list[] = {2, 3, 4};
  double worst = 0.0;
  std::size_t pairs = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = d_list[i % 3];
    const std::size_t n = 1 + static_cast<std::size_t>(i / 3) % 6;
    const EncodingSpec spec{d, n};
    const PixelVector s(uniform_pixels(n, rng));
    const PixelVector t(uniform_pixels(n, rng));
    const double brute = std::norm(encode(s, spec).amplitudes().dot(encode(t, spec).amplitudes()));
    worst = std::max(worst, std::abs(closed_fidelity(s, t, spec) - brute) / brute);
    ++pairs;
  }
  return {worst <= 1e-10, std::to_string(pairs) + " pairs, max rel error " + num(worst)};
}

Outcome pure_identity_criterion(std::uint64_t seed) {
  Engine rng = make_engine(seed, 2);
  const std::size_t d_list[] = {2, 3, 4};
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = d_list[i % 3];
    std::size_t n = 1 + static_cast<std::size_t>(i / 3) % 6;
    while (std::pow(static_cast<double>(d), static_cast<double>(n)) > 256.0) --n;
    const EncodingSpec spec{d, n};
    const DensityMatrix a = DensityMatrix::from_pure(encode(PixelVector(uniform_pixels(n, rng)), spec));
    const DensityMatrix b = DensityMatrix::from_pure(encode(PixelVector(uniform_pixels(n, rng)), spec));
    const double f = fidelity(a, b);
    worst = std::max(worst, std::abs(distance(DistanceKind::kTrace, a, b) -
                                     2.0 * std::sqrt(std::max(0.0, 1.0 - f))));
  }
  return {worst <= 1e-8, "200 pairs, max abs error " + num(worst)};
}

Outcome appendix_a_criterion(std::uint64_t seed) {
  Engine rng = make_engine(seed, 3);
  const std::size_t dims[] = {2, 4, 8};
  std::size_t violations = 0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t dim = dims[i % 3];
    std::uniform_int_distribution<std::size_t> rank(1, dim);
    std::uniform_int_distribution<std::size_t> labels(2, std::min<std::size_t>(dim + 1, 4));
    const KrausChannel ch = sample_channel(dim, 3, rng);
    const POVMSet povm = sample_povm(dim, labels(rng), rng);
    const DensityMatrix rho = sample_mixed_state(dim, rank(rng), rng);
    const DensityMatrix sigma = sample_mixed_state(dim, rank(rng), rng);
    const ConfidenceAudit a = confidence_change_audit(ch, povm, rho, sigma);
    if (!(a.trace_holds && a.dual_holds && a.hs_holds && a.bures_holds && a.hellinger_holds)) {
      ++violations;
    }
  }
  return {violations == 0, "500 tuples, " + std::to_string(violations) + " violations"};
}

Outcome table1_row1_criterion() {
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= 64; ++n) ns.push_back(n);
  const std::size_t d2[] = {2};
  const std::vector<Table1Row> rows = table1_rows(ns, {}, d2, 0.5, 0.5, 1.0);
  double trace_err = 0.0;
  double l1_err = 0.0;
  std::size_t l1_points = 0;
  for (const Table1Row& r : rows) {
    if (!r.log_slope) continue;
    if (r.row == "1-trace") trace_err = std::max(trace_err, std::abs(*r.log_slope + 1.0));
    if (r.row == "1-l1" && r.n - 1 >= 8) {
      const double pred = table1_l1_predicted_slope(r.n - 1, r.d);
      l1_err = std::max(l1_err, std::abs(*r.log_slope - pred) / std::abs(pred));
      ++l1_points;
    }
  }
  return {trace_err <= 1e-12 && l1_err <= 0.02 && l1_points == 56,
          "trace slope error " + num(trace_err) + ", l1 max rel " + num(l1_err) + " over " +
              std::to_string(l1_points) + " steps"};
}

Outcome table1_row2_criterion() {
  std::vector<std::size_t> ns;
  for (std::size_t n = 64; n <= 4096; ++n) ns.push_back(n);
  const std::size_t d2[] = {2};
  const std::vector<Table1Row> rows = table1_rows({}, ns, d2, 0.5, 0.5, 1.0);
  std::vector<std::pair<double, double>> pts;
  double local = 0.0;
  for (const Table1Row& r : rows) {
    if (r.row != "2-trace") continue;
    pts.emplace_back(std::log(static_cast<double>(r.n)), std::log(r.value));
    if (r.log_slope) local = std::max(local, std::abs(*r.log_slope + 0.5) / 0.5);
  }
  const double err = std::abs(loglog_fit_slope(pts) + 0.5) / 0.5;
  return {err <= 0.02 && pts.size() == ns.size(),
          "fitted slope rel error " + num(err) + " over " + std::to_string(pts.size()) +
              " points (largest local " + num(local) + ")"};
}

Outcome levy_criterion(std::uint64_t seed) {
  const LevyParams levy;
  const std::vector<double> grid = eps_grid();
  double worst_margin = -INFINITY;
  for (std::size_t N : {2, 4, 8}) {
    Engine rng = make_engine(seed, 60 + N);
    const ComplexMatrix w = ComplexMatrix::Identity(static_cast<Eigen::Index>(N),
                                                    static_cast<Eigen::Index>(N));
    const AlphaTable t = empirical_alpha(haar_unitary_space(N),
                                         trace_overlap_family(w, AlphaDistance::kExact),
                                         grid, 10000, rng);
    for (const AlphaRow& r : t.rows) {
      const double b = levy_alpha_bound(levy, static_cast<double>(N), r.epsilon);
      worst_margin = std::max(worst_margin, r.alpha - b - 3.0 * r.std_error);
    }
  }
  return {worst_margin <= 0.0, "max alpha - bound - 3 sigma = " + num(worst_margin)};
}

Outcome isoperimetry_criterion(std::uint64_t seed) {
  const std::vector<double> grid = eps_grid();
  bool ok = true;
  for (std::size_t m : {1, 10}) {
    Engine rng = make_engine(seed, 70 + m);
    ok = ok && isoperimetry_audit(m, 0.0, grid, 10000, rng).all_hold();
  }
  Engine rng = make_engine(seed, 80);
  const double one[] = {1.0};
  const AlphaTable t = empirical_alpha(gaussian_space(1), half_space_family(0.0), one, 10000, rng);
  const double expected = 1.0 - gaussian_cdf(1.0);
  const double se = std::sqrt(expected * (1.0 - expected) / 10000.0);
  const bool alpha_ok = std::abs(t.rows[0].alpha - expected) <= 3.0 * se &&
                        std::abs(expected - 0.158655) <= 5e-7;
  return {ok && alpha_ok, std::string("expansions ") + (ok ? "within" : "outside") +
                              " 3 sigma, alpha(1) " + num(t.rows[0].alpha) + " vs " +
                              num(expected)};
}

Outcome lemma1_criterion() {
  std::vector<double> p_grid;
  for (int k = 0; k <= 49; ++k) p_grid.push_back(0.5 + 0.01 * k);
  std::vector<double> eta_grid{1e-6};
  for (int k = 1; k <= 100; ++k) eta_grid.push_back(0.05 * k);
  std::vector<int> k_grid;
  for (int k = 5; k <= 50; ++k) k_grid.push_back(k);
  const Lemma1Audit a = lemma1_audit(p_grid, eta_grid, k_grid);
  return {a.violations.empty(),
          std::to_string(a.first_form_checks) + " + " + std::to_string(a.k_form_checks) +
              " points, " + std::to_string(a.violations.size()) + " violations"};
}

Outcome alternate_criterion() {
  std::size_t exceptions = 0;
  std::size_t points = 0;
  for (std::size_t n : {4, 16, 64}) {
    const ModulusSpec omega = ModulusSpec::certified_linear(1.0, static_cast<double>(n));
    for (int k = 1; k <= 100; ++k) {
      const double g = 0.01 * k;
      ++points;
      if (indist_bound_alternate(omega, g, 0.5, n, 2) < indist_bound_thm2(omega, g, n, 2)) {
        ++exceptions;
      }
    }
  }
  return {exceptions == 0,
          std::to_string(points) + " points, " + std::to_string(exceptions) + " exceptions"};
}

/// Runs a pipeline command once and reads the named checks from its report.
class Pipeline {
 public:
  Pipeline(std::uint64_t seed, fs::path scratch) : seed_(seed), scratch_(std::move(scratch)) {}

  Outcome checks(const std::string& command, std::initializer_list<const char*> names) {
    auto it = reports_.find(command);
    if (it == reports_.end()) {
      const nlohmann::json cfg = {{"command", command}, {"seed", seed_}};
      it = reports_.emplace(command, run_experiment(cfg, scratch_ / command)).first;
    }
    const RunReport& report = it->second;
    Outcome out{true, ""};
    for (const char* name : names) {
      const auto c = std::find_if(report.checks.begin(), report.checks.end(),
                                  [&](const Check& k) { return k.name == name; });
      const bool ok = c != report.checks.end() && c->passed;
      out.passed = out.passed && ok;
      if (!out.detail.empty()) out.detail += "; ";
      out.detail += std::string(name) + " " + (ok ? "ok" : "failed");
      if (c != report.checks.end() && !c->detail.empty()) out.detail += " (" + c->detail + ")";
    }
    return out;
  }

 private:
  std::uint64_t seed_;
  fs::path scratch_;
  std::map<std::string, RunReport> reports_;
};

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2026;
  const fs::path scratch =
      argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "qarb_acceptance";
  fs::create_directories(scratch);
  Pipeline pipeline(seed, scratch);

  const std::vector<Criterion> criteria = {
      {1, "closed_fidelity_matches_brute_force", 10.0,
       [&] { return closed_fidelity_criterion(seed); }},
      {2, "pure_state_trace_fidelity_identity", 0.0, [&] { return pure_identity_criterion(seed); }},
      {3, "confidence_change_bounds_audit", 60.0, [&] { return appendix_a_criterion(seed); }},
      {4, "table1_row1_scaling", 0.0, [] { return table1_row1_criterion(); }},
      {5, "table1_row2_scaling", 1.0, [] { return table1_row2_criterion(); }},
      {6, "levy_alpha_below_bound", 120.0, [&] { return levy_criterion(seed); }},
      {7, "gaussian_isoperimetry", 0.0, [&] { return isoperimetry_criterion(seed); }},
      {8, "gaussian_tail_grid_audit", 0.0, [] { return lemma1_criterion(); }},
      {9, "substitution_attack_threshold", 0.0,
       [&] {
         return pipeline.checks("attack", {"substitution_flips_exactly_above_threshold",
                                           "substitution_induced_perturbation_bound"});
       }},
      {10, "defended_attack_sandwich", 300.0,
       [&] {
         return pipeline.checks("defend", {"thm3_lower_bound_consistent",
                                           "unconstrained_not_above_in_distribution"});
       }},
      {11, "mixture_attack_matches_oracle", 0.0,
       [&] {
         return pipeline.checks("attack", {"mixture_attack_within_5pct_of_oracle"});
       }},
      {12, "alternate_looser_than_thm2", 0.0, [] { return alternate_criterion(); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      o.passed = false;
      o.detail += "; over the " + num(c.time_limit) + " s limit";
    }
    std::printf("%s  criterion %2d  %-38s %s [%.2f s]\n", o.passed ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.passed) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
