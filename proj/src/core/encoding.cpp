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

#include "core/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "core/format.hpp"

namespace qarb {

PixelVector::PixelVector(std::vector<double> pixels) : pixels_(std::move(pixels)) {
  require(!pixels_.empty(), ErrorCode::kArgument, "pixel vector is empty");
  for (std::size_t i = 0; i < pixels_.size(); ++i) {
    double& p = pixels_[i];
    require(std::isfinite(p), ErrorCode::kArgument, "pixel is not finite");
    require(p >= -kPixelTol && p <= 1.0 + kPixelTol, ErrorCode::kArgument,
            "pixel " + std::to_string(i) + " = " + format_double(p) +
                " outside [0, 1]");
    p = std::clamp(p, 0.0, 1.0);
  }
}

std::size_t EncodingSpec::dim() const {
  validate();
  const SiteDims dims(n, d);
  return checked_dim_product(dims);
}

void EncodingSpec::validate() const {
  require(d >= 2, ErrorCode::kArgument, "qudit dimension must be >= 2");
  require(n >= 1, ErrorCode::kArgument, "encoding needs at least one site");
}

std::vector<double> sqrt_binomials(std::size_t d) {
  require(d >= 1, ErrorCode::kArgument, "dimension must be positive");
  std::vector<double> out(d);
  const std::size_t top = d - 1;
  if (d <= 16) {
    std::uint64_t c = 1;
    for (std::size_t k = 0; k <= top; ++k) {
      out[k] = std::sqrt(static_cast<double>(c));
      c = c * (top - k) / (k + 1);
    }
    return out;
  }
  const double lg_top = std::lgamma(static_cast<double>(top) + 1.0);
  for (std::size_t k = 0; k <= top; ++k) {
    const double lc = lg_top - std::lgamma(static_cast<double>(k) + 1.0) -
                      std::lgamma(static_cast<double>(top - k) + 1.0);
    out[k] = std::exp(0.5 * lc);
  }
  return out;
}

ComplexVector site_amplitudes(double u, std::size_t d) {
  require(d >= 2, ErrorCode::kArgument, "qudit dimension must be >= 2");
  const double angle = 0.5 * std::numbers::pi * u;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const std::vector<double> root_binom = sqrt_binomials(d);
  ComplexVector amps(static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < d; ++k) {
    const double a = root_binom[k] * std::pow(c, static_cast<double>(d - 1 - k)) *
                     std::pow(s, static_cast<double>(k));
    amps(static_cast<Eigen::Index>(k)) = a;
  }
  return amps;
}

PureState encode(const PixelVector& u, const EncodingSpec& spec) {
  spec.validate();
  require(u.size() == spec.n, ErrorCode::kArgument,
          "pixel count " + std::to_string(u.size()) + " does not match n = " +
              std::to_string(spec.n));
  spec.dim();  // capacity guard
  ComplexVector amps = ComplexVector::Ones(1);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const ComplexVector site = site_amplitudes(u[i], spec.d);
    ComplexVector next(amps.size() * site.size());
    for (Eigen::Index a = 0; a < amps.size(); ++a) {
      next.segment(a * site.size(), site.size()) = amps(a) * site;
    }
    amps = std::move(next);
  }
  // Rounding in the per-site products can leave the norm ~1e-15 off.
  amps /= amps.norm();
  return PureState::from_amplitudes(std::move(amps), SiteDims(spec.n, spec.d));
}

namespace {

void check_pair(const PixelVector& s, const PixelVector& t,
                const EncodingSpec& spec) {
  spec.validate();
  require(s.size() == t.size() && s.size() == spec.n, ErrorCode::kArgument,
          "pixel vectors must both have length n = " + std::to_string(spec.n));
}

// log F = sum_i 2(d-1) log cos(|s_i - t_i| pi / 2); -inf when orthogonal.
double log_closed_fidelity(const PixelVector& s, const PixelVector& t,
                           const EncodingSpec& spec) {
  double acc = 0.0;
  const double power = 2.0 * static_cast<double>(spec.d - 1);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double c = std::cos(0.5 * std::numbers::pi * std::abs(s[i] - t[i]));
    if (c <= 0.0) return -INFINITY;
    acc += power * std::log(c);
  }
  return acc;
}

}  // namespace

double closed_fidelity(const PixelVector& s, const PixelVector& t,
                       const EncodingSpec& spec) {
  check_pair(s, t, spec);
  return std::exp(log_closed_fidelity(s, t, spec));
}

double closed_trace_distance(const PixelVector& s, const PixelVector& t,
                             const EncodingSpec& spec) {
  check_pair(s, t, spec);
  const double one_minus_f = -std::expm1(log_closed_fidelity(s, t, spec));
  return 2.0 * std::sqrt(std::max(0.0, one_minus_f));
}

CosineProductCheck cosine_product_check(std::span<const double> x) {
  require(!x.empty(), ErrorCode::kArgument, "empty angle list");
  double sum = 0.0;
  double prod = 1.0;
  for (double v : x) {
    require(v >= 0.0 && v <= 0.5 * std::numbers::pi + 1e-15,
            ErrorCode::kArgument, "angle outside [0, pi/2]");
    sum += v;
    prod *= std::cos(v);
  }
  const double n = static_cast<double>(x.size());
  CosineProductCheck out;
  out.lhs = std::pow(std::cos(sum / n), n);
  out.rhs = prod;
  out.holds = out.lhs >= out.rhs - 1e-12;
  return out;
}

double l1_bound_translation(std::size_t n, std::size_t d, double lambda1) {
  require(n >= 1 && d >= 2, ErrorCode::kArgument, "need n >= 1 and d >= 2");
  require(lambda1 >= 0.0 && std::isfinite(lambda1), ErrorCode::kArgument,
          "lambda1 must be finite and non-negative");
  const double nd = static_cast<double>(n);
  const double big_n = std::pow(static_cast<double>(d), nd);
  const double x = 2.0 * lambda1 / big_n;
  require(x <= 2.0, ErrorCode::kDomain,
          "2 lambda1 / d^n exceeds 2; cos^-1 argument leaves [-1, 1]");
  const double k = static_cast<double>(d - 1) * nd;
  double angle = 0.0;
  if (x <= 1.0) {
    // 1 - (1 - x)^(1/k), then acos(1 - y) = 2 asin(sqrt(y / 2)).
    const double y = x == 1.0 ? 1.0 : -std::expm1(std::log1p(-x) / k);
    angle = 2.0 * std::asin(std::sqrt(0.5 * y));
  } else {
    const auto ki = static_cast<std::uint64_t>((d - 1) * n);
    require(ki % 2 == 1, ErrorCode::kDomain,
            "negative base with an even root has no real value");
    angle = std::acos(-std::pow(x - 1.0, 1.0 / k));
  }
  return 2.0 * nd / std::numbers::pi * angle;
}

void write_pixel_csv(std::ostream& out, std::span<const PixelVector> rows) {
  for (const PixelVector& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
}

std::vector<PixelVector> read_pixel_csv(std::istream& in) {
  std::vector<PixelVector> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        fail(ErrorCode::kArgument,
             "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
      require(cell.find_first_not_of(" \t", used) == std::string::npos,
              ErrorCode::kArgument,
              "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      values.push_back(v);
    }
    rows.emplace_back(std::move(values));
  }
  return rows;
}

}  // namespace qarb
