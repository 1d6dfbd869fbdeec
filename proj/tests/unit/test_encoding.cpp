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
#include <numbers>
#include <sstream>

#include "core/encoding.hpp"
#include "core/metrics.hpp"
#include "core/random.hpp"
#include "test_util.hpp"

using namespace qarb;

namespace {

PixelVector random_pixels(std::size_t n, Engine& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return PixelVector(v);
}

}  // namespace

TEST_CASE("encode examples") {
  const PureState zero = encode(PixelVector({0.0, 0.0, 0.0}), {2, 3});
  CHECK(std::abs(zero.amplitudes()(0) - Complex(1.0)) < 1e-15);
  CHECK(zero.amplitudes().tail(7).norm() < 1e-15);

  const PureState half = encode(PixelVector({0.5}), {2, 1});
  CHECK(half.amplitudes()(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(half.amplitudes()(1).real() == doctest::Approx(1.0 / std::sqrt(2.0)));

  const PureState q = encode(PixelVector({0.5}), {3, 1});
  CHECK(q.amplitudes()(0).real() == doctest::Approx(0.5));
  CHECK(q.amplitudes()(1).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(q.amplitudes()(2).real() == doctest::Approx(0.5));
  CHECK(q.amplitudes().norm() == doctest::Approx(1.0));
}

TEST_CASE("encode errors") {
  CHECK_CODE(PixelVector({0.5, 1.5}), ErrorCode::kArgument);
  CHECK_CODE(encode(PixelVector({0.5}), {2, 2}), ErrorCode::kArgument);
  CHECK_CODE(encode(PixelVector(std::vector<double>(13, 0.1)), {2, 13}), ErrorCode::kCapacity);
}

TEST_CASE("closed fidelity examples") {
  const PixelVector s({0.2, 0.7});
  CHECK(closed_fidelity(s, s, {3, 2}) == doctest::Approx(1.0));
  CHECK(closed_fidelity(PixelVector({0.0}), PixelVector({1.0}), {2, 1}) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(closed_trace_distance(s, s, {3, 2}) == doctest::Approx(0.0));
  CHECK(closed_trace_distance(PixelVector({0.0}), PixelVector({1.0}), {2, 1}) ==
        doctest::Approx(2.0));
}

TEST_CASE("closed forms match the dense states") {
  Engine rng = make_engine(31);
  for (std::size_t d : {2, 3, 4}) {
    for (std::size_t n = 1; n <= 6; ++n) {
      if (std::pow(double(d), double(n)) > 4096) continue;
      for (int i = 0; i < 5; ++i) {
        const PixelVector s = random_pixels(n, rng);
        const PixelVector t = random_pixels(n, rng);
        const PureState a = encode(s, {d, n});
        const PureState b = encode(t, {d, n});
        const double brute = std::norm(a.amplitudes().dot(b.amplitudes()));
        CHECK(std::abs(closed_fidelity(s, t, {d, n}) - brute) <= 1e-10 * brute);
        if (a.dim() <= 64) {
          const double dense = distance(DistanceKind::kTrace, DensityMatrix::from_pure(a),
                                        DensityMatrix::from_pure(b));
          CHECK(std::abs(closed_trace_distance(s, t, {d, n}) - dense) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("cosine product inequality") {
  const double eq[] = {0.3, 0.3, 0.3};
  const CosineProductCheck c = cosine_product_check(eq);
  CHECK(c.lhs == doctest::Approx(c.rhs));
  CHECK(c.holds);
  const double x[] = {0.0, std::numbers::pi / 2};
  const CosineProductCheck c2 = cosine_product_check(x);
  CHECK(c2.lhs == doctest::Approx(0.5));
  CHECK(c2.rhs == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c2.holds);
  Engine rng = make_engine(32);
  std::uniform_real_distribution<double> a(0.0, std::numbers::pi / 2);
  std::uniform_int_distribution<int> len(1, 16);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    for (double& e : v) e = a(rng);
    CHECK(cosine_product_check(v).holds);
  }
}

TEST_CASE("l1 translation") {
  CHECK(l1_bound_translation(4, 2, 0.0) == 0.0);
  double prev = -1.0;
  for (double lam = 0.0; lam <= 3.0; lam += 0.25) {
    const double v = l1_bound_translation(5, 2, lam);
    CHECK(v > prev);
    prev = v;
  }
  // Inverting the translation recovers the trace bound.
  const double lambda1 = 2.63278;
  const double out = l1_bound_translation(4, 2, lambda1);
  const double lhs = 2.0 - 2.0 * std::pow(std::cos(std::numbers::pi * out / 8.0), 4.0);
  CHECK(std::abs(lhs - 4.0 * lambda1 / 16.0) <= 1e-9);
}

TEST_CASE("pixel csv round trip") {
  Engine rng = make_engine(33);
  std::vector<PixelVector> rows{random_pixels(3, rng), random_pixels(3, rng)};
  std::stringstream buf;
  write_pixel_csv(buf, rows);
  const std::vector<PixelVector> back = read_pixel_csv(buf);
  CHECK(back == rows);
}
