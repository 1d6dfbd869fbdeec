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

#pragma once

#include <cstdint>
#include <random>

namespace qarb {

using Engine = std::mt19937_64;

/// Derives the seed of stream `stream` from a root seed. Counter based, so
/// the seed of a stream never depends on how many other streams were drawn.
constexpr std::uint64_t stream_seed(std::uint64_t root, std::uint64_t stream) {
  // splitmix64 finalizer over (root, stream).
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Engine make_engine(std::uint64_t root, std::uint64_t stream = 0) {
  return Engine(stream_seed(root, stream));
}

}  // namespace qarb
