// Copyright 2026 The bellcal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Counter-based random streams: the value at index k depends only on
// (seed, k), so any partition of the index range across workers reproduces
// the same samples.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace bellcal::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// splitmix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Child stream seed for a labelled sub-stream.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t label) {
  return mix64(parent ^ mix64(label + kGolden));
}

/// Raw 64-bit word j of the stream.
constexpr std::uint64_t word(std::uint64_t seed, std::uint64_t j) {
  return mix64(seed + (j + 1) * kGolden);
}

/// Uniform on [0, 1).
constexpr double uniform(std::uint64_t seed, std::uint64_t j) {
  return static_cast<double>(word(seed, j) >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1].
constexpr double uniform_open_low(std::uint64_t seed, std::uint64_t j) {
  return static_cast<double>((word(seed, j) >> 11) + 1) * 0x1.0p-53;
}

/// Circular complex Gaussian with E[|z|^2] = variance, sample k of the stream.
inline std::complex<double> complex_gaussian(std::uint64_t seed, std::uint64_t k, double variance) {
  const double u1 = uniform_open_low(seed, 2 * k);
  const double u2 = uniform(seed, 2 * k + 1);
  const double radius = std::sqrt(-variance * std::log(u1));
  return std::polar(radius, 2.0 * std::numbers::pi * u2);
}

}  // namespace bellcal::rng
