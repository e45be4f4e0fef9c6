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

// Builds the phi+ bench state and prints E(theta, phi) and S at the
// standard violating settings next to a product state for comparison.

#include <cstdio>
#include <numbers>

#include "bellcal/bellcal.hpp"

int main() {
  using namespace bellcal;
  constexpr double pi = std::numbers::pi;

  const CompositeState bell = build_bell_analog({Polarization::kV});
  const CompositeState product = build_product_state({pi / 4, 0.0, pi / 4, 0.0});

  std::printf("Schmidt rank: bell %d, product %d\n", schmidt_rank(bell), schmidt_rank(product));
  for (double theta : {0.0, pi / 4, pi / 2}) {
    std::printf("E(%.4f, 0) = %+.6f\n", theta, correlation(bell, {theta, 0.0}));
  }

  const ChshSettings settings{0.0, pi / 4, pi / 2, -pi / 4};
  std::printf("S bell    = %.10f\n", chsh_s(bell, settings).s_value);
  std::printf("S product = %.10f\n", chsh_s(product, settings).s_value);
  std::printf("max |S| product (grid 16) = %.10f\n", std::abs(maximize_s(product, 16).s_value));
  return 0;
}
