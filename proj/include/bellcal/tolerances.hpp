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

#pragma once

namespace bellcal {

/// Numerical thresholds shared by the library. Functions take a
/// `const Tolerances&` defaulting to `kDefaultTolerances`; tests may pass a
/// modified copy.
struct Tolerances {
  double zero_norm_sq = 1e-30;        // below this a state cannot be normalized
  double unit_norm = 1e-12;           // |norm^2 - 1| accepted as normalized
  double schmidt_singular = 1e-10;    // singular values above this count toward rank
  double hermitian = 1e-10;           // max |A - A^dagger| entry
  double imaginary_residue = 1e-10;   // allowed Im<psi|A|psi> for Hermitian A
  double phase_equal = 1e-10;         // global-phase state equality
  double violation_margin = 1e-9;     // |S| > 2 + margin flags a violation
  double degenerate_quad = 1e-12;     // intensity sum at or below this is unusable
  double negative_intensity = 1e-12;  // round-off below zero clamped to 0
  double sigma_threshold = 5.0;       // statistical null checks, in standard errors
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace bellcal
