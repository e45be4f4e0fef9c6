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

// Phase-setting measurements on the two beams and the CHSH functional.
//
// A setting theta on a side selects the projector pair onto
// (|0> +- e^{i theta} |1>)/sqrt2; the observable sigma_theta is their
// difference. Polarizer-angle settings map onto phase settings by
// phi -> -phi on side b (see chsh_s_polarizer_angles).

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bellcal/circuit_builder.hpp"
#include "bellcal/core_algebra.hpp"
#include "bellcal/error.hpp"

namespace bellcal {

enum class Side { kA, kB };
enum class Outcome { kPlus, kMinus };  // phase offset 0 or pi

struct MeasurementSetting {
  double theta = 0.0;  // side a
  double phi = 0.0;    // side b
};

struct ChshSettings {
  double theta1 = 0.0;
  double phi1 = 0.0;
  double theta2 = 0.0;
  double phi2 = 0.0;
};

/// Signs applied to E(t1,p1), E(t1,p2), E(t2,p1), E(t2,p2).
enum class SignPattern {
  kPlusPlusMinusPlus,  // phase-setting form, the default
  kPlusMinusPlusPlus,  // polarizer-angle form
};

constexpr std::array<double, 4> signs(SignPattern p) {
  return p == SignPattern::kPlusPlusMinusPlus ? std::array<double, 4>{1, 1, -1, 1}
                                              : std::array<double, 4>{1, -1, 1, 1};
}

struct IntensityQuad {
  double i00 = 0.0;
  double i_pipi = 0.0;
  double i_pi0 = 0.0;
  double i0pi = 0.0;

  double sum() const { return i00 + i_pipi + i_pi0 + i0pi; }
};

struct ChshResult {
  ChshSettings settings;
  std::array<double, 4> correlations{};
  double s_value = 0.0;
  bool violates_bound = false;
};

inline constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;

/// 2x2 projector onto (|0> +- e^{i theta}|1>)/sqrt2.
inline Matrix2 local_projector(double theta, Outcome outcome) {
  const double s = outcome == Outcome::kPlus ? 1.0 : -1.0;
  Matrix2 m;
  m(0, 0) = 0.5;
  m(1, 1) = 0.5;
  m(0, 1) = 0.5 * s * std::polar(1.0, -theta);
  m(1, 0) = 0.5 * s * std::polar(1.0, theta);
  return m;
}

/// Projector on `side`, identity on the other.
inline Operator sigma_projector(double theta, Outcome outcome, Side side) {
  const Matrix2 p = local_projector(theta, outcome);
  return side == Side::kA ? Operator::on_a(p) : Operator::on_b(p);
}

/// e^{-i theta}|0><1| + e^{i theta}|1><0| on `side`.
inline Operator sigma_observable(double theta, Side side) {
  return sigma_projector(theta, Outcome::kPlus, side) - sigma_projector(theta, Outcome::kMinus, side);
}

/// <state| sigma_theta (a) sigma_phi (b) |state>.
inline double correlation(const CompositeState& state, const MeasurementSetting& m,
                          const Tolerances& tol = kDefaultTolerances) {
  return expectation(state, sigma_observable(m.theta, Side::kA) * sigma_observable(m.phi, Side::kB),
                     tol);
}

/// Joint-projector expectations for the four outcome pairs. These are
/// probabilities: for a normalized state they sum to 1.
inline IntensityQuad intensity_quad(const CompositeState& state, const MeasurementSetting& m,
                                    const Tolerances& tol = kDefaultTolerances) {
  auto joint = [&](Outcome oa, Outcome ob) {
    const double v = expectation(
        state, sigma_projector(m.theta, oa, Side::kA) * sigma_projector(m.phi, ob, Side::kB), tol);
    return v < 0.0 && v >= -tol.negative_intensity ? 0.0 : v;
  };
  return {joint(Outcome::kPlus, Outcome::kPlus), joint(Outcome::kMinus, Outcome::kMinus),
          joint(Outcome::kMinus, Outcome::kPlus), joint(Outcome::kPlus, Outcome::kMinus)};
}

inline double correlation_from_intensities(const IntensityQuad& q,
                                           const Tolerances& tol = kDefaultTolerances) {
  const double total = q.sum();
  if (!(total > tol.degenerate_quad)) {
    throw Error(ErrorCode::kDegenerateQuad, "intensity sum " + std::to_string(total));
  }
  return (q.i00 + q.i_pipi - q.i_pi0 - q.i0pi) / total;
}

inline ChshResult chsh_s(const CompositeState& state, const ChshSettings& st,
                         SignPattern pattern = SignPattern::kPlusPlusMinusPlus,
                         const Tolerances& tol = kDefaultTolerances) {
  ChshResult r{st, {}, 0.0, false};
  r.correlations = {correlation(state, {st.theta1, st.phi1}, tol),
                    correlation(state, {st.theta1, st.phi2}, tol),
                    correlation(state, {st.theta2, st.phi1}, tol),
                    correlation(state, {st.theta2, st.phi2}, tol)};
  const auto sg = signs(pattern);
  r.s_value = sg[0] * r.correlations[0] + sg[1] * r.correlations[1] + sg[2] * r.correlations[2] +
              sg[3] * r.correlations[3];
  r.violates_bound = std::abs(r.s_value) > 2.0 + tol.violation_margin;
  return r;
}

/// CHSH in polarizer-angle form: E(a,b) - E(a,b') + E(a',b) + E(a',b'),
/// where a polarizer angle on side b is the phase setting -angle.
inline ChshResult chsh_s_polarizer_angles(const CompositeState& state, double theta_a,
                                          double theta_a_prime, double theta_b,
                                          double theta_b_prime,
                                          const Tolerances& tol = kDefaultTolerances) {
  return chsh_s(state, {theta_a, -theta_b, theta_a_prime, -theta_b_prime},
                SignPattern::kPlusMinusPlusPlus, tol);
}

/// sin 2a cos(b - theta) * sin 2g cos(d - phi).
inline double product_state_correlation_closed_form(const ProductStateParams& p,
                                                    const MeasurementSetting& m) {
  return std::sin(2.0 * p.alpha) * std::cos(p.beta - m.theta) * std::sin(2.0 * p.gamma) *
         std::cos(p.delta - m.phi);
}

/// Exhaustive search over the N^4 lattice of angles 2 pi k / N. Ties within
/// 1e-12 keep the lexicographically smallest (theta1, phi1, theta2, phi2).
inline ChshResult grid_search_s(const CompositeState& state, int grid_points_per_angle,
                                SignPattern pattern = SignPattern::kPlusPlusMinusPlus,
                                const Tolerances& tol = kDefaultTolerances) {
  const int n = grid_points_per_angle;
  if (n < 1) throw std::invalid_argument("grid_points_per_angle must be positive");
  const double step = 2.0 * std::numbers::pi / n;
  std::vector<double> lattice(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lattice[i * n + j] = correlation(state, {i * step, j * step}, tol);

  const auto sg = signs(pattern);
  double best = -1.0;
  std::array<int, 4> arg{};
  for (int i1 = 0; i1 < n; ++i1)
    for (int j1 = 0; j1 < n; ++j1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j2 = 0; j2 < n; ++j2) {
          const double s = sg[0] * lattice[i1 * n + j1] + sg[1] * lattice[i1 * n + j2] +
                           sg[2] * lattice[i2 * n + j1] + sg[3] * lattice[i2 * n + j2];
          if (std::abs(s) > best + 1e-12) {
            best = std::abs(s);
            arg = {i1, j1, i2, j2};
          }
        }
  return chsh_s(state, {arg[0] * step, arg[1] * step, arg[2] * step, arg[3] * step}, pattern, tol);
}

namespace detail {

inline double wrap_angle(double x) {
  const double two_pi = 2.0 * std::numbers::pi;
  x = std::fmod(x, two_pi);
  return x < 0.0 ? x + two_pi : x;
}

/// Golden-section maximization on [lo, hi].
template <class F>
double golden_max(F f, double lo, double hi, double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo);
  double x2 = lo + r * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Grid search followed by cyclic coordinate ascent on |S|. Each coordinate
/// is line-searched over one grid spacing either side of the incumbent;
/// sweeps stop once no angle moves by 1e-6 or more.
inline ChshResult maximize_s(const CompositeState& state, int grid_points_per_angle,
                             SignPattern pattern = SignPattern::kPlusPlusMinusPlus,
                             const Tolerances& tol = kDefaultTolerances) {
  if (grid_points_per_angle < 4) {
    throw std::invalid_argument("maximize_s needs at least 4 grid points per angle");
  }
  const ChshResult coarse = grid_search_s(state, grid_points_per_angle, pattern, tol);
  const double sign = coarse.s_value < 0.0 ? -1.0 : 1.0;
  std::array<double, 4> x{coarse.settings.theta1, coarse.settings.phi1, coarse.settings.theta2,
                          coarse.settings.phi2};
  auto objective = [&](const std::array<double, 4>& y) {
    return sign * chsh_s(state, {y[0], y[1], y[2], y[3]}, pattern, tol).s_value;
  };

  constexpr double kAngleTol = 1e-6;
  constexpr int kMaxSweeps = 1000;
  const double window = 2.0 * std::numbers::pi / grid_points_per_angle;
  double current = objective(x);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double moved = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      auto line = [&](double t) {
        auto y = x;
        y[k] = t;
        return objective(y);
      };
      const double t = detail::golden_max(line, x[k] - window, x[k] + window, 1e-9);
      const double value = line(t);
      if (value > current) {
        moved = std::max(moved, std::abs(t - x[k]));
        x[k] = t;
        current = value;
      }
    }
    if (moved < kAngleTol) break;
  }
  for (auto& a : x) a = detail::wrap_angle(a);
  ChshResult refined = chsh_s(state, {x[0], x[1], x[2], x[3]}, pattern, tol);
  return std::abs(refined.s_value) >= std::abs(coarse.s_value) ? refined : coarse;
}

}  // namespace bellcal
