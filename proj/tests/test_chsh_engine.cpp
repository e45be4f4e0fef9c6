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

#include <catch2/catch_amalgamated.hpp>
#include <numbers>
#include <random>

#include "bellcal/chsh_engine.hpp"
#include "test_support.hpp"

using namespace bellcal;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kR{kInvSqrt2, 0.0};

const CompositeState& phi_plus() {
  static const CompositeState s = build_bell_analog({Polarization::kV});
  return s;
}

const CompositeState& psi_plus() {
  static const CompositeState s = build_bell_analog({Polarization::kH});
  return s;
}

// Joint outcome probability computed directly as |<u_a (x) u_b|s>|^2 with
// u = (|0> + sign e^{i angle}|1>)/sqrt2; shares no code with the projectors.
double joint_probability(const CompositeState& s, double theta, double sa, double phi, double sb) {
  const std::array<Complex, 2> ua{kR, sa * kR * std::polar(1.0, theta)};
  const std::array<Complex, 2> ub{kR, sb * kR * std::polar(1.0, phi)};
  Complex overlap{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) overlap += std::conj(ua[i] * ub[j]) * s[2 * i + j];
  return std::norm(overlap);
}

// Dense-grid maximum of |S| evaluated from a correlation function.
template <class E>
double dense_grid_max(E corr, int n) {
  std::vector<double> lattice(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lattice[i * n + j] = corr(2 * kPi * i / n, 2 * kPi * j / n);
  double best = 0.0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int j1 = 0; j1 < n; ++j1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j2 = 0; j2 < n; ++j2)
          best = std::max(best, std::abs(lattice[i1 * n + j1] + lattice[i1 * n + j2] -
                                         lattice[i2 * n + j1] + lattice[i2 * n + j2]));
  return best;
}

}  // namespace

TEST_CASE("sigma_projector_at_zero_projects_onto_diagonal") {
  const auto p = sigma_projector(0.0, Outcome::kPlus, Side::kA);
  Matrix2 d;
  d(0, 0) = d(0, 1) = d(1, 0) = d(1, 1) = 0.5;
  CHECK(max_abs(p.matrix - kron(d, Matrix2::identity())) < 1e-15);
  CHECK(p.support == Support::kA);
}

TEST_CASE("projectors_are_complete_and_idempotent") {
  for (int k = 0; k < 64; ++k) {
    const double theta = 2 * kPi * k / 64;
    for (auto side : {Side::kA, Side::kB}) {
      const auto plus = sigma_projector(theta, Outcome::kPlus, side);
      const auto minus = sigma_projector(theta, Outcome::kMinus, side);
      CHECK(max_abs((plus + minus).matrix - Matrix4::identity()) < 1e-12);
      CHECK(max_abs((plus * plus - plus).matrix) < 1e-12);
      CHECK(max_abs((minus * minus - minus).matrix) < 1e-12);
      CHECK(max_abs((plus * minus).matrix) < 1e-12);
    }
  }
}

TEST_CASE("sigma_observable_properties") {
  Matrix2 x;
  x(0, 1) = x(1, 0) = 1.0;
  CHECK(max_abs(sigma_observable(0.0, Side::kA).matrix - kron(x, Matrix2::identity())) < 1e-15);
  for (int k = 0; k < 64; ++k) {
    const double theta = 2 * kPi * k / 64;
    const auto s = sigma_observable(theta, Side::kA);
    CHECK(is_hermitian(s));
    CHECK(max_abs((s * s).matrix - Matrix4::identity()) < 1e-12);
    Matrix2 closed;
    closed(0, 1) = std::polar(1.0, -theta);
    closed(1, 0) = std::polar(1.0, theta);
    CHECK(max_abs(s.matrix - kron(closed, Matrix2::identity())) < 1e-15);
    for (int j = 0; j < 64; ++j) {
      const auto b = sigma_observable(2 * kPi * j / 64, Side::kB);
      CHECK(max_abs(commutator(s, b).matrix) < 1e-12);
    }
  }
}

TEST_CASE("settings_are_two_pi_periodic") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 50; ++trial) {
    const double theta = testing::random_angle(gen);
    CHECK(max_abs(sigma_observable(theta, Side::kA).matrix -
                  sigma_observable(theta + 2 * kPi, Side::kA).matrix) < 1e-12);
    const auto s = testing::random_state(gen);
    const double phi = testing::random_angle(gen);
    CHECK_THAT(correlation(s, {theta, phi}),
               WithinAbs(correlation(s, {theta + 2 * kPi, phi - 2 * kPi}), 1e-10));
  }
}

TEST_CASE("phi_plus_correlation_is_cos_of_sum") {
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j < 24; ++j) {
      const double t = 2 * kPi * i / 24 - kPi;
      const double p = 2 * kPi * j / 24 - kPi;
      CHECK_THAT(correlation(phi_plus(), {t, p}), WithinAbs(std::cos(t + p), 1e-10));
    }
  CHECK_THAT(correlation(phi_plus(), {kPi / 6, kPi / 3}), WithinAbs(0.0, 1e-12));
}

TEST_CASE("psi_plus_correlation_is_cos_of_difference") {
  for (int i = 0; i < 16; ++i) {
    const double t = 2 * kPi * i / 16;
    CHECK_THAT(correlation(psi_plus(), {t, 0.3}), WithinAbs(std::cos(t - 0.3), 1e-10));
  }
}

TEST_CASE("product_state_correlation_matches_closed_form") {
  CHECK_THAT(product_state_correlation_closed_form({kPi / 4, 0, kPi / 4, 0}, {0, 0}),
             WithinAbs(1.0, 1e-15));
  CHECK(product_state_correlation_closed_form({0.0, 0.4, 1.1, 2.0}, {0.3, 0.9}) == 0.0);

  // 5^4 parameter lattice crossed with an 8^2 setting lattice.
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int g = 0; g < 5; ++g)
        for (int d = 0; d < 5; ++d) {
          const ProductStateParams p{kPi * a / 5 + 0.1, 2 * kPi * b / 5, kPi * g / 5 + 0.2,
                                     2 * kPi * d / 5};
          const auto s = build_product_state(p);
          for (int t = 0; t < 8; ++t)
            for (int f = 0; f < 8; ++f) {
              const MeasurementSetting m{2 * kPi * t / 8, 2 * kPi * f / 8};
              REQUIRE_THAT(correlation(s, m),
                           WithinAbs(product_state_correlation_closed_form(p, m), 1e-10));
            }
        }
}

TEST_CASE("intensity_quad_against_direct_overlaps") {
  // Frozen from the overlap oracle: the four outcome intensities of the
  // phi+ state are (1 +- cos(theta+phi))/4 and always sum to 1.
  const auto q00 = intensity_quad(phi_plus(), {0.0, 0.0});
  CHECK_THAT(q00.i00, WithinAbs(0.5, 1e-12));
  CHECK_THAT(q00.i_pipi, WithinAbs(0.5, 1e-12));
  CHECK_THAT(q00.i_pi0, WithinAbs(0.0, 1e-12));
  const auto q0pi = intensity_quad(phi_plus(), {0.0, kPi});
  CHECK_THAT(q0pi.i00, WithinAbs(0.0, 1e-12));

  std::mt19937_64 gen(32);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const double t = 2 * kPi * i / 16, p = 2 * kPi * j / 16;
      const auto q = intensity_quad(phi_plus(), {t, p});
      CHECK_THAT(q.i00, WithinAbs(joint_probability(phi_plus(), t, 1, p, 1), 1e-12));
      CHECK_THAT(q.i_pipi, WithinAbs(joint_probability(phi_plus(), t, -1, p, -1), 1e-12));
      CHECK_THAT(q.i_pi0, WithinAbs(joint_probability(phi_plus(), t, -1, p, 1), 1e-12));
      CHECK_THAT(q.i0pi, WithinAbs(joint_probability(phi_plus(), t, 1, p, -1), 1e-12));
      CHECK_THAT(q.sum(), WithinAbs(1.0, 1e-12));
    }
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = testing::random_state(gen);
    const double t = testing::random_angle(gen), p = testing::random_angle(gen);
    const auto q = intensity_quad(s, {t, p});
    CHECK_THAT(q.i0pi, WithinAbs(joint_probability(s, t, 1, p, -1), 1e-12));
    CHECK(q.i00 >= 0.0);
    CHECK(q.i_pipi >= 0.0);
  }
}

TEST_CASE("correlation_from_intensities_examples") {
  CHECK(correlation_from_intensities({1, 1, 0, 0}) == 1.0);
  CHECK(correlation_from_intensities({0.5, 0.5, 0.5, 0.5}) == 0.0);
  try {
    (void)correlation_from_intensities({0, 0, 0, 1e-13});
    FAIL("expected DegenerateQuad");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateQuad);
  }
  for (int i = 0; i < 16; ++i) {
    const double t = 2 * kPi * i / 16;
    CHECK_THAT(correlation_from_intensities(intensity_quad(phi_plus(), {t, 0.7})),
               WithinAbs(std::cos(t + 0.7), 1e-10));
  }
}

TEST_CASE("expectation_and_intensity_routes_agree") {
  std::mt19937_64 gen(33);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = testing::random_state(gen);
    const MeasurementSetting m{testing::random_angle(gen), testing::random_angle(gen)};
    const double e = correlation(s, m);
    CHECK(std::abs(e) <= 1.0 + 1e-10);
    CHECK_THAT(correlation_from_intensities(intensity_quad(s, m)), WithinAbs(e, 1e-10));
  }
}

TEST_CASE("chsh_s_examples") {
  const auto r = chsh_s(phi_plus(), {0.0, kPi / 4, kPi / 2, -kPi / 4});
  CHECK_THAT(r.s_value, WithinAbs(kTsirelson, 1e-9));
  CHECK(r.violates_bound);
  const auto flat = chsh_s(phi_plus(), {0, 0, 0, 0});
  CHECK_THAT(flat.s_value, WithinAbs(2.0, 1e-12));
  CHECK_FALSE(flat.violates_bound);
  CHECK(flat.s_value == flat.correlations[0] + flat.correlations[1] - flat.correlations[2] +
                            flat.correlations[3]);
}

TEST_CASE("polarizer_angle_bridge_reproduces_violation") {
  const auto r = chsh_s_polarizer_angles(phi_plus(), kPi / 2, 0.0, kPi / 4, -kPi / 4);
  CHECK_THAT(r.s_value, WithinAbs(kTsirelson, 1e-9));
  for (int i = 0; i < 8; ++i) {
    const double a = kPi * i / 8;
    CHECK_THAT(correlation(phi_plus(), {a, -0.4}), WithinAbs(std::cos(a - 0.4), 1e-10));
  }
}

TEST_CASE("product_states_never_exceed_two") {
  std::mt19937_64 gen(34);
  for (int trial = 0; trial < 500; ++trial) {
    const ProductStateParams p{testing::random_angle(gen), testing::random_angle(gen),
                               testing::random_angle(gen), testing::random_angle(gen)};
    const ChshSettings st{testing::random_angle(gen), testing::random_angle(gen),
                          testing::random_angle(gen), testing::random_angle(gen)};
    CHECK(std::abs(chsh_s(build_product_state(p), st).s_value) <= 2.0 + 1e-9);
  }
}

TEST_CASE("random_states_respect_the_two_root_two_cap") {
  std::mt19937_64 gen(35);
  for (int trial = 0; trial < 500; ++trial) {
    const ChshSettings st{testing::random_angle(gen), testing::random_angle(gen),
                          testing::random_angle(gen), testing::random_angle(gen)};
    CHECK(std::abs(chsh_s(testing::random_state(gen), st).s_value) <= kTsirelson + 1e-9);
  }
}

TEST_CASE("maximize_s_reaches_two_root_two_for_bell_analogs") {
  for (int grid : {4, 5, 16}) {
    CHECK_THAT(std::abs(maximize_s(phi_plus(), grid).s_value), WithinAbs(kTsirelson, 1e-4));
    CHECK_THAT(std::abs(maximize_s(psi_plus(), grid).s_value), WithinAbs(kTsirelson, 1e-4));
  }
}

TEST_CASE("maximize_s_respects_product_bound") {
  std::mt19937_64 gen(36);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int draw = 0; draw < 100; ++draw) {
    const ProductStateParams p{u(gen) / 2, u(gen), u(gen) / 2, u(gen)};
    CHECK(std::abs(maximize_s(build_product_state(p), 8).s_value) <= 2.0 + 1e-6);
  }
}

TEST_CASE("maximize_s_matches_dense_grid_oracles") {
  // |00>: the phase observables have zero mean on a basis state, so E == 0.
  const auto s00 = build_product_state({0, 0, 0, 0});
  const double oracle00 = dense_grid_max(
      [](double t, double p) { return product_state_correlation_closed_form({0, 0, 0, 0}, {t, p}); }, 24);
  CHECK(oracle00 == 0.0);
  CHECK_THAT(std::abs(maximize_s(s00, 16).s_value), WithinAbs(oracle00, 1e-4));

  // Diagonal product state: E = cos(theta) cos(phi); the classical bound is reached.
  const ProductStateParams diag{kPi / 4, 0, kPi / 4, 0};
  const double oracle = dense_grid_max(
      [&](double t, double p) { return product_state_correlation_closed_form(diag, {t, p}); }, 48);
  CHECK_THAT(oracle, WithinAbs(2.0, 1e-12));
  CHECK_THAT(std::abs(maximize_s(build_product_state(diag), 16).s_value), WithinAbs(oracle, 1e-4));
}

TEST_CASE("grid_search_breaks_ties_lexicographically") {
  const int n = 8;
  const double step = 2 * kPi / n;
  const auto r = grid_search_s(phi_plus(), n);
  double best = 0.0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int j1 = 0; j1 < n; ++j1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j2 = 0; j2 < n; ++j2)
          best = std::max(best, std::abs(chsh_s(phi_plus(), {i1 * step, j1 * step, i2 * step, j2 * step}).s_value));
  bool found = false;
  for (int i1 = 0; i1 < n && !found; ++i1)
    for (int j1 = 0; j1 < n && !found; ++j1)
      for (int i2 = 0; i2 < n && !found; ++i2)
        for (int j2 = 0; j2 < n && !found; ++j2) {
          const ChshSettings st{i1 * step, j1 * step, i2 * step, j2 * step};
          if (std::abs(chsh_s(phi_plus(), st).s_value) >= best - 1e-12) {
            found = true;
            CHECK(r.settings.theta1 == st.theta1);
            CHECK(r.settings.phi1 == st.phi1);
            CHECK(r.settings.theta2 == st.theta2);
            CHECK(r.settings.phi2 == st.phi2);
          }
        }
  CHECK(found);
  CHECK_THAT(std::abs(r.s_value), WithinAbs(best, 1e-12));
}

TEST_CASE("maximize_s_is_deterministic") {
  const auto a = maximize_s(phi_plus(), 6);
  const auto b = maximize_s(phi_plus(), 6);
  CHECK(a.s_value == b.s_value);
  CHECK(a.settings.theta1 == b.settings.theta1);
  CHECK(a.settings.phi2 == b.settings.phi2);
  CHECK_THROWS_AS(maximize_s(phi_plus(), 3), std::invalid_argument);
}
