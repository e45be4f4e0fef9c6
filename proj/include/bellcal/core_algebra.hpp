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

// Two-mode (Jones) and four-mode (two-beam) polarization state algebra.
//
// Polarization labels follow the ket convention |v> == |0>, |h> == |1>; a
// JonesVector is indexed by label, not by the (x, y) column layout.
//
// A CompositeState is a bipartite 2x2 amplitude table. Slot a holds the
// polarization of the S1 (red) beam and slot b that of the S2 (blue) beam;
// each term carries ModeTags recording which path each beam occupies. For
// product states and the phi+ bench the slots coincide with paths a and b.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <string_view>

#include "bellcal/error.hpp"
#include "bellcal/tolerances.hpp"

namespace bellcal {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

enum class Polarization : int { kV = 0, kH = 1 };
enum class Source : int { kS1 = 0, kS2 = 1 };
enum class Frequency : int { kOmega1 = 0, kOmega2 = 1 };
enum class Path : int { kA = 0, kB = 1 };

constexpr int index_of(Polarization p) { return static_cast<int>(p); }

constexpr Frequency frequency_of(Source s) {
  return s == Source::kS1 ? Frequency::kOmega1 : Frequency::kOmega2;
}

constexpr Path other(Path p) { return p == Path::kA ? Path::kB : Path::kA; }
constexpr Source other(Source s) { return s == Source::kS1 ? Source::kS2 : Source::kS1; }

constexpr std::string_view to_string(Polarization p) { return p == Polarization::kV ? "V" : "H"; }
constexpr std::string_view to_string(Source s) { return s == Source::kS1 ? "S1" : "S2"; }
constexpr std::string_view to_string(Frequency f) {
  return f == Frequency::kOmega1 ? "omega1" : "omega2";
}
constexpr std::string_view to_string(Path p) { return p == Path::kA ? "a" : "b"; }

/// Identifies one beam in the bench. The frequency is a function of the
/// source, so the S1/omega1 and S2/omega2 pairing cannot be broken.
struct ModeTag {
  Source source = Source::kS1;
  Path path = Path::kA;

  constexpr Frequency frequency() const { return frequency_of(source); }
  friend constexpr auto operator<=>(const ModeTag&, const ModeTag&) = default;
};

// ---------------------------------------------------------------------------
// Dense square matrices

template <std::size_t N>
struct SquareMatrix {
  std::array<Complex, N * N> data{};

  static constexpr std::size_t size() { return N; }

  static SquareMatrix identity() {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  Complex& operator()(std::size_t r, std::size_t c) { return data[r * N + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data[r * N + c]; }

  SquareMatrix adjoint() const {
    SquareMatrix out;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    SquareMatrix out;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t k = 0; k < N; ++k) {
        const Complex ark = a(r, k);
        if (ark == Complex{}) continue;
        for (std::size_t c = 0; c < N; ++c) out(r, c) += ark * b(k, c);
      }
    return out;
  }

  friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) {
    for (std::size_t i = 0; i < N * N; ++i) a.data[i] += b.data[i];
    return a;
  }

  friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) {
    for (std::size_t i = 0; i < N * N; ++i) a.data[i] -= b.data[i];
    return a;
  }

  friend SquareMatrix operator*(Complex s, SquareMatrix a) {
    for (auto& x : a.data) x *= s;
    return a;
  }
};

using Matrix2 = SquareMatrix<2>;
using Matrix4 = SquareMatrix<4>;

/// Largest entry magnitude; the norm used for every matrix tolerance check.
template <std::size_t N>
double max_abs(const SquareMatrix<N>& m) {
  double best = 0.0;
  for (const auto& x : m.data) best = std::max(best, std::abs(x));
  return best;
}

template <std::size_t N, std::size_t M>
SquareMatrix<N * M> kron(const SquareMatrix<N>& a, const SquareMatrix<M>& b) {
  SquareMatrix<N * M> out;
  for (std::size_t ra = 0; ra < N; ++ra)
    for (std::size_t ca = 0; ca < N; ++ca)
      for (std::size_t rb = 0; rb < M; ++rb)
        for (std::size_t cb = 0; cb < M; ++cb)
          out(ra * M + rb, ca * M + cb) = a(ra, ca) * b(rb, cb);
  return out;
}

// ---------------------------------------------------------------------------
// Jones vectors

/// Complex polarization amplitudes of one beam plus the intensity I0 the
/// beam carried before it was last normalized.
class JonesVector {
 public:
  JonesVector() = default;
  JonesVector(Complex v, Complex h) : components_{v, h}, intensity_(norm_sq_of(components_)) {}

  static JonesVector basis(Polarization p) {
    return p == Polarization::kV ? JonesVector{1.0, 0.0} : JonesVector{0.0, 1.0};
  }

  /// Symmetric superposition (|0> + |1>)/sqrt2.
  static JonesVector diagonal() { return {kInvSqrt2, kInvSqrt2}; }

  Complex operator[](Polarization p) const { return components_[index_of(p)]; }
  Complex v() const { return components_[0]; }
  Complex h() const { return components_[1]; }
  const std::array<Complex, 2>& components() const { return components_; }

  double norm_sq() const { return norm_sq_of(components_); }
  double intensity() const { return intensity_; }

  friend JonesVector operator*(const Matrix2& m, const JonesVector& x) {
    return {m(0, 0) * x.components_[0] + m(0, 1) * x.components_[1],
            m(1, 0) * x.components_[0] + m(1, 1) * x.components_[1]};
  }

  friend JonesVector operator*(Complex s, const JonesVector& x) {
    return {s * x.components_[0], s * x.components_[1]};
  }

  friend JonesVector operator+(const JonesVector& x, const JonesVector& y) {
    return {x.components_[0] + y.components_[0], x.components_[1] + y.components_[1]};
  }

  friend Complex inner(const JonesVector& x, const JonesVector& y) {
    return std::conj(x.components_[0]) * y.components_[0] +
           std::conj(x.components_[1]) * y.components_[1];
  }

  friend JonesVector normalize(const JonesVector& x, const Tolerances& tol);

 private:
  static double norm_sq_of(const std::array<Complex, 2>& c) {
    return std::norm(c[0]) + std::norm(c[1]);
  }

  std::array<Complex, 2> components_{};
  double intensity_ = 0.0;
};

struct TaggedBeam {
  ModeTag tag;
  JonesVector field;
};

namespace detail {

// A vector already within a few ulps of unit norm is returned untouched,
// which makes normalize() exactly idempotent.
inline constexpr double kNormalizedUlps = 16.0 * 2.220446049250313e-16;

}  // namespace detail

inline JonesVector normalize(const JonesVector& x, const Tolerances& tol = kDefaultTolerances) {
  const double n2 = x.norm_sq();
  if (!(n2 >= tol.zero_norm_sq)) {
    throw Error(ErrorCode::kZeroNorm, "cannot normalize a Jones vector with squared norm " +
                                          std::to_string(n2));
  }
  if (std::abs(n2 - 1.0) <= detail::kNormalizedUlps) return x;
  JonesVector out = x;
  const double scale = 1.0 / std::sqrt(n2);
  out.components_[0] *= scale;
  out.components_[1] *= scale;
  return out;
}

// ---------------------------------------------------------------------------
// Composite (two-beam) states

constexpr std::size_t basis_index(Polarization a, Polarization b) {
  return static_cast<std::size_t>(2 * index_of(a) + index_of(b));
}

constexpr Polarization slot_a_polarization(std::size_t index) {
  return index / 2 == 0 ? Polarization::kV : Polarization::kH;
}
constexpr Polarization slot_b_polarization(std::size_t index) {
  return index % 2 == 0 ? Polarization::kV : Polarization::kH;
}

/// Beams contributing to one basis term: `a` occupies slot a, `b` slot b.
struct TermTags {
  ModeTag a;
  ModeTag b;

  /// The beam found in `path` for this term.
  ModeTag in_path(Path path) const { return a.path == path ? a : b; }
  friend constexpr bool operator==(const TermTags&, const TermTags&) = default;
};

/// Slot a = S1 in path a, slot b = S2 in path b; the layout of every product state.
inline constexpr TermTags kProductLayout{{Source::kS1, Path::kA}, {Source::kS2, Path::kB}};

class CompositeState {
 public:
  using Amplitudes = std::array<Complex, 4>;
  using TagMap = std::map<std::size_t, TermTags>;

  CompositeState() = default;

  /// Every nonzero amplitude needs a tag entry whose two beams sit in
  /// different paths and come from different sources.
  CompositeState(const Amplitudes& amplitudes, TagMap tags)
      : amplitudes_(amplitudes), tags_(std::move(tags)) {
    for (std::size_t i = 0; i < 4; ++i) {
      if (amplitudes_[i] == Complex{}) continue;
      auto it = tags_.find(i);
      if (it == tags_.end()) {
        throw Error(ErrorCode::kTagConflict,
                    "basis term " + std::to_string(i) + " has no mode tags");
      }
      const auto& t = it->second;
      if (t.a.path == t.b.path || t.a.source == t.b.source) {
        throw Error(ErrorCode::kTagConflict,
                    "basis term " + std::to_string(i) + " places both beams in one path or source");
      }
    }
  }

  /// Tags every term with the product layout.
  static CompositeState with_product_tags(const Amplitudes& amplitudes) {
    TagMap tags;
    for (std::size_t i = 0; i < 4; ++i) tags.emplace(i, kProductLayout);
    return {amplitudes, std::move(tags)};
  }

  const Amplitudes& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }
  Complex amplitude(Polarization a, Polarization b) const { return amplitudes_[basis_index(a, b)]; }
  const TagMap& tags() const { return tags_; }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& x : amplitudes_) s += std::norm(x);
    return s;
  }

  CompositeState scaled(Complex s) const {
    CompositeState out = *this;
    for (auto& x : out.amplitudes_) x *= s;
    return out;
  }

 private:
  Amplitudes amplitudes_{};
  TagMap tags_;
};

inline CompositeState normalize(const CompositeState& s, const Tolerances& tol = kDefaultTolerances) {
  const double n2 = s.norm_sq();
  if (!(n2 >= tol.zero_norm_sq)) {
    throw Error(ErrorCode::kZeroNorm, "cannot normalize a composite state with squared norm " +
                                          std::to_string(n2));
  }
  if (std::abs(n2 - 1.0) <= detail::kNormalizedUlps) return s;
  return s.scaled(1.0 / std::sqrt(n2));
}

/// amplitudes[(i,j)] = beam_a[i] * beam_b[j]; tags propagated to every term.
inline CompositeState tensor(const TaggedBeam& beam_a, const TaggedBeam& beam_b,
                             const Tolerances& tol = kDefaultTolerances) {
  if (beam_a.tag.path == beam_b.tag.path) {
    throw Error(ErrorCode::kTagConflict,
                "both beams claim path " + std::string(to_string(beam_a.tag.path)));
  }
  if (beam_a.tag.source == beam_b.tag.source) {
    throw Error(ErrorCode::kTagConflict,
                "both beams come from " + std::string(to_string(beam_a.tag.source)));
  }
  CompositeState::Amplitudes amps{};
  CompositeState::TagMap tags;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const auto idx = static_cast<std::size_t>(2 * i + j);
      amps[idx] = beam_a.field.components()[i] * beam_b.field.components()[j];
      tags.emplace(idx, TermTags{beam_a.tag, beam_b.tag});
    }
  return normalize(CompositeState{amps, std::move(tags)}, tol);
}

/// Singular values of the 2x2 amplitude table M[pol_a][pol_b], largest first.
inline std::array<double, 2> schmidt_coefficients(const CompositeState& s) {
  const auto& m = s.amplitudes();
  const double frob_sq = s.norm_sq();
  const double det = std::abs(m[0] * m[3] - m[1] * m[2]);
  const double disc = std::sqrt(std::max(0.0, frob_sq * frob_sq - 4.0 * det * det));
  const double largest = std::sqrt(0.5 * (frob_sq + disc));
  const double smallest = largest > 0.0 ? det / largest : 0.0;
  return {largest, smallest};
}

/// 1 for a product state, 2 for a nonseparable one.
inline int schmidt_rank(const CompositeState& s, const Tolerances& tol = kDefaultTolerances) {
  const auto sv = schmidt_coefficients(s);
  return static_cast<int>(sv[0] > tol.schmidt_singular) +
         static_cast<int>(sv[1] > tol.schmidt_singular);
}

/// Max amplitude deviation after rotating `y` by the phase that aligns its
/// component at the largest-magnitude entry of `x`.
inline double global_phase_distance(const CompositeState& x, const CompositeState& y) {
  const auto& ax = x.amplitudes();
  const auto& ay = y.amplitudes();
  std::size_t k = 0;
  for (std::size_t i = 1; i < 4; ++i)
    if (std::abs(ax[i]) > std::abs(ax[k])) k = i;
  Complex phase{1.0, 0.0};
  if (std::abs(ay[k]) > 0.0) phase = std::polar(1.0, std::arg(ax[k]) - std::arg(ay[k]));
  double dev = 0.0;
  for (std::size_t i = 0; i < 4; ++i) dev = std::max(dev, std::abs(ax[i] - phase * ay[i]));
  return dev;
}

inline bool equal_up_to_global_phase(const CompositeState& x, const CompositeState& y,
                                     const Tolerances& tol = kDefaultTolerances) {
  return global_phase_distance(x, y) < tol.phase_equal;
}

// ---------------------------------------------------------------------------
// Operators

enum class Support { kA, kB, kJoint };

struct Operator {
  Matrix4 matrix = Matrix4::identity();
  Support support = Support::kJoint;

  static Operator identity() { return {}; }
  static Operator on_a(const Matrix2& local) { return {kron(local, Matrix2::identity()), Support::kA}; }
  static Operator on_b(const Matrix2& local) { return {kron(Matrix2::identity(), local), Support::kB}; }
  static Operator joint(const Matrix4& m) { return {m, Support::kJoint}; }

  Operator adjoint() const { return {matrix.adjoint(), support}; }

  friend Operator operator*(const Operator& x, const Operator& y) {
    return {x.matrix * y.matrix, x.support == y.support ? x.support : Support::kJoint};
  }
  friend Operator operator+(const Operator& x, const Operator& y) {
    return {x.matrix + y.matrix, x.support == y.support ? x.support : Support::kJoint};
  }
  friend Operator operator-(const Operator& x, const Operator& y) {
    return {x.matrix - y.matrix, x.support == y.support ? x.support : Support::kJoint};
  }
};

inline Operator commutator(const Operator& x, const Operator& y) { return x * y - y * x; }

inline bool is_hermitian(const Operator& op, const Tolerances& tol = kDefaultTolerances) {
  return max_abs(op.matrix - op.matrix.adjoint()) <= tol.hermitian;
}

/// <s|op|s> for Hermitian op.
inline double expectation(const CompositeState& s, const Operator& op,
                          const Tolerances& tol = kDefaultTolerances) {
  const double asym = max_abs(op.matrix - op.matrix.adjoint());
  if (asym > tol.hermitian) {
    throw Error(ErrorCode::kNonHermitian, "operator deviates from its adjoint by " +
                                              std::to_string(asym));
  }
  const auto& a = s.amplitudes();
  Complex acc{};
  for (std::size_t r = 0; r < 4; ++r) {
    if (a[r] == Complex{}) continue;
    Complex row{};
    for (std::size_t c = 0; c < 4; ++c) row += op.matrix(r, c) * a[c];
    acc += std::conj(a[r]) * row;
  }
  if (std::abs(acc.imag()) > tol.imaginary_residue) {
    throw Error(ErrorCode::kNonHermitian,
                "expectation has imaginary part " + std::to_string(acc.imag()));
  }
  return acc.real();
}

}  // namespace bellcal
