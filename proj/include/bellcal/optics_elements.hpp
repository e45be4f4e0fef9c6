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

// Transfer-matrix models of the bench elements.
//
// Phase convention: every reflection (PBS, BS, mirror, dichroic) multiplies
// the field by i; transmission is phase-free. The half-wave plate is fixed at
// 45 degrees and swaps V and H. All maps are linear, so they apply equally to
// normalized states and to raw stochastic field samples.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bellcal/core_algebra.hpp"

namespace bellcal {

enum class ElementKind { kPBS, kBS, kHWP, kPolarizerV, kPolarizerH, kMirror, kDichroic };

constexpr std::string_view to_string(ElementKind k) {
  switch (k) {
    case ElementKind::kPBS: return "PBS";
    case ElementKind::kBS: return "BS";
    case ElementKind::kHWP: return "HWP";
    case ElementKind::kPolarizerV: return "PolarizerV";
    case ElementKind::kPolarizerH: return "PolarizerH";
    case ElementKind::kMirror: return "Mirror";
    case ElementKind::kDichroic: return "Dichroic";
  }
  return "?";
}

namespace jones {

inline Matrix2 diag(Complex v, Complex h) {
  Matrix2 m;
  m(0, 0) = v;
  m(1, 1) = h;
  return m;
}

inline Matrix2 scalar(Complex s) { return diag(s, s); }

inline Matrix2 swap() {
  Matrix2 m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

inline Matrix2 zero() { return {}; }

}  // namespace jones

struct PortTransfer {
  std::string in;
  std::string out;
  Matrix2 matrix;
};

/// An element as a set of port-to-port Jones matrices.
struct OpticalElement {
  ElementKind kind;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<PortTransfer> transfers;

  /// Zero when the two ports are not connected.
  Matrix2 transfer(const std::string& in, const std::string& out) const {
    for (const auto& t : transfers)
      if (t.in == in && t.out == out) return t.matrix;
    return jones::zero();
  }

  bool lossless() const {
    return kind == ElementKind::kPBS || kind == ElementKind::kBS || kind == ElementKind::kHWP ||
           kind == ElementKind::kMirror;
  }
};

namespace elements {

inline OpticalElement pbs() {
  const Matrix2 r = jones::diag(kI, 0.0);
  const Matrix2 t = jones::diag(0.0, 1.0);
  return {ElementKind::kPBS,
          {"in", "in2"},
          {"reflected", "transmitted"},
          {{"in", "reflected", r}, {"in", "transmitted", t},
           {"in2", "reflected", t}, {"in2", "transmitted", r}}};
}

inline OpticalElement bs() {
  const Matrix2 r = jones::scalar(kI * kInvSqrt2);
  const Matrix2 t = jones::scalar(kInvSqrt2);
  return {ElementKind::kBS,
          {"in", "in2"},
          {"reflected", "transmitted"},
          {{"in", "reflected", r}, {"in", "transmitted", t},
           {"in2", "reflected", t}, {"in2", "transmitted", r}}};
}

inline OpticalElement hwp() {
  return {ElementKind::kHWP, {"in"}, {"out"}, {{"in", "out", jones::swap()}}};
}

inline OpticalElement mirror() {
  return {ElementKind::kMirror, {"in"}, {"out"}, {{"in", "out", jones::scalar(kI)}}};
}

inline OpticalElement polarizer(Polarization axis) {
  const bool v = axis == Polarization::kV;
  return {v ? ElementKind::kPolarizerV : ElementKind::kPolarizerH,
          {"in"},
          {"out"},
          {{"in", "out", v ? jones::diag(1.0, 0.0) : jones::diag(0.0, 1.0)}}};
}

/// Input ports are named by frequency; `reflected` picks up the factor i.
inline OpticalElement dichroic(Frequency reflected) {
  const auto refl = jones::scalar(kI);
  const auto trans = jones::scalar(1.0);
  const bool red_reflected = reflected == Frequency::kOmega1;
  return {ElementKind::kDichroic,
          {"omega1", "omega2"},
          {"out"},
          {{"omega1", "out", red_reflected ? refl : trans},
           {"omega2", "out", red_reflected ? trans : refl}}};
}

}  // namespace elements

/// Checks T^dagger T = I for the full (outputs x pols) by (inputs x pols) map.
inline bool is_unitary(const OpticalElement& e, double tol = 1e-12) {
  const std::size_t n_in = e.inputs.size();
  for (std::size_t ci = 0; ci < n_in; ++ci)
    for (std::size_t cj = 0; cj < n_in; ++cj) {
      Matrix2 block;
      for (const auto& out : e.outputs) {
        block = block + e.transfer(e.inputs[ci], out).adjoint() * e.transfer(e.inputs[cj], out);
      }
      const Matrix2 expect = ci == cj ? Matrix2::identity() : jones::zero();
      if (max_abs(block - expect) > tol) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Element actions

struct SplitOutputs {
  JonesVector reflected;
  JonesVector transmitted;
};

/// V is reflected with phase i, H transmitted.
inline SplitOutputs pbs_split(const JonesVector& in) {
  static const OpticalElement e = elements::pbs();
  return {e.transfer("in", "reflected") * in, e.transfer("in", "transmitted") * in};
}

/// Polarization-independent 50/50 split.
inline SplitOutputs bs_split(const JonesVector& in) {
  static const OpticalElement e = elements::bs();
  return {e.transfer("in", "reflected") * in, e.transfer("in", "transmitted") * in};
}

inline JonesVector hwp_apply(const JonesVector& in) {
  static const OpticalElement e = elements::hwp();
  return e.transfer("in", "out") * in;
}

/// Unnormalized projection; intensity() of the result is the Malus fraction.
inline JonesVector polarizer_apply(const JonesVector& in, Polarization axis) {
  return elements::polarizer(axis).transfer("in", "out") * in;
}

inline JonesVector mirror_apply(const JonesVector& in) {
  static const OpticalElement e = elements::mirror();
  return e.transfer("in", "out") * in;
}

/// Co-propagating frequency-tagged components of one output path.
struct PathField {
  Path path = Path::kA;
  std::vector<TaggedBeam> beams;

  double intensity() const {
    double s = 0.0;
    for (const auto& b : beams) s += b.field.norm_sq();
    return s;
  }

  const TaggedBeam* find(Source s) const {
    for (const auto& b : beams)
      if (b.tag.source == s) return &b;
    return nullptr;
  }
};

/// Merges two beams of distinct frequency into `output`. Each component only
/// sees the matrix for its own frequency; nothing couples the two.
inline PathField dichroic_combine(const TaggedBeam& first, const TaggedBeam& second,
                                  Frequency reflected, Path output) {
  if (first.tag.frequency() == second.tag.frequency()) {
    throw Error(ErrorCode::kFrequencyCollision,
                "both inputs carry " + std::string(to_string(first.tag.frequency())));
  }
  const OpticalElement e = elements::dichroic(reflected);
  PathField out{output, {}};
  for (const TaggedBeam* b : {&first, &second}) {
    const std::string port(to_string(b->tag.frequency()));
    out.beams.push_back({ModeTag{b->tag.source, output}, e.transfer(port, "out") * b->field});
  }
  return out;
}

}  // namespace bellcal
