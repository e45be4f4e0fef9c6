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

// The two-source bench: S1 (red, unpolarized) on a polarizing beam splitter,
// S2 (blue) through a polarizer onto a 50/50 beam splitter whose reflected
// arm runs M1 -> HWP -> M2. Dichroic DM1 joins the PBS-reflected red beam with
// the blue arm into path a; DM2 joins the PBS-transmitted red beam with the
// BS-transmitted blue beam into path b. DM1 reflects blue, DM2 reflects red.
//
// With a V polarizer on S2 the output is the phi+ analog, with H the psi+
// analog.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellcal/core_algebra.hpp"
#include "bellcal/optics_elements.hpp"

namespace bellcal {

struct BenchConfig {
  Polarization source2_polarizer = Polarization::kV;
  std::uint64_t seed = 42;  // used by stochastic runs only
};

struct ProductStateParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

struct TraceRecord {
  std::string step;
  std::optional<ElementKind> element;  // empty for the final state assembly
  std::vector<TaggedBeam> input;
  std::vector<TaggedBeam> output;
  std::optional<CompositeState> state;
};

struct BenchOutputs {
  PathField a;
  PathField b;

  const PathField& at(Path p) const { return p == Path::kA ? a : b; }
};

/// Propagates one realization of the two source fields through the bench.
/// The S2 field is taken before its polarizer. With `renormalize_s2` the
/// polarized S2 beam is rescaled to unit intensity (state synthesis); without
/// it the polarizer loss is kept (field propagation).
inline BenchOutputs run_bench(const JonesVector& s1, const JonesVector& s2, const BenchConfig& cfg,
                              bool renormalize_s2, std::vector<TraceRecord>* trace = nullptr) {
  auto log = [trace](std::string step, ElementKind kind, std::vector<TaggedBeam> in,
                     std::vector<TaggedBeam> out) {
    if (trace) trace->push_back({std::move(step), kind, std::move(in), std::move(out), {}});
  };
  // Path labels on S2 before the split are nominal.
  const ModeTag red_src{Source::kS1, Path::kA};
  const ModeTag blue_src{Source::kS2, Path::kB};

  const auto red = pbs_split(s1);
  const TaggedBeam red_a{{Source::kS1, Path::kA}, red.reflected};
  const TaggedBeam red_b{{Source::kS1, Path::kB}, red.transmitted};
  log("PBS", ElementKind::kPBS, {{red_src, s1}}, {red_a, red_b});

  JonesVector blue = polarizer_apply(s2, cfg.source2_polarizer);
  log(cfg.source2_polarizer == Polarization::kV ? "VP" : "HP",
      cfg.source2_polarizer == Polarization::kV ? ElementKind::kPolarizerV
                                                : ElementKind::kPolarizerH,
      {{blue_src, s2}}, {{blue_src, blue}});
  if (renormalize_s2) blue = normalize(blue);

  const auto split = bs_split(blue);
  const TaggedBeam blue_arm{{Source::kS2, Path::kA}, split.reflected};
  const TaggedBeam blue_b{{Source::kS2, Path::kB}, split.transmitted};
  log("BS", ElementKind::kBS, {{blue_src, blue}}, {blue_arm, blue_b});

  const TaggedBeam after_m1{blue_arm.tag, mirror_apply(blue_arm.field)};
  log("M1", ElementKind::kMirror, {blue_arm}, {after_m1});
  const TaggedBeam after_hwp{blue_arm.tag, hwp_apply(after_m1.field)};
  log("HWP", ElementKind::kHWP, {after_m1}, {after_hwp});
  const TaggedBeam after_m2{blue_arm.tag, mirror_apply(after_hwp.field)};
  log("M2", ElementKind::kMirror, {after_hwp}, {after_m2});

  BenchOutputs out;
  out.a = dichroic_combine(red_a, after_m2, Frequency::kOmega2, Path::kA);
  log("DM1", ElementKind::kDichroic, {red_a, after_m2}, out.a.beams);
  out.b = dichroic_combine(red_b, blue_b, Frequency::kOmega1, Path::kB);
  log("DM2", ElementKind::kDichroic, {red_b, blue_b}, out.b.beams);
  return out;
}

/// Joint polarization state of the two output paths: the product of the red
/// and blue beam fields restricted to one beam per path, normalized.
inline CompositeState compose_output_state(const BenchOutputs& out,
                                           const Tolerances& tol = kDefaultTolerances) {
  CompositeState::Amplitudes amps{};
  CompositeState::TagMap tags;
  for (Path red_path : {Path::kA, Path::kB}) {
    const TaggedBeam* red = out.at(red_path).find(Source::kS1);
    const TaggedBeam* blue = out.at(other(red_path)).find(Source::kS2);
    if (!red || !blue) continue;
    const TermTags term{red->tag, blue->tag};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const Complex c = red->field.components()[i] * blue->field.components()[j];
        if (c == Complex{}) continue;
        const auto idx = static_cast<std::size_t>(2 * i + j);
        auto [it, inserted] = tags.emplace(idx, term);
        if (!inserted && !(it->second == term)) {
          throw Error(ErrorCode::kTagConflict,
                      "basis term " + std::to_string(idx) + " is fed by two beam placements");
        }
        amps[idx] += c;
      }
  }
  return normalize(CompositeState{amps, std::move(tags)}, tol);
}

/// Step-by-step log of the bench. The last record carries the output state.
inline std::vector<TraceRecord> trace_bench(const BenchConfig& cfg) {
  std::vector<TraceRecord> trace;
  // Unpolarized sources enter as the symmetric superposition.
  const auto out = run_bench(JonesVector::diagonal(), JonesVector::diagonal(), cfg, true, &trace);
  std::vector<TaggedBeam> beams = out.a.beams;
  beams.insert(beams.end(), out.b.beams.begin(), out.b.beams.end());
  trace.push_back({"output", std::nullopt, beams, {}, compose_output_state(out)});
  return trace;
}

inline CompositeState build_bell_analog(const BenchConfig& cfg) {
  return *trace_bench(cfg).back().state;
}

/// (cos a |0> + e^{ib} sin a |1>)_a (x) (cos g |0> + e^{id} sin g |1>)_b
inline CompositeState build_product_state(const ProductStateParams& p) {
  const JonesVector a{std::cos(p.alpha), std::sin(p.alpha) * std::polar(1.0, p.beta)};
  const JonesVector b{std::cos(p.gamma), std::sin(p.gamma) * std::polar(1.0, p.delta)};
  return tensor({kProductLayout.a, a}, {kProductLayout.b, b});
}

}  // namespace bellcal
