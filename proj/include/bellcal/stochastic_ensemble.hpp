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

// Monte Carlo thermal light. Each realization draws zero-mean circular
// complex Gaussian amplitudes per polarization channel at zero time lag, in a
// single spatial mode.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "bellcal/circuit_builder.hpp"
#include "bellcal/core_algebra.hpp"
#include "bellcal/error.hpp"
#include "bellcal/rng.hpp"

namespace bellcal {

enum class PolarizationPrep { kUnpolarized, kV, kH, kDiagonal };

constexpr std::string_view to_string(PolarizationPrep p) {
  switch (p) {
    case PolarizationPrep::kUnpolarized: return "unpolarized";
    case PolarizationPrep::kV: return "V";
    case PolarizationPrep::kH: return "H";
    case PolarizationPrep::kDiagonal: return "diagonal";
  }
  return "?";
}

/// kDiagonal (E_v == E_h) is fully polarized, not thermal-unpolarized; it
/// exists as a negative control for the anticoincidence check.
struct SourceSpec {
  Source id = Source::kS1;
  PolarizationPrep polarization_prep = PolarizationPrep::kUnpolarized;
  double mean_intensity = 1.0;

  constexpr Frequency frequency() const { return frequency_of(id); }
};

/// Where a channel is observed: at the emitter or in an output path.
enum class Port { kEmitter, kA, kB };

constexpr Port port_of(Path p) { return p == Path::kA ? Port::kA : Port::kB; }

struct ChannelKey {
  Source source = Source::kS1;
  Port port = Port::kEmitter;
  Polarization pol = Polarization::kV;

  friend constexpr auto operator<=>(const ChannelKey&, const ChannelKey&) = default;

  std::uint64_t label() const {
    return static_cast<std::uint64_t>(source) * 16 + static_cast<std::uint64_t>(port) * 4 +
           static_cast<std::uint64_t>(pol);
  }
};

inline std::string to_string(const ChannelKey& k) {
  static constexpr const char* kPorts[] = {"src", "a", "b"};
  return std::string(to_string(k.source)) + "." + kPorts[static_cast<int>(k.port)] + "." +
         std::string(to_string(k.pol));
}

struct FieldEnsemble {
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::map<ChannelKey, std::vector<Complex>> channels;

  bool has(const ChannelKey& k) const { return channels.contains(k); }

  const std::vector<Complex>& channel(const ChannelKey& k) const {
    auto it = channels.find(k);
    if (it == channels.end()) throw Error(ErrorCode::kUnknownChannel, to_string(k));
    return it->second;
  }
};

struct CorrelationEstimate {
  Complex value;
  double std_error = 0.0;
  std::size_t n_samples = 0;

  /// |value| in units of std_error; infinite when std_error is 0 and value is not.
  double sigma_distance() const {
    const double mag = std::abs(value);
    if (std_error > 0.0) return mag / std_error;
    return mag == 0.0 ? 0.0 : INFINITY;
  }

  bool consistent_with_zero(double n_sigma) const { return sigma_distance() < n_sigma; }
};

namespace detail {

template <class Fill>
void parallel_fill(std::size_t n, unsigned workers, Fill fill) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2 * workers) {
    fill(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    pool.emplace_back([&fill, begin, end = std::min(n, begin + chunk)] { fill(begin, end); });
  }
}

}  // namespace detail

/// Channels (id, emitter, V) and (id, emitter, H). Channel streams are seeded
/// from (seed, channel key), so samples do not depend on `workers`.
inline FieldEnsemble sample_source(const SourceSpec& spec, std::size_t n, std::uint64_t seed,
                                   unsigned workers = 1) {
  if (n < 1) throw Error(ErrorCode::kInvalidSampleCount, "need at least one sample");
  const ChannelKey kv{spec.id, Port::kEmitter, Polarization::kV};
  const ChannelKey kh{spec.id, Port::kEmitter, Polarization::kH};
  std::vector<Complex> v(n), h(n);
  const std::uint64_t sv = rng::derive_seed(seed, kv.label());
  const std::uint64_t sh = rng::derive_seed(seed, kh.label());
  const double full = spec.mean_intensity;
  const double half = 0.5 * spec.mean_intensity;

  detail::parallel_fill(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      switch (spec.polarization_prep) {
        case PolarizationPrep::kUnpolarized:
          v[k] = rng::complex_gaussian(sv, k, half);
          h[k] = rng::complex_gaussian(sh, k, half);
          break;
        case PolarizationPrep::kV:
          v[k] = rng::complex_gaussian(sv, k, full);
          break;
        case PolarizationPrep::kH:
          h[k] = rng::complex_gaussian(sh, k, full);
          break;
        case PolarizationPrep::kDiagonal:
          v[k] = h[k] = rng::complex_gaussian(sv, k, half);
          break;
      }
    }
  });

  FieldEnsemble e{n, seed, {}};
  e.channels.emplace(kv, std::move(v));
  e.channels.emplace(kh, std::move(h));
  return e;
}

/// Linear map from one source's emitter amplitudes (V, H) to every output
/// channel that source reaches, obtained by running the bench on basis inputs.
struct SourceTransfer {
  ChannelKey out;
  Complex from_v;
  Complex from_h;
};

inline std::vector<SourceTransfer> bench_transfer(Source source, const BenchConfig& cfg) {
  std::vector<SourceTransfer> result;
  BenchOutputs runs[2];
  for (int in = 0; in < 2; ++in) {
    const JonesVector unit = JonesVector::basis(static_cast<Polarization>(in));
    const JonesVector zero{};
    runs[in] = source == Source::kS1 ? run_bench(unit, zero, cfg, false)
                                     : run_bench(zero, unit, cfg, false);
  }
  for (Path path : {Path::kA, Path::kB})
    for (Polarization pol : {Polarization::kV, Polarization::kH}) {
      const TaggedBeam* from_v = runs[0].at(path).find(source);
      const TaggedBeam* from_h = runs[1].at(path).find(source);
      const Complex cv = from_v ? (*from_v).field[pol] : Complex{};
      const Complex ch = from_h ? (*from_h).field[pol] : Complex{};
      if (cv == Complex{} && ch == Complex{}) continue;
      result.push_back({{source, port_of(path), pol}, cv, ch});
    }
  return result;
}

/// Output-path channels for every realization. Only channels the bench can
/// reach are created (for the V bench: S1.a.V, S1.b.H, S2.a.H, S2.b.V).
inline FieldEnsemble propagate_bench(const FieldEnsemble& e1, const FieldEnsemble& e2,
                                     const BenchConfig& cfg) {
  if (e1.n_samples != e2.n_samples) {
    throw Error(ErrorCode::kSampleCountMismatch, std::to_string(e1.n_samples) + " vs " +
                                                     std::to_string(e2.n_samples));
  }
  const std::size_t n = e1.n_samples;
  FieldEnsemble out{n, rng::derive_seed(e1.seed, e2.seed), {}};
  for (const auto& [src, ens] : {std::pair{Source::kS1, &e1}, std::pair{Source::kS2, &e2}}) {
    const auto& v = ens->channel({src, Port::kEmitter, Polarization::kV});
    const auto& h = ens->channel({src, Port::kEmitter, Polarization::kH});
    for (const auto& t : bench_transfer(src, cfg)) {
      std::vector<Complex> samples(n);
      for (std::size_t k = 0; k < n; ++k) samples[k] = t.from_v * v[k] + t.from_h * h[k];
      out.channels.emplace(t.out, std::move(samples));
    }
  }
  return out;
}

/// (1/n) sum f(x1) x2 with f = conj when `conjugate_first`; std_error is the
/// sample standard deviation of the products over sqrt(n).
inline CorrelationEstimate correlate(const FieldEnsemble& e, const ChannelKey& ch1,
                                     const ChannelKey& ch2, bool conjugate_first = true) {
  const auto& x1 = e.channel(ch1);
  const auto& x2 = e.channel(ch2);
  const std::size_t n = std::min(x1.size(), x2.size());
  auto product = [&](std::size_t k) { return (conjugate_first ? std::conj(x1[k]) : x1[k]) * x2[k]; };
  Complex sum{};
  for (std::size_t k = 0; k < n; ++k) sum += product(k);
  const Complex mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t k = 0; k < n; ++k) ss += std::norm(product(k) - mean);
  const double se = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  return {mean, se, n};
}

/// <|x1|^2> - <|x2|^2> with the two standard errors combined in quadrature.
inline CorrelationEstimate intensity_difference(const FieldEnsemble& e, const ChannelKey& ch1,
                                                const ChannelKey& ch2) {
  const auto i1 = correlate(e, ch1, ch1, true);
  const auto i2 = correlate(e, ch2, ch2, true);
  return {Complex{i1.value.real() - i2.value.real(), 0.0},
          std::hypot(i1.std_error, i2.std_error), i1.n_samples};
}

/// First-order correlation between the red V (path a) and red H (path b)
/// outputs of the PBS.
inline CorrelationEstimate anticoincidence_check(const FieldEnsemble& e) {
  const ChannelKey red_a{Source::kS1, Port::kA, Polarization::kV};
  const ChannelKey red_b{Source::kS1, Port::kB, Polarization::kH};
  if (!e.has(red_a) || !e.has(red_b)) {
    throw Error(ErrorCode::kMissingChannels, "needs " + to_string(red_a) + " and " + to_string(red_b));
  }
  return correlate(e, red_a, red_b, true);
}

}  // namespace bellcal
