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

// Named experiments behind the bellcal command line. Each returns a report
// whose `pass` is the AND of its checks. Invalid arguments throw UsageError.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellcal/chsh_engine.hpp"
#include "bellcal/circuit_builder.hpp"
#include "bellcal/report.hpp"
#include "bellcal/rng.hpp"
#include "bellcal/stochastic_ensemble.hpp"

namespace bellcal {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kDefaultSamples = 1'000'000;
inline constexpr int kDefaultGrid = 16;
inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr double kProductBoundSlack = 1e-6;

namespace detail {

inline Json tag_json(const ModeTag& t) {
  return Json{{"source", to_string(t.source)},
              {"frequency", to_string(t.frequency())},
              {"path", to_string(t.path)}};
}

inline Json beam_json(const TaggedBeam& b) {
  Json j = tag_json(b.tag);
  j["v"] = complex_json(b.field.v());
  j["h"] = complex_json(b.field.h());
  j["intensity"] = b.field.norm_sq();
  return j;
}

inline Json settings_json(const ChshSettings& s) {
  return Json{{"theta1", s.theta1}, {"phi1", s.phi1}, {"theta2", s.theta2}, {"phi2", s.phi2}};
}

inline Json chsh_json(const char* kind, const ChshResult& r) {
  return Json{{"kind", kind},
              {"settings", settings_json(r.settings)},
              {"correlations", r.correlations},
              {"s", r.s_value},
              {"abs_s", std::abs(r.s_value)},
              {"violates_bound", r.violates_bound}};
}

inline Json estimate_json(const std::string& name, const std::string& ch1, const std::string& ch2,
                          const CorrelationEstimate& e, double n_sigma) {
  const bool ok = e.consistent_with_zero(n_sigma);
  return Json{{"kind", "null_check"},
              {"name", name},
              {"channel_1", ch1},
              {"channel_2", ch2},
              {"value", complex_json(e.value)},
              {"std_error", e.std_error},
              {"sigma_distance", e.sigma_distance()},
              {"n_samples", e.n_samples},
              {"pass", ok}};
}

}  // namespace detail

/// The ideal target for each bench configuration, (i/sqrt2)(|00>+|11>) or
/// (i/sqrt2)(|01>+|10>), with the bench's mode tags.
inline CompositeState reference_bell_state(Polarization config) {
  const Complex c = kI * kInvSqrt2;
  const ModeTag red_a{Source::kS1, Path::kA}, red_b{Source::kS1, Path::kB};
  const ModeTag blue_a{Source::kS2, Path::kA}, blue_b{Source::kS2, Path::kB};
  if (config == Polarization::kV) {
    return {{c, 0.0, 0.0, c}, {{0, {red_a, blue_b}}, {3, {red_b, blue_a}}}};
  }
  return {{0.0, c, c, 0.0}, {{1, {red_a, blue_b}}, {2, {red_b, blue_a}}}};
}

inline ExperimentReport run_bell_state(Polarization config) {
  ExperimentReport r;
  r.experiment = "bell-state";
  r.parameters = Json{{"config", to_string(config)}};
  const BenchConfig cfg{config};
  const auto trace = trace_bench(cfg);
  const CompositeState& state = *trace.back().state;

  for (std::size_t i = 0; i < 4; ++i) {
    if (state[i] == Complex{}) continue;
    const auto& tags = state.tags().at(i);
    r.results.push_back(Json{{"kind", "amplitude"},
                             {"index", i},
                             {"pol_a", to_string(slot_a_polarization(i))},
                             {"pol_b", to_string(slot_b_polarization(i))},
                             {"amplitude", complex_json(state[i])},
                             {"beam_a", detail::tag_json(tags.a)},
                             {"beam_b", detail::tag_json(tags.b)}});
  }
  const int rank = schmidt_rank(state);
  const auto sv = schmidt_coefficients(state);
  const double dev = global_phase_distance(reference_bell_state(config), state);
  r.results.push_back(Json{{"kind", "schmidt"}, {"rank", rank}, {"coefficients", sv}});
  r.results.push_back(Json{{"kind", "reference_deviation"}, {"max_amplitude_deviation", dev}});
  for (const auto& step : trace) {
    if (!step.element) continue;
    Json rec{{"kind", "trace"}, {"step", step.step}, {"element", to_string(*step.element)}};
    rec["input"] = Json::array();
    rec["output"] = Json::array();
    for (const auto& b : step.input) rec["input"].push_back(detail::beam_json(b));
    for (const auto& b : step.output) rec["output"].push_back(detail::beam_json(b));
    r.results.push_back(std::move(rec));
  }
  r.pass = rank == 2 && std::abs(state.norm_sq() - 1.0) < kDefaultTolerances.unit_norm &&
           dev < kDefaultTolerances.phase_equal;
  return r;
}

// ---------------------------------------------------------------------------

struct StateSpec {
  enum class Kind { kBellV, kBellH, kProduct } kind = Kind::kBellV;
  ProductStateParams params;

  std::string name() const {
    switch (kind) {
      case Kind::kBellV: return "bell-V";
      case Kind::kBellH: return "bell-H";
      case Kind::kProduct: return "product";
    }
    return "?";
  }

  CompositeState build() const {
    switch (kind) {
      case Kind::kBellV: return build_bell_analog({Polarization::kV});
      case Kind::kBellH: return build_bell_analog({Polarization::kH});
      case Kind::kProduct: return build_product_state(params);
    }
    return {};
  }
};

/// Comma-separated finite doubles; exactly `count` of them.
inline std::vector<double> parse_number_list(const std::string& text, std::size_t count,
                                             double scale = 1.0) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
    if (used != item.size() || !std::isfinite(value)) throw UsageError("not a number: '" + item + "'");
    out.push_back(value * scale);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != count) {
    throw UsageError("expected " + std::to_string(count) + " comma-separated values, got " +
                     std::to_string(out.size()));
  }
  return out;
}

/// Accepts "bell-V", "bell-H", "product(a,b,g,d)", or "product" with the
/// four angles given separately in `params`.
inline StateSpec parse_state_spec(const std::string& text, const std::string& params = "",
                                  bool degrees = false) {
  const double scale = degrees ? std::numbers::pi / 180.0 : 1.0;
  StateSpec s;
  if (text == "bell-V") {
    s.kind = StateSpec::Kind::kBellV;
  } else if (text == "bell-H") {
    s.kind = StateSpec::Kind::kBellH;
  } else if (text.rfind("product", 0) == 0) {
    s.kind = StateSpec::Kind::kProduct;
    std::string list = params;
    if (text.size() > 7) {
      if (text[7] != '(' || text.back() != ')' || !params.empty()) {
        throw UsageError("malformed state spec '" + text + "'");
      }
      list = text.substr(8, text.size() - 9);
    }
    if (list.empty()) throw UsageError("product state needs alpha,beta,gamma,delta");
    const auto v = parse_number_list(list, 4, scale);
    s.params = {v[0], v[1], v[2], v[3]};
  } else {
    throw UsageError("unknown state '" + text + "' (expected bell-V, bell-H or product)");
  }
  if (s.kind != StateSpec::Kind::kProduct && !params.empty()) {
    throw UsageError("state '" + text + "' takes no parameters");
  }
  return s;
}

/// Explicit settings, or a grid search with refinement when `settings` is
/// empty. The E(theta, phi) lattice on the grid is always included.
inline ExperimentReport run_chsh_scan(const StateSpec& spec, std::optional<ChshSettings> settings,
                                      int grid, bool degrees_flag = false) {
  if (grid < 4) throw UsageError("--grid must be at least 4");
  ExperimentReport r;
  r.experiment = "chsh-scan";
  r.parameters = Json{{"state", spec.name()}, {"grid", grid}, {"degrees", degrees_flag}};
  if (spec.kind == StateSpec::Kind::kProduct) {
    r.parameters["product"] = Json{{"alpha", spec.params.alpha}, {"beta", spec.params.beta},
                                   {"gamma", spec.params.gamma}, {"delta", spec.params.delta}};
  }
  const CompositeState state = spec.build();
  bool ok = true;
  const double cap = spec.kind == StateSpec::Kind::kProduct ? 2.0 + kProductBoundSlack
                                                            : kTsirelson + 1e-9;
  r.parameters["s_cap"] = cap;

  if (settings) {
    r.parameters["settings"] = detail::settings_json(*settings);
    const auto res = chsh_s(state, *settings);
    ok = ok && std::abs(res.s_value) <= cap;
    r.results.push_back(detail::chsh_json("chsh", res));
  } else {
    const auto coarse = grid_search_s(state, grid);
    const auto best = maximize_s(state, grid);
    ok = ok && std::abs(best.s_value) <= cap;
    r.results.push_back(detail::chsh_json("grid_max", coarse));
    r.results.push_back(detail::chsh_json("maximize", best));
  }

  const double step = 2.0 * std::numbers::pi / grid;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const double e = correlation(state, {i * step, j * step});
      ok = ok && std::abs(e) <= 1.0 + 1e-10;
      r.results.push_back(Json{{"kind", "lattice"}, {"theta", i * step}, {"phi", j * step}, {"e", e}});
    }
  r.pass = ok;
  return r;
}

// ---------------------------------------------------------------------------

inline ExperimentReport run_thermal_verify(std::size_t n_samples, std::uint64_t seed,
                                           unsigned workers = 1) {
  if (n_samples < 100) throw UsageError("--n must be at least 100");
  ExperimentReport r;
  r.experiment = "thermal-verify";
  const double n_sigma = kDefaultTolerances.sigma_threshold;
  r.parameters = Json{{"n", n_samples}, {"seed", seed}, {"config", "V"},
                      {"s1", "unpolarized"}, {"s2", "unpolarized"}, {"n_sigma", n_sigma}};

  const auto e1 = sample_source({Source::kS1, PolarizationPrep::kUnpolarized, 1.0}, n_samples,
                                rng::derive_seed(seed, 1), workers);
  const auto e2 = sample_source({Source::kS2, PolarizationPrep::kUnpolarized, 1.0}, n_samples,
                                rng::derive_seed(seed, 2), workers);
  const auto paths = propagate_bench(e1, e2, BenchConfig{Polarization::kV, seed});

  using P = Polarization;
  const ChannelKey s1v{Source::kS1, Port::kEmitter, P::kV}, s1h{Source::kS1, Port::kEmitter, P::kH};
  const ChannelKey s2v{Source::kS2, Port::kEmitter, P::kV}, s2h{Source::kS2, Port::kEmitter, P::kH};
  const ChannelKey a1v{Source::kS1, Port::kA, P::kV}, a2h{Source::kS2, Port::kA, P::kH};
  const ChannelKey b1h{Source::kS1, Port::kB, P::kH}, b2v{Source::kS2, Port::kB, P::kV};

  FieldEnsemble emitters{n_samples, seed, {}};
  emitters.channels = e1.channels;
  emitters.channels.insert(e2.channels.begin(), e2.channels.end());

  struct Check {
    const char* name;
    const FieldEnsemble* ens;
    ChannelKey c1, c2;
    bool conj;
  };
  const Check checks[] = {
      {"s1_vh_cross", &emitters, s1v, s1h, true},
      {"s1_vh_product", &emitters, s1v, s1h, false},
      {"path_a_red_blue", &paths, a1v, a2h, true},
      {"path_b_blue_red", &paths, b2v, b1h, true},
      {"cross_path_vertical", &paths, a1v, b2v, true},
      {"cross_path_horizontal", &paths, a2h, b1h, true},
      {"source_independence_vv", &emitters, s1v, s2v, true},
      {"source_independence_hh", &emitters, s1h, s2h, true},
  };
  bool ok = true;
  for (const auto& c : checks) {
    const auto est = correlate(*c.ens, c.c1, c.c2, c.conj);
    auto rec = detail::estimate_json(c.name, to_string(c.c1), to_string(c.c2), est, n_sigma);
    ok = ok && rec["pass"].get<bool>();
    r.results.push_back(std::move(rec));
  }
  {
    const auto est = anticoincidence_check(paths);
    auto rec = detail::estimate_json("red_anticoincidence", to_string(a1v), to_string(b1h), est, n_sigma);
    ok = ok && rec["pass"].get<bool>();
    r.results.push_back(std::move(rec));
  }
  {
    const auto est = intensity_difference(emitters, s1v, s1h);
    auto rec = detail::estimate_json("s1_intensity_balance", to_string(s1v), to_string(s1h), est, n_sigma);
    rec["kind"] = "balance_check";
    ok = ok && rec["pass"].get<bool>();
    r.results.push_back(std::move(rec));
  }
  for (const auto& [key, samples] : paths.channels) {
    const auto est = correlate(paths, key, key, true);
    r.results.push_back(Json{{"kind", "channel_intensity"},
                             {"channel", to_string(key)},
                             {"mean_intensity", est.value.real()},
                             {"std_error", est.std_error}});
  }
  r.pass = ok;
  return r;
}

// ---------------------------------------------------------------------------

/// Draw d uses words 0..3 of the stream derive_seed(seed, d).
inline ProductStateParams random_product_params(std::uint64_t seed, std::uint64_t draw) {
  const std::uint64_t s = rng::derive_seed(seed, draw);
  const double pi = std::numbers::pi;
  return {pi * rng::uniform(s, 0), 2.0 * pi * rng::uniform(s, 1), pi * rng::uniform(s, 2),
          2.0 * pi * rng::uniform(s, 3)};
}

inline ExperimentReport run_product_bound(int draws, std::uint64_t seed, int grid) {
  if (draws < 1) throw UsageError("--draws must be at least 1");
  if (grid < 4) throw UsageError("--grid must be at least 4");
  ExperimentReport r;
  r.experiment = "product-bound";
  r.parameters = Json{{"draws", draws}, {"seed", seed}, {"grid", grid},
                      {"bound", 2.0}, {"slack", kProductBoundSlack}};

  auto record = [&](const char* kind, int index, const ProductStateParams& p) {
    const auto best = maximize_s(build_product_state(p), grid);
    Json rec = detail::chsh_json(kind, best);
    rec["index"] = index;
    rec["params"] = Json{{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}, {"delta", p.delta}};
    r.results.push_back(std::move(rec));
    return std::abs(best.s_value);
  };

  double global = 0.0;
  for (int d = 0; d < draws; ++d) {
    global = std::max(global, record("draw", d, random_product_params(seed, static_cast<std::uint64_t>(d))));
  }
  const double pi = std::numbers::pi;
  const double probe = record("probe", -1, {pi / 4, 0.0, pi / 4, 0.0});
  r.results.push_back(Json{{"kind", "summary"},
                           {"global_max_abs_s", global},
                           {"probe_max_abs_s", probe}});
  r.pass = global <= 2.0 + kProductBoundSlack && probe <= 2.0 + kProductBoundSlack;
  return r;
}

}  // namespace bellcal
