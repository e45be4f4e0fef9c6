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

// bellcal: run a named experiment and print its report.
//
//   bellcal bell-state     --config V|H
//   bellcal chsh-scan      bell-V|bell-H|product [a,b,g,d] [--settings t1,p1,t2,p2 | --grid N]
//   bellcal thermal-verify --n N --seed U64
//   bellcal product-bound  --draws N --seed U64 --grid N
//
// Common flags: --format json|csv, --out PATH, --degrees. Exit status is 0
// when the report passes, 1 when a check fails and 2 on a usage error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bellcal/bellcal.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
  std::string format = "json";
  std::string out;
  bool degrees = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", flags.out, "Write the report here instead of stdout");
  cmd->add_flag("--degrees", flags.degrees, "Angles on the command line are in degrees");
}

/// Explicit --seed wins, then BELLCAL_SEED, then the built-in default.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("BELLCAL_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw bellcal::UsageError(std::string("BELLCAL_SEED is not an unsigned integer: ") + env);
  }
  return bellcal::kDefaultSeed;
}

int emit(const bellcal::ExperimentReport& report, const CommonFlags& flags) {
  const std::string text =
      flags.format == "csv" ? bellcal::to_csv(report) : bellcal::to_json(report).dump(2) + "\n";
  if (flags.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(flags.out, std::ios::binary);
    if (!f) {
      std::cerr << "bellcal: cannot open " << flags.out << " for writing\n";
      return kExitUsage;
    }
    f << text;
  }
  return report.pass ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical polarization-optics Bell-analog experiments"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* bell = app.add_subcommand("bell-state", "Synthesize the bench output state");
  std::string config = "V";
  bell->add_option("--config", config, "Polarizer on S2")
      ->check(CLI::IsMember({"V", "H"}))
      ->capture_default_str();
  add_common(bell, flags);

  auto* scan = app.add_subcommand("chsh-scan", "Evaluate or maximize the CHSH functional");
  std::string state_text;
  std::string state_params;
  std::string settings_text;
  int grid = bellcal::kDefaultGrid;
  scan->add_option("state", state_text, "bell-V, bell-H, product or product(a,b,g,d)")->required();
  scan->add_option("params", state_params, "alpha,beta,gamma,delta for a product state");
  auto* settings_opt = scan->add_option("--settings", settings_text, "theta1,phi1,theta2,phi2");
  scan->add_option("--grid", grid, "Grid points per angle")->capture_default_str();
  add_common(scan, flags);

  auto* thermal = app.add_subcommand("thermal-verify", "Monte Carlo thermal-light correlation checks");
  std::size_t n_samples = bellcal::kDefaultSamples;
  std::optional<std::uint64_t> seed_flag;
  unsigned workers = 1;
  thermal->add_option("--n", n_samples, "Realizations")->capture_default_str();
  thermal->add_option("--seed", seed_flag, "Seed (falls back to BELLCAL_SEED, then 42)");
  thermal->add_option("--workers", workers, "Sampling threads")->capture_default_str();
  add_common(thermal, flags);

  auto* bound = app.add_subcommand("product-bound", "Randomized |S| <= 2 audit over product states");
  int draws = 100;
  int bound_grid = bellcal::kDefaultGrid;
  bound->add_option("--draws", draws, "Random product states")->capture_default_str();
  bound->add_option("--seed", seed_flag, "Seed (falls back to BELLCAL_SEED, then 42)");
  bound->add_option("--grid", bound_grid, "Grid points per angle")->capture_default_str();
  add_common(bound, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*bell) {
      return emit(bellcal::run_bell_state(config == "V" ? bellcal::Polarization::kV
                                                         : bellcal::Polarization::kH),
                  flags);
    }
    if (*scan) {
      const auto spec = bellcal::parse_state_spec(state_text, state_params, flags.degrees);
      std::optional<bellcal::ChshSettings> settings;
      if (*settings_opt) {
        const double scale = flags.degrees ? std::numbers::pi / 180.0 : 1.0;
        const auto v = bellcal::parse_number_list(settings_text, 4, scale);
        settings = bellcal::ChshSettings{v[0], v[1], v[2], v[3]};
      }
      return emit(bellcal::run_chsh_scan(spec, settings, grid, flags.degrees), flags);
    }
    if (*thermal) {
      return emit(bellcal::run_thermal_verify(n_samples, resolve_seed(seed_flag), workers), flags);
    }
    if (*bound) {
      return emit(bellcal::run_product_bound(draws, resolve_seed(seed_flag), bound_grid), flags);
    }
  } catch (const bellcal::UsageError& e) {
    std::cerr << "bellcal: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "bellcal: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
