// crspec — transmit spatial-spectrum optimization for spectrum-sharing MIMO links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crspec/harness.hpp"
#include "crspec/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  if (n <= 1 || hi <= lo) {
    g.push_back(lo);
    return g;
  }
  for (int i = 0; i < n; ++i) {
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  }
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmit spatial-spectrum optimization for a spectrum-sharing "
               "secondary MIMO link"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a Monte-Carlo scenario and emit a table");
  std::string scenario = "fig3";
  std::string out_path = "results.csv";
  std::string format = "csv";
  std::string config_path;
  int trials = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double pt_min = 1.0, pt_max = 100.0, gamma = -1.0;
  int pt_points = 9, mts = -1, mrs = -1, k = -1, tones = -1, taps = -1;

  run->add_option("--scenario", scenario,
                  "fig2|fig3|fig4|fig5|fig6|custom (full names accepted)");
  run->add_option("--trials", trials, "Monte-Carlo trials");
  run->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run->add_option("--out", out_path, "output file path");
  run->add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--pt-min", pt_min, "lowest transmit-power budget");
  run->add_option("--pt-max", pt_max, "highest transmit-power budget");
  run->add_option("--pt-points", pt_points, "grid size (log-spaced)");
  run->add_option("--gamma", gamma, "interference-power cap");
  run->add_option("--mts", mts, "transmit antennas");
  run->add_option("--mrs", mrs, "receive antennas");
  run->add_option("--k", k, "number of primary receivers");
  run->add_option("--tones", tones, "tones (multitone scenario)");
  run->add_option("--taps", taps, "multi-path taps (multitone scenario)");
  run->add_option("--config", config_path, "JSON config file (flags override it)");

  auto* verify = app.add_subcommand(
      "verify", "Run the acceptance/property suite (exit 2 on failure)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      const auto results = crspec::verify::run_all(std::cout);
      const bool ok = crspec::verify::all_passed(results);
      std::cout << (ok ? "all criteria passed" : "ACCEPTANCE FAILURE") << "\n";
      return ok ? 0 : 2;
    }

    crspec::ScenarioConfig cfg;
    if (!config_path.empty()) {
      cfg = crspec::ScenarioConfig::from_json_text(slurp(config_path));
      if (run->count("--scenario") > 0) {
        const auto s = crspec::scenario_from_string(scenario);
        if (s != cfg.scenario) {
          crspec::ScenarioConfig fresh = crspec::ScenarioConfig::preset(s);
          fresh.trials = cfg.trials;
          fresh.seed = cfg.seed;
          cfg = fresh;
        }
      }
    } else {
      cfg = crspec::ScenarioConfig::preset(crspec::scenario_from_string(scenario));
    }
    if (trials > 0) cfg.trials = trials;
    if (seed_set) cfg.seed = seed;
    if (gamma >= 0.0) cfg.gamma = gamma;
    if (mts > 0) cfg.M_ts = mts;
    if (mrs > 0) cfg.M_rs = mrs;
    if (k >= 0) cfg.K = k;
    if (tones > 0) cfg.tones = tones;
    if (taps > 0) cfg.taps = taps;
    if (run->count("--pt-min") || run->count("--pt-max") || run->count("--pt-points")) {
      cfg.P_t_grid = log_grid(pt_min, pt_max, pt_points);
    }

    const auto rows = crspec::run_scenario(cfg);
    const auto fmt = format == "json" ? crspec::EmitFormat::Json
                                      : crspec::EmitFormat::Csv;
    crspec::emit_file(rows, fmt, out_path);
    std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
