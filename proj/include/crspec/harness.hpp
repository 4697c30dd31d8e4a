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

#pragma once

#include "crspec/model.hpp"
#include "crspec/multichannel.hpp"
#include "crspec/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace crspec {

enum class Scenario {
  Fig2Capacity,
  Fig3Svd,
  Fig4HybridB,
  Fig5VsK,
  Fig6Multitone,
  Custom,
};

Scenario scenario_from_string(const std::string& name);
std::string scenario_name(Scenario s);

/// Monte-Carlo experiment description. Channel entries are i.i.d. CSCG with
/// variance var_H for the secondary link and var_G for the cross channels;
/// the SNR axis is 10 log10(P_t) (per-tone average power for the multitone
/// scenario).
struct ScenarioConfig {
  Scenario scenario = Scenario::Custom;
  int M_ts = 2;
  int M_rs = 2;
  int K = 1;
  std::vector<int> M_k;  // defaults to all-ones when empty
  std::vector<double> P_t_grid;
  double gamma = 0.1;
  int trials = 200;
  std::uint64_t seed = 42;
  double var_G = 0.1;
  double var_H = 1.0;
  int tones = 64;  // multitone scenario
  int taps = 4;
  int K_min = 2;  // receiver sweep of the vs-K scenario
  int K_max = 10;

  /// Canonical configuration of one of the named experiment scenarios.
  static ScenarioConfig preset(Scenario s);
  /// Reads any subset of fields from a JSON object.
  static ScenarioConfig from_json_text(const std::string& text);

  void validate() const;
};

/// Aggregated Monte-Carlo result for one (method, operating point) pair.
/// `degenerate` marks points where the method is structurally infeasible and
/// contributes zero rate; it is not part of the serialized schema.
struct ResultRow {
  std::string scenario;
  std::string method;
  double pt = 0.0;
  double snr_db = 0.0;
  double rate_mean = 0.0;
  double rate_sem = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  bool degenerate = false;
};

/// Channel draw for one trial, deterministic in (cfg.seed, trial_index).
ChannelSet gen_channels(const ScenarioConfig& cfg, std::uint64_t trial_index);

/// Per-trial tone set for the multitone scenario (taps carry variance
/// var/taps so the per-tone variance matches the single-channel scenarios).
ToneSet gen_tone_set(const ScenarioConfig& cfg, std::uint64_t trial_index,
                     double pt_per_tone);

/// Runs a scenario over its power grid and trial count; trials execute in
/// parallel, aggregation is deterministic. Rows come back sorted by
/// (method, pt, scenario).
std::vector<ResultRow> run_scenario(const ScenarioConfig& cfg);

enum class EmitFormat { Csv, Json };

/// Serializes rows (header `scenario,method,pt,snr_db,rate_mean,rate_sem,
/// trials,seed`; floats with 9 significant digits). JSON mirrors the fields.
void emit(const std::vector<ResultRow>& rows, EmitFormat format, std::ostream& os);
void emit_file(const std::vector<ResultRow>& rows, EmitFormat format,
               const std::string& path);

std::vector<ResultRow> parse_rows_csv(const std::string& text);
std::vector<ResultRow> parse_rows_json(const std::string& text);

/// Mean and standard error of the mean of per-trial rates.
std::pair<double, double> mean_and_sem(const std::vector<double>& values);

}  // namespace crspec
