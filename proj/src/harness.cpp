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

#include "crspec/mimo.hpp"
#include "crspec/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <array>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace crspec {

namespace {

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

void parallel_for(int n, const std::function<void(int)>& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

double method_rate(const std::string& method, const ChannelSet& cs,
                   bool* degenerate) {
  if (method == "capacity-noic") return unconstrained_capacity(cs.H, cs.P_t).rate;
  if (method == "capacity") return solve_p1(cs).rate;
  if (method == "dsvd") return dsvd(cs).rate;
  if (method == "white") return white_spectrum(cs).rate;
  if (method == "best-hybrid") return best_hybrid(cs).second.rate;
  if (method == "psvd") {
    try {
      return psvd(cs).rate;
    } catch (const PsvdNotImplementable&) {
      if (degenerate) *degenerate = true;
      return 0.0;
    }
  }
  if (method.rfind("hybrid-b", 0) == 0) {
    const int b = std::stoi(method.substr(8));
    return hybrid(cs, HybridConfig{b}).rate;
  }
  throw std::invalid_argument("unknown method tag: " + method);
}

std::vector<std::string> methods_for(const ScenarioConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::Fig2Capacity:
      return {"capacity-noic", "capacity"};
    case Scenario::Fig3Svd:
      return {"capacity-noic", "capacity", "dsvd", "psvd", "white"};
    case Scenario::Fig4HybridB: {
      std::vector<std::string> m = {"capacity-noic", "capacity"};
      const int b_max = std::min(cfg.M_ts - 1,
                                 std::min(cfg.M_ts, cfg.K));  // single-antenna receivers
      for (int b = 0; b <= b_max; ++b) m.push_back("hybrid-b" + std::to_string(b));
      return m;
    }
    case Scenario::Fig5VsK:
      return {"dsvd", "psvd", "best-hybrid"};
    case Scenario::Fig6Multitone:
      return {"capacity-noic", "capacity", "pertone-select"};
    case Scenario::Custom:
      return {"capacity-noic", "capacity", "dsvd", "psvd", "best-hybrid", "white"};
  }
  return {};
}

void sort_rows(std::vector<ResultRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.method != b.method) return a.method < b.method;
    if (a.pt != b.pt) return a.pt < b.pt;
    return a.scenario < b.scenario;
  });
}

std::vector<ResultRow> run_single_channel(const ScenarioConfig& cfg) {
  const std::vector<std::string> methods = methods_for(cfg);
  const size_t n_pt = cfg.P_t_grid.size();
  const size_t n_m = methods.size();

  // rates[m][p][t]
  std::vector<std::vector<std::vector<double>>> rates(
      n_m, std::vector<std::vector<double>>(n_pt, std::vector<double>(cfg.trials)));
  std::vector<std::vector<std::atomic<bool>>> degen(n_m);
  for (auto& v : degen) {
    v = std::vector<std::atomic<bool>>(n_pt);
    for (auto& f : v) f = false;
  }

  parallel_for(cfg.trials, [&](int t) {
    ChannelSet cs = gen_channels(cfg, static_cast<std::uint64_t>(t));
    for (size_t p = 0; p < n_pt; ++p) {
      cs.P_t = cfg.P_t_grid[p];
      for (size_t m = 0; m < n_m; ++m) {
        bool d = false;
        rates[m][p][t] = method_rate(methods[m], cs, &d);
        if (d) degen[m][p] = true;
      }
    }
  });

  std::vector<ResultRow> rows;
  for (size_t m = 0; m < n_m; ++m) {
    for (size_t p = 0; p < n_pt; ++p) {
      auto [mean, sem] = mean_and_sem(rates[m][p]);
      ResultRow r;
      r.scenario = scenario_name(cfg.scenario);
      r.method = methods[m];
      r.pt = cfg.P_t_grid[p];
      r.snr_db = 10.0 * std::log10(r.pt);
      r.rate_mean = mean;
      r.rate_sem = sem;
      r.trials = cfg.trials;
      r.seed = cfg.seed;
      r.degenerate = degen[m][p];
      rows.push_back(std::move(r));
    }
  }
  sort_rows(rows);
  return rows;
}

std::vector<ResultRow> run_vs_k(const ScenarioConfig& cfg) {
  const std::vector<std::string> methods = methods_for(cfg);
  const double pt = cfg.P_t_grid.empty() ? 10.0 : cfg.P_t_grid.front();
  const int n_k = cfg.K_max - cfg.K_min + 1;
  const size_t n_m = methods.size();

  ScenarioConfig draw_cfg = cfg;
  draw_cfg.K = cfg.K_max;
  draw_cfg.M_k.clear();

  std::vector<std::vector<std::vector<double>>> rates(
      n_m, std::vector<std::vector<double>>(n_k, std::vector<double>(cfg.trials)));
  std::vector<std::vector<std::atomic<bool>>> degen(n_m);
  for (auto& v : degen) {
    v = std::vector<std::atomic<bool>>(n_k);
    for (auto& f : v) f = false;
  }

  parallel_for(cfg.trials, [&](int t) {
    const ChannelSet full = gen_channels(draw_cfg, static_cast<std::uint64_t>(t));
    for (int ki = 0; ki < n_k; ++ki) {
      const int K = cfg.K_min + ki;
      ChannelSet cs;
      cs.H = full.H;
      cs.P_t = pt;
      cs.G.assign(full.G.begin(), full.G.begin() + K);
      cs.Gamma = full.Gamma.head(K);
      for (size_t m = 0; m < n_m; ++m) {
        bool d = false;
        rates[m][ki][t] = method_rate(methods[m], cs, &d);
        if (d) degen[m][ki] = true;
      }
    }
  });

  std::vector<ResultRow> rows;
  for (size_t m = 0; m < n_m; ++m) {
    for (int ki = 0; ki < n_k; ++ki) {
      auto [mean, sem] = mean_and_sem(rates[m][ki]);
      ResultRow r;
      r.scenario = scenario_name(cfg.scenario) + ":K=" + std::to_string(cfg.K_min + ki);
      r.method = methods[m];
      r.pt = pt;
      r.snr_db = 10.0 * std::log10(pt);
      r.rate_mean = mean;
      r.rate_sem = sem;
      r.trials = cfg.trials;
      r.seed = cfg.seed;
      r.degenerate = degen[m][ki];
      rows.push_back(std::move(r));
    }
  }
  sort_rows(rows);
  return rows;
}

std::vector<ResultRow> run_multitone(const ScenarioConfig& cfg) {
  const std::vector<std::string> methods = methods_for(cfg);
  const size_t n_pt = cfg.P_t_grid.size();
  const size_t n_m = methods.size();

  std::vector<std::vector<std::vector<double>>> rates(
      n_m, std::vector<std::vector<double>>(n_pt, std::vector<double>(cfg.trials)));

  parallel_for(cfg.trials, [&](int t) {
    for (size_t p = 0; p < n_pt; ++p) {
      const double pbar = cfg.P_t_grid[p];
      ToneSet ts = gen_tone_set(cfg, static_cast<std::uint64_t>(t), pbar);
      for (size_t m = 0; m < n_m; ++m) {
        double total = 0.0;
        if (methods[m] == "capacity-noic") {
          ToneSet open = ts;
          open.gamma = 1e18;
          total = solve_p6(open).rate_total;
        } else if (methods[m] == "capacity") {
          total = solve_p6(ts).rate_total;
        } else if (methods[m] == "pertone-select") {
          total = per_tone_svd_select(ts).rate_total;
        } else {
          throw std::invalid_argument("unknown multitone method: " + methods[m]);
        }
        rates[m][p][t] = total / cfg.tones;  // bits per complex dimension
      }
    }
  });

  std::vector<ResultRow> rows;
  for (size_t m = 0; m < n_m; ++m) {
    for (size_t p = 0; p < n_pt; ++p) {
      auto [mean, sem] = mean_and_sem(rates[m][p]);
      ResultRow r;
      r.scenario = scenario_name(cfg.scenario);
      r.method = methods[m];
      r.pt = cfg.P_t_grid[p];
      r.snr_db = 10.0 * std::log10(r.pt);
      r.rate_mean = mean;
      r.rate_sem = sem;
      r.trials = cfg.trials;
      r.seed = cfg.seed;
      rows.push_back(std::move(r));
    }
  }
  sort_rows(rows);
  return rows;
}

}  // namespace

Scenario scenario_from_string(const std::string& name) {
  if (name == "fig2" || name == "fig2-capacity") return Scenario::Fig2Capacity;
  if (name == "fig3" || name == "fig3-svd") return Scenario::Fig3Svd;
  if (name == "fig4" || name == "fig4-hybrid-b") return Scenario::Fig4HybridB;
  if (name == "fig5" || name == "fig5-vs-K" || name == "fig5-vs-k") return Scenario::Fig5VsK;
  if (name == "fig6" || name == "fig6-multitone") return Scenario::Fig6Multitone;
  if (name == "custom") return Scenario::Custom;
  throw std::invalid_argument("unknown scenario: " + name);
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Fig2Capacity: return "fig2-capacity";
    case Scenario::Fig3Svd: return "fig3-svd";
    case Scenario::Fig4HybridB: return "fig4-hybrid-b";
    case Scenario::Fig5VsK: return "fig5-vs-K";
    case Scenario::Fig6Multitone: return "fig6-multitone";
    case Scenario::Custom: return "custom";
  }
  return "custom";
}

ScenarioConfig ScenarioConfig::preset(Scenario s) {
  ScenarioConfig c;
  c.scenario = s;
  c.P_t_grid = log_grid(1.0, 100.0, 9);
  switch (s) {
    case Scenario::Fig2Capacity:
      c.M_ts = 4;
      c.M_rs = 1;
      c.K = 1;
      c.gamma = 0.01;
      break;
    case Scenario::Fig3Svd:
      c.M_ts = 2;
      c.M_rs = 2;
      c.K = 1;
      c.gamma = 0.1;
      break;
    case Scenario::Fig4HybridB:
      c.M_ts = 4;
      c.M_rs = 4;
      c.K = 2;
      c.gamma = 0.1;
      break;
    case Scenario::Fig5VsK:
      c.M_ts = 4;
      c.M_rs = 4;
      c.K = 10;
      c.gamma = 0.01;
      c.P_t_grid = {10.0};
      break;
    case Scenario::Fig6Multitone:
      c.M_ts = 2;
      c.M_rs = 2;
      c.K = 1;
      c.gamma = 0.1;
      c.tones = 64;
      c.taps = 4;
      break;
    case Scenario::Custom:
      break;
  }
  return c;
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ScenarioConfig c = preset(
      j.contains("scenario") ? scenario_from_string(j["scenario"].get<std::string>())
                             : Scenario::Custom);
  if (j.contains("mts")) c.M_ts = j["mts"].get<int>();
  if (j.contains("mrs")) c.M_rs = j["mrs"].get<int>();
  if (j.contains("k")) c.K = j["k"].get<int>();
  if (j.contains("m_k")) c.M_k = j["m_k"].get<std::vector<int>>();
  if (j.contains("gamma")) c.gamma = j["gamma"].get<double>();
  if (j.contains("trials")) c.trials = j["trials"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("var_g")) c.var_G = j["var_g"].get<double>();
  if (j.contains("var_h")) c.var_H = j["var_h"].get<double>();
  if (j.contains("tones")) c.tones = j["tones"].get<int>();
  if (j.contains("taps")) c.taps = j["taps"].get<int>();
  if (j.contains("k_min")) c.K_min = j["k_min"].get<int>();
  if (j.contains("k_max")) c.K_max = j["k_max"].get<int>();
  if (j.contains("pt_grid")) {
    c.P_t_grid = j["pt_grid"].get<std::vector<double>>();
  } else if (j.contains("pt_min") || j.contains("pt_max") || j.contains("pt_points")) {
    const double lo = j.value("pt_min", 1.0);
    const double hi = j.value("pt_max", 100.0);
    const int n = j.value("pt_points", 9);
    c.P_t_grid = log_grid(lo, hi, n);
  }
  return c;
}

void ScenarioConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (M_ts < 1 || M_rs < 1 || K < 0) throw std::invalid_argument("config: bad dimensions");
  if (gamma < 0.0) throw std::invalid_argument("config: negative cap");
  if (P_t_grid.empty()) throw std::invalid_argument("config: empty power grid");
  for (size_t i = 0; i < P_t_grid.size(); ++i) {
    if (!(P_t_grid[i] > 0.0) || (i > 0 && P_t_grid[i] <= P_t_grid[i - 1])) {
      throw std::invalid_argument("config: power grid must be positive increasing");
    }
  }
  if (!M_k.empty() && static_cast<int>(M_k.size()) != K) {
    throw std::invalid_argument("config: M_k size must match K");
  }
  if (scenario == Scenario::Fig5VsK && (K_min < 1 || K_max < K_min)) {
    throw std::invalid_argument("config: bad receiver sweep");
  }
  if (scenario == Scenario::Fig6Multitone && (tones < 1 || taps < 1 || taps > tones)) {
    throw std::invalid_argument("config: bad tone/tap counts");
  }
}

ChannelSet gen_channels(const ScenarioConfig& cfg, std::uint64_t trial_index) {
  ChannelSet cs;
  Crng rh(cfg.seed, trial_index, RngRole::SecondaryChannel);
  cs.H = draw_cscg_matrix(cfg.M_rs, cfg.M_ts, cfg.var_H, rh);
  cs.P_t = cfg.P_t_grid.empty() ? 1.0 : cfg.P_t_grid.front();
  cs.Gamma = RVector::Constant(cfg.K, cfg.gamma);
  for (int k = 0; k < cfg.K; ++k) {
    const int mk = cfg.M_k.empty() ? 1 : cfg.M_k[static_cast<size_t>(k)];
    Crng rg(cfg.seed, trial_index, RngRole::CrossChannel, static_cast<std::uint64_t>(k));
    cs.G.push_back(draw_cscg_matrix(mk, cfg.M_ts, cfg.var_G, rg));
  }
  return cs;
}

ToneSet gen_tone_set(const ScenarioConfig& cfg, std::uint64_t trial_index,
                     double pt_per_tone) {
  std::vector<CMatrix> h_taps;
  std::vector<CRowVector> g_taps;
  for (int l = 0; l < cfg.taps; ++l) {
    Crng rh(cfg.seed, trial_index, RngRole::SecondaryTaps, static_cast<std::uint64_t>(l));
    Crng rg(cfg.seed, trial_index, RngRole::CrossTaps, static_cast<std::uint64_t>(l));
    h_taps.push_back(draw_cscg_matrix(cfg.M_rs, cfg.M_ts, cfg.var_H / cfg.taps, rh));
    g_taps.push_back(draw_cscg_matrix(1, cfg.M_ts, cfg.var_G / cfg.taps, rg).row(0));
  }
  return gen_ofdm_channels(h_taps, g_taps, cfg.tones, pt_per_tone * cfg.tones,
                           cfg.gamma);
}

std::vector<ResultRow> run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  switch (cfg.scenario) {
    case Scenario::Fig5VsK:
      return run_vs_k(cfg);
    case Scenario::Fig6Multitone:
      return run_multitone(cfg);
    default:
      return run_single_channel(cfg);
  }
}

void emit(const std::vector<ResultRow>& rows, EmitFormat format, std::ostream& os) {
  if (format == EmitFormat::Csv) {
    os << "scenario,method,pt,snr_db,rate_mean,rate_sem,trials,seed\n";
    for (const auto& r : rows) {
      os << r.scenario << ',' << r.method << ',' << fmt9(r.pt) << ','
         << fmt9(r.snr_db) << ',' << fmt9(r.rate_mean) << ',' << fmt9(r.rate_sem)
         << ',' << r.trials << ',' << r.seed << '\n';
    }
    return;
  }
  os << "[\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << "  {\"scenario\":\"" << r.scenario << "\",\"method\":\"" << r.method
       << "\",\"pt\":" << fmt9(r.pt) << ",\"snr_db\":" << fmt9(r.snr_db)
       << ",\"rate_mean\":" << fmt9(r.rate_mean) << ",\"rate_sem\":"
       << fmt9(r.rate_sem) << ",\"trials\":" << r.trials << ",\"seed\":" << r.seed
       << '}' << (i + 1 < rows.size() ? "," : "") << '\n';
  }
  os << "]\n";
}

void emit_file(const std::vector<ResultRow>& rows, EmitFormat format,
               const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("emit: cannot open " + path);
  emit(rows, format, os);
  if (!os.good()) throw std::runtime_error("emit: write failure on " + path);
}

std::vector<ResultRow> parse_rows_csv(const std::string& text) {
  std::vector<ResultRow> rows;
  std::istringstream is(text);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::array<std::string, 8> cells;
    size_t at = 0;
    for (int c = 0; c < 8; ++c) {
      const size_t comma = line.find(',', at);
      cells[c] = line.substr(at, comma == std::string::npos ? std::string::npos
                                                            : comma - at);
      at = comma == std::string::npos ? line.size() : comma + 1;
    }
    ResultRow r;
    r.scenario = cells[0];
    r.method = cells[1];
    r.pt = std::stod(cells[2]);
    r.snr_db = std::stod(cells[3]);
    r.rate_mean = std::stod(cells[4]);
    r.rate_sem = std::stod(cells[5]);
    r.trials = std::stoi(cells[6]);
    r.seed = std::stoull(cells[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> parse_rows_json(const std::string& text) {
  std::vector<ResultRow> rows;
  for (const auto& j : nlohmann::json::parse(text)) {
    ResultRow r;
    r.scenario = j["scenario"].get<std::string>();
    r.method = j["method"].get<std::string>();
    r.pt = j["pt"].get<double>();
    r.snr_db = j["snr_db"].get<double>();
    r.rate_mean = j["rate_mean"].get<double>();
    r.rate_sem = j["rate_sem"].get<double>();
    r.trials = j["trials"].get<int>();
    r.seed = j["seed"].get<std::uint64_t>();
    rows.push_back(std::move(r));
  }
  return rows;
}

std::pair<double, double> mean_and_sem(const std::vector<double>& values) {
  const size_t n = values.size();
  if (n == 0) return {0.0, 0.0};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  if (n == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return {mean, sd / std::sqrt(static_cast<double>(n))};
}

}  // namespace crspec
