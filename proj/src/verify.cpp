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

#include "crspec/verify.hpp"

#include "crspec/harness.hpp"
#include "crspec/matkernel.hpp"
#include "crspec/mimo.hpp"
#include "crspec/miso.hpp"
#include "crspec/multichannel.hpp"
#include "crspec/oracles.hpp"
#include "crspec/rng.hpp"
#include "crspec/theory.hpp"
#include "crspec/waterfill.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace crspec::verify {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

ChannelSet miso_instance(std::uint64_t seed, std::uint64_t trial, int m_ts,
                         double P_t, double gamma) {
  ChannelSet cs;
  Crng rh(seed, trial, RngRole::SecondaryChannel);
  Crng rg(seed, trial, RngRole::CrossChannel);
  cs.H = draw_cscg_matrix(1, m_ts, 1.0, rh);
  cs.G = {draw_cscg_matrix(1, m_ts, 0.1, rg)};
  cs.P_t = P_t;
  cs.Gamma = RVector::Constant(1, gamma);
  return cs;
}

ChannelSet mimo_instance(std::uint64_t seed, std::uint64_t trial, int m_rs,
                         int m_ts, int K, double P_t, double gamma) {
  ChannelSet cs;
  Crng rh(seed, trial, RngRole::SecondaryChannel);
  cs.H = draw_cscg_matrix(m_rs, m_ts, 1.0, rh);
  cs.P_t = P_t;
  cs.Gamma = RVector::Constant(K, gamma);
  for (int k = 0; k < K; ++k) {
    Crng rg(seed, trial, RngRole::CrossChannel, static_cast<std::uint64_t>(k));
    cs.G.push_back(draw_cscg_matrix(1, m_ts, 0.1, rg));
  }
  return cs;
}

// --- Criterion 1: MISO closed form vs general solver ----------------------

CriterionResult criterion1() {
  CriterionResult r{1, "miso closed form matches solver", true, "", 0};
  const auto t0 = Clock::now();
  const double gammas[3] = {0.01, 0.1, 1.0};
  const double powers[3] = {1.0, 10.0, 100.0};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double gamma = gammas[i % 3];
    const double pt = powers[(i / 3) % 3];
    const ChannelSet cs = miso_instance(101, i, 4, pt, gamma);
    const PrecoderResult closed =
        theorem2_beamformer(cs.H.row(0), cs.G[0].row(0), pt, gamma);
    const PrecoderResult general = solve_p1(cs);
    worst = std::max(worst, std::abs(closed.rate - general.rate));
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.passed = worst <= 1e-5 && r.seconds < 10.0;
  r.detail = fmt("max |rate diff| = %.3g bits (limit 1e-5), %.1f s (limit 10)",
                 worst, r.seconds);
  return r;
}

// --- Criterion 2: rank-one optimality on MISO instances --------------------

CriterionResult criterion2() {
  CriterionResult r{2, "solver returns rank-one spectra on MISO", true, "", 0};
  const auto t0 = Clock::now();
  const double gammas[3] = {0.01, 0.1, 1.0};
  const double powers[3] = {1.0, 10.0, 100.0};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ChannelSet cs = miso_instance(101, i, 4, powers[(i / 3) % 3], gammas[i % 3]);
    const PrecoderResult general = solve_p1(cs);
    auto [V, d] = herm_eig(general.cov.S);
    if (d(0) > 0.0) worst = std::max(worst, std::abs(d(1)) / d(0));
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.passed = worst <= 1e-6;
  r.detail = fmt("max lambda2/lambda1 = %.3g (limit 1e-6)", worst);
  return r;
}

// --- Criterion 3: projected precoder optimal at a zero cap -----------------

CriterionResult criterion3() {
  CriterionResult r{3, "projected precoder optimal at zero cap", true, "", 0};
  const auto t0 = Clock::now();
  double worst_rate = 0.0, worst_interf = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ChannelSet cs = mimo_instance(303, i, 2, 4, 1, 10.0, 0.0);
    const PrecoderResult proj = psvd(cs);
    const PrecoderResult general = solve_p1(cs);
    worst_rate = std::max(worst_rate, std::abs(proj.rate - general.rate));
    worst_interf = std::max(worst_interf, proj.interference.maxCoeff());
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.passed = worst_rate <= 1e-5 && worst_interf <= 1e-12;
  r.detail = fmt("max |rate diff| = %.3g bits (limit 1e-5), max interference = %.3g",
                 worst_rate, worst_interf);
  return r;
}

// --- Criterion 4: direct precoder optimal when the cap is slack ------------

CriterionResult criterion4() {
  CriterionResult r{4, "direct precoder optimal with slack cap", true, "", 0};
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ChannelSet cs = mimo_instance(404, i, 4, 4, 1, 10.0, 1e6);
    const PrecoderResult d = dsvd(cs);
    const PrecoderResult wf = unconstrained_capacity(cs.H, cs.P_t);
    worst = std::max(worst, std::abs(d.rate - wf.rate));
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.passed = worst <= 1e-8;
  r.detail = fmt("max |rate diff| = %.3g bits (limit 1e-8)", worst);
  return r;
}

// --- Criterion 5: duality-gap certificates ---------------------------------

CriterionResult criterion5() {
  CriterionResult r{5, "duality-gap certificates", true, "", 0};
  const auto t0 = Clock::now();
  double worst_p1 = 0.0, worst_p6 = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ChannelSet cs = mimo_instance(505, i, 4, 4, 2, 10.0, 0.1);
    worst_p1 = std::max(worst_p1, solve_p1(cs).duality_gap);
  }
  ScenarioConfig cfg = ScenarioConfig::preset(Scenario::Fig6Multitone);
  cfg.tones = 8;
  cfg.seed = 515;
  for (int i = 0; i < 100; ++i) {
    const ToneSet ts = gen_tone_set(cfg, static_cast<std::uint64_t>(i), 10.0);
    worst_p6 = std::max(worst_p6, solve_p6(ts).duality_gap);
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.passed = worst_p1 <= 1e-4 && worst_p6 <= 1e-4;
  r.detail = fmt("max gap: single-channel %.3g, multi-channel %.3g (limit 1e-4)",
                 worst_p1, worst_p6);
  return r;
}

// --- Criterion 6: capacity-loss bound never violated ------------------------

CriterionResult criterion6() {
  CriterionResult r{6, "capacity-loss bound dominates actual loss", true, "", 0};
  const auto t0 = Clock::now();
  int violations = 0;
  double margin = 1e300;
  for (int i = 0; i < 1000; ++i) {
    Crng rng(606, i, RngRole::Auxiliary);
    const int mk = 1 + static_cast<int>(rng.next_u64() % 3);
    const int nk = 1 + static_cast<int>(rng.next_u64() % 3);
    const int m_ts = 4;
    const double phi = rng.uniform(0.5, 2.0);
    const double cap = rng.uniform(0.0, 1.0);

    PrimaryLink p;
    Crng rh(606, i, RngRole::SecondaryChannel);
    Crng rg(606, i, RngRole::CrossChannel);
    p.H_k = draw_cscg_matrix(mk, nk, 1.0, rh);
    p.phi_k = phi;
    p.G_k = draw_cscg_matrix(mk, m_ts, 0.1, rg);
    const CMatrix Xs = draw_cscg_matrix(nk, nk, 1.0, rh);
    p.S_k = Xs * Xs.adjoint();

    const CMatrix Y = draw_cscg_matrix(m_ts, m_ts, 1.0, rg);
    CMatrix S0 = Y * Y.adjoint();
    const double i0 = (p.G_k * S0 * p.G_k.adjoint()).trace().real();
    const double u = rng.uniform();
    p.S = i0 > 0.0 ? (S0 * (u * cap / i0)).eval() : CMatrix::Zero(m_ts, m_ts);

    const double actual = capacity_loss_actual(p);
    const double bound = capacity_loss_bound(mk, nk, cap, phi);
    if (actual > bound + 1e-12) ++violations;
    margin = std::min(margin, bound - actual);
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.passed = violations == 0;
  r.detail = fmt("violations = %.0f / 1000, smallest margin = %.3g bits",
                 static_cast<double>(violations), margin);
  return r;
}

// --- Criterion 7: high-power slopes ----------------------------------------

CriterionResult criterion7() {
  CriterionResult r{7, "high-power multiplexing slopes", true, "", 0};
  const auto t0 = Clock::now();
  RVector grid(3);
  grid << 1e3, 1e4, 1e5;
  double s_opt = 0.0, s_psvd = 0.0, s_dsvd = 0.0;
  const int seeds = 50;
  for (int i = 0; i < seeds; ++i) {
    ChannelSet cs = mimo_instance(707, i, 2, 2, 1, 1.0, 0.1);
    auto rate_of = [&cs](auto solver) {
      return [&cs, solver](double pt) {
        ChannelSet c = cs;
        c.P_t = pt;
        return solver(c);
      };
    };
    s_opt += multiplexing_slope(
        rate_of([](const ChannelSet& c) { return solve_p1(c).rate; }), grid);
    s_psvd += multiplexing_slope(
        rate_of([](const ChannelSet& c) { return psvd(c).rate; }), grid);
    s_dsvd += multiplexing_slope(
        rate_of([](const ChannelSet& c) { return dsvd(c).rate; }), grid);
  }
  s_opt /= seeds;
  s_psvd /= seeds;
  s_dsvd /= seeds;
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.passed = s_opt >= 0.9 && s_opt <= 1.1 && s_psvd >= 0.9 && s_psvd <= 1.1 &&
             s_dsvd <= 0.05 && r.seconds < 60.0;
  r.detail = fmt("mean slopes: optimal %.3f, projected %.3f, direct %.3f", s_opt,
                 s_psvd, s_dsvd) +
             fmt(" (%.1f s, limit 60)", r.seconds);
  return r;
}

// --- Criterion 8: low-power limit -------------------------------------------

CriterionResult criterion8() {
  CriterionResult r{8, "low-power limit of the direct precoder", true, "", 0};
  const auto t0 = Clock::now();
  const double pt = 1e-4;
  double worst_rel = 0.0;
  int order_violations = 0;
  for (int i = 0; i < 100; ++i) {
    const ChannelSet cs = mimo_instance(808, i, 2, 2, 1, pt, 0.1);
    const PrecoderResult d = dsvd(cs);
    const PrecoderResult p = psvd(cs);
    const double lambda1 = svd(cs.H).lambda(0);
    const double approx = lambda1 * pt / kLn2;
    worst_rel = std::max(worst_rel, std::abs(d.rate - approx) / d.rate);
    if (d.rate < p.rate - 1e-12) ++order_violations;
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.passed = worst_rel <= 0.01 && order_violations == 0;
  r.detail = fmt("max relative error = %.3g (limit 0.01), order violations = %.0f",
                 worst_rel, static_cast<double>(order_violations));
  return r;
}

// --- Criterion 9: grid-oracle equivalence -----------------------------------

CriterionResult criterion9() {
  CriterionResult r{9, "allocators match exhaustive grid oracles", true, "", 0};
  const auto t0 = Clock::now();
  double worst_a1 = 0.0, worst_p7 = 0.0;
  for (int i = 0; i < 50; ++i) {
    Crng rng(909, i, RngRole::Auxiliary);
    RVector lambda(2), alpha(2);
    lambda << rng.uniform(0.5, 6.0), rng.uniform(0.5, 6.0);
    alpha << rng.uniform(0.0, 0.5), rng.uniform(0.0, 0.5);
    const double pt = rng.uniform(0.5, 3.0);
    const double gamma = rng.uniform(0.05, 0.5);
    const WfAllocation a = solve_a1(lambda, alpha, pt, gamma);
    const double oracle = oracles::grid_rate_two_subchannels(
        lambda(0), lambda(1), alpha(0), alpha(1), pt, gamma, 2000);
    worst_a1 = std::max(worst_a1, std::abs(a.rate(lambda) - oracle));
  }
  for (int i = 0; i < 50; ++i) {
    Crng rng(919, i, RngRole::Auxiliary);
    Eigen::Vector2d h(rng.gauss(), rng.gauss());
    Eigen::Vector2d g(rng.gauss() * std::sqrt(0.1), rng.gauss() * std::sqrt(0.1));
    const double nu = rng.uniform(0.1, 1.0);
    const double gamma = rng.uniform(0.05, 0.3);
    CMatrix H(1, 2);
    H << h(0), h(1);
    CRowVector gv(2);
    gv << g(0), g(1);
    const Covariance S = solve_p7(H, gv, nu, gamma);
    const double obj =
        achievable_rate(S.S, H) - nu * S.trace();
    const double oracle = oracles::grid_p7_objective_miso_real(h, g, nu, gamma, 2000);
    worst_p7 = std::max(worst_p7, std::abs(obj - oracle));
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.passed = worst_a1 <= 1e-3 && worst_p7 <= 1e-3;
  r.detail = fmt("max |objective diff|: allocator %.3g, per-tone %.3g (limit 1e-3)",
                 worst_a1, worst_p7);
  return r;
}

// --- Criterion 10: figure-shape reproduction --------------------------------

std::map<std::pair<std::string, double>, double> mean_by_method_pt(
    const std::vector<ResultRow>& rows) {
  std::map<std::pair<std::string, double>, double> m;
  for (const auto& row : rows) m[{row.method, row.pt}] = row.rate_mean;
  return m;
}

CriterionResult criterion10() {
  CriterionResult r{10, "figure-shape reproduction at 200 trials", true, "", 0};
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = true;

  // (a) rates of the SVD precoders against constrained capacity.
  {
    ScenarioConfig cfg = ScenarioConfig::preset(Scenario::Fig3Svd);
    const auto rows = run_scenario(cfg);
    const auto mean = mean_by_method_pt(rows);
    const double cap0 = mean.at({"capacity", 1.0});
    const double cap20 = mean.at({"capacity", 100.0});
    const double d0 = mean.at({"dsvd", 1.0});
    const double p20 = mean.at({"psvd", 100.0});
    const double d10 = mean.at({"dsvd", 10.0});
    const double d20 = mean.at({"dsvd", 100.0});
    const double rel_d = std::abs(cap0 - d0) / cap0;
    const double rel_p = std::abs(cap20 - p20) / cap20;
    const double slope = (d20 - d10) / std::log2(10.0);
    const bool pass = rel_d <= 0.02 && rel_p <= 0.02 && slope <= 0.2;
    ok = ok && pass;
    detail += fmt("(a) direct@0dB %.3f%%, projected@20dB %.3f%%, ", 100 * rel_d,
                  100 * rel_p) +
              fmt("direct slope %.3f; ", slope);
  }

  // (b) majority-vote best b moves from 0 to full projection with SNR.
  {
    ScenarioConfig cfg = ScenarioConfig::preset(Scenario::Fig4HybridB);
    std::vector<int> majority(cfg.P_t_grid.size(), 0);
    std::vector<std::array<int, 3>> counts(cfg.P_t_grid.size(), {0, 0, 0});
    for (int t = 0; t < cfg.trials; ++t) {
      ChannelSet cs = gen_channels(cfg, static_cast<std::uint64_t>(t));
      for (size_t p = 0; p < cfg.P_t_grid.size(); ++p) {
        cs.P_t = cfg.P_t_grid[p];
        int best_b = 0;
        double best_rate = -1.0;
        for (int b = 0; b <= 2; ++b) {
          const double rate = hybrid(cs, HybridConfig{b}).rate;
          if (rate > best_rate) {
            best_rate = rate;
            best_b = b;
          }
        }
        counts[p][best_b] += 1;
      }
    }
    bool nondecreasing = true;
    for (size_t p = 0; p < counts.size(); ++p) {
      majority[p] = static_cast<int>(std::max_element(counts[p].begin(),
                                                      counts[p].end()) -
                                     counts[p].begin());
      if (p > 0 && majority[p] < majority[p - 1]) nondecreasing = false;
    }
    const bool pass =
        majority.front() == 0 && majority.back() == 2 && nondecreasing;
    ok = ok && pass;
    detail += "(b) majority b:";
    for (int b : majority) detail += " " + std::to_string(b);
    detail += "; ";
  }

  // (c) adaptive projection depth beats both fixed precoders for every K.
  {
    ScenarioConfig cfg = ScenarioConfig::preset(Scenario::Fig5VsK);
    const auto rows = run_scenario(cfg);
    std::map<std::string, std::map<std::string, double>> by_k;
    for (const auto& row : rows) by_k[row.scenario][row.method] = row.rate_mean;
    bool pass = true;
    for (const auto& [k_label, methods] : by_k) {
      const double bh = methods.at("best-hybrid");
      if (bh < methods.at("dsvd") - 1e-9 || bh < methods.at("psvd") - 1e-9) {
        pass = false;
      }
    }
    ok = ok && pass;
    detail += fmt("(c) adaptive-b dominates at all K: %.0f; ", pass ? 1.0 : 0.0);
  }

  // (d) per-tone selection narrows the gap to capacity versus one channel.
  {
    ScenarioConfig cfg = ScenarioConfig::preset(Scenario::Fig6Multitone);
    cfg.P_t_grid = {10.0};
    const auto rows = run_scenario(cfg);
    const auto mean = mean_by_method_pt(rows);
    const double gap_multi =
        mean.at({"capacity", 10.0}) - mean.at({"pertone-select", 10.0});

    ScenarioConfig one = ScenarioConfig::preset(Scenario::Fig3Svd);
    one.P_t_grid = {10.0};
    double cap_sum = 0.0, sel_sum = 0.0;
    for (int t = 0; t < one.trials; ++t) {
      ChannelSet cs = gen_channels(one, static_cast<std::uint64_t>(t));
      cs.P_t = 10.0;
      cap_sum += solve_p1(cs).rate;
      sel_sum += std::max(dsvd(cs).rate, psvd(cs).rate);
    }
    const double gap_single = (cap_sum - sel_sum) / one.trials;
    const bool pass = gap_multi < gap_single;
    ok = ok && pass;
    detail += fmt("(d) gap/dim: multi %.4f < single %.4f", gap_multi, gap_single);
  }

  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.passed = ok && r.seconds < 600.0;
  r.detail = detail + fmt(" (%.0f s, limit 600)", r.seconds);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_all(std::ostream& os) {
  std::vector<CriterionResult> results;
  results.push_back(criterion1());
  results.push_back(criterion2());
  results.push_back(criterion3());
  results.push_back(criterion4());
  results.push_back(criterion5());
  results.push_back(criterion6());
  results.push_back(criterion7());
  results.push_back(criterion8());
  results.push_back(criterion9());
  results.push_back(criterion10());
  for (const auto& r : results) {
    os << (r.passed ? "[PASS]" : "[FAIL]") << " C" << r.id << " " << r.name
       << ": " << r.detail << "\n";
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

}  // namespace crspec::verify
