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

#include "crspec/multichannel.hpp"

#include "crspec/harness.hpp"
#include "crspec/matkernel.hpp"
#include "crspec/mimo.hpp"
#include "crspec/oracles.hpp"
#include "crspec/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace crspec;

namespace {

ToneSet random_tones(std::uint64_t seed, int N, int m_rs, int m_ts, double pt,
                     double gamma) {
  ToneSet ts;
  ts.P_t = pt;
  ts.gamma = gamma;
  for (int j = 0; j < N; ++j) {
    Crng rh(seed, j, RngRole::SecondaryChannel);
    Crng rg(seed, j, RngRole::CrossChannel);
    ts.H.push_back(draw_cscg_matrix(m_rs, m_ts, 1.0, rh));
    ts.g.push_back(draw_cscg_matrix(1, m_ts, 0.1, rg).row(0));
  }
  return ts;
}

}  // namespace

TEST_SUITE("multichannel") {

TEST_CASE("per-tone solver with a slack cap is fixed-level water-filling") {
  Crng rng(70, 0, RngRole::Auxiliary);
  const CMatrix H = draw_cscg_matrix(2, 3, 1.0, rng);
  const CRowVector g = draw_cscg_matrix(1, 3, 0.1, rng).row(0);
  const double nu = 0.2;
  const Covariance S = solve_p7(H, g, nu, 1e9);

  const SvdFactors f = svd(H);
  RVector expected(f.lambda.size());
  for (Eigen::Index i = 0; i < f.lambda.size(); ++i) {
    expected(i) = std::max(1.0 / (nu * kLn2) - 1.0 / f.lambda(i), 0.0);
  }
  const CMatrix S_ref = f.U * expected.asDiagonal() * f.U.adjoint();
  CHECK((S.S - S_ref).norm() < 1e-9 * std::max(1.0, S_ref.norm()));
}

TEST_CASE("per-tone solver shuts off above the price ceiling") {
  Crng rng(71, 0, RngRole::Auxiliary);
  const CMatrix H = draw_cscg_matrix(2, 2, 1.0, rng);
  const CRowVector g = draw_cscg_matrix(1, 2, 0.1, rng).row(0);
  const double ceiling = max_squared_singular_value(H) / kLn2;
  const Covariance S = solve_p7(H, g, ceiling * 1.0001, 0.5);
  CHECK(S.trace() == 0.0);
  // Just below the ceiling some power flows.
  const Covariance S2 = solve_p7(H, g, ceiling * 0.99, 0.5);
  CHECK(S2.trace() > 0.0);
}

TEST_CASE("per-tone solver respects the cap and matches the grid oracle") {
  for (int i = 0; i < 15; ++i) {
    Crng rng(72, i, RngRole::Auxiliary);
    Eigen::Vector2d h(rng.gauss(), rng.gauss());
    Eigen::Vector2d g(rng.gauss() * std::sqrt(0.1), rng.gauss() * std::sqrt(0.1));
    const double nu = rng.uniform(0.1, 1.0);
    const double gamma = rng.uniform(0.05, 0.3);
    CMatrix H(1, 2);
    H << h(0), h(1);
    CRowVector gv(2);
    gv << g(0), g(1);
    const Covariance S = solve_p7(H, gv, nu, gamma);
    REQUIRE((gv * S.S * gv.adjoint())(0, 0).real() <= gamma * (1.0 + 1e-9) + 1e-15);
    const double obj = achievable_rate(S.S, H) - nu * S.trace();
    const double oracle = oracles::grid_p7_objective_miso_real(h, g, nu, gamma, 2000);
    REQUIRE(std::abs(obj - oracle) <= 1e-3);
  }
}

TEST_CASE("per-tone solver eliminates a zero cap exactly") {
  Crng rng(73, 0, RngRole::Auxiliary);
  const CMatrix H = draw_cscg_matrix(2, 3, 1.0, rng);
  const CRowVector g = draw_cscg_matrix(1, 3, 0.1, rng).row(0);
  const Covariance S = solve_p7(H, g, 0.3, 0.0);
  CHECK((g * S.S * g.adjoint())(0, 0).real() <= 1e-15);
  CHECK(S.trace() > 0.0);
}

TEST_CASE("multi-channel solver degenerates to the single-channel one at N=1") {
  for (int i = 0; i < 10; ++i) {
    ToneSet ts = random_tones(74 + i, 1, 2, 2, 5.0, 0.1);
    const MultiAllocation ma = solve_p6(ts);
    ChannelSet cs;
    cs.H = ts.H[0];
    cs.G = {CMatrix(ts.g[0])};
    cs.P_t = ts.P_t;
    cs.Gamma = RVector::Constant(1, ts.gamma);
    const PrecoderResult ref = solve_p1(cs);
    REQUIRE(std::abs(ma.rate_total - ref.rate) <=
            1e-4 * std::max(1.0, ref.rate));
  }
}

TEST_CASE("identical tones share the budget evenly") {
  ToneSet ts = random_tones(75, 1, 2, 2, 0.0, 0.1);
  const CMatrix H0 = ts.H[0];
  const CRowVector g0 = ts.g[0];
  ts.H.assign(4, H0);
  ts.g.assign(4, g0);
  ts.P_t = 8.0;
  const MultiAllocation ma = solve_p6(ts);
  for (int j = 0; j < 4; ++j) {
    REQUIRE(ma.S[j].trace() == doctest::Approx(2.0).epsilon(1e-5));
    REQUIRE((ma.S[j].S - ma.S[0].S).norm() < 1e-7);
  }
}

TEST_CASE("joint allocation beats equal per-tone budgets") {
  ToneSet ts = random_tones(76, 4, 2, 2, 8.0, 0.1);
  const MultiAllocation ma = solve_p6(ts);
  double split = 0.0;
  for (int j = 0; j < 4; ++j) {
    ChannelSet cs;
    cs.H = ts.H[j];
    cs.G = {CMatrix(ts.g[j])};
    cs.P_t = 2.0;
    cs.Gamma = RVector::Constant(1, ts.gamma);
    split += solve_p1(cs).rate;
  }
  CHECK(ma.rate_total >= split - 1e-6);
}

TEST_CASE("allocated power is nonincreasing in the price") {
  ToneSet ts = random_tones(77, 3, 2, 2, 5.0, 0.1);
  double prev = 1e300;
  for (double nu : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0}) {
    double total = 0.0;
    for (int j = 0; j < ts.tone_count(); ++j) {
      total += solve_p7(ts.H[j], ts.g[j], nu, ts.gamma).trace();
    }
    REQUIRE(total <= prev + 1e-9);
    prev = total;
  }
}

TEST_CASE("budget complementarity at the returned price") {
  ToneSet ts = random_tones(78, 6, 2, 2, 12.0, 0.1);
  const MultiAllocation ma = solve_p6(ts);
  REQUIRE(ma.budget_binding);
  CHECK(std::abs(ma.total_power - ts.P_t) <= 1e-6 * std::max(1.0, ts.P_t));
  CHECK(ma.duality_gap <= 1e-4);
  for (int j = 0; j < ts.tone_count(); ++j) {
    REQUIRE((ts.g[j] * ma.S[j].S * ts.g[j].adjoint())(0, 0).real() <=
            ts.gamma * (1.0 + 1e-7));
  }
}

TEST_CASE("tone permutation permutes the allocation") {
  ToneSet ts = random_tones(79, 5, 2, 2, 6.0, 0.1);
  const MultiAllocation a = solve_p6(ts);
  ToneSet perm = ts;
  std::vector<int> order = {3, 0, 4, 1, 2};
  for (int j = 0; j < 5; ++j) {
    perm.H[j] = ts.H[order[j]];
    perm.g[j] = ts.g[order[j]];
  }
  const MultiAllocation b = solve_p6(perm);
  for (int j = 0; j < 5; ++j) {
    REQUIRE((b.S[j].S - a.S[order[j]].S).norm() < 1e-7);
  }
}

TEST_CASE("per-tone selection reduces to the exact solver in both extremes") {
  ToneSet open = random_tones(80, 4, 2, 2, 8.0, 1e9);
  const MultiAllocation sel_open = per_tone_svd_select(open);
  const MultiAllocation opt_open = solve_p6(open);
  CHECK(std::abs(sel_open.rate_total - opt_open.rate_total) <= 1e-5);

  ToneSet closed = random_tones(81, 4, 2, 2, 8.0, 0.0);
  const MultiAllocation sel_closed = per_tone_svd_select(closed);
  const MultiAllocation opt_closed = solve_p6(closed);
  CHECK(std::abs(sel_closed.rate_total - opt_closed.rate_total) <= 1e-5);
  for (int j = 0; j < 4; ++j) {
    REQUIRE((closed.g[j] * sel_closed.S[j].S * closed.g[j].adjoint())(0, 0).real() <=
            1e-12);
  }
}

TEST_CASE("per-tone selection is feasible and never beats the exact solver") {
  ToneSet ts = random_tones(82, 6, 2, 2, 12.0, 0.1);
  const MultiAllocation sel = per_tone_svd_select(ts);
  const MultiAllocation opt = solve_p6(ts);
  CHECK(sel.rate_total <= opt.rate_total + 1e-6);
  CHECK(sel.total_power <= ts.P_t * (1.0 + 1e-9));
  for (int j = 0; j < ts.tone_count(); ++j) {
    REQUIRE((ts.g[j] * sel.S[j].S * ts.g[j].adjoint())(0, 0).real() <=
            ts.gamma * (1.0 + 1e-7));
  }
}

TEST_CASE("tap-to-tone transform basics") {
  Crng rng(83, 0, RngRole::Auxiliary);
  const CMatrix T0 = draw_cscg_matrix(2, 2, 1.0, rng);
  const CRowVector g0 = draw_cscg_matrix(1, 2, 0.1, rng).row(0);

  const ToneSet flat = gen_ofdm_channels({T0}, {g0}, 8, 1.0, 0.1);
  for (int j = 0; j < 8; ++j) {
    REQUIRE((flat.H[j] - T0).norm() < 1e-14);
    REQUIRE((flat.g[j] - g0).norm() < 1e-14);
  }

  // Impulse at delay zero padded with zero taps stays flat.
  std::vector<CMatrix> h_taps(4, CMatrix::Zero(2, 2));
  std::vector<CRowVector> g_taps(4, CRowVector::Zero(2));
  h_taps[0] = T0;
  g_taps[0] = g0;
  const ToneSet still = gen_ofdm_channels(h_taps, g_taps, 4, 1.0, 0.1);
  for (int j = 0; j < 4; ++j) {
    REQUIRE((still.H[j] - T0).norm() < 1e-14);
  }

  CHECK_THROWS_AS(gen_ofdm_channels(h_taps, g_taps, 2, 1.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("tap drawing preserves the per-tone channel variance") {
  ScenarioConfig cfg = ScenarioConfig::preset(Scenario::Fig6Multitone);
  cfg.tones = 16;
  cfg.taps = 4;
  cfg.seed = 84;
  double acc = 0.0;
  long count = 0;
  for (int t = 0; t < 1000; ++t) {
    const ToneSet ts = gen_tone_set(cfg, static_cast<std::uint64_t>(t), 1.0);
    for (const auto& H : ts.H) {
      acc += H.squaredNorm();
      count += H.size();
    }
  }
  const double mean_power = acc / static_cast<double>(count);
  CHECK(mean_power == doctest::Approx(1.0).epsilon(0.05));
}

}  // TEST_SUITE
