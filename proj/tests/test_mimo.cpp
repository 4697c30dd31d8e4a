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

#include "crspec/mimo.hpp"

#include "crspec/matkernel.hpp"
#include "crspec/miso.hpp"
#include "crspec/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace crspec;

namespace {

ChannelSet make_instance(std::uint64_t seed, std::uint64_t trial, int m_rs,
                         int m_ts, int K, double pt, double gamma) {
  ChannelSet cs;
  Crng rh(seed, trial, RngRole::SecondaryChannel);
  cs.H = draw_cscg_matrix(m_rs, m_ts, 1.0, rh);
  cs.P_t = pt;
  cs.Gamma = RVector::Constant(K, gamma);
  for (int k = 0; k < K; ++k) {
    Crng rg(seed, trial, RngRole::CrossChannel, static_cast<std::uint64_t>(k));
    cs.G.push_back(draw_cscg_matrix(1, m_ts, 0.1, rg));
  }
  return cs;
}

bool feasible(const PrecoderResult& r, const ChannelSet& cs, double rel = 1e-6) {
  if (r.tx_power > cs.P_t * (1.0 + rel)) return false;
  for (Eigen::Index k = 0; k < cs.Gamma.size(); ++k) {
    if (r.interference(k) > cs.Gamma(k) * (1.0 + rel) + 1e-12) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("mimo") {

TEST_CASE("priced water-filling maximizes its objective locally") {
  Crng rng(50, 0, RngRole::Auxiliary);
  const CMatrix H = draw_cscg_matrix(2, 3, 1.0, rng);
  const CMatrix X = draw_cscg_matrix(3, 3, 1.0, rng);
  const CMatrix A = X * X.adjoint() + 0.5 * CMatrix::Identity(3, 3);
  const PricedWf w = priced_waterfill(H, A);
  const double base = achievable_rate(w.S, H) - (A * w.S).trace().real();
  CHECK(base == doctest::Approx(w.value).epsilon(1e-9));
  Crng pr(50, 1, RngRole::Auxiliary);
  for (int t = 0; t < 500; ++t) {
    const CMatrix D = draw_cscg_matrix(3, 3, 1.0, pr);
    CMatrix Sp = w.S + 0.02 * (D + D.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(Sp);
    Sp = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
         es.eigenvectors().adjoint();
    const double v = achievable_rate(Sp, H) - (A * Sp).trace().real();
    REQUIRE(v <= base + 1e-9);
  }
}

TEST_CASE("unconstrained solver reduces to direct water-filling") {
  Crng rng(51, 0, RngRole::Auxiliary);
  ChannelSet cs;
  cs.H = draw_cscg_matrix(3, 3, 1.0, rng);
  cs.P_t = 5.0;
  cs.Gamma = RVector::Zero(0);
  const PrecoderResult opt = solve_p1(cs);
  const PrecoderResult wf = unconstrained_capacity(cs.H, cs.P_t);
  CHECK(opt.rate == doctest::Approx(wf.rate).epsilon(1e-12));
}

TEST_CASE("general solver matches the MISO closed form") {
  for (int i = 0; i < 30; ++i) {
    const double pt = (i % 3 == 0) ? 1.0 : (i % 3 == 1 ? 10.0 : 100.0);
    const double gamma = (i % 2 == 0) ? 0.1 : 0.01;
    const ChannelSet cs = make_instance(52, i, 1, 4, 1, pt, gamma);
    const PrecoderResult closed =
        theorem2_beamformer(cs.H.row(0), cs.G[0].row(0), pt, gamma);
    const PrecoderResult general = solve_p1(cs);
    REQUIRE(std::abs(closed.rate - general.rate) <= 1e-5);
    REQUIRE(feasible(general, cs, 1e-7));
  }
}

TEST_CASE("general solver returns rank-one spectra on MISO instances") {
  int idx = 0;
  for (int m_ts : {2, 4}) {
    for (int K : {1, 3}) {
      for (int i = 0; i < 25; ++i) {
        const ChannelSet cs = make_instance(53, idx++, 1, m_ts, K, 10.0, 0.05);
        const PrecoderResult r = solve_p1(cs);
        auto [V, d] = herm_eig(r.cov.S);
        if (d(0) > 0.0) REQUIRE(std::abs(d(1)) / d(0) <= 1e-6);
      }
    }
  }
}

TEST_CASE("general solver equals the projected precoder at a zero cap") {
  for (int i = 0; i < 20; ++i) {
    const ChannelSet cs = make_instance(54, i, 2, 4, 1, 10.0, 0.0);
    const PrecoderResult proj = psvd(cs);
    const PrecoderResult general = solve_p1(cs);
    REQUIRE(std::abs(proj.rate - general.rate) <= 1e-6);
    REQUIRE(general.interference(0) <= 1e-12);
  }
}

TEST_CASE("direct precoder with huge caps equals unconstrained water-filling") {
  for (int i = 0; i < 20; ++i) {
    const ChannelSet cs = make_instance(55, i, 3, 3, 1, 4.0, 1e9);
    const PrecoderResult d = dsvd(cs);
    const PrecoderResult wf = unconstrained_capacity(cs.H, cs.P_t);
    REQUIRE(std::abs(d.rate - wf.rate) <= 1e-10);
  }
}

TEST_CASE("direct precoder on MISO reduces to the scaled matched filter") {
  for (int i = 0; i < 30; ++i) {
    const ChannelSet cs = make_instance(56, i, 1, 3, 1, 2.0, 0.05);
    const PrecoderResult d = dsvd(cs);
    const double hn2 = cs.H.squaredNorm();
    const double alpha = (cs.G[0] * cs.H.adjoint()).squaredNorm() / hn2;
    const double power = std::min(cs.P_t, cs.Gamma(0) / alpha);
    REQUIRE(d.rate == doctest::Approx(std::log2(1.0 + power * hn2)).epsilon(1e-7));
    REQUIRE(d.tx_power == doctest::Approx(power).epsilon(1e-6));
  }
  // With the coupling normalized to one, the power cap is min(gamma, P_t).
  ChannelSet cs;
  cs.H = CMatrix(1, 2);
  cs.H << 1.0, 1.0;
  CMatrix g(1, 2);
  g << std::sqrt(0.5), std::sqrt(0.5);  // |g h^H|^2 / |h|^2 = 1
  cs.G = {g};
  cs.P_t = 2.0;
  cs.Gamma = RVector::Constant(1, 0.7);
  const PrecoderResult d = dsvd(cs);
  CHECK(d.tx_power == doctest::Approx(std::min(cs.Gamma(0), cs.P_t)).epsilon(1e-9));
}

TEST_CASE("direct precoder transmit power saturates at the coupling bound") {
  const ChannelSet base = make_instance(57, 0, 2, 2, 1, 1e4, 0.3);
  const SvdFactors f = svd(base.H);
  RVector alpha(f.lambda.size());
  double alpha_min = 1e300;
  for (Eigen::Index i = 0; i < f.lambda.size(); ++i) {
    alpha(i) = (base.G[0] * f.U.col(i)).squaredNorm();
    alpha_min = std::min(alpha_min, alpha(i));
  }
  REQUIRE(alpha_min > 0.0);
  const PrecoderResult d = dsvd(base);
  CHECK(d.tx_power <= base.Gamma(0) / alpha_min * (1.0 + 1e-6));
}

TEST_CASE("projected precoder on hand-checked instance") {
  ChannelSet cs;
  cs.H = CMatrix::Identity(2, 2);
  CMatrix g(1, 2);
  g << 1.0, 0.0;
  cs.G = {g};
  cs.P_t = 1.0;
  cs.Gamma = RVector::Constant(1, 0.5);
  const PrecoderResult p = psvd(cs);
  CHECK(p.rate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.interference(0) <= 1e-15);
  CHECK(std::abs(p.cov.S(1, 1) - Complex(1.0)) < 1e-12);
  CHECK(std::abs(p.cov.S(0, 0)) < 1e-15);
}

TEST_CASE("projected precoder degenerates to zero rate when h is parallel to g") {
  ChannelSet cs;
  cs.H = CMatrix(1, 2);
  cs.H << 2.0, 2.0;
  CMatrix g(1, 2);
  g << 1.0, 1.0;
  cs.G = {g};
  cs.P_t = 1.0;
  cs.Gamma = RVector::Constant(1, 0.5);
  const PrecoderResult p = psvd(cs);
  CHECK(p.rate == 0.0);
  CHECK(p.tx_power == 0.0);
}

TEST_CASE("projected precoder refuses too many protected antennas") {
  const ChannelSet cs = make_instance(58, 0, 2, 2, 2, 1.0, 0.1);
  CHECK_THROWS_AS(psvd(cs), PsvdNotImplementable);
  const ChannelSet cs3 = make_instance(58, 1, 2, 2, 3, 1.0, 0.1);
  CHECK_THROWS_AS(psvd(cs3), PsvdNotImplementable);
}

TEST_CASE("projected precoder interference is numerically zero on random draws") {
  for (int i = 0; i < 50; ++i) {
    const ChannelSet cs = make_instance(59, i, 2, 4, 2, 10.0, 0.1);
    const PrecoderResult p = psvd(cs);
    REQUIRE(p.interference.maxCoeff() <= 1e-12);
  }
}

TEST_CASE("hybrid endpoints reproduce the two fixed precoders") {
  for (int i = 0; i < 20; ++i) {
    const ChannelSet cs = make_instance(60, i, 4, 4, 2, 10.0, 0.1);
    REQUIRE(std::abs(hybrid(cs, HybridConfig{0}).rate - dsvd(cs).rate) <= 1e-12);
    REQUIRE(std::abs(hybrid(cs, HybridConfig{2}).rate - psvd(cs).rate) <= 1e-9);
  }
}

TEST_CASE("hybrid mid depth is feasible and bracketed by the solver optimum") {
  for (int i = 0; i < 20; ++i) {
    const ChannelSet cs = make_instance(61, i, 4, 4, 2, 10.0, 0.1);
    const PrecoderResult h1 = hybrid(cs, HybridConfig{1});
    REQUIRE(feasible(h1, cs));
    REQUIRE(h1.rate > 0.0);
    REQUIRE(h1.rate <= solve_p1(cs).rate + 1e-6);
    REQUIRE(h1.hybrid_b == 1);
  }
}

TEST_CASE("hybrid rejects out-of-range depths") {
  const ChannelSet cs = make_instance(62, 0, 4, 4, 2, 10.0, 0.1);
  CHECK_THROWS_AS(hybrid(cs, HybridConfig{-1}), std::invalid_argument);
  CHECK_THROWS_AS(hybrid(cs, HybridConfig{3}), std::invalid_argument);
  const ChannelSet tall = make_instance(62, 1, 2, 2, 3, 1.0, 0.1);
  CHECK_THROWS_AS(hybrid(tall, HybridConfig{2}), std::invalid_argument);
}

TEST_CASE("best hybrid picks the expected endpoint in the extreme regimes") {
  const ChannelSet slack = make_instance(63, 0, 4, 4, 2, 10.0, 1e9);
  CHECK(best_hybrid(slack).first.b == 0);

  const ChannelSet strict = make_instance(63, 1, 4, 4, 2, 10.0, 0.0);
  CHECK(best_hybrid(strict).first.b == 2);
}

TEST_CASE("best hybrid never loses to either fixed precoder") {
  for (int i = 0; i < 20; ++i) {
    const ChannelSet cs = make_instance(64, i, 4, 4, 3, 10.0, 0.05);
    const auto [cfg, bh] = best_hybrid(cs);
    REQUIRE(bh.rate >= dsvd(cs).rate - 1e-12);
    REQUIRE(bh.rate >= psvd(cs).rate - 1e-12);
    REQUIRE(feasible(bh, cs));
  }
}

TEST_CASE("white spectrum power backoff") {
  Crng rng(65, 0, RngRole::Auxiliary);
  ChannelSet cs;
  cs.H = draw_cscg_matrix(2, 3, 1.0, rng);
  cs.P_t = 4.0;
  cs.Gamma = RVector::Zero(0);
  CHECK(white_spectrum(cs).tx_power == doctest::Approx(4.0).epsilon(1e-12));

  cs.G = {draw_cscg_matrix(1, 3, 0.1, rng)};
  cs.Gamma = RVector::Constant(1, 0.05);
  const PrecoderResult w = white_spectrum(cs);
  const double expected =
      std::min(cs.P_t, 3.0 * cs.Gamma(0) / cs.G[0].squaredNorm());
  CHECK(w.tx_power == doctest::Approx(expected).epsilon(1e-9));
  CHECK(w.interference(0) <= cs.Gamma(0) * (1.0 + 1e-9));

  cs.Gamma(0) = 0.0;
  const PrecoderResult z = white_spectrum(cs);
  CHECK(z.rate == 0.0);
  CHECK(z.tx_power == 0.0);
}

TEST_CASE("method ordering holds instance by instance") {
  for (int i = 0; i < 15; ++i) {
    const ChannelSet cs = make_instance(66, i, 3, 4, 2, 10.0, 0.1);
    const double opt = solve_p1(cs).rate;
    const double bh = best_hybrid(cs).second.rate;
    const double wh = white_spectrum(cs).rate;
    REQUIRE(wh <= bh + 1e-6);
    REQUIRE(bh <= opt + 1e-6);
  }
}

TEST_CASE("interference diversity: mid-depth hybrid usually wins with spread gains") {
  int wins = 0;
  const int seeds = 200;
  for (int i = 0; i < seeds; ++i) {
    ChannelSet cs;
    Crng rh(67, i, RngRole::SecondaryChannel);
    cs.H = draw_cscg_matrix(4, 4, 1.0, rh);
    cs.P_t = 10.0;
    cs.Gamma = RVector::Constant(4, 0.1);
    for (int k = 0; k < 4; ++k) {
      Crng rg(67, i, RngRole::CrossChannel, static_cast<std::uint64_t>(k));
      cs.G.push_back(std::pow(10.0, -k) * draw_cscg_matrix(1, 4, 0.1, rg));
    }
    const double d_rate = dsvd(cs).rate;
    double p_rate = 0.0;
    // K = M_ts here, so the full projection is not implementable.
    double best_mid = 0.0;
    for (int b = 1; b <= 3; ++b) {
      best_mid = std::max(best_mid, hybrid(cs, HybridConfig{b}).rate);
    }
    if (best_mid > d_rate && best_mid > p_rate) ++wins;
  }
  CHECK(wins >= seeds / 2);
}

TEST_CASE("solver rejects invalid budgets") {
  ChannelSet cs = make_instance(68, 0, 2, 2, 1, 0.0, 0.1);
  CHECK_THROWS_AS(solve_p1(cs), std::invalid_argument);
}

}  // TEST_SUITE
