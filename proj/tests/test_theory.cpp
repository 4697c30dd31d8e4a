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

#include "crspec/theory.hpp"

#include "crspec/mimo.hpp"
#include "crspec/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace crspec;

TEST_SUITE("theory") {

TEST_CASE("loss bound formula") {
  CHECK(capacity_loss_bound(2, 2, 0.0, 1.0) == 0.0);
  CHECK(capacity_loss_bound(1, 1, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(capacity_loss_bound(2, 3, 3.0, 1.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(capacity_loss_bound(0, 1, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(capacity_loss_bound(1, 1, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("actual loss on hand-evaluated instances") {
  PrimaryLink p;
  p.H_k = CMatrix::Identity(1, 1);
  p.S_k = CMatrix::Identity(1, 1);
  p.phi_k = 1.0;
  p.G_k = CMatrix::Identity(1, 1);

  p.S = CMatrix::Zero(1, 1);
  CHECK(capacity_loss_actual(p) == 0.0);

  p.S = CMatrix::Identity(1, 1);  // Q = 1
  CHECK(capacity_loss_actual(p) ==
        doctest::Approx(0.4150374993).epsilon(1e-9));
}

TEST_CASE("actual loss never exceeds the bound on feasible draws") {
  for (int i = 0; i < 200; ++i) {
    Crng rng(90, i, RngRole::Auxiliary);
    const int mk = 1 + static_cast<int>(rng.next_u64() % 3);
    const int nk = 1 + static_cast<int>(rng.next_u64() % 3);
    const double phi = rng.uniform(0.5, 2.0);
    const double cap = rng.uniform(0.0, 1.0);

    PrimaryLink p;
    p.H_k = draw_cscg_matrix(mk, nk, 1.0, rng);
    p.phi_k = phi;
    p.G_k = draw_cscg_matrix(mk, 4, 0.1, rng);
    const CMatrix Xs = draw_cscg_matrix(nk, nk, 1.0, rng);
    p.S_k = Xs * Xs.adjoint();
    const CMatrix Y = draw_cscg_matrix(4, 4, 1.0, rng);
    CMatrix S0 = Y * Y.adjoint();
    const double i0 = (p.G_k * S0 * p.G_k.adjoint()).trace().real();
    p.S = S0 * (rng.uniform() * cap / std::max(i0, 1e-300));

    const double actual = capacity_loss_actual(p);
    REQUIRE(actual >= 0.0);
    REQUIRE(actual <= capacity_loss_bound(mk, nk, cap, phi) + 1e-12);
  }
}

TEST_CASE("actual loss is nondecreasing in the interference scale") {
  Crng rng(91, 0, RngRole::Auxiliary);
  PrimaryLink p;
  p.H_k = draw_cscg_matrix(2, 2, 1.0, rng);
  p.phi_k = 1.0;
  p.G_k = draw_cscg_matrix(2, 3, 0.1, rng);
  const CMatrix Xs = draw_cscg_matrix(2, 2, 1.0, rng);
  p.S_k = Xs * Xs.adjoint();
  const CMatrix Y = draw_cscg_matrix(3, 3, 1.0, rng);
  const CMatrix S1 = Y * Y.adjoint();

  double prev = -1.0;
  for (double t : {0.0, 0.5, 1.0, 2.0}) {
    p.S = t * S1;
    const double loss = capacity_loss_actual(p);
    REQUIRE(loss >= prev - 1e-12);
    prev = loss;
  }
}

TEST_CASE("slope estimator on analytic rate laws") {
  RVector grid(5);
  grid << 1.0, 10.0, 100.0, 1000.0, 10000.0;
  CHECK(multiplexing_slope([](double p) { return 2.5 * std::log2(p); }, grid) ==
        doctest::Approx(2.5).epsilon(1e-12));
  CHECK(multiplexing_slope([](double) { return 7.0; }, grid) ==
        doctest::Approx(0.0));
}

TEST_CASE("slope estimator rejects degenerate grids") {
  RVector tiny(1);
  tiny << 10.0;
  CHECK_THROWS_AS(multiplexing_slope([](double p) { return p; }, tiny),
                  std::invalid_argument);
  RVector narrow(3);
  narrow << 1.0, 2.0, 4.0;
  CHECK_THROWS_AS(multiplexing_slope([](double p) { return p; }, narrow),
                  std::invalid_argument);
  RVector unordered(3);
  unordered << 1.0, 100.0, 100.0;
  CHECK_THROWS_AS(multiplexing_slope([](double p) { return p; }, unordered),
                  std::invalid_argument);
}

TEST_CASE("slope of the capped solver approaches one on a seeded instance") {
  Crng rh(92, 0, RngRole::SecondaryChannel);
  Crng rg(92, 0, RngRole::CrossChannel);
  ChannelSet cs;
  cs.H = draw_cscg_matrix(2, 2, 1.0, rh);
  cs.G = {draw_cscg_matrix(1, 2, 0.1, rg)};
  cs.Gamma = RVector::Constant(1, 0.1);
  cs.P_t = 1.0;
  RVector grid(3);
  grid << 1e3, 1e4, 1e5;
  const double slope = multiplexing_slope(
      [&](double p) {
        ChannelSet c = cs;
        c.P_t = p;
        return solve_p1(c).rate;
      },
      grid);
  CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
}

}  // TEST_SUITE
